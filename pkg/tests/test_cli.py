import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from solubleset.cli import entrypoint, main


@pytest.fixture()
def runner():
    return CliRunner()


def test_catalog_stdout(runner):
    res = runner.invoke(main, ["catalog", "--shape", "cube", "--d", "2"])
    assert res.exit_code == 0
    obj = json.loads(res.stdout)
    assert obj["version"] == 1 and len(obj["y"]["points"]) == 4


def test_catalog_verify_and_out(runner, tmp_path):
    out = tmp_path / "ico.json"
    res = runner.invoke(
        main, ["catalog", "--shape", "icosahedron", "--verify", "--out", str(out)]
    )
    assert res.exit_code == 0, res.output
    assert out.exists()


def test_catalog_deterministic_bytes(runner, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        res = runner.invoke(main, ["catalog", "--shape", "simplex", "--d", "4",
                                   "--out", str(path)])
        assert res.exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_blockset_command(runner, tmp_path):
    out = tmp_path / "bs.json"
    res, _ = _run_ok(runner, ["blockset", "--alpha", "3", "--beta", "1",
                              "--gamma", "4", "--delta", "6", "--i", "1",
                              "--j", "1", "--out", str(out)])
    obj = json.loads(out.read_text())
    assert len(obj["y"]["points"]) == 640


def _run_ok(runner, args):
    res = runner.invoke(main, args)
    assert res.exit_code == 0, res.output
    return res, res.output


def test_blockset_invalid_p(runner):
    res = runner.invoke(main, ["blockset", "--alpha", "1", "--beta", "2",
                               "--gamma", "3", "--i", "0", "--j", "0",
                               "--p", "9"])
    assert res.exit_code != 0


def test_amplify_hexagon_roundtrip(runner, tmp_path):
    out = tmp_path / "amp.json"
    _run_ok(runner, ["amplify", "--input", "hexagon", "--q", "3",
                     "--mode", "sample", "--n", "200", "--seed", "1",
                     "--out", str(out)])
    assert entrypoint(["verify", str(out)]) == 0
    # determinism under a fixed seed
    out2 = tmp_path / "amp2.json"
    _run_ok(runner, ["amplify", "--input", "hexagon", "--q", "3",
                     "--mode", "sample", "--n", "200", "--seed", "1",
                     "--out", str(out2)])
    assert out.read_bytes() == out2.read_bytes()


def test_trapezium_command_and_verify_exit_codes(runner, tmp_path):
    out = tmp_path / "trap.json"
    _run_ok(runner, ["trapezium", "--a", "-2,0", "--b", "-1,1", "--c", "1,1",
                     "--d", "2,0", "--out", str(out)])
    assert entrypoint(["verify", str(out)]) == 0
    # corrupt one scale field: verification must fail with exit code 1
    obj = json.loads(out.read_text())
    obj["embedding"]["scale_sq"] = 2.0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    assert entrypoint(["verify", str(bad)]) == 1


def test_verify_rejects_garbage(tmp_path):
    bad = tmp_path / "junk.json"
    bad.write_text("{not json")
    assert entrypoint(["verify", str(bad)]) == 2


def test_degenerate_trapezium_is_usage_error():
    code = entrypoint(["trapezium", "--a", "0,0", "--b", "1,0",
                       "--c", "2,0", "--d", "3,0"])
    assert code == 2


def test_product_command(runner, tmp_path):
    c1 = tmp_path / "c1.json"
    c2 = tmp_path / "c2.json"
    _run_ok(runner, ["catalog", "--shape", "cube", "--d", "1", "--out", str(c1)])
    _run_ok(runner, ["catalog", "--shape", "cube", "--d", "2", "--out", str(c2)])
    out = tmp_path / "prod.json"
    _run_ok(runner, ["product", str(c1), str(c2), "--out", str(out)])
    obj = json.loads(out.read_text())
    assert len(obj["y"]["points"]) == 8
    assert entrypoint(["verify", str(out)]) == 0


def test_report_command(runner, tmp_path):
    certs = []
    for args, name in [
        (["catalog", "--shape", "kgon", "--k", "7"], "kgon.json"),
        (["trapezium", "--a", "-2,0", "--b", "-1,1", "--c", "1,1", "--d", "2,0"],
         "trap.json"),
        (["amplify", "--input", "hexagon", "--q", "3", "--n", "100"], "amp.json"),
    ]:
        path = tmp_path / name
        _run_ok(runner, args + ["--out", str(path)])
        certs.append(str(path))
    outdir = tmp_path / "report"
    _run_ok(runner, ["report", *certs, "--outdir", str(outdir)])
    assert (outdir / "summary.csv").exists()
    for name in ("kgon.png", "trap.png", "amp.png"):
        assert (outdir / name).exists()
    header = (outdir / "summary.csv").read_text().splitlines()[0]
    assert header.startswith("certificate,scalar,dim,x_size,y_size")


def test_usage_error_exit_code():
    assert entrypoint(["catalog", "--shape", "dodeca-nope"]) == 2
