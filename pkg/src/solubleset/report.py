"""Report rendering: one figure per certificate plus a delimited summary.

Figures show the containing set with the embedded copy highlighted (2D and 3D
sets are drawn directly, higher dimensions are projected onto the first two
coordinates); implicit amplified certificates get an orbit-structure panel
instead.  The summary is a CSV with one row per certificate.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .certificate import Certificate
from .groupspec import spec_order
from .verify import VerifyReport


def summary_row(name: str, cert: Certificate, report: VerifyReport | None) -> dict:
    residual = ""
    if cert.residuals:
        residual = f"{max(cert.residuals.values()):.3g}"
    return {
        "certificate": name,
        "scalar": cert.x.kind,
        "dim": cert.x.dim,
        "x_size": cert.x.n,
        "y_size": cert.target_size(),
        "implicit_y": cert.is_implicit,
        "group_order": spec_order(cert.spec),
        "transitivity": cert.transitivity.mode,
        "verified": "" if report is None else report.passed,
        "max_residual": residual,
    }


SUMMARY_FIELDS = [
    "certificate", "scalar", "dim", "x_size", "y_size", "implicit_y",
    "group_order", "transitivity", "verified", "max_residual",
]


def write_summary(rows: list[dict], path: Path):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
        writer.writeheader()
        writer.writerows(rows)


def _scatter_explicit(ax, cert: Certificate):
    pts = cert.y.coords_float()
    mapped = set(cert.embedding_map)
    dim = cert.y.dim
    if dim == 1:
        xs = [p[0] for p in pts]
        ax.scatter(xs, [0.0] * len(xs), s=12, color="#9aa7b1")
        ax.scatter([pts[i][0] for i in mapped], [0.0] * len(mapped), s=36, color="#c0392b")
    else:
        if dim > 2:
            ax.set_xlabel("coordinate 0 (projection)")
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        ax.scatter(xs, ys, s=10, color="#9aa7b1", label="containing set")
        ax.scatter(
            [pts[i][0] for i in mapped],
            [pts[i][1] for i in mapped],
            s=42, color="#c0392b", label="embedded copy",
        )
        ax.legend(loc="best", fontsize=7)
    ax.set_aspect("equal", adjustable="datalim")


def _scatter_3d(fig, cert: Certificate):
    ax = fig.add_subplot(111, projection="3d")
    pts = cert.y.coords_float()
    mapped = set(cert.embedding_map)
    ax.scatter(*zip(*pts), s=10, color="#9aa7b1")
    ax.scatter(*zip(*[pts[i] for i in mapped]), s=42, color="#c0392b")
    return ax


def _implicit_panel(ax, cert: Certificate):
    yi = cert.y_implicit
    ax.bar(["orbit 1", "orbit 2"], [len(yi.orbit1), len(yi.orbit2)], color="#5d7a96")
    ax.set_ylabel("orbit size")
    ax.set_title(
        f"implicit target in X^{yi.q}: {yi.size} tuples with "
        f"{yi.r} first-orbit entries"
    )


def render_figure(name: str, cert: Certificate, path: Path):
    fig = plt.figure(figsize=(5.0, 4.2))
    if cert.is_implicit:
        _implicit_panel(fig.add_subplot(111), cert)
    elif cert.y.dim == 3:
        _scatter_3d(fig, cert)
    else:
        _scatter_explicit(fig.add_subplot(111), cert)
    fig.suptitle(name, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(named_certs, outdir, reports=None) -> list[Path]:
    """Render figures and the summary CSV; returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    written = []
    for i, (name, cert) in enumerate(named_certs):
        report = None if reports is None else reports[i]
        fig_path = outdir / f"{name}.png"
        render_figure(name, cert, fig_path)
        written.append(fig_path)
        rows.append(summary_row(name, cert, report))
    summary_path = outdir / "summary.csv"
    write_summary(rows, summary_path)
    written.append(summary_path)
    return written
