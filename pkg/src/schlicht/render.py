"""Deterministic SVG/CSV emission of boundary curves, plus matplotlib PNGs.

SVG output is a bare polyline with two axis lines in a 1024x1024 viewport,
auto-fitted to the curve; CSV has a header row and columns t, Re f, Im f.
Floats are written with Python's shortest round-trip repr and files are
written atomically (temp + rename), so identical inputs give identical bytes.
PNG figures go through matplotlib and are a convenience view only.
"""

from __future__ import annotations

import os
import tempfile
from typing import Sequence

import numpy as np

__all__ = ["curve_csv", "curve_svg", "write_text_atomic",
           "write_curve_png", "write_scan_png", "scan_csv"]

VIEWPORT = 1024.0


def write_text_atomic(path: str, text: str) -> None:
    """Write text to *path* via a temp file in the same directory + rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x: float) -> str:
    return repr(float(x))


def curve_csv(t: np.ndarray, points: np.ndarray) -> str:
    """RFC-4180-style CSV: header t,re_f,im_f then one row per sample, LF."""
    lines = ["t,re_f,im_f"]
    for ti, p in zip(t, points):
        lines.append(f"{_fmt(ti)},{_fmt(p.real)},{_fmt(p.imag)}")
    return "\n".join(lines) + "\n"


def curve_svg(points: np.ndarray, pad_fraction: float = 0.05) -> str:
    """Plain SVG 1.1: the closed image polyline plus real/imaginary axes."""
    xs = points.real
    ys = points.imag
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    span = max(x1 - x0, y1 - y0, 1e-30)
    pad = pad_fraction * span
    side = span + 2.0 * pad
    cx = 0.5 * (x0 + x1)
    cy = 0.5 * (y0 + y1)
    left = cx - 0.5 * side
    top = cy + 0.5 * side
    scale = VIEWPORT / side

    def sx(x: float) -> str:
        return _fmt((x - left) * scale)

    def sy(y: float) -> str:
        # SVG y grows downward
        return _fmt((top - y) * scale)

    pts = " ".join(f"{sx(p.real)},{sy(p.imag)}" for p in points)
    # close the polyline explicitly
    pts += f" {sx(points[0].real)},{sy(points[0].imag)}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{int(VIEWPORT)}" height="{int(VIEWPORT)}" '
        f'viewBox="0 0 {int(VIEWPORT)} {int(VIEWPORT)}">',
        f'<line x1="{sx(left)}" y1="{sy(0.0)}" x2="{sx(left + side)}" '
        f'y2="{sy(0.0)}" stroke="#888888" stroke-width="1"/>',
        f'<line x1="{sx(0.0)}" y1="{sy(top - side)}" x2="{sx(0.0)}" '
        f'y2="{sy(top)}" stroke="#888888" stroke-width="1"/>',
        f'<polyline points="{pts}" fill="none" stroke="#000000" '
        f'stroke-width="2"/>',
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


def scan_csv(rows: Sequence[Sequence[float]], header: Sequence[str]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def write_curve_png(path: str, points: np.ndarray, title: str = "") -> None:
    """Matplotlib rendering of the image curve (not byte-deterministic)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    closed = np.concatenate([points, points[:1]])
    ax.plot(closed.real, closed.imag, "k-", lw=1.0)
    ax.axhline(0.0, color="0.6", lw=0.6)
    ax.axvline(0.0, color="0.6", lw=0.6)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_scan_png(path: str, lam_values: np.ndarray, best_excess: np.ndarray,
                   threshold: float) -> None:
    """Excess-vs-lambda plot for the third-coefficient scan."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(lam_values, best_excess, "k.-", ms=3, lw=0.8,
            label="max excess over a-grid")
    ax.axhline(0.0, color="0.6", lw=0.6)
    ax.axvline(threshold, color="r", lw=0.8, ls="--",
               label=f"threshold {threshold:.5f}")
    ax.set_xlabel("lambda")
    ax.set_ylabel("a3 - (1 + lambda + lambda^2)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
