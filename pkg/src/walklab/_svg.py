"""Minimal static SVG line charts. CSV is the authoritative artifact; these
are quick-look renderings only."""

import math

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 64, 16, 28, 44
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _finite(pts):
    return [(x, y) for x, y in pts if math.isfinite(x) and math.isfinite(y)]


def write_line_chart(path, title, series, xlabel="x", ylabel="value",
                     logx=False, logy=False):
    """series: list of (label, xs, ys)."""
    tf_x = math.log10 if logx else (lambda v: v)
    tf_y = math.log10 if logy else (lambda v: v)
    data = []
    for label, xs, ys in series:
        pts = [(tf_x(x), tf_y(y)) for x, y in zip(xs, ys)
               if (not logx or x > 0) and (not logy or y > 0)]
        pts = _finite(pts)
        if pts:
            data.append((label, pts))
    if not data:
        data = [("empty", [(0.0, 0.0)])]
    x0 = min(p[0] for _, pts in data for p in pts)
    x1 = max(p[0] for _, pts in data for p in pts)
    y0 = min(p[1] for _, pts in data for p in pts)
    y1 = max(p[1] for _, pts in data for p in pts)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw = _W - _ML - _MR
    ph = _H - _MT - _MB

    def sx(v):
        return _ML + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return _MT + ph - (v - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
           f'viewBox="0 0 {_W} {_H}">',
           f'<rect width="{_W}" height="{_H}" fill="white"/>',
           f'<text x="{_W / 2:.0f}" y="18" text-anchor="middle" '
           f'font-family="sans-serif" font-size="13">{title}</text>']
    # axes + 5 ticks each
    out.append(f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" '
               f'fill="none" stroke="#333"/>')
    for i in range(5):
        fx = x0 + (x1 - x0) * i / 4
        fy = y0 + (y1 - y0) * i / 4
        lx = f"1e{fx:.1f}" if logx else f"{fx:.4g}"
        ly = f"1e{fy:.1f}" if logy else f"{fy:.4g}"
        out.append(f'<line x1="{sx(fx):.1f}" y1="{_MT + ph}" x2="{sx(fx):.1f}" '
                   f'y2="{_MT + ph + 4}" stroke="#333"/>')
        out.append(f'<text x="{sx(fx):.1f}" y="{_MT + ph + 16}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="10">{lx}</text>')
        out.append(f'<line x1="{_ML - 4}" y1="{sy(fy):.1f}" x2="{_ML}" '
                   f'y2="{sy(fy):.1f}" stroke="#333"/>')
        out.append(f'<text x="{_ML - 6}" y="{sy(fy) + 3:.1f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="10">{ly}</text>')
    out.append(f'<text x="{_ML + pw / 2:.0f}" y="{_H - 8}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="11">{xlabel}</text>')
    out.append(f'<text x="14" y="{_MT + ph / 2:.0f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="11" '
               f'transform="rotate(-90 14 {_MT + ph / 2:.0f})">{ylabel}</text>')
    for i, (label, pts) in enumerate(data):
        color = _COLORS[i % len(_COLORS)]
        path_d = " ".join(f"{'M' if j == 0 else 'L'}{sx(px):.2f},{sy(py):.2f}"
                          for j, (px, py) in enumerate(pts))
        out.append(f'<path d="{path_d}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5"/>')
        out.append(f'<text x="{_W - _MR - 6}" y="{_MT + 14 + 14 * i}" '
                   f'text-anchor="end" font-family="sans-serif" font-size="11" '
                   f'fill="{color}">{label}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out))
