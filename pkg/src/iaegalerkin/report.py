"""Tables, CSV files and log-error plots for convergence studies."""
import csv
import io
import math
from xml.sax.saxutils import escape

FLOAT_FMT = "{:.16e}"

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def fmt(v):
    return FLOAT_FMT.format(v)


def write_csv(path, header, rows):
    """Write rows with floats at 17 significant digits; output is deterministic."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def error_table(n_list, rows):
    """Tables-1/2 layout: one row per quantity, one column per n.

    `rows` is a list of (label, values) pairs.
    """
    label_w = max(len("n"), *(len(label) for label, _ in rows))
    cells = [["n"] + [str(n) for n in n_list]]
    cells += [[label] + [f"{v:.1e}" for v in values] for label, values in rows]
    col_w = max(len(c) for row in cells for c in row[1:])
    lines = []
    for row in cells:
        lines.append(" | ".join([row[0].ljust(label_w)] + [c.rjust(col_w) for c in row[1:]]))
        if row is cells[0]:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines)


def _log10(v):
    return math.log10(v) if v > 0 else -17.0


def svg_plot(series, title="", xlabel="n", ylabel="log10(error)",
             width=640, height=420):
    """A self-contained SVG line chart of log10(error) against n.

    `series` is a list of (label, xs, ys) with ys the raw (positive) errors.
    Each series becomes one <polyline>.
    """
    left, right, top, bottom = 70, 170, 40, 50
    pw, ph = width - left - right, height - top - bottom
    xs_all = [x for _, xs, _ in series for x in xs]
    ly_all = [_log10(y) for _, _, ys in series for y in ys]
    x0, x1 = min(xs_all), max(xs_all)
    if x0 == x1:
        x0, x1 = x0 - 1, x1 + 1
    y0, y1 = math.floor(min(ly_all)), math.ceil(max(ly_all))
    if y0 == y1:
        y0, y1 = y0 - 1, y1 + 1

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(ly):
        return top + (y1 - ly) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + pw / 2:.1f}" y="22" text-anchor="middle" font-size="14">'
        f'{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    step = max(1, (y1 - y0) // 8)
    for ly in range(y0, y1 + 1, step):
        y = py(ly)
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{left + pw}" y2="{y:.2f}" '
                   'stroke="#dddddd"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end">{ly}</text>')
    for x in sorted(set(xs_all)):
        out.append(f'<text x="{px(x):.2f}" y="{top + ph + 18}" text-anchor="middle">'
                   f'{x:g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">'
               f'{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {top + ph / 2:.1f})">{escape(ylabel)}</text>')

    for k, (label, xs, ys) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(_log10(y)):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" '
                   f'points="{pts}"><title>{escape(label)}</title></polyline>')
        ly = top + 16 + 18 * k
        out.append(f'<line x1="{left + pw + 12}" y1="{ly - 4}" x2="{left + pw + 36}" '
                   f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 42}" y="{ly}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, series, **kwargs):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg_plot(series, **kwargs))


def write_png(path, series, title="", xlabel="n", ylabel="log10(error)"):
    """Same chart rendered by matplotlib (optional dependency)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, xs, ys in series:
        ax.plot(xs, [_log10(y) for y in ys], marker="o", label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
