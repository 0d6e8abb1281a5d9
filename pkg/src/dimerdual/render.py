"""SVG rendering of a dimer model's fundamental domain and polygon.

Layout is best-effort and carries no bit-exactness contract: the picture
is a reading aid, all verifiable content lives in the textual reports.
Torus dimers are laid out by an exact harmonic (spring) embedding that
respects the declared offsets; declared vertex positions, when present,
win.  Other genera fall back to a circle layout.
"""

from __future__ import annotations

from fractions import Fraction

from .core import POSITIVE, DimerModel, derive_offsets
from .intlinalg import solve_rational
from .matching import matching_lattice

_FACE_FILL = {POSITIVE: "#bfdbf7", -1: "#f7c8c4"}
_CELL = 360  # pixels per fundamental-domain period
_MARGIN = 30


def _harmonic_positions(D: DimerModel, offsets) -> list[tuple[Fraction, Fraction]]:
    """Minimize the squared drawn length of all arrows on the torus.

    The drawn copy of arrow a runs from p[tail] to p[head] + offset(a), so
    the optimum solves a graph Laplacian with the offset sums as load;
    vertex 0 is pinned to break the translation symmetry.
    """
    n = D.num_vertices
    if n == 1:
        return [(Fraction(1, 2), Fraction(1, 2))]
    lap = [[0 for _ in range(n)] for _ in range(n)]
    load = [[Fraction(0), Fraction(0)] for _ in range(n)]
    for a in range(D.num_arrows):
        t, h = D.tail[a], D.head[a]
        if t == h:
            continue
        lap[t][t] += 1
        lap[h][h] += 1
        lap[t][h] -= 1
        lap[h][t] -= 1
        ox, oy = offsets[a]
        load[t][0] += ox
        load[t][1] += oy
        load[h][0] -= ox
        load[h][1] -= oy
    # pin vertex 0 at the center of the cell
    rows = [[Fraction(r[c]) for c in range(1, n)] for r in lap[1:]]
    pos = [(Fraction(1, 2), Fraction(1, 2))] * n
    coords: list[list[Fraction]] = [[Fraction(1, 2)] * n, [Fraction(1, 2)] * n]
    for axis in range(2):
        rhs = [load[v][axis] for v in range(1, n)]
        sol = solve_rational(rows, rhs)
        if sol is None:  # disconnected pieces never reach here; be safe
            return _circle_positions(n)
        for v in range(1, n):
            coords[axis][v] += sol[v - 1] - sum(sol) / n
    pos = [
        ((coords[0][v]) % 1, (coords[1][v]) % 1) for v in range(n)
    ]
    return pos


def _circle_positions(n: int) -> list[tuple[Fraction, Fraction]]:
    # rational approximation of a circle: square-ish ring positions
    out = []
    for i in range(n):
        t = Fraction(i, n)
        # walk the perimeter of a centered square of half-width 3/8
        s = (t * 4) % 4
        side, frac = int(s), s - int(s)
        x, y = {
            0: (frac, Fraction(0)),
            1: (Fraction(1), frac),
            2: (1 - frac, Fraction(1)),
            3: (Fraction(0), 1 - frac),
        }[side]
        out.append((Fraction(1, 8) + x * Fraction(3, 4), Fraction(1, 8) + y * Fraction(3, 4)))
    return out


def _positions(D: DimerModel, offsets) -> list[tuple[Fraction, Fraction]]:
    if D.positions is not None and all(p is not None for p in D.positions):
        return [(Fraction(x), Fraction(y)) for (x, y) in D.positions]
    if offsets is not None:
        return _harmonic_positions(D, offsets)
    return _circle_positions(D.num_vertices)


def _px(p) -> tuple[float, float]:
    x, y = p
    # flip y so the lattice y-axis points up in the picture
    return (_MARGIN + float(x) * _CELL, _MARGIN + (1.0 - float(y)) * _CELL)


def _seg(x1, y1, x2, y2, stroke, width, extra="") -> str:
    return (
        f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
        f'stroke="{stroke}" stroke-width="{width}" {extra}/>'
    )


def _face_chain(D: DimerModel, offsets, face, pos):
    """Lifted vertex chain of a face boundary, starting at the first
    arrow's tail lift in the base cell."""
    first = face.boundary[0]
    x, y = pos[D.tail[first]]
    chain = [(x, y)]
    for a in face.boundary:
        ox, oy = offsets[a] if offsets is not None else (0, 0)
        x = x - pos[D.tail[a]][0] + pos[D.head[a]][0] + ox
        y = y - pos[D.tail[a]][1] + pos[D.head[a]][1] + oy
        chain.append((x, y))
    return chain[:-1]


def dimer_svg_group(D: DimerModel, matching: frozenset[int] | None = None) -> str:
    offsets = D.offsets
    if offsets is None and D.genus == 1:
        offsets = derive_offsets(D)
    pos = _positions(D, offsets)
    parts = [
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{_CELL}" height="{_CELL}" '
        'fill="white" stroke="#888" stroke-width="1"/>'
    ]
    # faces first (painted under the arrows), all nine translates
    for face in D.faces:
        chain = _face_chain(D, offsets, face, pos)
        fill = _FACE_FILL[face.sign]
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                pts = " ".join(
                    "{:.2f},{:.2f}".format(*_px((x + dx, y + dy)))
                    for (x, y) in chain
                )
                parts.append(
                    f'<polygon points="{pts}" fill="{fill}" fill-opacity="0.55" '
                    'stroke="none"/>'
                )
    # arrows: base copy plus the wrapped twin when the offset is nonzero
    for a in range(D.num_arrows):
        ox, oy = offsets[a] if offsets is not None else (0, 0)
        t, h = pos[D.tail[a]], pos[D.head[a]]
        copies = [((t[0], t[1]), (h[0] + ox, h[1] + oy))]
        if (ox, oy) != (0, 0):
            copies.append(((t[0] - ox, t[1] - oy), (h[0], h[1])))
        matched = matching is not None and a in matching
        stroke = "#0a7a2f" if matched else "#222"
        width = 4 if matched else 1.6
        for (p1, p2) in copies:
            x1, y1 = _px(p1)
            x2, y2 = _px(p2)
            parts.append(_seg(x1, y1, x2, y2, stroke, width))
            # direction mark: small triangle at 62% along the segment
            mx, my = x1 + 0.62 * (x2 - x1), y1 + 0.62 * (y2 - y1)
            dx, dy = x2 - x1, y2 - y1
            norm = max((dx * dx + dy * dy) ** 0.5, 1e-9)
            ux, uy = dx / norm, dy / norm
            px_, py_ = -uy, ux
            s = 5.0
            tri = (
                f"{mx + ux * s:.2f},{my + uy * s:.2f} "
                f"{mx - ux * s + px_ * s * 0.8:.2f},{my - uy * s + py_ * s * 0.8:.2f} "
                f"{mx - ux * s - px_ * s * 0.8:.2f},{my - uy * s - py_ * s * 0.8:.2f}"
            )
            parts.append(f'<polygon points="{tri}" fill="{stroke}"/>')
    # vertices with labels
    for v in range(D.num_vertices):
        x, y = _px(pos[v])
        parts.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="7" fill="#fff" '
            'stroke="#222" stroke-width="1.4"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{y + 3.4:.2f}" font-size="9" '
            f'text-anchor="middle" font-family="sans-serif">{D.vertex_names[v]}</text>'
        )
    clip = (
        f'<clipPath id="cell"><rect x="{_MARGIN - 1}" y="{_MARGIN - 1}" '
        f'width="{_CELL + 2}" height="{_CELL + 2}"/></clipPath>'
    )
    return clip + f'<g clip-path="url(#cell)">{"".join(parts)}</g>'


def polygon_svg_group(D: DimerModel, x0: float) -> str:
    """Hull, lattice points, and boundary emphasis of the matching polygon."""
    lattice = matching_lattice(D, 0)
    pts = set(lattice.lattice_points) | set(lattice.hull)
    if not pts:
        return ""
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    unit = _CELL / (span + 1)

    def at(p):
        return (
            x0 + (p[0] - min(xs) + 0.5) * unit,
            _MARGIN + (max(ys) - p[1] + 0.5) * unit,
        )

    parts = []
    hull_pts = " ".join("{:.2f},{:.2f}".format(*at(p)) for p in lattice.hull)
    parts.append(
        f'<polygon points="{hull_pts}" fill="#e8f0e3" stroke="#333" stroke-width="1.6"/>'
    )
    for p in sorted(pts):
        x, y = at(p)
        on_boundary = p in set(lattice.boundary_points)
        r = 5 if on_boundary else 3.5
        fill = "#333" if on_boundary else "#999"
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r}" fill="{fill}"/>')
    return "".join(parts)


def render_svg(D: DimerModel, matching_index: int | None = None) -> str:
    """One SVG document: fundamental domain on the left, polygon on the
    right (torus dimers only on the right).
    """
    matching = None
    show_polygon = D.genus == 1
    if matching_index is not None:
        lattice = matching_lattice(D, 0)
        if not (0 <= matching_index < len(lattice.matchings)):
            raise IndexError(
                f"matching index {matching_index} out of range"
                f" (have {len(lattice.matchings)})"
            )
        matching = lattice.matchings[matching_index]
    width = _CELL * 2 + _MARGIN * 3 if show_polygon else _CELL + _MARGIN * 2
    height = _CELL + _MARGIN * 2
    body = dimer_svg_group(D, matching)
    if show_polygon:
        body += polygon_svg_group(D, _CELL + _MARGIN * 2)
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">{body}</svg>\n'
    )
