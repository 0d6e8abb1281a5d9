"""Plain-text dimer file format.

Grammar (whitespace-separated tokens; `#` starts a comment running to the
end of the line):

    dimer NAME
    vertex V [x y]            # position optional; rationals in [0,1)
    arrow A TAIL HEAD [DX DY] # offsets optional, integers
    face + A1 A2 ...          # boundary in composition order
    face - A1 A2 ...

`vertex` lines are optional (labels are introduced by arrow lines); they
exist to pin rendering positions.  If any arrow carries DX DY, arrows
without them default to offset (0,0).  serialize produces the canonical
form: vertices in derived order, arrows in id order, positive faces before
negative ones, each face rotated to start at its least arrow id, faces
sorted by boundary; parse(serialize(model)) reproduces the model and
serialize is idempotent on its own output.
"""

from __future__ import annotations

from fractions import Fraction

from .core import NEGATIVE, POSITIVE, DimerModel, RawDimer


class DimerFileError(ValueError):
    pass


def parse(text: str) -> RawDimer:
    name = None
    vertex_positions: dict[str, tuple] = {}
    vertex_seen = False
    arrows: list[str] = []
    endpoints: dict[str, tuple[str, str]] = {}
    offsets: dict[str, tuple[int, int]] = {}
    faces: list[tuple[int, tuple[str, ...]]] = []

    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "dimer":
            if len(tokens) != 2:
                raise DimerFileError(f"line {lineno}: dimer line needs exactly a name")
            if name is not None:
                raise DimerFileError(f"line {lineno}: repeated dimer line")
            name = tokens[1]
        elif kind == "vertex":
            if len(tokens) not in (2, 4):
                raise DimerFileError(f"line {lineno}: vertex V [x y]")
            vertex_seen = True
            if len(tokens) == 4:
                try:
                    x, y = Fraction(tokens[2]), Fraction(tokens[3])
                except ValueError as exc:
                    raise DimerFileError(f"line {lineno}: bad position: {exc}") from exc
                if not (0 <= x < 1 and 0 <= y < 1):
                    raise DimerFileError(f"line {lineno}: position outside [0,1)")
                vertex_positions[tokens[1]] = (x, y)
        elif kind == "arrow":
            if len(tokens) not in (4, 6):
                raise DimerFileError(f"line {lineno}: arrow A TAIL HEAD [DX DY]")
            a = tokens[1]
            if a in endpoints:
                raise DimerFileError(f"line {lineno}: arrow {a} declared twice")
            arrows.append(a)
            endpoints[a] = (tokens[2], tokens[3])
            if len(tokens) == 6:
                try:
                    offsets[a] = (int(tokens[4]), int(tokens[5]))
                except ValueError as exc:
                    raise DimerFileError(f"line {lineno}: bad offset: {exc}") from exc
        elif kind == "face":
            if len(tokens) < 2 or tokens[1] not in ("+", "-"):
                raise DimerFileError(f"line {lineno}: face +|- A1 A2 ...")
            sign = POSITIVE if tokens[1] == "+" else NEGATIVE
            faces.append((sign, tuple(tokens[2:])))
        else:
            raise DimerFileError(f"line {lineno}: unknown directive {kind}")

    if name is None:
        raise DimerFileError("missing dimer line")
    if not arrows:
        raise DimerFileError("no arrows declared")
    return RawDimer(
        name=name,
        arrows=tuple(arrows),
        faces=tuple(faces),
        endpoints=endpoints,
        offsets={a: offsets.get(a, (0, 0)) for a in arrows} if offsets else None,
        positions=vertex_positions if (vertex_seen and vertex_positions) else None,
    )


def _fmt_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def serialize(D: DimerModel) -> str:
    lines = [f"dimer {D.name}"]
    for v in range(D.num_vertices):
        if D.positions is not None and D.positions[v] is not None:
            x, y = D.positions[v]
            lines.append(
                f"vertex {D.vertex_names[v]} {_fmt_fraction(x)} {_fmt_fraction(y)}"
            )
        else:
            lines.append(f"vertex {D.vertex_names[v]}")
    for a in range(D.num_arrows):
        base = (
            f"arrow {D.arrows[a]} {D.vertex_names[D.tail[a]]}"
            f" {D.vertex_names[D.head[a]]}"
        )
        if D.offsets is not None:
            dx, dy = D.offsets[a]
            base += f" {dx} {dy}"
        lines.append(base)
    canon_faces = []
    for face in D.faces:
        b = face.boundary
        k = b.index(min(b))
        canon_faces.append((face.sign, b[k:] + b[:k]))
    canon_faces.sort(key=lambda t: (-t[0], t[1]))
    for sign, boundary in canon_faces:
        mark = "+" if sign == POSITIVE else "-"
        names = " ".join(D.arrows[a] for a in boundary)
        lines.append(f"face {mark} {names}")
    return "\n".join(lines) + "\n"
