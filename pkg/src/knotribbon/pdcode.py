"""Planar-diagram (PD) codes of knots.

Conventions
-----------
A crossing is a 4-tuple ``(a, b, c, d)`` of edge labels listed
counterclockwise starting from the incoming under-strand, so ``c`` is the
outgoing under-strand and ``c == a + 1`` (mod ``2n``).  The over-strand is
``b``/``d``; whichever of the two is followed by the other (mod ``2n``) is the
incoming one.  Edge ``k`` runs into edge ``k + 1`` and ``2n`` wraps to ``1``.

The crossing sign is ``+1`` when ``d == b + 1`` (``b`` is the incoming
over-strand) and ``-1`` when ``b == d + 1``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Crossing = tuple[int, int, int, int]


class PDCodeError(ValueError):
    """Invalid planar-diagram code."""


class PDSyntaxError(PDCodeError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class LinkDiagramError(PDCodeError):
    """The code describes a link with more than one component."""


def _strand_components(crossings: Sequence[Crossing]) -> int:
    """Count closed strands by walking through crossings to opposite positions."""
    where: dict[int, list[tuple[int, int]]] = {}
    for x, cr in enumerate(crossings):
        for i, lab in enumerate(cr):
            where.setdefault(lab, []).append((x, i))
    seen: set[tuple[int, int]] = set()
    components = 0
    for start in ((x, i) for x in range(len(crossings)) for i in range(4)):
        if start in seen:
            continue
        components += 1
        x, i = start
        while (x, i) not in seen:
            seen.add((x, i))
            j = (i + 2) % 4
            seen.add((x, j))
            lab = crossings[x][j]
            a, b = where[lab]
            x, i = b if a == (x, j) else a
    return components


@dataclass(frozen=True)
class PDCode:
    """A validated PD code of a knot diagram.  The empty code is the unknot."""

    crossings: tuple[Crossing, ...] = ()

    def __post_init__(self):
        cs = tuple(tuple(int(v) for v in c) for c in self.crossings)
        object.__setattr__(self, "crossings", cs)
        n = len(cs)
        for c in cs:
            if len(c) != 4:
                raise PDCodeError(f"crossing {list(c)} does not have 4 entries")
        counts: dict[int, int] = {}
        for c in cs:
            for lab in c:
                counts[lab] = counts.get(lab, 0) + 1
        if set(counts) != set(range(1, 2 * n + 1)):
            missing = sorted(set(range(1, 2 * n + 1)) - set(counts))
            extra = sorted(set(counts) - set(range(1, 2 * n + 1)))
            raise PDCodeError(f"labels must be exactly 1..{2 * n}; missing {missing}, unexpected {extra}")
        bad = sorted(lab for lab, k in counts.items() if k != 2)
        if bad:
            raise PDCodeError(f"labels {bad} do not appear exactly twice")
        if n == 0:
            return
        comps = _strand_components(cs)
        if comps != 1:
            raise LinkDiagramError(f"diagram has {comps} components; only knots are supported")
        if n == 1:
            return
        for x, (a, b, c, d) in enumerate(cs):
            if c != self.succ(a):
                raise PDCodeError(
                    f"crossing {x} {list(cs[x])}: outgoing under-strand {c} does not follow {a}"
                )
            if d != self.succ(b) and b != self.succ(d):
                raise PDCodeError(f"crossing {x} {list(cs[x])}: over-strand labels are not consecutive")

    @property
    def n(self) -> int:
        return len(self.crossings)

    def __len__(self):
        return len(self.crossings)

    def succ(self, label: int) -> int:
        return label % (2 * self.n) + 1

    def occurrences(self) -> dict[int, list[tuple[int, int]]]:
        """Map each label to its two ``(crossing, position)`` slots."""
        where: dict[int, list[tuple[int, int]]] = {}
        for x, cr in enumerate(self.crossings):
            for i, lab in enumerate(cr):
                where.setdefault(lab, []).append((x, i))
        return where

    def serialize(self) -> str:
        """Canonical text form: crossings sorted by their smallest label."""
        ordered = sorted(self.crossings, key=lambda c: (min(c), c))
        return json.dumps([list(c) for c in ordered], separators=(",", ":"))

    def __str__(self):
        return json.dumps([list(c) for c in self.crossings], separators=(",", ":"))


@dataclass(frozen=True)
class OrientedDiagram:
    """A PD code together with crossing signs and over-strand roles."""

    code: PDCode
    signs: tuple[int, ...]
    # tuple position (1 or 3) of the incoming over-strand, per crossing
    over_in: tuple[int, ...]

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    @property
    def n(self) -> int:
        return self.code.n

    def outgoing_slots(self) -> set[tuple[int, int]]:
        """``(crossing, position)`` slots at which an edge leaves the crossing."""
        return {(x, 2) for x in range(self.n)} | {
            (x, 4 - p) for x, p in enumerate(self.over_in)
        }


@dataclass(frozen=True)
class FaceMap:
    """Faces of the 4-valent planar graph underlying a diagram.

    Corner ``i`` of a crossing is the wedge between tuple positions ``i`` and
    ``i + 1`` (counterclockwise).  ``faces[f]`` lists the ``(crossing,
    corner)`` incidences of face ``f`` in boundary order; ``corner_face[x][i]``
    is the face containing corner ``i`` of crossing ``x``.
    """

    faces: tuple[tuple[tuple[int, int], ...], ...]
    corner_face: tuple[tuple[int, int, int, int], ...] = field(default=())

    def __len__(self):
        return len(self.faces)


def _parse_bracket(text: str) -> list:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PDSyntaxError(exc.msg, exc.pos) from None
    if not isinstance(data, list):
        raise PDSyntaxError("expected a list of crossings", 0)
    out = []
    for k, c in enumerate(data):
        if (
            not isinstance(c, list)
            or len(c) != 4
            or not all(isinstance(v, int) and not isinstance(v, bool) and v > 0 for v in c)
        ):
            raise PDSyntaxError(f"crossing #{k} is not a list of 4 positive integers: {c!r}", 0)
        out.append(tuple(c))
    return out


_X_ENTRY = re.compile(r"X\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")
_SEP = re.compile(r"[\s,]*")


def _parse_xform(text: str) -> list:
    body, offset = text, 0
    m = re.fullmatch(r"\s*PD\[(.*)\]\s*", text, flags=re.S)
    if m:
        body, offset = m.group(1), m.start(1)
    out = []
    pos = _SEP.match(body).end()
    while pos < len(body):
        m = _X_ENTRY.match(body, pos)
        if not m:
            raise PDSyntaxError("expected X[a,b,c,d]", offset + pos)
        out.append(tuple(int(g) for g in m.groups()))
        pos = _SEP.match(body, m.end()).end()
    return out


def parse_pd(text: str) -> PDCode:
    """Parse ``[[a,b,c,d],...]`` or knot-table ``X[a,b,c,d] ...`` text."""
    stripped = text.strip()
    if not stripped:
        raise PDSyntaxError("empty input", 0)
    if stripped.startswith("[") or stripped.startswith("("):
        crossings = _parse_bracket(stripped.replace("(", "[").replace(")", "]"))
    else:
        crossings = _parse_xform(stripped)
    return PDCode(tuple(crossings))


def orient(code: PDCode) -> OrientedDiagram:
    """Assign crossing signs from label succession."""
    signs, over_in = [], []
    n = code.n
    for x, (a, b, c, d) in enumerate(code.crossings):
        if n == 1:
            # both over labels succeed each other mod 2; the one equal to
            # the outgoing under-strand must be incoming
            forward = b == c
        elif d == code.succ(b):
            forward = True
        elif b == code.succ(d):
            forward = False
        else:
            raise PDCodeError(f"crossing {x}: inconsistent over-strand succession")
        signs.append(1 if forward else -1)
        over_in.append(1 if forward else 3)
    return OrientedDiagram(code, tuple(signs), tuple(over_in))


def trace_faces(d: OrientedDiagram | PDCode) -> FaceMap:
    """Walk corners of the diagram graph to enumerate its faces."""
    code = d.code if isinstance(d, OrientedDiagram) else d
    n = code.n
    if n == 0:
        return FaceMap(((), ()), ())
    where = code.occurrences()

    def other(x: int, i: int) -> tuple[int, int]:
        a, b = where[code.crossings[x][i]]
        return b if a == (x, i) else a

    corner_face = [[-1] * 4 for _ in range(n)]
    faces = []
    for x in range(n):
        for i in range(4):
            if corner_face[x][i] >= 0:
                continue
            f = len(faces)
            boundary = []
            cx, ci = x, i
            while corner_face[cx][ci] < 0:
                corner_face[cx][ci] = f
                boundary.append((cx, ci))
                cx, ci = other(cx, (ci + 1) % 4)
            if (cx, ci) != (x, i):
                raise PDCodeError("corner walk did not close up; corrupt code")
            faces.append(tuple(boundary))
    if len(faces) != n + 2:
        raise PDCodeError(f"{len(faces)} faces for {n} crossings (expected {n + 2}); diagram is not planar")
    return FaceMap(tuple(faces), tuple(tuple(r) for r in corner_face))


def mirror(code: PDCode) -> PDCode:
    """Swap over and under at every crossing."""
    d = orient(code)
    out = []
    for (a, b, c, e), k in zip(code.crossings, d.over_in):
        out.append((b, c, e, a) if k == 1 else (e, a, b, c))
    return PDCode(tuple(out))


def connected_sum(k1: PDCode, k2: PDCode) -> PDCode:
    """Connected sum, spliced at the edge labelled 1 in both summands.

    Labels of ``k1`` are kept except that the outgoing end of its edge 1
    becomes ``2n1 + 1``; ``k2`` is shifted by ``2n1`` and the outgoing end of
    its edge 1 becomes 1.
    """
    if k1.n == 0:
        return k2
    if k2.n == 0:
        return k1
    n1 = k1.n
    shift = 2 * n1
    out1 = orient(k1).outgoing_slots()
    out2 = orient(k2).outgoing_slots()
    crossings = []
    for x, cr in enumerate(k1.crossings):
        crossings.append(tuple(
            shift + 1 if (lab == 1 and (x, i) in out1) else lab for i, lab in enumerate(cr)
        ))
    for x, cr in enumerate(k2.crossings):
        crossings.append(tuple(
            1 if (lab == 1 and (x, i) in out2) else lab + shift for i, lab in enumerate(cr)
        ))
    return PDCode(tuple(crossings))


def shift_labels(code: PDCode, s: int) -> PDCode:
    """Same diagram with every label advanced by ``s`` along the knot."""
    if code.n == 0:
        return code
    w = 2 * code.n
    return PDCode(tuple(tuple((lab - 1 + s) % w + 1 for lab in c) for c in code.crossings))


def connected_power(code: PDCode, m: int) -> PDCode:
    """Connected sum of ``m`` copies of ``code`` (``m = 0`` gives the unknot)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = PDCode()
    for _ in range(m):
        out = connected_sum(out, code)
    return out


def sum_all(codes: Iterable[PDCode]) -> PDCode:
    out = PDCode()
    for c in codes:
        out = connected_sum(out, c)
    return out
