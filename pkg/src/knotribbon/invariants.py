"""Knot invariants computed from PD codes.

Two independent routes to the determinant are kept:

* the Goeritz matrix of a checkerboard colouring, whose cokernel is the first
  homology of the double branched cover; and
* the Alexander polynomial from Fox derivatives of the Wirtinger
  presentation, evaluated at ``t = -1``.

:func:`determinant` insists that they agree.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import factorint

from .exactalg import AbelianGroup, LaurentPoly, det_bareiss, interpolate, smith_normal_form
from .pdcode import FaceMap, OrientedDiagram, PDCode, orient, trace_faces

BettiProfile = dict[int, int]


class InvariantError(RuntimeError):
    """Internal consistency failure while computing invariants."""


@dataclass(frozen=True)
class CheckerboardColoring:
    faces: FaceMap
    colors: tuple[int, ...]
    chosen_class: int

    def faces_of(self, color: int) -> list[int]:
        return [f for f, c in enumerate(self.colors) if c == color]

    @property
    def white(self) -> list[int]:
        return self.faces_of(self.chosen_class)


@dataclass(frozen=True)
class GoeritzMatrix:
    matrix: tuple[tuple[int, ...], ...]
    regions: tuple[int, ...]  # face index of each row/column
    deleted_region: int | None
    eta: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.matrix)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]


def checkerboard(f: FaceMap) -> CheckerboardColoring:
    """Properly 2-colour the faces; the smaller class becomes the chosen one."""
    nf = len(f.faces)
    if not f.corner_face:
        # 0-crossing unknot: two discs on either side of the circle
        return CheckerboardColoring(f, (0, 1), 0)
    adj: list[set[int]] = [set() for _ in range(nf)]
    for row in f.corner_face:
        for i in range(4):
            # the edge at position i separates corners i-1 and i
            a, b = row[i - 1], row[i]
            adj[a].add(b)
            adj[b].add(a)
    colors = [-1] * nf
    colors[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if colors[v] < 0:
                colors[v] = 1 - colors[u]
                queue.append(v)
            elif colors[v] == colors[u]:
                raise InvariantError("faces do not admit a checkerboard colouring")
    if min(colors) < 0:
        raise InvariantError("face adjacency graph is disconnected")
    sizes = [colors.count(0), colors.count(1)]
    chosen = 0 if sizes[0] <= sizes[1] else 1
    return CheckerboardColoring(f, tuple(colors), chosen)


def goeritz(
    d: OrientedDiagram,
    c: CheckerboardColoring,
    *,
    color: int | None = None,
    deleted: int | None = None,
) -> GoeritzMatrix:
    """Reduced Goeritz matrix of the white regions.

    ``color`` overrides which class is white; ``deleted`` picks the white
    region (a face index) whose row and column are dropped, defaulting to the
    highest-index white region.
    """
    white_color = c.chosen_class if color is None else color
    if d.n == 0:
        return GoeritzMatrix((), (), None, ())
    cf = c.faces.corner_face
    regions = c.faces_of(white_color)
    index = {f: k for k, f in enumerate(regions)}
    k = len(regions)
    g = [[0] * k for _ in range(k)]
    etas = []
    for x, corners in enumerate(cf):
        cols = [c.colors[f] == white_color for f in corners]
        if cols == [True, False, True, False]:
            eta, (ra, rb) = 1, (corners[0], corners[2])
        elif cols == [False, True, False, True]:
            eta, (ra, rb) = -1, (corners[1], corners[3])
        else:
            raise InvariantError(f"crossing {x}: white corners are not opposite")
        etas.append(eta)
        if ra != rb:
            i, j = index[ra], index[rb]
            g[i][j] -= eta
            g[j][i] -= eta
    for i in range(k):
        g[i][i] = -sum(g[i][j] for j in range(k) if j != i)
    drop = regions[-1] if deleted is None else deleted
    if drop not in index:
        raise ValueError(f"face {drop} is not a white region")
    keep = [i for i in range(k) if regions[i] != drop]
    reduced = tuple(tuple(g[i][j] for j in keep) for i in keep)
    return GoeritzMatrix(reduced, tuple(regions[i] for i in keep), drop, tuple(etas))


@lru_cache(maxsize=256)
def _goeritz_for(code: PDCode) -> GoeritzMatrix:
    d = orient(code)
    return goeritz(d, checkerboard(trace_faces(d)))


@lru_cache(maxsize=256)
def double_cover_homology(k: PDCode) -> AbelianGroup:
    """First homology of the double branched cover, from the Goeritz matrix."""
    if k.n <= 1:
        return AbelianGroup()
    gm = _goeritz_for(k)
    grp = smith_normal_form(gm.rows(), ncols=gm.size)
    if grp.free_rank:
        raise InvariantError(f"double cover homology has free rank {grp.free_rank}")
    return grp


def odd_prime_divisors(n: int) -> list[int]:
    return sorted(p for p in factorint(abs(n)) if p != 2) if abs(n) > 1 else []


def betti_profile(g: AbelianGroup, primes: Iterable[int] = ()) -> BettiProfile:
    """``p -> dim H_1 (x) F_p`` for the requested primes.

    With no primes given, every odd prime dividing the group order is used.
    """
    primes = list(primes) or odd_prime_divisors(g.order)
    return {p: g.p_rank(p) for p in primes}


def homology_of_sum(groups: Iterable[AbelianGroup]) -> AbelianGroup:
    """Direct sum in invariant-factor form."""
    out = AbelianGroup()
    for g in groups:
        out = out + g
    return out


def fox_matrix_at(d: OrientedDiagram, t: int) -> list[list[int]]:
    """Alexander matrix (rows: crossings, columns: arcs) evaluated at ``t``.

    A sign ``+1`` crossing contributes the relation ``x_out = x_over x_in
    x_over^-1``; its Fox row is ``(1 - t, t, -1)`` in the (over, in, out)
    columns.  Sign ``-1`` crossings use the conjugate relation, whose row
    times ``t`` is ``(t - 1, 1, -t)``.
    """
    arcs = _arcs(d.code)
    n = d.n
    m = [[0] * n for _ in range(n)]
    for x, ((a, b, c, e), s) in enumerate(zip(d.code.crossings, d.signs)):
        row = m[x]
        over = arcs[b]
        if s > 0:
            row[over] += 1 - t
            row[arcs[a]] += t
            row[arcs[c]] -= 1
        else:
            row[over] += t - 1
            row[arcs[a]] += 1
            row[arcs[c]] -= t
    return m


def _arcs(code: PDCode) -> dict[int, int]:
    """Label -> arc index; over-strands do not break arcs."""
    parent = list(range(2 * code.n + 1))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for _, b, _, e in code.crossings:
        rb, re_ = find(b), find(e)
        if rb != re_:
            parent[max(rb, re_)] = min(rb, re_)
    roots = sorted({find(lab) for lab in range(1, 2 * code.n + 1)})
    index = {r: i for i, r in enumerate(roots)}
    if len(roots) != code.n:
        raise InvariantError(f"{len(roots)} arcs for {code.n} crossings")
    return {lab: index[find(lab)] for lab in range(1, 2 * code.n + 1)}


def _sample_points(count: int) -> list[int]:
    pts = []
    k = 1
    while len(pts) < count:
        pts.append(k)
        if len(pts) < count:
            pts.append(-k)
        k += 1
    return pts


def normalize_alexander(p: LaurentPoly) -> LaurentPoly:
    """Shift to a symmetric exponent window and fix the sign so that p(1) = 1."""
    if p.is_zero():
        raise InvariantError("Alexander determinant vanished")
    total = p.min_exp + p.max_exp
    if total % 2:
        raise InvariantError(f"odd span for {p}; not a knot Alexander polynomial")
    p = p.shift(-total // 2)
    v = p(1)
    if v not in (1, -1):
        raise InvariantError(f"Delta(1) = {v}, expected +-1")
    return p if v == 1 else -p


@lru_cache(maxsize=256)
def alexander(k: PDCode) -> LaurentPoly:
    """Normalized Alexander polynomial via Fox calculus and interpolation."""
    if k.n <= 1:
        return LaurentPoly({0: 1})
    d = orient(k)
    n = k.n
    points = []
    for t in _sample_points(2 * n + 1):
        m = fox_matrix_at(d, t)
        minor = [row[:-1] for row in m[:-1]]
        points.append((t, det_bareiss(minor)))
    raw = interpolate(points, (-n, n))
    delta = normalize_alexander(raw)
    if not delta.is_symmetric():
        raise InvariantError(f"Alexander polynomial {delta} is not symmetric")
    return delta


def goeritz_determinant(k: PDCode) -> int:
    if k.n <= 1:
        return 1
    return abs(det_bareiss(_goeritz_for(k).rows()))


def determinant(k: PDCode) -> int:
    """``|Delta(-1)|``, cross-checked against the Goeritz routes."""
    if k.n <= 1:
        return 1
    via_alex = abs(alexander(k)(-1))
    via_h1 = double_cover_homology(k).order
    via_goeritz = goeritz_determinant(k)
    if not via_alex == via_h1 == via_goeritz:
        raise InvariantError(
            f"determinant routes disagree: |Delta(-1)|={via_alex}, "
            f"|H_1|={via_h1}, |det G|={via_goeritz}"
        )
    return via_alex


def betti_of(k: PDCode, primes: Sequence[int] = ()) -> BettiProfile:
    return betti_profile(double_cover_homology(k), primes)
