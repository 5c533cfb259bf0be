"""Ribbon-cobordism obstructions from double branched covers.

Direction convention: a cobordism is read from ``K0`` (bottom) to ``K1``
(top).  It is *ribbon forward* when the height function has no local maxima,
i.e. no index-2 critical points; *ribbon backward* means the same surface
read from ``K1`` to ``K0``, which forbids index-0 critical points.

Lower bounds on critical-point counts are half-integers in general; since
counts are integers the bounds are rounded up.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from typing import Mapping

from .exactalg import AbelianGroup
from .invariants import (
    betti_profile,
    determinant,
    double_cover_homology,
    homology_of_sum,
    odd_prime_divisors,
)
from .pdcode import PDCode


def _ceil_half(x: int) -> int:
    return -((-x) // 2)


@dataclass(frozen=True)
class PrimeBound:
    p: int
    beta0: int
    beta1: int
    c0_bound: int
    c2_bound: int


@dataclass(frozen=True)
class CobordismContext:
    """User-declared 4-genus metadata; never computed."""

    g4_k0: int | None = None
    g4_k1: int | None = None

    def optimal(self, g: int) -> bool | None:
        if self.g4_k0 is None or self.g4_k1 is None:
            return None
        return g == abs(self.g4_k1 - self.g4_k0)


@dataclass(frozen=True)
class ObstructionReport:
    genus: int
    entries: tuple[PrimeBound, ...]
    c0_bound: int
    c2_bound: int
    c0_witness: int | None
    c2_witness: int | None
    det0: int | None = None
    det1: int | None = None
    # Gilmer verdicts, only populated for concordances (genus 0)
    gilmer_forward_excluded: bool | None = None
    gilmer_backward_excluded: bool | None = None
    optimal: bool | None = None

    @property
    def ribbon_forward_excluded(self) -> bool:
        """Livingston verdict: some index-2 critical point is forced."""
        return self.c2_bound >= 1

    @property
    def ribbon_backward_excluded(self) -> bool:
        return self.c0_bound >= 1

    @property
    def forward_excluded(self) -> bool:
        return self.ribbon_forward_excluded or bool(self.gilmer_forward_excluded)

    @property
    def backward_excluded(self) -> bool:
        return self.ribbon_backward_excluded or bool(self.gilmer_backward_excluded)

    @property
    def outcome(self) -> str:
        n = self.forward_excluded + self.backward_excluded
        return ("not_excluded", "excluded_one", "excluded_both")[n]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["entries"] = [asdict(e) for e in self.entries]
        d.update(
            ribbon_forward_excluded=self.ribbon_forward_excluded,
            ribbon_backward_excluded=self.ribbon_backward_excluded,
            forward_excluded=self.forward_excluded,
            backward_excluded=self.backward_excluded,
            outcome=self.outcome,
        )
        return d


def livingston_bounds(beta0: Mapping[int, int], beta1: Mapping[int, int], g: int) -> ObstructionReport:
    """Per-prime lower bounds on index-0 and index-2 critical points.

    ``beta0``/``beta1`` map odd primes to mod-p Betti numbers of the double
    branched covers of the bottom and top knots.  A prime missing from one
    profile counts as Betti number 0 there.
    """
    if g < 0:
        raise ValueError("genus must be non-negative")
    primes = sorted(set(beta0) | set(beta1))
    if any(p % 2 == 0 for p in primes):
        raise ValueError("only odd primes are allowed")
    entries = []
    for p in primes:
        b0, b1 = beta0.get(p, 0), beta1.get(p, 0)
        c0 = max(0, _ceil_half(b1 - b0 - 2 * g))
        c2 = max(0, _ceil_half(b0 - b1 - 2 * g))
        entries.append(PrimeBound(p, b0, b1, c0, c2))
    c0e = max(entries, key=lambda e: e.c0_bound, default=None)
    c2e = max(entries, key=lambda e: e.c2_bound, default=None)
    c0 = c0e.c0_bound if c0e else 0
    c2 = c2e.c2_bound if c2e else 0
    return ObstructionReport(
        genus=g,
        entries=tuple(entries),
        c0_bound=c0,
        c2_bound=c2,
        c0_witness=c0e.p if c0 else None,
        c2_witness=c2e.p if c2 else None,
    )


def gilmer_check(det0: int, det1: int) -> tuple[bool, bool]:
    """Ribbon concordance from K0 to K1 forces det K0 | det K1.

    Returns ``(forward_excluded, backward_excluded)``.
    """
    if det0 <= 0 or det1 <= 0:
        raise ValueError("determinants must be positive")
    return det1 % det0 != 0, det0 % det1 != 0


def paper_m_bound(d03: int, d13: int, d05: int, d15: int, g: int) -> int:
    """Smallest ``m`` with ``m > 2(g + d03 + d13 + d05 + d15)``."""
    return 2 * (g + d03 + d13 + d05 + d15) + 1


def obstruct_groups(
    h0: AbelianGroup, h1: AbelianGroup, g: int, ctx: CobordismContext | None = None
) -> ObstructionReport:
    """Run every applicable obstruction given the double-cover homologies."""
    det0, det1 = h0.order, h1.order
    primes = sorted(set(odd_prime_divisors(det0)) | set(odd_prime_divisors(det1)))
    rep = livingston_bounds(betti_profile(h0, primes), betti_profile(h1, primes), g)
    extra = dict(det0=det0, det1=det1)
    if g == 0:
        fwd, bwd = gilmer_check(det0, det1)
        extra.update(gilmer_forward_excluded=fwd, gilmer_backward_excluded=bwd)
    if ctx is not None:
        extra["optimal"] = ctx.optimal(g)
    return replace(rep, **extra)


def obstruct_pair(
    k0: PDCode, k1: PDCode, g: int, ctx: CobordismContext | None = None
) -> ObstructionReport:
    """Full pipeline for a pair of knot diagrams."""
    determinant(k0)
    determinant(k1)
    return obstruct_groups(double_cover_homology(k0), double_cover_homology(k1), g, ctx)


@dataclass(frozen=True)
class StabilizationResult:
    minimal_m: int | None
    report: ObstructionReport | None
    sufficient_m: int
    m_max: int
    d: dict[str, int] = field(default_factory=dict)

    @property
    def excluded(self) -> bool:
        return self.minimal_m is not None


def stabilize_groups(
    h0: AbelianGroup,
    h1: AbelianGroup,
    hj0: AbelianGroup,
    hj1: AbelianGroup,
    g: int,
    m_max: int,
) -> StabilizationResult:
    if m_max < 1:
        raise ValueError("m_max must be positive")
    d = {
        "d03": h0.p_rank(3), "d13": h1.p_rank(3),
        "d05": h0.p_rank(5), "d15": h1.p_rank(5),
    }
    threshold = paper_m_bound(d["d03"], d["d13"], d["d05"], d["d15"], g)
    primes = sorted(
        set().union(*(odd_prime_divisors(h.order) for h in (h0, h1, hj0, hj1)))
    )
    for m in range(0, m_max + 1):
        s0 = homology_of_sum([h0] + [hj0] * m)
        s1 = homology_of_sum([h1] + [hj1] * m)
        rep = livingston_bounds(betti_profile(s0, primes), betti_profile(s1, primes), g)
        if rep.ribbon_forward_excluded and rep.ribbon_backward_excluded:
            return StabilizationResult(m, replace(rep, det0=s0.order, det1=s1.order), threshold, m_max, d)
    return StabilizationResult(None, None, threshold, m_max, d)


def stabilize(
    k0: PDCode, k1: PDCode, j0: PDCode, j1: PDCode, g: int, m_max: int
) -> StabilizationResult:
    """Smallest ``m`` for which ``K0 # mJ0`` and ``K1 # mJ1`` admit no ribbon
    cobordism of genus ``g`` in either direction.

    Homology of the stabilized knots is assembled from the summands' groups
    rather than recomputed from the spliced diagrams.
    """
    return stabilize_groups(
        double_cover_homology(k0),
        double_cover_homology(k1),
        double_cover_homology(j0),
        double_cover_homology(j1),
        g,
        m_max,
    )
