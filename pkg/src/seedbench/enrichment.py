"""Hypergeometric enrichment P-value for a gene cluster against a genome.

P = 1 - sum_{i=0..k} C(f,i) C(g-f,n-i) / C(g,n): the probability of drawing
strictly more than k annotated genes in a size-n cluster. Closer to zero
means stronger enrichment.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, fsum
from pathlib import Path

# Below this genome size every quantity is computed in exact rational
# arithmetic (cheap, and bit-exact against enumeration oracles).
EXACT_LIMIT = 64


@dataclass
class GoQuery:
    """n genes in a cluster, k of them annotated with a term; g genes in the
    genome, f of them annotated with the same term."""

    n: int
    k: int
    g: int
    f: int

    def __post_init__(self):
        if not 0 <= self.k <= self.n <= self.g:
            raise ValueError(f"need 0 <= k <= n <= g, got k={self.k} n={self.n} g={self.g}")
        if not 0 <= self.f <= self.g:
            raise ValueError(f"need 0 <= f <= g, got f={self.f} g={self.g}")
        if self.k > self.f:
            raise ValueError(f"cluster has more annotated genes ({self.k}) than the genome ({self.f})")
        if self.n - self.k > self.g - self.f:
            raise ValueError("cluster has more unannotated genes than the genome")


def _support(n: int, g: int, f: int) -> tuple[int, int]:
    """Feasible overlap range for the hypergeometric pmf."""
    return max(0, n - (g - f)), min(n, f)


def hypergeom_pmf(g: int, f: int, n: int) -> tuple[int, list[float]]:
    """Full-support pmf terms h(lo), ..., h(hi) with (lo, hi) = _support.

    Terms are produced by a ratio recurrence from one exactly-computed
    starting term, so each term carries only accumulated rounding from exact
    integer ratios.
    """
    lo, hi = _support(n, g, f)
    start = float(Fraction(comb(f, lo) * comb(g - f, n - lo), comb(g, n)))
    terms = [start]
    h = start
    for i in range(lo, hi):
        h *= (f - i) * (n - i) / ((i + 1) * (g - f - n + i + 1))
        terms.append(h)
    return lo, terms


def go_pvalue(q: GoQuery) -> float:
    """Upper-tail complement of the hypergeometric CDF at q.k.

    Exact rational arithmetic for small genomes; otherwise the smaller tail
    is summed directly from exactly-started terms so tiny P-values keep full
    relative precision.
    """
    lo, hi = _support(q.n, q.g, q.f)
    if q.k >= hi:
        return 0.0  # no mass above k
    if q.g <= EXACT_LIMIT:
        total = sum(
            Fraction(comb(q.f, i) * comb(q.g - q.f, q.n - i), comb(q.g, q.n))
            for i in range(lo, q.k + 1)
        )
        return float(1 - total)
    _, terms = hypergeom_pmf(q.g, q.f, q.n)
    # Summing the upper tail directly is the same value as 1 - CDF(k) but
    # keeps full relative precision for tiny P and is exactly monotone in k.
    p = fsum(terms[q.k - lo + 1:])
    return min(1.0, max(0.0, p))


def read_queries(path) -> list[GoQuery]:
    """Parse 'n k g f' rows (whitespace or comma separated, # comments)."""
    queries = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.replace(",", " ").split()
        if len(fields) != 4:
            raise ValueError(f"row {lineno}: expected 4 fields (n k g f), got {len(fields)}")
        try:
            n, k, g, f = (int(v) for v in fields)
        except ValueError:
            raise ValueError(f"row {lineno}: non-integer field") from None
        queries.append(GoQuery(n=n, k=k, g=g, f=f))
    return queries
