"""Cycle-index counting, Euler-transform inversion, and dimension bounds.

All tables hold arbitrary-precision integers.  The multiset (Euler)
transform and its inverse run on the integer logarithmic-derivative
recurrence, so every intermediate stays integral and each exact division
doubles as a correctness check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import InvalidInputError

COUNT_KINDS = ("h", "h_simple", "c", "c_simple", "f", "f_simple")


# ---------------------------------------------------------------------------
# Partitions and the pair action.


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple:
    """All partitions of n as nonincreasing tuples."""
    if n == 0:
        return ((),)
    out = []

    def rec(remaining, max_part, parts):
        if remaining == 0:
            out.append(tuple(parts))
            return
        for nxt in range(min(remaining, max_part), 0, -1):
            parts.append(nxt)
            rec(remaining - nxt, nxt, parts)
            parts.pop()

    rec(n, n, [])
    return tuple(out)


def conjugacy_class_size(lam: tuple) -> int:
    """Number of permutations of cycle type lam: n! / prod(l^m_l * m_l!)."""
    n = sum(lam)
    z = 1
    mult: dict = {}
    for part in lam:
        mult[part] = mult.get(part, 0) + 1
    for length, m in mult.items():
        z *= length ** m * math.factorial(m)
    return math.factorial(n) // z


def pair_cycle_type(lam: tuple) -> list:
    """Cycle lengths of the action induced on unordered pairs.

    One l-cycle contributes floor((l-1)/2) cycles of length l plus, for
    even l, a single cycle of length l/2; two cycles of lengths a and b
    contribute gcd(a, b) cycles of length lcm(a, b).
    """
    if not lam or any(p < 1 for p in lam):
        raise InvalidInputError(f"not a partition: {lam!r}")
    n = sum(lam)
    if n < 2:
        raise InvalidInputError("need a partition of n >= 2")
    out = []
    for length in lam:
        out.extend([length] * ((length - 1) // 2))
        if length % 2 == 0:
            out.append(length // 2)
    for idx, a in enumerate(lam):
        for b in lam[idx + 1 :]:
            g = math.gcd(a, b)
            out.extend([a * b // g] * g)
    assert sum(out) == n * (n - 1) // 2
    return sorted(out)


# ---------------------------------------------------------------------------
# Hilbert series of the full and simple-graph algebras.


def hilbert_series(n: int, dmax: int, variant: str = "full") -> list:
    """Dimensions of the degree-0..dmax graded pieces (= unlabeled counts).

    Averages, over the conjugacy classes of the vertex permutations, the
    product over induced pair cycles of 1/(1-z^l) (full) or (1+z^l)
    (simple), truncated at dmax.
    """
    if variant not in ("full", "simple"):
        raise InvalidInputError(f"unknown counting variant {variant!r}")
    if n < 2:
        raise InvalidInputError("need n >= 2")
    if dmax < 0:
        raise InvalidInputError("need dmax >= 0")
    total = [0] * (dmax + 1)
    for lam in partitions(n):
        size = conjugacy_class_size(lam)
        poly = [1] + [0] * dmax
        for length in pair_cycle_type(lam):
            if variant == "full":
                factor = [1 if k % length == 0 else 0 for k in range(dmax + 1)]
            else:
                factor = [0] * (dmax + 1)
                factor[0] = 1
                if length <= dmax:
                    factor[length] = 1
            poly = _poly_mul(poly, factor, dmax)
        for k in range(dmax + 1):
            total[k] += size * poly[k]
    fact = math.factorial(n)
    out = []
    for k in range(dmax + 1):
        q, r = divmod(total[k], fact)
        assert r == 0, "cycle-index average must be integral"
        out.append(q)
    return out


def _poly_mul(a: list, b: list, dmax: int) -> list:
    out = [0] * (dmax + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj and i + j <= dmax:
                out[i + j] += ai * bj
    return out


# ---------------------------------------------------------------------------
# Truncated bivariate series (x tracks vertices, z tracks edges).


@dataclass
class BiSeries:
    """Dense truncated bivariate power series with integer coefficients."""

    nmax: int
    dmax: int
    coeffs: list = field(default_factory=list)

    def __post_init__(self):
        if not self.coeffs:
            self.coeffs = [[0] * (self.dmax + 1) for _ in range(self.nmax + 1)]

    def coefficient(self, m: int, d: int) -> int:
        if not (0 <= m <= self.nmax and 0 <= d <= self.dmax):
            raise InvalidInputError(f"coefficient ({m},{d}) outside truncation ({self.nmax},{self.dmax})")
        return self.coeffs[m][d]

    def set(self, m: int, d: int, v: int):
        if not (0 <= m <= self.nmax and 0 <= d <= self.dmax):
            raise InvalidInputError(f"coefficient ({m},{d}) outside truncation ({self.nmax},{self.dmax})")
        self.coeffs[m][d] = v

    def support(self):
        for m in range(self.nmax + 1):
            row = self.coeffs[m]
            for d in range(self.dmax + 1):
                if row[d]:
                    yield m, d, row[d]

    def mul(self, other: "BiSeries") -> "BiSeries":
        out = BiSeries(min(self.nmax, other.nmax), min(self.dmax, other.dmax))
        for m1, d1, v1 in self.support():
            if m1 > out.nmax or d1 > out.dmax:
                continue
            for m2 in range(out.nmax - m1 + 1):
                row = other.coeffs[m2]
                for d2 in range(out.dmax - d1 + 1):
                    v2 = row[d2]
                    if v2:
                        out.coeffs[m1 + m2][d1 + d2] += v1 * v2
        return out


def _euler_theta(c: dict, nmax: int, dmax: int) -> dict:
    """theta[M][D] = sum over k | gcd(M,D) of (D/k) * c[M/k][D/k].

    This is the coefficient table of z * d/dz log of the multiset
    transform of c; it is integral, which keeps the whole transform in
    integer arithmetic.
    """
    theta: dict = {}
    for (m, d), v in c.items():
        if v == 0:
            continue
        if m < 1 or d < 1:
            raise InvalidInputError(f"multiset pieces need m >= 1 and d >= 1, got ({m},{d})")
        k = 1
        while k * m <= nmax and k * d <= dmax:
            key = (k * m, k * d)
            theta[key] = theta.get(key, 0) + d * v
            k += 1
    return theta


def euler_transform(c: dict, nmax: int, dmax: int) -> BiSeries:
    """Multiset transform: prod over (m,d) of (1 - x^m z^d)^(-c[m,d])."""
    theta = _euler_theta(c, nmax, dmax)
    out = BiSeries(nmax, dmax)
    out.coeffs[0][0] = 1
    items = sorted(theta.items())
    for d in range(1, dmax + 1):
        for m in range(nmax + 1):
            acc = 0
            for (a, b), t in items:
                if b > d or a > m:
                    continue
                prev = out.coeffs[m - a][d - b]
                if prev:
                    acc += t * prev
            q, r = divmod(acc, d)
            assert r == 0, "euler transform must stay integral"
            out.coeffs[m][d] = q
    return out


def euler_inverse(h: BiSeries) -> dict:
    """Connected counts c from the multiset-transformed table h.

    Inverts degree by degree through the integer log-derivative recurrence;
    raises if the input is not an Euler transform of a nonnegative table.
    """
    nmax, dmax = h.nmax, h.dmax
    if h.coeffs[0][0] != 1:
        raise InvalidInputError("series must have constant term 1")
    if any(h.coeffs[m][0] for m in range(1, nmax + 1)):
        raise InvalidInputError("series must have no edgeless terms with positive support")
    theta: dict = {}
    for d in range(1, dmax + 1):
        for m in range(nmax + 1):
            acc = d * h.coeffs[m][d]
            for (a, b), t in theta.items():
                if b < d and a <= m:
                    prev = h.coeffs[m - a][d - b]
                    if prev:
                        acc -= t * prev
            if acc:
                theta[(m, d)] = acc
    c: dict = {}
    for (m, d) in sorted(theta):
        acc = theta[(m, d)]
        for k in range(2, min(m, d) + 1):
            if m % k == 0 and d % k == 0:
                acc -= (d // k) * c.get((m // k, d // k), 0)
        q, r = divmod(acc, d)
        assert r == 0, "euler inversion must stay integral"
        if q:
            if q < 0:
                raise InvalidInputError(f"negative connected count at ({m},{d}); input not an Euler transform")
            c[(m, d)] = q
    return c


# ---------------------------------------------------------------------------
# Count tables.


@dataclass(frozen=True)
class CountTable:
    """Table of counts indexed by (vertices, edges)."""

    kind: str
    nmax: int
    dmax: int
    entries: dict

    def __post_init__(self):
        if self.kind not in COUNT_KINDS:
            raise InvalidInputError(f"unknown table kind {self.kind!r}")

    def value(self, m: int, d: int) -> int:
        if not (0 <= m <= self.nmax and 0 <= d <= self.dmax):
            raise InvalidInputError(f"({m},{d}) outside table bounds")
        return self.entries.get((m, d), 0)

    def to_csv(self) -> str:
        lines = [f"{self.kind},{self.nmax},{self.dmax}"]
        for m in range(self.nmax + 1):
            for d in range(self.dmax + 1):
                lines.append(f"{m},{d},{self.entries.get((m, d), 0)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "CountTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        kind, nmax, dmax = lines[0].split(",")
        entries = {}
        for ln in lines[1:]:
            m, d, v = ln.split(",")
            v = int(v)
            if v:
                entries[(int(m), int(d))] = v
        return cls(kind, int(nmax), int(dmax), entries)


def h_table(nmax: int, dmax: int, variant: str = "full") -> CountTable:
    """h[n][d] = number of unlabeled (multi)graphs on n vertices, d edges."""
    entries = {}
    for d in range(dmax + 1):
        entries[(0, d)] = 1 if d == 0 else 0
        entries[(1, d)] = 1 if d == 0 else 0
    for n in range(2, nmax + 1):
        series = hilbert_series(n, dmax, variant)
        for d in range(dmax + 1):
            entries[(n, d)] = series[d]
    kind = "h" if variant == "full" else "h_simple"
    return CountTable(kind, nmax, dmax, entries)


def support_counts(h: CountTable) -> dict:
    """h'[m][d]: counts with exactly m non-isolated vertices."""
    out = {}
    for m in range(h.nmax + 1):
        for d in range(h.dmax + 1):
            prev = h.value(m - 1, d) if m >= 1 else 0
            v = h.value(m, d) - prev
            if v < 0:
                raise InvalidInputError("counts must be nondecreasing in n")
            if v:
                out[(m, d)] = v
    return out


def connected_counts(nmax: int, dmax: int, variant: str = "full") -> CountTable:
    """c[m][d] = connected unlabeled (multi)graphs with m vertices, d edges."""
    if nmax < 2 or dmax < 1:
        raise InvalidInputError("need nmax >= 2 and dmax >= 1")
    h = h_table(nmax, dmax, variant)
    hprime = support_counts(h)
    series = BiSeries(nmax, dmax)
    for (m, d), v in hprime.items():
        series.coeffs[m][d] = v
    c = euler_inverse(series)
    kind = "c" if variant == "full" else "c_simple"
    return CountTable(kind, nmax, dmax, c)


def f_counts(n: int, dmax: int, variant: str = "full", c_table: CountTable | None = None) -> list:
    """f[n][d]: multisets of connected pieces on 2..n-1 vertices, d edges total.

    Upper bound for the graded dimensions of the reconstructible
    subalgebra.  The x-truncation dmax*(n-1) covers every multiset (a
    connected piece with d' edges has at most d'+1 <= d'*(n-1) vertices).
    """
    if n < 3:
        raise InvalidInputError("need n >= 3")
    if c_table is None:
        c_table = connected_counts(n - 1, dmax, variant)
    if c_table.nmax < n - 1 or c_table.dmax < dmax:
        raise InvalidInputError("connected table too small for the requested bound")
    pieces = {(m, d): v for (m, d), v in c_table.entries.items() if 2 <= m <= n - 1 and d >= 1 and v}
    xmax = dmax * (n - 1)
    series = euler_transform(pieces, xmax, dmax)
    out = []
    for d in range(dmax + 1):
        out.append(sum(series.coeffs[m][d] for m in range(xmax + 1)))
    return out


def sop_numerator(n: int, dmax: int):
    """Hilbert numerator against the conjectured parameter degrees.

    Multiplies the Hilbert series of the full algebra by (1-z^d) for the
    candidate degrees 1..n and 2..C(n-1,2) and reports the truncated
    coefficients plus a nonnegativity flag.  Also checks that the number
    of candidates equals C(n,2).
    """
    if n < 3:
        raise InvalidInputError("need n >= 3")
    degrees = list(range(1, n + 1)) + list(range(2, math.comb(n - 1, 2) + 1))
    assert len(degrees) == math.comb(n, 2), "parameter count must equal the number of variables"
    coeffs = hilbert_series(n, dmax, "full")
    for deg in degrees:
        nxt = list(coeffs)
        for k in range(deg, dmax + 1):
            nxt[k] -= coeffs[k - deg]
        coeffs = nxt
    return coeffs, all(v >= 0 for v in coeffs)
