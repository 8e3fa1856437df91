"""The invariant ring in the orbit-sum basis, its quotients, and evaluation.

A basis element <m> is the sum of the monomials x^m' over the labeled orbit
of m inside a fixed ambient vertex count n.  Polynomials are sparse maps
from isomorphism classes to exact rational coefficients; the simple-graph
and forest quotients drop classes violating their defining relations after
every basis-product expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidInputError
from .graphs import (
    IsoClass,
    Multigraph,
    WeightedGraph,
    canonical_form,
    format_multigraph,
    orbit_size,
    orbit_vectors,
    pair_list,
    parse_multigraph,
    _is_acyclic,
)

VARIANT_KINDS = ("full", "simple", "forest")


@dataclass(frozen=True)
class AlgebraVariant:
    """Which graded algebra we work in, plus the ambient vertex count."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in VARIANT_KINDS:
            raise InvalidInputError(f"unknown algebra variant {self.kind!r}")
        if self.n < 1:
            raise InvalidInputError("ambient vertex count must be positive")

    def admits(self, cls: IsoClass) -> bool:
        if cls.n_vertices > self.n:
            return False
        if self.kind == "full":
            return True
        if not cls.is_simple():
            return False
        if self.kind == "simple":
            return True
        return cls.is_forest()


def full(n: int) -> AlgebraVariant:
    return AlgebraVariant("full", n)


def simple(n: int) -> AlgebraVariant:
    return AlgebraVariant("simple", n)


def forest(n: int) -> AlgebraVariant:
    return AlgebraVariant("forest", n)


class OrbitSumPoly:
    """Sparse linear combination of orbit-sum basis elements."""

    __slots__ = ("variant", "_terms")

    def __init__(self, variant: AlgebraVariant, terms=None):
        clean = {}
        for cls, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            if not variant.admits(cls):
                raise InvalidInputError(f"class {cls.text!r} not admitted by {variant.kind} algebra on {variant.n} vertices")
            clean[cls] = c
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("OrbitSumPoly is immutable")

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].key)

    def coefficient(self, cls: IsoClass) -> Fraction:
        return self._terms.get(cls, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> tuple:
        return tuple(sorted({c.n_edges for c in self._terms}))

    def graded_component(self, d: int) -> "OrbitSumPoly":
        return OrbitSumPoly(self.variant, {c: v for c, v in self._terms.items() if c.n_edges == d})

    def add(self, other: "OrbitSumPoly") -> "OrbitSumPoly":
        self._check_compatible(other)
        t = dict(self._terms)
        for c, v in other._terms.items():
            t[c] = t.get(c, Fraction(0)) + v
        return OrbitSumPoly(self.variant, t)

    def subtract(self, other: "OrbitSumPoly") -> "OrbitSumPoly":
        return self.add(other.scaled(-1))

    def scaled(self, c) -> "OrbitSumPoly":
        c = Fraction(c)
        return OrbitSumPoly(self.variant, {k: c * v for k, v in self._terms.items()})

    def _check_compatible(self, other):
        if self.variant != other.variant:
            raise InvalidInputError("algebra variant or ambient mismatch")

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.subtract(other)

    def __mul__(self, other):
        if isinstance(other, OrbitSumPoly):
            return multiply(self, other)
        return self.scaled(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, OrbitSumPoly) and self.variant == other.variant and self._terms == other._terms

    def __hash__(self):
        return hash((self.variant, tuple(sorted(((c.key, v) for c, v in self._terms.items())))))

    def __repr__(self):
        if self.is_zero():
            return f"OrbitSumPoly({self.variant.kind}@{self.variant.n}: 0)"
        body = " + ".join(f"{v}*<{c.text}>" for c, v in self.items())
        return f"OrbitSumPoly({self.variant.kind}@{self.variant.n}: {body})"


def zero(variant: AlgebraVariant) -> OrbitSumPoly:
    return OrbitSumPoly(variant, {})


def one(variant: AlgebraVariant) -> OrbitSumPoly:
    return OrbitSumPoly(variant, {IsoClass((0, ())): Fraction(1)})


def orbit_sum(m: Multigraph, variant: AlgebraVariant) -> OrbitSumPoly:
    """Basis element <m>; the zero polynomial if the quotient kills m."""
    cls = canonical_form(m)
    if cls.n_vertices > variant.n:
        raise InvalidInputError(f"support {cls.n_vertices} exceeds ambient {variant.n}")
    if not variant.admits(cls):
        return zero(variant)
    return OrbitSumPoly(variant, {cls: Fraction(1)})


# ---------------------------------------------------------------------------
# Products.

_CLASS_OF_VEC: dict = {}
_EXPAND_CACHE: dict = {}


def _class_of_vector(vec: tuple, n: int) -> IsoClass:
    hit = _CLASS_OF_VEC.get((vec, n))
    if hit is None:
        hit = canonical_form(Multigraph.from_vector(vec, n))
        _CLASS_OF_VEC[(vec, n)] = hit
    return hit


def _admits_vector(vec: tuple, n: int, kind: str) -> bool:
    if kind == "full":
        return True
    if any(v > 1 for v in vec):
        return False
    if kind == "simple":
        return True
    pl = pair_list(n)
    return _is_acyclic([pl[k] for k, v in enumerate(vec) if v])


def expand_pair(a: IsoClass, b: IsoClass, n: int, kind: str) -> dict:
    """Integer expansion of <a>*<b> in the orbit-sum basis of the variant.

    For a fixed labeled representative of the factor with the larger orbit,
    every labeled member of the other factor's orbit is added pointwise and
    canonicalized; the tally is rescaled by the orbit sizes.  Quotient
    relations are applied before canonicalization.
    """
    ck = (a.key, b.key, n, kind)
    hit = _EXPAND_CACHE.get(ck)
    if hit is not None:
        return hit
    oa, ob = orbit_size(a, n), orbit_size(b, n)
    if ob > oa:
        a, b = b, a
        oa, ob = ob, oa
    rep = a.representative(n).to_vector()
    tally: dict = {}
    for mem in orbit_vectors(b, n):
        s = tuple(x + y for x, y in zip(rep, mem))
        if not _admits_vector(s, n, kind):
            continue
        r = _class_of_vector(s, n)
        tally[r] = tally.get(r, 0) + 1
    out = {}
    for r, cnt in tally.items():
        num = oa * cnt
        orc = orbit_size(r, n)
        assert num % orc == 0, "orbit-sum product coefficient must be integral"
        out[r] = num // orc
    _EXPAND_CACHE[ck] = out
    return out


def multiply(p: OrbitSumPoly, q: OrbitSumPoly, degree_cap: int | None = None) -> OrbitSumPoly:
    """Bilinear product, re-expanded in the orbit-sum basis of the variant.

    Terms whose degree exceeds degree_cap are dropped from the result.
    """
    p._check_compatible(q)
    n, kind = p.variant.n, p.variant.kind
    acc: dict = {}
    for ca, va in p._terms.items():
        for cb, vb in q._terms.items():
            if degree_cap is not None and ca.n_edges + cb.n_edges > degree_cap:
                continue
            coeff = va * vb
            for r, c in expand_pair(ca, cb, n, kind).items():
                acc[r] = acc.get(r, Fraction(0)) + coeff * c
    return OrbitSumPoly(p.variant, acc)


def product_of(classes, variant: AlgebraVariant, degree_cap: int | None = None) -> OrbitSumPoly:
    """Expanded product of basis elements, combined smallest-degree last."""
    out = one(variant)
    for cls in sorted(classes, key=lambda c: (-c.n_edges, c.key)):
        out = multiply(out, OrbitSumPoly(variant, {cls: Fraction(1)}), degree_cap)
        if out.is_zero():
            break
    return out


# ---------------------------------------------------------------------------
# Derivation D = sum of d/dx_{ij}.


def derivation(p: OrbitSumPoly) -> OrbitSumPoly:
    """Apply the total derivation; defined on the full algebra only."""
    if p.variant.kind != "full":
        raise InvalidInputError("the derivation operator is restricted to the full algebra")
    n = p.variant.n
    acc: dict = {}
    for cls, v in p._terms.items():
        for r, c in _derive_class(cls, n).items():
            acc[r] = acc.get(r, Fraction(0)) + v * c
    return OrbitSumPoly(p.variant, acc)


@lru_cache(maxsize=None)
def _derive_class_cached(key: tuple, n: int) -> tuple:
    cls = IsoClass(key)
    rep = cls.representative(n)
    om = orbit_size(cls, n)
    tally: dict = {}
    for (i, j), w in rep.weights.items():
        reduced = dict(rep.weights)
        if w == 1:
            del reduced[(i, j)]
        else:
            reduced[(i, j)] = w - 1
        r = canonical_form(Multigraph(n, reduced))
        tally[r] = tally.get(r, 0) + w
    out = []
    for r, wsum in tally.items():
        num = om * wsum
        orc = orbit_size(r, n)
        assert num % orc == 0, "derivation coefficient must be integral"
        out.append((r, num // orc))
    return tuple(out)


def _derive_class(cls: IsoClass, n: int) -> dict:
    return dict(_derive_class_cached(cls.key, n))


# ---------------------------------------------------------------------------
# Evaluation at weighted graphs.


def evaluate(p: OrbitSumPoly, g) -> Fraction:
    """Substitute g's edge weights into the monomial expansion of p."""
    if isinstance(g, Multigraph):
        g = WeightedGraph.from_multigraph(g)
    if g.n != p.variant.n:
        raise InvalidInputError(f"ambient mismatch: polynomial on {p.variant.n}, graph on {g.n}")
    gvec = [g.weight(i, j) for i, j in pair_list(g.n)]
    total = Fraction(0)
    for cls, coeff in p._terms.items():
        esum = Fraction(0)
        for vec in orbit_vectors(cls, g.n):
            prod = Fraction(1)
            for k, w in enumerate(vec):
                if w:
                    base = gvec[k]
                    if base == 0:
                        prod = Fraction(0)
                        break
                    prod *= base ** w
            esum += prod
        total += coeff * esum
    return total


# ---------------------------------------------------------------------------
# Named invariants.


def power_sum(k: int, variant: AlgebraVariant) -> OrbitSumPoly:
    """p_k = sum of x_{ij}^k, the orbit sum of a single weight-k edge."""
    if k < 1:
        raise InvalidInputError("power sum index must be >= 1")
    return orbit_sum(Multigraph(variant.n, {(1, 2): k}), variant)


def vertex_power_sum(d: int, variant: AlgebraVariant) -> OrbitSumPoly:
    """E_d = sum over vertices i of (row sum of x at i)^d.

    Expanded by the multinomial theorem on one labeled star and symmetrized:
    a star class with edge-weight partition lam contributes
    hubs(lam) * d! / prod(lam_i!), where hubs is 2 for a single edge
    (both endpoints see the whole star) and 1 otherwise.
    """
    if d < 1:
        raise InvalidInputError("vertex power sum index must be >= 1")
    n = variant.n
    acc: dict = {}
    for lam in _partitions_max_parts(d, n - 1):
        hubs = 2 if len(lam) == 1 else 1
        coeff = math.factorial(d)
        for part in lam:
            coeff //= math.factorial(part)
        star = Multigraph(n, {(1, t + 2): w for t, w in enumerate(lam)})
        cls = canonical_form(star)
        if not variant.admits(cls):
            continue
        acc[cls] = acc.get(cls, Fraction(0)) + hubs * coeff
    return OrbitSumPoly(variant, acc)


def named_invariant(kind: str, index: int, variant: AlgebraVariant) -> OrbitSumPoly:
    if kind == "p":
        return power_sum(index, variant)
    if kind == "E":
        return vertex_power_sum(index, variant)
    raise InvalidInputError(f"unknown named invariant {kind!r}")


def _partitions_max_parts(d: int, max_parts: int):
    def rec(remaining, max_part, parts):
        if remaining == 0:
            yield tuple(parts)
            return
        if len(parts) == max_parts:
            return
        for nxt in range(min(remaining, max_part), 0, -1):
            parts.append(nxt)
            yield from rec(remaining - nxt, nxt, parts)
            parts.pop()

    yield from rec(d, d, [])


# ---------------------------------------------------------------------------
# Text serialization: one `coeff * key` line per term.


def format_poly(p: OrbitSumPoly) -> str:
    lines = [f"{v} * {c.text}" for c, v in p.items()]
    return "\n".join(lines)


def parse_poly(text: str, variant: AlgebraVariant) -> OrbitSumPoly:
    terms = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if "*" not in line:
            raise InvalidInputError(f"bad polynomial line {line!r}")
        coeff_s, key_s = line.split("*", 1)
        coeff = Fraction(coeff_s.strip())
        cls = canonical_form(parse_multigraph(key_s.strip()))
        terms[cls] = terms.get(cls, Fraction(0)) + coeff
    return OrbitSumPoly(variant, terms)
