"""Algebraic reconstructibility: spanning sets, certificates, tree matrices.

The reconstructible subalgebra is generated by orbit sums of graphs having
at least one isolated vertex inside the ambient vertex set.  Its graded
piece of degree d is spanned by expanded products of connected pieces on
2..n-1 vertices with total weight d; membership of a class is decided by
exact linear algebra over that family and every positive answer ships a
machine-verified certificate.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product as iproduct

import numpy as np

from .errors import BudgetExceededError, InvalidInputError
from . import counting
from .graphs import (
    IsoClass,
    Multigraph,
    canonical_form,
    complement,
    deck,
    enumerate_classes,
    pad,
    scale,
    unlabeled_forests,
    unlabeled_trees,
)
from .linalg import (
    SparseExactMatrix,
    SolveInfo,
    default_primes,
    rank as matrix_rank,
    solve_in_span,
)
from .orbitalg import AlgebraVariant, OrbitSumPoly, expand_pair

EMPTY_CLASS = IsoClass((0, ()))

MEMBERSHIP_MAX_N = {"full": 6, "simple": 6, "forest": 8}
UNLABELED_MATRIX_MAX_N = 14
LABELED_MATRIX_MAX_N = 8
GENERATORS_MAX_N = 6


# ---------------------------------------------------------------------------
# Connected pieces and spanning products.


def piece_pool(n: int, dmax: int, kind: str) -> dict:
    """Connected pieces on 2..n-1 vertices, grouped by edge weight."""
    pool: dict = {}
    for d in range(1, dmax + 1):
        if kind == "forest":
            pieces = list(unlabeled_trees(d + 1)) if d + 1 <= n - 1 else []
        elif kind == "simple":
            pieces = [c for c in enumerate_classes(n - 1, d, "connected_simple")]
        else:
            pieces = [c for c in enumerate_classes(n - 1, d, "connected_multigraph")]
        pool[d] = sorted(pieces, key=lambda c: c.key)
    return pool


def spanning_multisets(n: int, d: int, kind: str) -> list:
    """All multisets of connected pieces on 2..n-1 vertices with total weight d.

    These index the products spanning the degree-d piece of the
    reconstructible subalgebra; their number equals the f-count bound.
    """
    if d == 0:
        return [()]
    pool = piece_pool(n, d, kind)
    out = []

    def rec(remaining, max_deg, chosen):
        if remaining == 0:
            out.append(tuple(chosen))
            return
        for deg in range(min(remaining, max_deg), 0, -1):
            pieces = pool.get(deg, ())
            if not pieces:
                continue
            for k in range(1, remaining // deg + 1):
                for combo in _multisets(pieces, k):
                    rec(remaining - k * deg, deg - 1, chosen + list(combo))

    rec(d, d, [])
    out.sort(key=lambda ms: (len(ms), tuple(c.key for c in ms)))
    return out


def _multisets(items, k):
    from itertools import combinations_with_replacement

    return combinations_with_replacement(items, k)


_MULTISET_EXPANSION: dict = {}


def expand_piece_multiset(pieces: tuple, n: int, kind: str) -> dict:
    """Integer expansion of the product of the pieces' orbit sums.

    pieces are normalized to ascending (degree, key) order so that shared
    prefixes are computed once across a whole spanning family.
    """
    pieces = tuple(sorted(pieces, key=lambda c: (c.n_edges, c.key)))
    if not pieces:
        return {EMPTY_CLASS: 1}
    ck = (tuple(c.key for c in pieces), n, kind)
    hit = _MULTISET_EXPANSION.get(ck)
    if hit is not None:
        return hit
    prefix = expand_piece_multiset(pieces[:-1], n, kind)
    last = pieces[-1]
    out: dict = {}
    for cls, coeff in prefix.items():
        for r, c in expand_pair(cls, last, n, kind).items():
            out[r] = out.get(r, 0) + coeff * c
    _MULTISET_EXPANSION[ck] = out
    return out


def rec_spanning_set(n: int, d: int, variant: AlgebraVariant) -> list:
    """Expanded spanning products of the degree-d reconstructible piece."""
    if variant.n != n:
        raise InvalidInputError("variant ambient must match n")
    polys = []
    for ms in spanning_multisets(n, d, variant.kind):
        polys.append(OrbitSumPoly(variant, {c: Fraction(v) for c, v in expand_piece_multiset(ms, n, variant.kind).items()}))
    return polys


# ---------------------------------------------------------------------------
# Membership certificates.


@dataclass(frozen=True)
class MembershipCertificate:
    """Exact combination of spanning products equal to the target orbit sum."""

    target: IsoClass
    n: int
    variant_kind: str
    combination: tuple  # ((piece IsoClass, ...), Fraction) pairs
    verified: bool
    note: str = ""

    def expansion(self) -> dict:
        acc: dict = {}
        for pieces, coeff in self.combination:
            for cls, v in expand_piece_multiset(tuple(pieces), self.n, self.variant_kind).items():
                acc[cls] = acc.get(cls, Fraction(0)) + coeff * v
        return {c: v for c, v in acc.items() if v}


def _verify_certificate_combination(target: IsoClass, n: int, kind: str, combination) -> bool:
    acc: dict = {}
    for pieces, coeff in combination:
        for cls, v in expand_piece_multiset(tuple(pieces), n, kind).items():
            acc[cls] = acc.get(cls, Fraction(0)) + Fraction(coeff) * v
    acc = {c: v for c, v in acc.items() if v}
    return acc == {target: Fraction(1)}


def _zlam(lam) -> int:
    z = 1
    mult: dict = {}
    for part in lam:
        mult[part] = mult.get(part, 0) + 1
    for length, m in mult.items():
        z *= length ** m * math.factorial(m)
    return z


def _is_uniform_complement_of_scaled_edge(cls: IsoClass, n: int):
    """Detect weights equal to d on every ambient pair except exactly one."""
    if cls.n_vertices != n or n < 3:
        return None
    entries = cls.key[1]
    if len(entries) != math.comb(n, 2) - 1:
        return None
    levels = {w for _, _, w in entries}
    if len(levels) != 1:
        return None
    return levels.pop()


def _newton_complement_certificate(cls: IsoClass, n: int, d: int) -> MembershipCertificate:
    """Certificate for the level-d complete graph minus one level-d edge.

    The orbit monomials of the weight-d edge multiply to the uniform
    level-d complete monomial, so the elementary symmetric polynomial of
    degree C(n,2)-1 in them equals the target orbit sum; Newton's
    identities expand it over power sums, i.e. over single scaled edges.
    """
    ell = math.comb(n, 2)
    j = ell - 1
    combo = []
    for lam in counting.partitions(j):
        coeff = Fraction((-1) ** (j - len(lam)), _zlam(lam))
        pieces = tuple(
            sorted(
                (canonical_form(Multigraph(2, {(1, 2): d * part})) for part in lam),
                key=lambda c: (c.n_edges, c.key),
            )
        )
        combo.append((pieces, coeff))
    ok = _verify_certificate_combination(cls, n, "full", combo)
    assert ok, "scaled-complement certificate failed exact re-expansion"
    return MembershipCertificate(cls, n, "full", tuple(combo), True, "power-sum identity for the scaled complement of an edge")


class _Echelon:
    """Incremental row echelon mod p with per-pivot provenance."""

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.rows: list = []
        self.cols: list = []
        self.sources: list = []

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        p = self.p
        for row, c in zip(self.rows, self.cols):
            coeff = int(vec[c])
            if coeff:
                vec = (vec - coeff * row) % p
        return vec

    def add(self, vec: np.ndarray, source) -> bool:
        vec = self.reduce(vec % self.p)
        nz = np.nonzero(vec)[0]
        if nz.size == 0:
            return False
        lead = int(nz[0])
        inv = pow(int(vec[lead]), self.p - 2, self.p)
        self.rows.append((vec * inv) % self.p)
        self.cols.append(lead)
        self.sources.append(source)
        return True


def _vector_mod_p(expansion: dict, col_index: dict, ncols: int, p: int) -> np.ndarray:
    vec = np.zeros(ncols, dtype=np.int64)
    for cls, v in expansion.items():
        j = col_index.setdefault(cls, len(col_index))
        if j >= ncols:
            raise InvalidInputError("class-count bound for the graded piece was too small")
        vec[j] = v % p
    return vec


def _degree_class_bound(n: int, d: int, kind: str) -> int:
    if d == 0:
        return 1
    if kind == "full":
        return counting.hilbert_series(n, d, "full")[d]
    return counting.hilbert_series(n, d, "simple")[d]


def batch_membership(targets, n: int, kind: str, mode: str = "modular", primes=None):
    """Decide membership for same-degree targets over one spanning family.

    Products are fed into an incremental echelon in a deterministic
    cheap-first order; each target is reduced alongside and is solved
    exactly (over the pivot products only) as soon as it falls into the
    span.  Returns {target: (certificate or None, SolveInfo)}.
    """
    targets = list(targets)
    if not targets:
        return {}
    degrees = {t.n_edges for t in targets}
    if len(degrees) != 1:
        raise InvalidInputError("batch_membership needs targets of one degree")
    d = degrees.pop()
    if n > MEMBERSHIP_MAX_N[kind]:
        raise BudgetExceededError("membership", f"n <= {MEMBERSHIP_MAX_N[kind]} for {kind}", str(n))
    primes = tuple(primes) if primes else default_primes(2)
    out = {}
    pending = []
    variant = AlgebraVariant(kind, n)
    for t in targets:
        if t == EMPTY_CLASS:
            combo = (((), Fraction(1)),)
            out[t] = (MembershipCertificate(t, n, kind, combo, True, "empty product"), SolveInfo("trivial", (), True))
            continue
        if not variant.admits(t):
            # The orbit sum is the zero element of the quotient algebra.
            out[t] = (
                MembershipCertificate(t, n, kind, (), True, "orbit sum vanishes in the quotient"),
                SolveInfo("trivial", (), True),
            )
            continue
        uniform = _is_uniform_complement_of_scaled_edge(t, n)
        if kind == "full" and uniform is not None and t.n_edges == uniform * (math.comb(n, 2) - 1):
            cert = _newton_complement_certificate(t, n, uniform)
            out[t] = (cert, SolveInfo("structured", (), True, cert.note))
            continue
        pending.append(t)
    if not pending:
        return out

    multisets = spanning_multisets(n, d, kind)
    ncols = max(_degree_class_bound(n, d, kind), 1)
    col_index: dict = {}
    remaining = dict.fromkeys(pending)

    for attempt, p in enumerate(primes):
        ech = _Echelon(ncols, p)
        reduced = {}
        for t in remaining:
            vec = _vector_mod_p({t: 1}, col_index, ncols, p)
            reduced[t] = ech.reduce(vec)
        solved_now = [t for t, v in reduced.items() if not v.any()]
        for ms in multisets:
            expansion = expand_piece_multiset(ms, n, kind)
            vec = _vector_mod_p(expansion, col_index, ncols, p)
            if not ech.add(vec, ms):
                continue
            row, c = ech.rows[-1], ech.cols[-1]
            for t in list(reduced):
                coeff = int(reduced[t][c])
                if coeff:
                    reduced[t] = (reduced[t] - coeff * row) % p
                if not reduced[t].any():
                    solved_now.append(t)
                    del reduced[t]
            if not reduced:
                break
        for t in solved_now:
            cert, info = _extract_certificate(t, n, kind, ech.sources, primes)
            if cert is not None:
                out[t] = (cert, info)
                remaining.pop(t, None)
        if not remaining:
            break
        if attempt == len(primes) - 1:
            for t in remaining:
                out[t] = (None, SolveInfo("modular", primes, False, f"outside span modulo all of {list(primes)}"))
    return out


def _extract_certificate(target: IsoClass, n: int, kind: str, sources, primes):
    vectors = []
    for ms in sources:
        exp = expand_piece_multiset(ms, n, kind)
        vectors.append({c.key: Fraction(v) for c, v in exp.items()})
    coeffs, info = solve_in_span(vectors, {target.key: Fraction(1)}, mode="modular", primes=primes)
    if coeffs is None:
        return None, info
    combo = tuple((tuple(ms), c) for ms, c in zip(sources, coeffs) if c)
    ok = _verify_certificate_combination(target, n, kind, combo)
    if not ok:
        return None, SolveInfo(info.mode, info.primes, False, "exact re-expansion failed")
    return MembershipCertificate(target, n, kind, combo, True, info.note), info


def membership(m: Multigraph, n: int, variant_kind: str = "full", mode: str = "modular", primes=None):
    """(certificate or None, SolveInfo) for one multigraph."""
    cls = canonical_form(m)
    if cls.n_vertices > n:
        raise InvalidInputError(f"support {cls.n_vertices} exceeds ambient {n}")
    res = batch_membership([cls], n, variant_kind, mode, primes)
    return res[cls]


def is_alg_reconstructible(m: Multigraph, n: int, variant_kind: str = "full", primes=None):
    """MembershipCertificate when the orbit sum lies in the reconstructible
    subalgebra, else None."""
    cert, _ = membership(m, n, variant_kind, primes=primes)
    return cert


# -- certificate text format --------------------------------------------------


def format_certificate(cert: MembershipCertificate) -> str:
    lines = [f"target {cert.target.text} n {cert.n} variant {cert.variant_kind}"]
    for pieces, coeff in cert.combination:
        body = " | ".join(p.text for p in pieces) if pieces else "1"
        lines.append(f"{coeff} : {body}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str):
    from .graphs import parse_multigraph

    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("target "):
        raise InvalidInputError("certificate must start with a target line")
    head = lines[0].split()
    if len(head) < 5 or head[-4] != "n" or head[-2] != "variant":
        raise InvalidInputError(f"bad certificate header {lines[0]!r}")
    kind = head[-1]
    n = int(head[-3])
    target_text = " ".join(head[1:-4])
    target = canonical_form(parse_multigraph(target_text))
    combo = []
    for ln in lines[1:]:
        if ":" not in ln:
            raise InvalidInputError(f"bad certificate line {ln!r}")
        coeff_s, body = ln.split(":", 1)
        coeff = Fraction(coeff_s.strip())
        body = body.strip()
        if body == "1":
            pieces = ()
        else:
            pieces = tuple(canonical_form(parse_multigraph(chunk.strip())) for chunk in body.split("|"))
        combo.append((pieces, coeff))
    return target, n, kind, tuple(combo)


def verify_certificate_text(text: str) -> bool:
    """Re-expand a serialized certificate and check it, trusting nothing."""
    target, n, kind, combo = parse_certificate(text)
    return _verify_certificate_combination(target, n, kind, combo)


# ---------------------------------------------------------------------------
# Minimal generators.


@dataclass(frozen=True)
class GeneratorReport:
    n: int
    dmax: int
    per_degree: tuple  # (degree, dim, decomposable_rank, new_generators)
    beta: int
    total: int
    generators: tuple  # (degree, class text) in adjunction order

    def new_at(self, d: int) -> int:
        for deg, _, _, new in self.per_degree:
            if deg == d:
                return new
        raise InvalidInputError(f"degree {d} not in report")


def minimal_generator_counts(n: int, dmax: int, primes=None, checkpoint_dir: str | None = None) -> GeneratorReport:
    """Degree-by-degree count of indecomposable generators of the invariant ring.

    At degree d the decomposable span is generated by the pairwise products
    of full lower graded pieces (every lower piece is already spanned by
    generators found so far, so nothing else is needed).  New generators are
    basis classes greedily adjoined in canonical key order.
    """
    if n > GENERATORS_MAX_N:
        raise BudgetExceededError("generators", f"n <= {GENERATORS_MAX_N}", str(n))
    primes = tuple(primes) if primes else default_primes(3)
    basis = {d: enumerate_classes(n, d, "multigraph") for d in range(1, dmax + 1)}
    hs = counting.hilbert_series(n, dmax, "full")
    for d in range(1, dmax + 1):
        assert len(basis[d]) == hs[d], "enumeration disagrees with the cycle index"
    per_degree = []
    generators = []
    done = {}
    if checkpoint_dir:
        done = _load_checkpoints(checkpoint_dir, n)
    for d in range(1, dmax + 1):
        if d in done:
            dim, rnk, new, chosen = done[d]
        else:
            dim = hs[d]
            rows = []
            for a in range(1, d // 2 + 1):
                for ca in basis[a]:
                    for cb in basis[d - a]:
                        rows.append(expand_pair(ca, cb, n, "full"))
            col_index = {cls: j for j, cls in enumerate(basis[d])}
            ranks = []
            chosen = None
            for p in primes:
                ech = _Echelon(dim, p)
                for k, row in enumerate(rows):
                    vec = np.zeros(dim, dtype=np.int64)
                    for cls, v in row.items():
                        vec[col_index[cls]] = v % p
                    ech.add(vec, k)
                ranks.append(len(ech.rows))
                if chosen is None:
                    chosen_list = []
                    for cls in basis[d]:
                        vec = np.zeros(dim, dtype=np.int64)
                        vec[col_index[cls]] = 1
                        if ech.add(vec, None):
                            chosen_list.append(cls.text)
                    chosen = chosen_list
            if len(set(ranks)) != 1:
                raise InvalidInputError(f"modular ranks disagree at degree {d}: {ranks}; rerun with more primes")
            rnk = ranks[0]
            new = dim - rnk
            assert new == len(chosen), "greedy completion disagrees with the rank"
            if checkpoint_dir:
                _write_checkpoint(checkpoint_dir, n, d, dim, rnk, new, chosen)
        per_degree.append((d, dim, rnk, new))
        generators.extend((d, text) for text in chosen)
    beta = max((d for d, _, _, new in per_degree if new > 0), default=0)
    total = sum(new for _, _, _, new in per_degree)
    return GeneratorReport(n, dmax, tuple(per_degree), beta, total, tuple(generators))


def _checkpoint_path(checkpoint_dir, n, d):
    return os.path.join(checkpoint_dir, f"generators-n{n}-d{d}.json")


def _load_checkpoints(checkpoint_dir, n):
    done = {}
    if not os.path.isdir(checkpoint_dir):
        return done
    for name in os.listdir(checkpoint_dir):
        if not name.startswith(f"generators-n{n}-d") or not name.endswith(".json"):
            continue
        try:
            with open(os.path.join(checkpoint_dir, name)) as fh:
                data = json.load(fh)
            done[data["degree"]] = (data["dim"], data["rank"], data["new"], data["chosen"])
        except (OSError, ValueError, KeyError):
            continue
    return done


def _write_checkpoint(checkpoint_dir, n, d, dim, rnk, new, chosen):
    os.makedirs(checkpoint_dir, exist_ok=True)
    path = _checkpoint_path(checkpoint_dir, n, d)
    with open(path, "w") as fh:
        json.dump({"degree": d, "dim": dim, "rank": rnk, "new": new, "chosen": chosen}, fh)


# ---------------------------------------------------------------------------
# Incidence matrices of forests against trees.


def _labeled_trees_on(verts: tuple) -> list:
    """All labeled trees on the given vertex set, via Pruefer sequences."""
    import heapq

    verts = tuple(sorted(verts))
    k = len(verts)
    if k == 0:
        return []
    if k == 1:
        return [frozenset()]
    if k == 2:
        return [frozenset([verts])]
    out = []
    for seq in iproduct(verts, repeat=k - 2):
        deg = {v: 1 for v in verts}
        for v in seq:
            deg[v] += 1
        leaves = [v for v in verts if deg[v] == 1]
        heapq.heapify(leaves)
        edges = []
        for v in seq:
            leaf = heapq.heappop(leaves)
            edges.append((leaf, v) if leaf < v else (v, leaf))
            deg[v] -= 1
            if deg[v] == 1:
                heapq.heappush(leaves, v)
        u, v = sorted(leaves)
        edges.append((u, v))
        out.append(frozenset(edges))
    return out


def _labeled_two_component_forests(n: int) -> list:
    """Labeled forests on {1..n} with n-2 edges (exactly two tree components)."""
    verts = tuple(range(1, n + 1))
    rest = verts[1:]
    seen = {}
    order = []
    for ss in range(0, n - 1):
        for extra in combinations(rest, ss):
            part1 = (1,) + extra
            part2 = tuple(v for v in rest if v not in extra)
            for t1 in _labeled_trees_on(part1):
                for t2 in _labeled_trees_on(part2):
                    f = t1 | t2
                    if f not in seen:
                        seen[f] = True
                        order.append(f)
    return order


def _edge_set_label(edges) -> str:
    return ";".join(f"{i}-{j}" for i, j in sorted(edges)) or "empty"


def tree_incidence_matrix(n: int, labeled: bool = False) -> SparseExactMatrix:
    """Matrix of edge deletions from trees on n vertices into (n-2)-edge forests.

    Rows are forests, columns are trees; the (f, g) entry counts edges of g
    whose deletion yields f.  Labeled mode works on {1..n} (0/1 entries);
    unlabeled mode works on isomorphism classes.
    """
    if n < 3:
        raise InvalidInputError("need n >= 3")
    if labeled:
        if n > LABELED_MATRIX_MAX_N:
            raise BudgetExceededError("tree_incidence_matrix", f"n <= {LABELED_MATRIX_MAX_N} labeled", str(n))
        trees = _labeled_trees_on(tuple(range(1, n + 1)))
        forests = _labeled_two_component_forests(n)
        ridx = {f: i for i, f in enumerate(forests)}
        entries: dict = {}
        for j, t in enumerate(trees):
            for e in t:
                f = t - {e}
                entries[(ridx[f], j)] = Fraction(1)
        mat = SparseExactMatrix(
            tuple(_edge_set_label(f) for f in forests),
            tuple(_edge_set_label(t) for t in trees),
            entries,
        )
    else:
        if n > UNLABELED_MATRIX_MAX_N:
            raise BudgetExceededError("tree_incidence_matrix", f"n <= {UNLABELED_MATRIX_MAX_N} unlabeled", str(n))
        trees = unlabeled_trees(n)
        forests = unlabeled_forests(n - 2, n)
        ridx = {f.key: i for i, f in enumerate(forests)}
        entries = {}
        for j, t in enumerate(trees):
            rep = t.representative(n)
            for pq in list(rep.weights):
                w = rep.weights
                del w[pq]
                f = canonical_form(Multigraph(n, w))
                i = ridx[f.key]
                entries[(i, j)] = entries.get((i, j), Fraction(0)) + 1
        mat = SparseExactMatrix(tuple(f.text for f in forests), tuple(t.text for t in trees), entries)
    _check_column_sums(mat, n - 1)
    return mat


def _check_column_sums(mat: SparseExactMatrix, expected: int):
    sums = [Fraction(0)] * len(mat.col_labels)
    for (_, j), v in mat.entries.items():
        sums[j] += v
    if any(s != expected for s in sums):
        raise AssertionError("every tree column must sum to n-1 across deletions")


@dataclass(frozen=True)
class ConjectureResult:
    n: int
    method: str
    holds: bool
    data: dict


def check_tree_conjecture(n: int, method: str = "rank", primes=None) -> ConjectureResult:
    """Test that all trees on n vertices are algebraically reconstructible.

    rank method: full row rank of the unlabeled deletion matrix (a full
    modular rank is an exact certificate).  membership method: a verified
    certificate for every tree, over the forest-algebra spanning family.
    """
    if method == "rank":
        mat = tree_incidence_matrix(n, labeled=False)
        res = matrix_rank(mat, "modular", primes or default_primes(2))
        holds = res.rank == len(mat.row_labels)
        data = {
            "rows": len(mat.row_labels),
            "cols": len(mat.col_labels),
            "rank": res.rank,
            "primes": list(res.primes),
            "exact": res.exact,
            "note": res.note,
        }
        return ConjectureResult(n, "rank", holds, data)
    if method != "membership":
        raise InvalidInputError(f"unknown method {method!r}")
    if n > 7:
        raise BudgetExceededError("check_tree_conjecture", "n <= 7 for membership", str(n))
    trees = unlabeled_trees(n)
    results = batch_membership(list(trees), n, "forest", primes=primes)
    certified = sum(1 for cert, _ in results.values() if cert is not None and cert.verified)
    holds = certified == len(trees)
    return ConjectureResult(n, "membership", holds, {"trees": len(trees), "certified": certified})


def pendant_submatrix_rank(n: int, primes=None):
    """Rank of the rows whose forest is a single tree on n-1 vertices."""
    mat = tree_incidence_matrix(n, labeled=False)
    forests = unlabeled_forests(n - 2, n)
    keep = [i for i, f in enumerate(forests) if f.n_vertices == n - 1]
    remap = {i: k for k, i in enumerate(keep)}
    entries = {(remap[i], j): v for (i, j), v in mat.entries.items() if i in remap}
    sub = SparseExactMatrix(tuple(mat.row_labels[i] for i in keep), mat.col_labels, entries)
    res = matrix_rank(sub, "modular", primes or default_primes(2))
    return res.rank, res.rank == len(keep), res


# ---------------------------------------------------------------------------
# Dimension reports.


@dataclass(frozen=True)
class DimsReport:
    n: int
    d: int
    variant: str
    dim_inv: int
    f_bound: int
    dim_rec_exact: int | None
    strict: bool


def dims_report(n: int, d: int, variant: str = "full", exact: bool = False, primes=None) -> DimsReport:
    """Dimension of the degree-d invariants vs the reconstructible bound."""
    if variant not in ("full", "simple"):
        raise InvalidInputError("dims variant is full or simple")
    dim_inv = counting.hilbert_series(n, d, variant)[d]
    f_bound = counting.f_counts(n, d, variant)[d]
    dim_rec = None
    if exact:
        if n > MEMBERSHIP_MAX_N[variant]:
            raise BudgetExceededError("dims --exact", f"n <= {MEMBERSHIP_MAX_N[variant]}", str(n))
        multisets = spanning_multisets(n, d, variant)
        col_index: dict = {}
        ncols = max(_degree_class_bound(n, d, variant), 1)
        primes = tuple(primes) if primes else default_primes(2)
        ranks = []
        for p in primes:
            ech = _Echelon(ncols, p)
            for ms in multisets:
                vec = _vector_mod_p(expand_piece_multiset(ms, n, variant), col_index, ncols, p)
                ech.add(vec, None)
            ranks.append(len(ech.rows))
        dim_rec = max(ranks)
        # The rank is bounded by both the spanning-family size and the
        # ambient graded dimension; f_bound vs dim_inv is unordered in
        # general (that comparison is the whole point of the report).
        assert dim_rec <= f_bound and dim_rec <= dim_inv
    return DimsReport(n, d, variant, dim_inv, f_bound, dim_rec, f_bound < dim_inv)


# ---------------------------------------------------------------------------
# Closure audit: scaling and complement stability of certified classes.


@dataclass(frozen=True)
class ClosureAuditReport:
    n: int
    dmax: int
    certified: tuple  # class texts certified at degree <= dmax
    uncertified: tuple
    scale_checked: int
    complement_checked: int
    violations: tuple  # (kind, source text, target text)


def closure_audit(n: int, dmax: int, primes=None) -> ClosureAuditReport:
    """For every certified class at degree <= dmax, certify 2m and its complement."""
    if n > 4 or dmax > 4:
        raise BudgetExceededError("closure_audit", "n <= 4 and dmax <= 4", f"n={n}, dmax={dmax}")
    by_degree: dict = {}
    all_classes = []
    for d in range(0, dmax + 1):
        for cls in enumerate_classes(n, d, "multigraph"):
            all_classes.append(cls)
            by_degree.setdefault(d, []).append(cls)
    certified = {}
    for d, classes in sorted(by_degree.items()):
        res = batch_membership(classes, n, "full", primes=primes)
        for cls, (cert, _) in res.items():
            if cert is not None:
                certified[cls] = cert
    targets_by_degree: dict = {}
    wanted = []  # (kind, source, target)
    for cls in certified:
        rep = cls.representative(n)
        doubled = canonical_form(scale(rep, 2))
        comp = canonical_form(complement(pad(rep, n)))
        wanted.append(("scale", cls, doubled))
        wanted.append(("complement", cls, comp))
        targets_by_degree.setdefault(doubled.n_edges, set()).add(doubled)
        targets_by_degree.setdefault(comp.n_edges, set()).add(comp)
    resolved = {}
    for d, targets in sorted(targets_by_degree.items()):
        res = batch_membership(sorted(targets, key=lambda c: c.key), n, "full", primes=primes)
        for cls, (cert, _) in res.items():
            resolved[cls] = cert
    violations = []
    scale_checked = complement_checked = 0
    for kind, source, target in wanted:
        cert = resolved.get(target)
        if kind == "scale":
            scale_checked += 1
        else:
            complement_checked += 1
        if cert is None or not cert.verified:
            violations.append((kind, source.text, target.text))
    uncertified = tuple(c.text for c in all_classes if c not in certified)
    return ClosureAuditReport(
        n,
        dmax,
        tuple(sorted(c.text for c in certified)),
        uncertified,
        scale_checked,
        complement_checked,
        tuple(violations),
    )


# ---------------------------------------------------------------------------
# Transpose relation between multiplication by p_1 and the deletion matrix.


def transpose_relation_check(n: int):
    """Entrywise identity between the p_1-multiplication matrix and the
    transpose of the unlabeled deletion matrix.

    With orbit sums normalized as sums over distinct labeled graphs, the
    coefficient of a tree g in <f>*p_1 counts, per labeled representative
    of g, the pairs (labeled copy of f, added edge) producing it; the same
    double count divided by the orbit of g gives the deletion entry, so
    the diagonal normalization factors are identically 1.
    """
    mat = tree_incidence_matrix(n, labeled=False)
    forests = unlabeled_forests(n - 2, n)
    trees = unlabeled_trees(n)
    tindex = {t: j for j, t in enumerate(trees)}
    edge_cls = canonical_form(Multigraph(2, {(1, 2): 1}))
    mismatches = []
    mult_entries: dict = {}
    for i, f in enumerate(forests):
        row = expand_pair(f, edge_cls, n, "forest")
        for g, coeff in row.items():
            if g not in tindex:
                raise AssertionError("degree n-1 forest piece must be spanned by trees on n vertices")
            mult_entries[(tindex[g], i)] = coeff
            if Fraction(coeff) != mat.entries.get((i, tindex[g]), Fraction(0)):
                mismatches.append((f.text, g.text, coeff, mat.entries.get((i, tindex[g]))))
    for (i, j), v in mat.entries.items():
        if mult_entries.get((j, i), 0) != v:
            mismatches.append((forests[i].text, trees[j].text, mult_entries.get((j, i), 0), v))
    return {
        "n": n,
        "rows": len(forests),
        "cols": len(trees),
        "entries": len(mat.entries),
        "diagonal_factors": "all 1",
        "mismatches": mismatches,
        "holds": not mismatches,
    }


# ---------------------------------------------------------------------------
# Octopus recognizers and the hypomorphy search harness.


def _class_adjacency(cls: IsoClass):
    adj: dict = {}
    for i, j, _ in cls.key[1]:
        adj.setdefault(i, set()).add(j)
        adj.setdefault(j, set()).add(i)
    return adj


def is_octopus(cls: IsoClass) -> bool:
    """Tree consisting of paths sharing one root: at most one vertex of degree >= 3."""
    if not cls.is_forest() or cls.n_vertices == 0:
        return False
    adj = _class_adjacency(cls)
    if len(adj) != cls.n_vertices or len(cls.key[1]) != cls.n_vertices - 1:
        return False
    return sum(1 for nb in adj.values() if len(nb) >= 3) <= 1


def is_stared_octopus(cls: IsoClass) -> bool:
    """Octopus with stars (diameter-2 trees) attached at the root by their centers."""
    if not cls.is_forest() or cls.n_vertices == 0:
        return False
    adj = _class_adjacency(cls)
    if len(adj) != cls.n_vertices or len(cls.key[1]) != cls.n_vertices - 1:
        return False
    verts = sorted(adj)
    for head in verts:
        if _is_stared_octopus_with_head(adj, verts, head):
            return True
    return False


def _is_stared_octopus_with_head(adj, verts, head) -> bool:
    seen = {head}
    for a in sorted(adj[head]):
        if a in seen:
            continue
        comp = []
        stack = [a]
        seen.add(a)
        while stack:
            x = stack.pop()
            comp.append(x)
            for u in adj[x]:
                if u != head and u not in seen:
                    seen.add(u)
                    stack.append(u)
        degs = {v: sum(1 for u in adj[v] if u != head) for v in comp}
        is_path_at_end = all(dv <= 2 for dv in degs.values()) and degs[a] <= 1
        is_star_at_center = all(u == a or adj[u] - {head} <= {a} for u in comp) and all(
            (v == a) or (a in adj[v]) for v in comp
        )
        if not (is_path_at_end or is_star_at_center):
            return False
    return len(seen) == len(verts)


def hypomorphic_class_pairs(n: int, wmax: int):
    """Exhaustive search for non-isomorphic classes on n labeled vertices
    with weights <= wmax sharing the same deck."""
    from .graphs import pair_list

    pl = pair_list(n)
    reps: dict = {}
    for vec in iproduct(range(wmax + 1), repeat=len(pl)):
        m = Multigraph(n, {pl[k]: v for k, v in enumerate(vec) if v})
        cls = canonical_form(m)
        if cls not in reps:
            reps[cls] = m
    decks = {cls: deck(m) for cls, m in reps.items()}
    pairs = []
    classes = sorted(reps, key=lambda c: c.key)
    for idx, c1 in enumerate(classes):
        for c2 in classes[idx + 1 :]:
            if c1.n_edges == c2.n_edges and decks[c1] == decks[c2]:
                pairs.append((c1, c2))
    return pairs, len(classes)
