"""Exact sparse linear algebra over the rationals and prime fields.

Matrices carry row and column labels so that rank and membership answers
can be traced back to graph classes.  Rational ranks come from
integer-preserving sparse elimination with Markowitz pivoting; modular
ranks are lower bounds on the rational rank (exact whenever they are
full, since a nonzero minor mod p is nonzero over the rationals).
Solutions found modularly are lifted by CRT plus rational reconstruction
and are only ever returned after exact rational verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError

# Deterministic prime pools.  The small pool fits vectorized int64
# elimination ((p-1)^2 < 2^63); the large pool exercises the portable
# big-prime path.
PRIMES_SMALL = (
    1190680993, 1199523217, 1260758143, 1268497799, 1300388263, 1422772411,
    1484629987, 1487744227, 1524064457, 1576586399, 1629748969, 1816194899,
)
PRIMES_LARGE = (
    2576748896894610353, 2640937097975144923, 2730571137101081711,
    2809229503030610599, 2890551968083752191, 3044417680050870479,
    3808987080420433759, 3917832303210128533,
)

_NUMPY_PRIME_LIMIT = 1 << 31
_NUMPY_DENSE_LIMIT = 6_000_000  # rows*cols above this stays in sparse dicts


def default_primes(count: int = 2) -> tuple:
    if count < 1:
        raise InvalidInputError("need at least one prime")
    pool = PRIMES_SMALL + PRIMES_LARGE
    if count > len(pool):
        raise InvalidInputError(f"prime pool holds {len(pool)} primes")
    return PRIMES_SMALL[:count] if count <= len(PRIMES_SMALL) else pool[:count]


@dataclass(frozen=True)
class SparseExactMatrix:
    """Sparse matrix with labeled rows/columns over Q or a prime field."""

    row_labels: tuple
    col_labels: tuple
    entries: dict  # (i, j) -> Fraction, zero entries absent
    field: str | int = "rational"

    def __post_init__(self):
        if len(set(self.row_labels)) != len(self.row_labels):
            raise InvalidInputError("duplicate row labels")
        if len(set(self.col_labels)) != len(self.col_labels):
            raise InvalidInputError("duplicate column labels")
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < len(self.row_labels) and 0 <= j < len(self.col_labels)):
                raise InvalidInputError(f"entry ({i},{j}) out of range")
            v = Fraction(v)
            if v != 0:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @property
    def shape(self) -> tuple:
        return (len(self.row_labels), len(self.col_labels))

    def rows_as_dicts(self) -> list:
        rows = [dict() for _ in self.row_labels]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows


@dataclass(frozen=True)
class RankResult:
    rank: int
    mode: str  # "rational" | "modular"
    primes: tuple = ()
    exact: bool = True
    note: str = ""


@dataclass(frozen=True)
class SolveInfo:
    mode: str
    primes: tuple = ()
    verified: bool = False
    note: str = ""


def _integer_rows(rows: list) -> list:
    out = []
    for row in rows:
        if not row:
            out.append({})
            continue
        denom = 1
        for v in row.values():
            denom = denom * v.denominator // math.gcd(denom, v.denominator)
        ints = {j: int(v * denom) for j, v in row.items()}
        g = 0
        for v in ints.values():
            g = math.gcd(g, abs(v))
        if g > 1:
            ints = {j: v // g for j, v in ints.items()}
        out.append(ints)
    return out


def _rank_rational(rows: list) -> int:
    """Fraction-free sparse elimination with Markowitz pivot selection."""
    rows = [dict(r) for r in _integer_rows(rows)]
    active = [i for i, r in enumerate(rows) if r]
    rank = 0
    while active:
        col_count: dict = {}
        for i in active:
            for j in rows[i]:
                col_count[j] = col_count.get(j, 0) + 1
        best = None
        for i in active:
            ri = len(rows[i]) - 1
            for j in rows[i]:
                score = ri * (col_count[j] - 1)
                key = (score, j, i)
                if best is None or key < best[0]:
                    best = (key, i, j)
        _, pi, pj = best
        piv_row = rows[pi]
        piv = piv_row[pj]
        rank += 1
        next_active = []
        for i in active:
            if i == pi:
                continue
            row = rows[i]
            coeff = row.get(pj)
            if coeff is None:
                if row:
                    next_active.append(i)
                continue
            new = {}
            for j, v in row.items():
                if j == pj:
                    continue
                new[j] = piv * v - coeff * piv_row.get(j, 0)
            for j, pv in piv_row.items():
                if j != pj and j not in row:
                    new[j] = -coeff * pv
            new = {j: v for j, v in new.items() if v}
            if new:
                g = 0
                for v in new.values():
                    g = math.gcd(g, abs(v))
                if g > 1:
                    new = {j: v // g for j, v in new.items()}
                rows[i] = new
                next_active.append(i)
            else:
                rows[i] = {}
        active = next_active
    return rank


def _rank_mod_p_numpy(rows: list, ncols: int, p: int) -> int:
    nrows = len(rows)
    a = np.zeros((nrows, ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, v in row.items():
            a[i, j] = (v.numerator * pow(v.denominator, p - 2, p)) % p
    rank = 0
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i, c] % p:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        col = a[r + 1 :, c].copy()
        mask = col != 0
        if mask.any():
            a[r + 1 :, c:][mask] = (a[r + 1 :, c:][mask] - col[mask, None] * a[r, c:]) % p
        rank += 1
        r += 1
        if r == nrows:
            break
    return rank


def _rank_mod_p_sparse(rows: list, p: int) -> int:
    pivots: dict = {}  # pivot col -> normalized row dict
    rank = 0
    for row in rows:
        r = {}
        for j, v in row.items():
            val = (v.numerator * pow(v.denominator, p - 2, p)) % p
            if val:
                r[j] = val
        for pc in sorted(pivots):
            coeff = r.get(pc)
            if coeff is None:
                continue
            piv = pivots[pc]
            for c, pv in piv.items():
                nv = (r.get(c, 0) - coeff * pv) % p
                if nv:
                    r[c] = nv
                elif c in r:
                    del r[c]
        if not r:
            continue
        pc = min(r)
        inv = pow(r[pc], p - 2, p)
        pivots[pc] = {c: (v * inv) % p for c, v in r.items()}
        rank += 1
    return rank


def rank(matrix: SparseExactMatrix, mode: str = "rational", primes=None) -> RankResult:
    """Exact or modular rank.

    Modular rank is a lower bound on the rational rank; when it equals
    min(rows, cols) it certifies the rational rank exactly (a nonzero
    minor mod p is nonzero over Q), which the result's `exact` flag
    records.
    """
    nrows, ncols = matrix.shape
    rows = matrix.rows_as_dicts()
    if mode == "rational":
        return RankResult(_rank_rational(rows), "rational", (), True, "fraction-free sparse elimination")
    if mode != "modular":
        raise InvalidInputError(f"unknown rank mode {mode!r}")
    primes = tuple(primes) if primes else default_primes(2)
    best = 0
    for p in primes:
        if p < _NUMPY_PRIME_LIMIT and nrows * ncols <= _NUMPY_DENSE_LIMIT:
            r = _rank_mod_p_numpy(rows, ncols, p)
        else:
            r = _rank_mod_p_sparse(rows, p)
        best = max(best, r)
    exact = best == min(nrows, ncols)
    note = "full modular rank certifies the rational rank" if exact else "lower bound on the rational rank"
    return RankResult(best, "modular", primes, exact, note)


# ---------------------------------------------------------------------------
# Membership solving.


def _crt_pair(r1, m1, r2, m2):
    g, x, _ = _ext_gcd(m1, m2)
    assert g == 1
    lift = (r1 + (r2 - r1) * x % m2 * m1) % (m1 * m2)
    return lift, m1 * m2


def _ext_gcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def rational_reconstruct(u: int, m: int) -> Fraction | None:
    """Lift u mod m to a fraction with |num|, den <= sqrt(m/2), if one exists."""
    u %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, u
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if abs(t1) > bound or t1 == 0:
        return None
    if math.gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1 * (1 if t1 > 0 else -1), abs(t1))


def _solve_mod_p(columns: list, target: dict, nrows: int, p: int):
    """Particular solution of sum x_j col_j = target over GF(p), or None."""
    ncols = len(columns)
    if p < _NUMPY_PRIME_LIMIT and nrows * (ncols + 1) <= _NUMPY_DENSE_LIMIT:
        return _solve_mod_p_numpy(columns, target, nrows, p)
    return _solve_mod_p_sparse(columns, target, p)


def _solve_mod_p_numpy(columns: list, target: dict, nrows: int, p: int):
    ncols = len(columns)
    a = np.zeros((nrows, ncols + 1), dtype=np.int64)
    for j, col in enumerate(columns):
        for i, v in col.items():
            a[i, j] = (v.numerator * pow(v.denominator, p - 2, p)) % p
    for i, v in target.items():
        a[i, ncols] = (v.numerator * pow(v.denominator, p - 2, p)) % p
    r = 0
    piv_cols = []
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i, c] % p:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask, c:] = (a[mask, c:] - col[mask, None] * a[r, c:]) % p
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if a[i, ncols] % p:
            return None
    x = [0] * ncols
    for k, c in enumerate(piv_cols):
        x[c] = int(a[k, ncols]) % p
    return x


def _solve_mod_p_sparse(columns: list, target: dict, p: int):
    """Dict-based RREF solve for primes too large for int64 products."""
    ncols = len(columns)
    rows: dict = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            val = (v.numerator * pow(v.denominator, p - 2, p)) % p
            if val:
                rows.setdefault(i, {})[j] = val
    rhs = {i: (v.numerator * pow(v.denominator, p - 2, p)) % p for i, v in target.items()}
    pivots: dict = {}  # col -> (row dict without pivot col, rhs value)
    order = []
    for i in sorted(set(rows) | set(rhs)):
        row = dict(rows.get(i, {}))
        b = rhs.get(i, 0) % p
        for c in order:
            coeff = row.pop(c, 0)
            if not coeff:
                continue
            prow, pb = pivots[c]
            for j, v in prow.items():
                nv = (row.get(j, 0) - coeff * v) % p
                if nv:
                    row[j] = nv
                elif j in row:
                    del row[j]
            b = (b - coeff * pb) % p
        if not row:
            if b % p:
                return None
            continue
        c = min(row)
        inv = pow(row[c], p - 2, p)
        b = (b * inv) % p
        prow = {j: (v * inv) % p for j, v in row.items() if j != c}
        pivots[c] = (prow, b)
        order.append(c)
    x = [0] * ncols
    for c in reversed(order):
        prow, b = pivots[c]
        acc = b
        for j, v in prow.items():
            acc = (acc - v * x[j]) % p
        x[c] = acc % p
    return x


def solve_in_span(basis_vectors: list, target: dict, mode: str = "modular", primes=None, labels=None):
    """Express target as an exact rational combination of the basis vectors.

    Vectors are sparse maps from shared labels to Fractions.  Returns
    (coefficients, SolveInfo); coefficients is None when the target is
    outside the span.  Modular mode reports "outside" only when every
    supplied prime agrees, and any claimed solution is verified by exact
    substitution before being returned.
    """
    if labels is None:
        universe = set(target)
        for v in basis_vectors:
            universe.update(v)
        labels = sorted(universe)
    index = {lab: i for i, lab in enumerate(labels)}
    try:
        cols = [{index[lab]: Fraction(v) for lab, v in vec.items() if v} for vec in basis_vectors]
        tgt = {index[lab]: Fraction(v) for lab, v in target.items() if v}
    except KeyError as exc:
        raise InvalidInputError(f"label {exc.args[0]!r} missing from the shared universe") from None

    if not basis_vectors:
        if not tgt:
            return [], SolveInfo(mode, (), True, "empty combination")
        return None, SolveInfo(mode, (), False, "empty basis, nonzero target")

    if mode == "rational":
        coeffs = _solve_rational(cols, tgt, len(labels))
        if coeffs is None:
            return None, SolveInfo("rational", (), False, "no rational solution")
        assert _verify_solution(cols, coeffs, tgt)
        return coeffs, SolveInfo("rational", (), True, "exact elimination")
    if mode != "modular":
        raise InvalidInputError(f"unknown solve mode {mode!r}")

    primes = tuple(primes) if primes else default_primes(2)
    residues = None
    modulus = None
    used = []
    for p in primes:
        sol = _solve_mod_p(cols, tgt, len(labels), p)
        used.append(p)
        if sol is None:
            continue
        if residues is None:
            residues, modulus = list(sol), p
        else:
            residues = [_crt_pair(r, modulus, s, p)[0] for r, s in zip(residues, sol)]
            modulus *= p
        cand = [rational_reconstruct(r, modulus) for r in residues]
        if all(c is not None for c in cand) and _verify_solution(cols, cand, tgt):
            return cand, SolveInfo("modular", tuple(used), True, "CRT-lifted, verified by exact substitution")
    if residues is None:
        return None, SolveInfo("modular", tuple(used), False, f"inconsistent modulo all of {used}")
    # Reconstruction never stabilized: fall back to exact elimination.
    coeffs = _solve_rational(cols, tgt, len(labels))
    if coeffs is None:
        return None, SolveInfo("rational", tuple(used), False, "no rational solution (modular lift failed)")
    assert _verify_solution(cols, coeffs, tgt)
    return coeffs, SolveInfo("rational", tuple(used), True, "exact elimination fallback")


def _solve_rational(cols: list, target: dict, nrows: int):
    """Row-echelon solve of [A | t] over Q; free variables pinned to zero."""
    rows: dict = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    rhs = {i: Fraction(v) for i, v in target.items()}
    ncols = len(cols)
    piv_of_col: dict = {}
    order = []  # pivot columns in insertion order
    for i in sorted(set(rows) | set(rhs)):
        row = dict(rows.get(i, {}))
        b = rhs.get(i, Fraction(0))
        for c in order:
            coeff = row.pop(c, None)
            if coeff is None:
                continue
            prow, pb = piv_of_col[c]
            for j, v in prow.items():
                nv = row.get(j, Fraction(0)) - coeff * v
                if nv:
                    row[j] = nv
                elif j in row:
                    del row[j]
            b -= coeff * pb
        if not row:
            if b != 0:
                return None
            continue
        c = min(row)
        inv = 1 / row[c]
        b *= inv
        prow = {j: v * inv for j, v in row.items() if j != c}
        piv_of_col[c] = (prow, b)
        order.append(c)
    x = [Fraction(0)] * ncols
    # A pivot row can only reference pivot columns discovered after it,
    # so reverse insertion order is a valid substitution order.
    for c in reversed(order):
        prow, b = piv_of_col[c]
        acc = b
        for j, v in prow.items():
            acc -= v * x[j]
        x[c] = acc
    return x


def _verify_solution(cols: list, coeffs: list, target: dict) -> bool:
    acc: dict = {}
    for c, col in zip(coeffs, cols):
        if c == 0:
            continue
        for i, v in col.items():
            acc[i] = acc.get(i, Fraction(0)) + c * v
    acc = {i: v for i, v in acc.items() if v}
    return acc == {i: v for i, v in target.items() if v}


# ---------------------------------------------------------------------------
# File format: header `rows cols field`, entries `i j num/den`, end `0 0 0`;
# labels in a sidecar CSV `index,key`.


def write_matrix(matrix: SparseExactMatrix) -> str:
    fld = matrix.field if isinstance(matrix.field, str) else f"prime({matrix.field})"
    lines = [f"{len(matrix.row_labels)} {len(matrix.col_labels)} {fld}"]
    for (i, j), v in sorted(matrix.entries.items()):
        lines.append(f"{i + 1} {j + 1} {v.numerator}/{v.denominator}")
    lines.append("0 0 0")
    return "\n".join(lines) + "\n"


def read_matrix(text: str, row_labels=None, col_labels=None) -> SparseExactMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    nrows, ncols, fld = int(head[0]), int(head[1]), head[2]
    field_val: str | int = "rational"
    if fld.startswith("prime(") and fld.endswith(")"):
        field_val = int(fld[6:-1])
    entries = {}
    for ln in lines[1:]:
        i_s, j_s, v_s = ln.split()
        if i_s == j_s == "0" and v_s == "0":
            break
        num, den = (v_s.split("/") + ["1"])[:2]
        entries[(int(i_s) - 1, int(j_s) - 1)] = Fraction(int(num), int(den))
    else:
        raise InvalidInputError("matrix file missing 0 0 0 terminator")
    rl = tuple(row_labels) if row_labels is not None else tuple(f"r{i}" for i in range(nrows))
    cl = tuple(col_labels) if col_labels is not None else tuple(f"c{j}" for j in range(ncols))
    return SparseExactMatrix(rl, cl, entries, field_val)


def write_labels(labels) -> str:
    lines = ["index,key"]
    for i, lab in enumerate(labels):
        lines.append(f"{i},{lab}")
    return "\n".join(lines) + "\n"
