"""Labeled/unlabeled multigraphs: canonical forms, orbits, decks, transforms.

Vertices are 1-based.  A multigraph on n vertices is a map from pairs
{i,j}, i < j, to nonnegative integer weights (zero entries omitted).
Unlabeled graphs are identified by a canonical key that ignores isolated
vertices; the ambient vertex count is carried separately by the callers
that need it.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations

from .errors import BudgetExceededError, InvalidInputError

# Documented budgets: exhaustive canonicalization handles general multigraphs
# with support up to 8; forests go through the rooted-centroid encoding.
GENERAL_CANON_MAX_SUPPORT = 8
FOREST_CANON_MAX_SUPPORT = 25
ENUM_MAX_N_MULTIGRAPH = 6
ENUM_MAX_N_FOREST = 10


@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple:
    """All pairs (i, j), 1 <= i < j <= n, in lexicographic order."""
    return tuple((i, j) for i in range(1, n) for j in range(i + 1, n + 1))


@lru_cache(maxsize=None)
def pair_index(n: int) -> dict:
    return {pq: k for k, pq in enumerate(pair_list(n))}


@lru_cache(maxsize=None)
def pair_perms(n: int) -> tuple:
    """For each permutation of {1..n}, the induced index map on pair_list(n).

    Cached only for small n; the generic canonicalization path prunes by
    vertex invariants instead of enumerating all of S_n.
    """
    pl = pair_list(n)
    pi = pair_index(n)
    out = []
    for sigma in permutations(range(1, n + 1)):
        row = []
        for i, j in pl:
            a, b = sigma[i - 1], sigma[j - 1]
            row.append(pi[(a, b) if a < b else (b, a)])
        out.append(tuple(row))
    return tuple(out)


class Multigraph:
    """Immutable labeled multigraph with positive integer edge weights."""

    __slots__ = ("n", "_w")

    def __init__(self, n: int, weights=None):
        if not isinstance(n, int) or n < 1:
            raise InvalidInputError(f"vertex count must be a positive integer, got {n!r}")
        w = {}
        for (i, j), v in (weights or {}).items():
            if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= n):
                raise InvalidInputError(f"bad pair ({i},{j}) for n={n}")
            if not isinstance(v, int) or v < 0:
                raise InvalidInputError(f"weight of ({i},{j}) must be a nonnegative integer")
            if v > 0:
                w[(i, j)] = v
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_w", w)

    def __setattr__(self, *a):
        raise AttributeError("Multigraph is immutable")

    @property
    def weights(self) -> dict:
        return dict(self._w)

    def weight(self, i: int, j: int) -> int:
        if i == j:
            raise InvalidInputError("no loops: i == j")
        if i > j:
            i, j = j, i
        return self._w.get((i, j), 0)

    def edge_items(self):
        return sorted(self._w.items())

    @property
    def edge_count(self) -> int:
        """Total edge weight d."""
        return sum(self._w.values())

    @property
    def support(self) -> tuple:
        verts = set()
        for i, j in self._w:
            verts.add(i)
            verts.add(j)
        return tuple(sorted(verts))

    def is_simple(self) -> bool:
        return all(v <= 1 for v in self._w.values())

    def to_vector(self, n: int | None = None) -> tuple:
        m = self.n if n is None else n
        if m < self.n and any(j > m for _, j in self._w):
            raise InvalidInputError("vector size smaller than support")
        vec = [0] * (m * (m - 1) // 2)
        pi = pair_index(m)
        for pq, v in self._w.items():
            vec[pi[pq]] = v
        return tuple(vec)

    @classmethod
    def from_vector(cls, vec, n: int) -> "Multigraph":
        pl = pair_list(n)
        return cls(n, {pl[k]: v for k, v in enumerate(vec) if v})

    def relabel(self, sigma: dict) -> "Multigraph":
        """Apply a vertex relabeling {old: new} (must be injective)."""
        w = {}
        for (i, j), v in self._w.items():
            a, b = sigma[i], sigma[j]
            w[(a, b) if a < b else (b, a)] = v
        return Multigraph(self.n, w)

    def __eq__(self, other):
        return isinstance(other, Multigraph) and self.n == other.n and self._w == other._w

    def __hash__(self):
        return hash((self.n, tuple(sorted(self._w.items()))))

    def __repr__(self):
        return f"Multigraph({format_multigraph(self)!r})"


class WeightedGraph:
    """Graph with exact rational weights on pairs; zero weights allowed."""

    __slots__ = ("n", "_w")

    def __init__(self, n: int, weights=None):
        if not isinstance(n, int) or n < 1:
            raise InvalidInputError(f"vertex count must be a positive integer, got {n!r}")
        w = {}
        for (i, j), v in (weights or {}).items():
            if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= n):
                raise InvalidInputError(f"bad pair ({i},{j}) for n={n}")
            v = Fraction(v)
            if v != 0:
                w[(i, j)] = v
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_w", w)

    def __setattr__(self, *a):
        raise AttributeError("WeightedGraph is immutable")

    def weight(self, i: int, j: int) -> Fraction:
        if i > j:
            i, j = j, i
        return self._w.get((i, j), Fraction(0))

    @property
    def weights(self) -> dict:
        return dict(self._w)

    @classmethod
    def from_multigraph(cls, m: Multigraph) -> "WeightedGraph":
        return cls(m.n, {pq: Fraction(v) for pq, v in m.weights.items()})

    def __eq__(self, other):
        return isinstance(other, WeightedGraph) and self.n == other.n and self._w == other._w

    def __hash__(self):
        return hash((self.n, tuple(sorted(self._w.items()))))


# ---------------------------------------------------------------------------
# Text format: `n; i j w; i j w; ...` (w omitted means 1).


def parse_multigraph(text: str) -> Multigraph:
    parts = [p.strip() for p in text.strip().split(";")]
    if not parts or not parts[0]:
        raise InvalidInputError(f"empty graph description: {text!r}")
    try:
        n = int(parts[0])
    except ValueError:
        raise InvalidInputError(f"bad vertex count in {text!r}") from None
    weights = {}
    for chunk in parts[1:]:
        if not chunk:
            continue
        fields = chunk.split()
        if len(fields) not in (2, 3):
            raise InvalidInputError(f"bad edge {chunk!r} in {text!r}")
        try:
            i, j = int(fields[0]), int(fields[1])
            w = int(fields[2]) if len(fields) == 3 else 1
        except ValueError:
            raise InvalidInputError(f"bad edge {chunk!r} in {text!r}") from None
        if i == j:
            raise InvalidInputError(f"loop {i}-{j} not allowed")
        if i > j:
            i, j = j, i
        if (i, j) in weights:
            raise InvalidInputError(f"duplicate pair ({i},{j}) in {text!r}")
        if w <= 0:
            raise InvalidInputError(f"weight must be positive in {chunk!r}")
        weights[(i, j)] = w
    return Multigraph(n, weights)


def format_multigraph(m: Multigraph) -> str:
    chunks = [str(m.n)]
    for (i, j), w in m.edge_items():
        chunks.append(f"{i} {j} {w}" if w != 1 else f"{i} {j} 1")
    return "; ".join(chunks)


# ---------------------------------------------------------------------------
# Canonical forms.


@dataclass(frozen=True, order=True)
class IsoClass:
    """Canonical key of an unlabeled multigraph (isolated vertices dropped).

    key = (support size, tuple of (i, j, w) entries of a canonical labeled
    representative on vertices 1..support).  Total order inherited from the
    tuple encoding keeps every downstream report deterministic.
    """

    key: tuple

    @property
    def n_vertices(self) -> int:
        return self.key[0]

    @property
    def n_edges(self) -> int:
        return sum(w for _, _, w in self.key[1])

    @property
    def text(self) -> str:
        return format_multigraph(self.representative())

    def representative(self, n: int | None = None) -> Multigraph:
        """Canonical labeled representative, optionally padded to n vertices."""
        s = self.key[0]
        amb = s if n is None else n
        if amb < s:
            raise InvalidInputError(f"ambient {amb} smaller than support {s}")
        return Multigraph(max(amb, 1), {(i, j): w for i, j, w in self.key[1]})

    def is_simple(self) -> bool:
        return all(w == 1 for _, _, w in self.key[1])

    def is_forest(self) -> bool:
        return self.is_simple() and _is_acyclic([(i, j) for i, j, _ in self.key[1]])

    def __repr__(self):
        return f"IsoClass({self.text!r})"


def _is_acyclic(edges) -> bool:
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def _support_relabeled(m: Multigraph):
    """(s, weight dict on 1..s) after dropping isolated vertices."""
    sup = m.support
    s = len(sup)
    idx = {v: k + 1 for k, v in enumerate(sup)}
    w = {}
    for (i, j), v in m.weights.items():
        a, b = idx[i], idx[j]
        w[(a, b) if a < b else (b, a)] = v
    return s, w


def _vec_to_entries(vec, s):
    pl = pair_list(s)
    return tuple((pl[k][0], pl[k][1], v) for k, v in enumerate(vec) if v)


def _canon_brute(vec: tuple, s: int) -> tuple:
    return min(tuple(vec[k] for k in pm) for pm in pair_perms(s))


def _vertex_invariants(vec, s):
    pl = pair_list(s)
    deg = [0] * (s + 1)
    inc = [[] for _ in range(s + 1)]
    for k, v in enumerate(vec):
        if v:
            i, j = pl[k]
            deg[i] += v
            deg[j] += v
            inc[i].append(v)
            inc[j].append(v)
    return [(deg[v], tuple(sorted(inc[v]))) for v in range(1, s + 1)]


def _canon_pruned(vec: tuple, s: int) -> tuple:
    """Lex-min weight matrix over permutations sorting vertices by invariant."""
    inv = _vertex_invariants(vec, s)
    groups = {}
    for v, iv in enumerate(inv, start=1):
        groups.setdefault(iv, []).append(v)
    ordered = [groups[k] for k in sorted(groups)]
    pi = pair_index(s)
    best = None
    for choice in _product_of_perms(ordered):
        # choice maps new position -> old vertex
        pos = {old: new for new, old in enumerate(choice, start=1)}
        cand = [0] * len(vec)
        pl = pair_list(s)
        for k, v in enumerate(vec):
            if v:
                i, j = pl[k]
                a, b = pos[i], pos[j]
                cand[pi[(a, b) if a < b else (b, a)]] = v
        t = tuple(cand)
        if best is None or t < best:
            best = t
    return best


def _product_of_perms(ordered_groups):
    if not ordered_groups:
        yield ()
        return
    head, *rest = ordered_groups
    for hp in permutations(head):
        for rp in _product_of_perms(rest):
            yield hp + rp


# -- forest encoding --------------------------------------------------------


def _adjacency(edges, verts):
    adj = {v: [] for v in verts}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    return adj


def _centroids(adj, comp):
    n = len(comp)
    if n == 1:
        return [comp[0]]
    size = {}
    order = []
    parent = {comp[0]: None}
    stack = [comp[0]]
    while stack:
        v = stack.pop()
        order.append(v)
        for u in adj[v]:
            if u != parent[v]:
                parent[u] = v
                stack.append(u)
    for v in reversed(order):
        size[v] = 1 + sum(size[u] for u in adj[v] if parent.get(u) == v)
    best, cands = None, []
    for v in comp:
        parts = [size[u] for u in adj[v] if parent.get(u) == v]
        if parent[v] is not None:
            parts.append(n - size[v])
        heavy = max(parts)
        if best is None or heavy < best:
            best, cands = heavy, [v]
        elif heavy == best:
            cands.append(v)
    return cands


def _rooted_code(adj, root, parent):
    return tuple(sorted(_rooted_code(adj, u, root) for u in adj[root] if u != parent))


def _rooted_aut(code) -> int:
    a = 1
    for child, mult in Counter(code).items():
        a *= math.factorial(mult) * _rooted_aut(child) ** mult
    return a


def _tree_code(adj, comp):
    cents = _centroids(adj, comp)
    if len(cents) == 1:
        c = cents[0]
        return ("1", _rooted_code(adj, c, None), c, None)
    c1, c2 = cents
    r1 = _rooted_code(adj, c1, c2)
    r2 = _rooted_code(adj, c2, c1)
    if r2 < r1:
        c1, c2, r1, r2 = c2, c1, r2, r1
    return ("2", (r1, r2), c1, c2)


def _tree_aut_from_code(tag, payload) -> int:
    if tag == "1":
        return _rooted_aut(payload)
    r1, r2 = payload
    a = _rooted_aut(r1) * _rooted_aut(r2)
    return 2 * a if r1 == r2 else a


def _rebuild_rooted(code, root_label, next_label):
    """Edges of the canonical labeled tree for a rooted code (DFS order)."""
    edges = []
    for child in sorted(code):
        child_label = next_label
        next_label += 1
        edges.append((root_label, child_label))
        sub, next_label = _rebuild_rooted(child, child_label, next_label)
        edges.extend(sub)
    return edges, next_label


def _rebuild_tree(tag, payload, start_label):
    if tag == "1":
        edges, nxt = _rebuild_rooted(payload, start_label, start_label + 1)
        return edges, nxt
    r1, r2 = payload
    e1, nxt = _rebuild_rooted(r1, start_label, start_label + 1)
    root2 = nxt
    e2, nxt = _rebuild_rooted(r2, root2, root2 + 1)
    return e1 + [(start_label, root2)] + e2, nxt


def _forest_canonical(simple_edges, s):
    """(canonical entries, aut count) of a forest with s support vertices."""
    verts = sorted({v for e in simple_edges for v in e})
    adj = _adjacency(simple_edges, verts)
    seen = set()
    comps = []
    for v in verts:
        if v in seen:
            continue
        comp = []
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for u in adj[x]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(comp)
    codes = []
    for comp in comps:
        tag, payload, _, _ = _tree_code(adj, comp)
        codes.append((len(comp), tag, payload))
    codes.sort()
    aut = 1
    for (size, tag, payload), mult in Counter(codes).items():
        aut *= math.factorial(mult) * _tree_aut_from_code(tag, payload) ** mult
    edges = []
    label = 1
    for size, tag, payload in codes:
        tree_edges, label = _rebuild_tree(tag, payload, label)
        edges.extend(tree_edges)
    entries = tuple(sorted((min(i, j), max(i, j), 1) for i, j in edges))
    return entries, aut


# -- public canonicalization -------------------------------------------------


_CANON_CACHE: dict = {}
_AUT_CACHE: dict = {}


def canonical_form(m: Multigraph) -> IsoClass:
    """Canonical key of the isomorphism class of m, ignoring isolated vertices.

    Forests (simple acyclic graphs) are canonicalized through a
    centroid-rooted encoding and support larger sizes; everything else is
    minimized exhaustively over vertex permutations (with invariant pruning
    for supports 7 and 8).
    """
    s, w = _support_relabeled(m)
    if s == 0:
        return IsoClass((0, ()))
    cache_key = (s, tuple(sorted(w.items())))
    hit = _CANON_CACHE.get(cache_key)
    if hit is not None:
        return hit
    simple = all(v == 1 for v in w.values())
    if simple and _is_acyclic(list(w)):
        if s > FOREST_CANON_MAX_SUPPORT:
            raise BudgetExceededError("canonical_form", f"forest support <= {FOREST_CANON_MAX_SUPPORT}", str(s))
        entries, _ = _forest_canonical(list(w), s)
        cls = IsoClass((s, entries))
    else:
        if s > GENERAL_CANON_MAX_SUPPORT:
            raise BudgetExceededError("canonical_form", f"support <= {GENERAL_CANON_MAX_SUPPORT}", str(s))
        vec = [0] * (s * (s - 1) // 2)
        pi = pair_index(s)
        for pq, v in w.items():
            vec[pi[pq]] = v
        vec = tuple(vec)
        cvec = _canon_brute(vec, s) if s <= 6 else _canon_pruned(vec, s)
        cls = IsoClass((s, _vec_to_entries(cvec, s)))
    _CANON_CACHE[cache_key] = cls
    return cls


def automorphism_count(m: Multigraph) -> int:
    """Order of the automorphism group of the support graph of m."""
    s, w = _support_relabeled(m)
    if s == 0:
        return 1
    cache_key = (s, tuple(sorted(w.items())))
    hit = _AUT_CACHE.get(cache_key)
    if hit is not None:
        return hit
    simple = all(v == 1 for v in w.values())
    if simple and _is_acyclic(list(w)):
        _, aut = _forest_canonical(list(w), s)
    else:
        if s > GENERAL_CANON_MAX_SUPPORT:
            raise BudgetExceededError("automorphism_count", f"support <= {GENERAL_CANON_MAX_SUPPORT}", str(s))
        vec = [0] * (s * (s - 1) // 2)
        pi = pair_index(s)
        for pq, v in w.items():
            vec[pi[pq]] = v
        vec = tuple(vec)
        if s <= 6:
            aut = sum(1 for pm in pair_perms(s) if tuple(vec[k] for k in pm) == vec)
        else:
            aut = _aut_pruned(vec, s)
    _AUT_CACHE[cache_key] = aut
    return aut


def _aut_pruned(vec, s):
    inv = _vertex_invariants(vec, s)
    groups = {}
    for v, iv in enumerate(inv, start=1):
        groups.setdefault(iv, []).append(v)
    ordered = [groups[k] for k in sorted(groups)]
    flat = [v for g in ordered for v in g]
    pi = pair_index(s)
    pl = pair_list(s)
    count = 0
    for choice in _product_of_perms(ordered):
        sigma = {old: new for old, new in zip(flat, choice)}
        ok = True
        for k, v in enumerate(vec):
            i, j = pl[k]
            a, b = sigma[i], sigma[j]
            if vec[pi[(a, b) if a < b else (b, a)]] != v:
                ok = False
                break
        if ok:
            count += 1
    return count


# ---------------------------------------------------------------------------
# Orbits.


def orbit_size(cls: IsoClass, n: int) -> int:
    """Number of labeled graphs on {1..n} in the S_n-orbit of the class."""
    s = cls.n_vertices
    if s > n:
        raise InvalidInputError(f"support {s} exceeds ambient {n}")
    aut = automorphism_count(cls.representative())
    return math.comb(n, s) * math.factorial(s) // aut


_ORBIT_CACHE: dict = {}


def orbit_vectors(cls: IsoClass, n: int) -> tuple:
    """All labeled weight vectors (pair_list(n) indexing) in the orbit."""
    s = cls.n_vertices
    if s > n:
        raise InvalidInputError(f"support {s} exceeds ambient {n}")
    hit = _ORBIT_CACHE.get((cls.key, n))
    if hit is not None:
        return hit
    entries = cls.key[1]
    pi = pair_index(n)
    npairs = n * (n - 1) // 2
    seen = set()
    for verts in combinations(range(1, n + 1), s):
        for arrangement in permutations(verts):
            vec = [0] * npairs
            for i, j, w in entries:
                a, b = arrangement[i - 1], arrangement[j - 1]
                vec[pi[(a, b) if a < b else (b, a)]] = w
            seen.add(tuple(vec))
    out = tuple(sorted(seen))
    _ORBIT_CACHE[(cls.key, n)] = out
    return out


def orbit_data(m: Multigraph, n: int):
    """(orbit size, automorphism count in S_n, labeled orbit members on n)."""
    cls = canonical_form(m)
    s = cls.n_vertices
    if s > n:
        raise InvalidInputError(f"support {s} exceeds ambient {n}")
    size = orbit_size(cls, n)
    aut_ambient = automorphism_count(m) * math.factorial(n - s)
    members = [Multigraph.from_vector(v, n) for v in orbit_vectors(cls, n)]
    assert size * aut_ambient == math.factorial(n)
    assert len(members) == size
    return size, aut_ambient, members


# ---------------------------------------------------------------------------
# Structural transforms.


def complement(m: Multigraph) -> Multigraph:
    """Weights k - w over all pairs of the ambient set, k = max(1, max weight)."""
    k = max([1] + list(m.weights.values()))
    w = {}
    for i, j in pair_list(m.n):
        v = k - m.weight(i, j)
        if v:
            w[(i, j)] = v
    return Multigraph(m.n, w)


def scale(m: Multigraph, d: int) -> Multigraph:
    if d < 0:
        raise InvalidInputError("scale factor must be >= 0")
    return Multigraph(m.n, {pq: d * v for pq, v in m.weights.items()} if d else {})


def pad(m: Multigraph, n: int) -> Multigraph:
    if n < m.n:
        raise InvalidInputError(f"pad target {n} below current {m.n}")
    return Multigraph(n, m.weights)


def delete_vertex(m: Multigraph, i: int) -> Multigraph:
    """Remove all edges incident to i; the vertex set is kept."""
    if not 1 <= i <= m.n:
        raise InvalidInputError(f"vertex {i} out of range 1..{m.n}")
    return Multigraph(m.n, {pq: v for pq, v in m.weights.items() if i not in pq})


def transform(m: Multigraph, kind: str, arg: int | None = None) -> Multigraph:
    if kind == "complement":
        return complement(m)
    if kind == "scale":
        return scale(m, arg)
    if kind == "pad":
        return pad(m, arg)
    if kind == "delete_vertex":
        return delete_vertex(m, arg)
    raise InvalidInputError(f"unknown transform {kind!r}")


@dataclass(frozen=True)
class Deck:
    """Multiset of vertex-deleted classes, one entry per vertex."""

    classes: tuple  # sorted tuple of IsoClass, length n

    def as_counter(self) -> Counter:
        return Counter(self.classes)

    def __eq__(self, other):
        return isinstance(other, Deck) and Counter(self.classes) == Counter(other.classes)

    def __hash__(self):
        return hash(tuple(sorted(Counter(self.classes).items(), key=lambda kv: kv[0].key)))


def deck(g: Multigraph) -> Deck:
    return Deck(tuple(sorted((canonical_form(delete_vertex(g, i)) for i in range(1, g.n + 1)), key=lambda c: c.key)))


def hypomorphic(g: Multigraph, h: Multigraph) -> bool:
    return g.n == h.n and deck(g) == deck(h)


def components(m: Multigraph) -> list:
    """Connected components as multigraphs on the original vertex set."""
    sup = m.support
    adj = {v: set() for v in sup}
    for i, j in m.weights:
        adj[i].add(j)
        adj[j].add(i)
    seen = set()
    out = []
    for v in sup:
        if v in seen:
            continue
        comp = set()
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.add(x)
            for u in adj[x]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        out.append(Multigraph(m.n, {pq: w for pq, w in m.weights.items() if pq[0] in comp}))
    return out


def is_connected(m: Multigraph) -> bool:
    return len(components(m)) == 1


def embeddings(m: Multigraph, g: Multigraph) -> int:
    """Count orbit members of m (in S_n) whose edge set lies inside g's."""
    if not m.is_simple():
        raise InvalidInputError("embeddings requires a simple pattern")
    if m.n != g.n:
        raise InvalidInputError("pattern and host must share the ambient vertex count")
    host = set(g.weights)
    if not all(v == 1 for v in g.weights.values()):
        raise InvalidInputError("host must be a 0/1 graph")
    cls = canonical_form(m)
    pl = pair_list(g.n)
    count = 0
    for vec in orbit_vectors(cls, g.n):
        if all(pl[k] in host for k, v in enumerate(vec) if v):
            count += 1
    return count


# ---------------------------------------------------------------------------
# Brute-force enumeration of isomorphism classes.

FAMILIES = (
    "multigraph",
    "simple",
    "connected_multigraph",
    "connected_simple",
    "tree",
    "forest",
)


def enumerate_classes(n: int, d: int, family: str) -> list:
    """Isomorphism classes with support <= n and exactly d total edge weight.

    Generation is by augmentation: add one unit of weight at a time,
    canonicalize, deduplicate.  Trees require d = n - 1 exactly; forests
    are assembled as multisets of smaller trees.
    """
    if family not in FAMILIES:
        raise InvalidInputError(f"unknown family {family!r}")
    if n < 1 or d < 0:
        raise InvalidInputError("need n >= 1 and d >= 0")
    if family in ("tree", "forest"):
        if n > ENUM_MAX_N_FOREST:
            raise BudgetExceededError("enumerate", f"n <= {ENUM_MAX_N_FOREST} for {family}", str(n))
        if family == "tree":
            if d != n - 1:
                return []
            return sorted(unlabeled_trees(n), key=lambda c: c.key)
        return sorted(unlabeled_forests(d, n), key=lambda c: c.key)
    if n > ENUM_MAX_N_MULTIGRAPH:
        raise BudgetExceededError("enumerate", f"n <= {ENUM_MAX_N_MULTIGRAPH} for {family}", str(n))
    simple = family in ("simple", "connected_simple")
    connected = family.startswith("connected")
    level = {IsoClass((0, ())): Multigraph(n)}
    for _ in range(d):
        nxt = {}
        for rep in level.values():
            s = len(rep.support)
            top = min(s + 2, n)
            for i, j in pair_list(top):
                if simple and rep.weight(i, j) >= 1:
                    continue
                w = rep.weights
                w[(i, j)] = w.get((i, j), 0) + 1
                cand = Multigraph(n, w)
                cls = canonical_form(cand)
                if cls not in nxt:
                    nxt[cls] = cls.representative(n)
        level = nxt
    out = level.keys()
    if connected:
        out = [c for c in out if c.n_vertices >= 2 and is_connected(c.representative())]
    return sorted(out, key=lambda c: c.key)


@lru_cache(maxsize=None)
def unlabeled_trees(n: int) -> tuple:
    """All unlabeled trees on exactly n vertices (n >= 1), as classes.

    Internal generator without the public enumerate() budget; the incidence
    matrix builders go through this up to their own documented bounds.
    """
    if n < 1:
        return ()
    if n == 1:
        return (IsoClass((0, ())),)
    if n == 2:
        return (canonical_form(Multigraph(2, {(1, 2): 1})),)
    out = {}
    for t in unlabeled_trees(n - 1):
        rep = t.representative()
        s = rep.n
        for v in range(1, s + 1):
            w = rep.weights
            w[(v, s + 1)] = 1
            cls = canonical_form(Multigraph(s + 1, w))
            out[cls] = None
    return tuple(sorted(out, key=lambda c: c.key))


def unlabeled_forests(d: int, max_support: int) -> tuple:
    """Forest classes with d edges and at most max_support non-isolated vertices."""
    if d == 0:
        return (IsoClass((0, ())),)
    tree_pool = {}  # edges -> list of tree classes
    for e in range(1, d + 1):
        if e + 1 <= max_support:
            tree_pool[e] = unlabeled_trees(e + 1)
    out = set()

    def rec(remaining, max_part, chosen_vertices, chosen):
        if remaining == 0:
            out.add(_forest_union(chosen))
            return
        for part in range(min(remaining, max_part), 0, -1):
            if part not in tree_pool:
                continue
            if chosen_vertices + part + 1 > max_support:
                continue
            pool = tree_pool[part]
            for k in range(1, remaining // part + 1):
                if chosen_vertices + k * (part + 1) > max_support:
                    break
                for combo in combinations_with_replacement(pool, k):
                    rec(remaining - k * part, part - 1, chosen_vertices + k * (part + 1), chosen + list(combo))

    rec(d, d, 0, [])
    return tuple(sorted(out, key=lambda c: c.key))


def _forest_union(tree_classes) -> IsoClass:
    edges = {}
    offset = 0
    for t in tree_classes:
        for i, j, w in t.key[1]:
            edges[(i + offset, j + offset)] = w
        offset += t.n_vertices
    return canonical_form(Multigraph(max(offset, 1), edges))


def disjoint_union(a: Multigraph, b: Multigraph) -> Multigraph:
    """Union with b's vertices shifted past a's."""
    w = dict(a.weights)
    for (i, j), v in b.weights.items():
        w[(i + a.n, j + a.n)] = v
    return Multigraph(a.n + b.n, w)
