"""Finite abstract simplicial complexes and their face-poset calculus.

A complex stores its simplices as sorted vertex tuples with deterministic
integer ids assigned by (dimension, lexicographic tuple).  Subsets of the
face poset are SimplexSet values; up-closed sets model open subspaces of
the realization and down-closed sets model closed ones (Alexandrov
duality).  Everything is immutable after construction.
"""

import json
from functools import lru_cache


class ComplexError(ValueError):
    pass


def _vertex_key(v):
    # deterministic order for mixed int/str vertex ids
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


def canonical_simplex(vertices):
    t = tuple(sorted(vertices, key=_vertex_key))
    if len(set(t)) != len(t):
        raise ComplexError("duplicate vertex in simplex %r" % (list(vertices),))
    return t


class SimplicialComplex:
    def __init__(self, vertices, maximal_simplices):
        vs = list(vertices)
        if len(set(vs)) != len(vs):
            raise ComplexError("duplicate vertex id in vertex list")
        vset = set(vs)
        simplices = set()
        for m in maximal_simplices:
            t = canonical_simplex(m)
            if not t:
                raise ComplexError("empty simplex in input")
            for v in t:
                if v not in vset:
                    raise ComplexError("unknown vertex id %r" % (v,))
            # downward closure
            n = len(t)
            for mask in range(1, 1 << n):
                simplices.add(tuple(t[i] for i in range(n) if mask >> i & 1))
        for v in vs:
            simplices.add((v,))
        if not simplices:
            raise ComplexError("empty complex")
        self.vertices = tuple(sorted(vs, key=_vertex_key))
        ordered = sorted(simplices, key=lambda s: (len(s), tuple(_vertex_key(v) for v in s)))
        self.simplices = tuple(ordered)
        self.index = {s: i for i, s in enumerate(ordered)}
        self.dim = max(len(s) for s in ordered) - 1
        self._build_poset()

    def _build_poset(self):
        idx = self.index
        n = len(self.simplices)
        self.facets = [[] for _ in range(n)]    # codim-1 faces, (face_id, sign)
        self.cofacets = [[] for _ in range(n)]  # codim-1 cofaces, (coface_id, sign)
        for i, s in enumerate(self.simplices):
            if len(s) == 1:
                continue
            for pos in range(len(s)):
                f = s[:pos] + s[pos + 1:]
                j = idx[f]
                sign = 1 if pos % 2 == 0 else -1
                self.facets[i].append((j, sign))
                self.cofacets[j].append((i, sign))

    def __len__(self):
        return len(self.simplices)

    def id_of(self, simplex):
        t = canonical_simplex(simplex)
        if t not in self.index:
            raise ComplexError("unknown simplex %r" % (list(simplex),))
        return self.index[t]

    def simplex(self, sid):
        return self.simplices[sid]

    def sdim(self, sid):
        return len(self.simplices[sid]) - 1

    def incidence_sign(self, face_id, coface_id):
        for j, sign in self.cofacets[face_id]:
            if j == coface_id:
                return sign
        raise ComplexError("not a codimension-1 pair")

    @lru_cache(maxsize=None)
    def up_set(self, sid):
        """Ids of all simplices containing sid (the open star), sid included."""
        s = set(self.simplices[sid])
        out = []
        for i, t in enumerate(self.simplices):
            if len(t) >= len(s) and s.issubset(t):
                out.append(i)
        return tuple(out)

    @lru_cache(maxsize=None)
    def down_set(self, sid):
        """Ids of all faces of sid, sid included."""
        s = self.simplices[sid]
        return tuple(sorted(self.index[f] for f in _subtuples(s)))

    def all_ids(self):
        return frozenset(range(len(self.simplices)))

    # -- SimplexSet constructors -------------------------------------------

    def simplex_set(self, ids):
        return SimplexSet(self, frozenset(ids))

    def full_set(self):
        return SimplexSet(self, self.all_ids())

    def empty_set(self):
        return SimplexSet(self, frozenset())

    def set_from_tuples(self, tuples):
        return self.simplex_set(self.id_of(t) for t in tuples)

    def open_star(self, simplex):
        return self.simplex_set(self.up_set(self.id_of(simplex)))

    def link_of(self, simplex):
        """The link as a complex of its own: {tau : tau ∩ s = ∅, tau ∪ s a simplex}."""
        sid = self.id_of(simplex)
        s = set(self.simplices[sid])
        members = []
        for t in self.simplices:
            ts = set(t)
            if ts & s:
                continue
            u = canonical_simplex(ts | s)
            if u in self.index:
                members.append(t)
        verts = sorted({v for t in members for v in t}, key=_vertex_key)
        if not members:
            return None
        return SimplicialComplex(verts, members)

    def subcomplex(self, down_closed_set):
        """A down-closed SimplexSet as a standalone complex, with id maps."""
        assert down_closed_set.is_down_closed()
        tuples = [self.simplices[i] for i in sorted(down_closed_set.ids)]
        verts = sorted({v for t in tuples for v in t}, key=_vertex_key)
        sub = SimplicialComplex(verts, tuples)
        to_parent = {sub.index[t]: self.index[t] for t in tuples}
        from_parent = {v: k for k, v in to_parent.items()}
        return sub, to_parent, from_parent


def _subtuples(s):
    n = len(s)
    for mask in range(1, 1 << n):
        yield tuple(s[i] for i in range(n) if mask >> i & 1)


class SimplexSet:
    """A subset of the face poset of a fixed complex."""

    __slots__ = ("complex", "ids", "_up", "_down")

    def __init__(self, complex, ids):
        self.complex = complex
        self.ids = frozenset(ids)
        self._up = None
        self._down = None

    def __contains__(self, sid):
        return sid in self.ids

    def __len__(self):
        return len(self.ids)

    def __eq__(self, other):
        return isinstance(other, SimplexSet) and self.complex is other.complex \
            and self.ids == other.ids

    def __hash__(self):
        return hash(self.ids)

    def _same(self, other):
        if self.complex is not other.complex:
            raise ComplexError("simplex sets belong to different complexes")

    def union(self, other):
        self._same(other)
        return SimplexSet(self.complex, self.ids | other.ids)

    def intersection(self, other):
        self._same(other)
        return SimplexSet(self.complex, self.ids & other.ids)

    def difference(self, other):
        self._same(other)
        return SimplexSet(self.complex, self.ids - other.ids)

    def issubset(self, other):
        self._same(other)
        return self.ids <= other.ids

    def complement(self):
        return SimplexSet(self.complex, self.complex.all_ids() - self.ids)

    def is_up_closed(self):
        if self._up is None:
            K = self.complex
            self._up = all(c in self.ids
                           for i in self.ids for c, _ in K.cofacets[i])
        return self._up

    def is_down_closed(self):
        if self._down is None:
            K = self.complex
            self._down = all(f in self.ids
                             for i in self.ids for f, _ in K.facets[i])
        return self._down

    def closure_flag(self):
        up, down = self.is_up_closed(), self.is_down_closed()
        if up and down:
            return "clopen"
        if up:
            return "up-closed"
        if down:
            return "down-closed"
        return "neither"

    def down_closure(self):
        K = self.complex
        out = set()
        for i in self.ids:
            out.update(K.down_set(i))
        return SimplexSet(K, out)

    def up_closure(self):
        K = self.complex
        out = set()
        for i in self.ids:
            out.update(K.up_set(i))
        return SimplexSet(K, out)

    def is_up_closed_in(self, ambient):
        """Up-closed as a subset of ambient (relative openness)."""
        self._same(ambient)
        K = self.complex
        return all(c in self.ids
                   for i in self.ids for c, _ in K.cofacets[i]
                   if c in ambient.ids)

    def is_down_closed_in(self, ambient):
        self._same(ambient)
        K = self.complex
        return all(f in self.ids
                   for i in self.ids for f, _ in K.facets[i]
                   if f in ambient.ids)

    def max_real_dim(self):
        if not self.ids:
            return -1
        return max(self.complex.sdim(i) for i in self.ids)

    def sorted_ids(self):
        return sorted(self.ids)

    def tuples(self):
        return [self.complex.simplices[i] for i in self.sorted_ids()]

    def components(self):
        """Partition by face-comparability inside the set."""
        K = self.complex
        ids = self.ids
        parent = {i: i for i in ids}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def join(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for i in ids:
            for c, _ in K.cofacets[i]:
                if c in ids:
                    join(i, c)
        groups = {}
        for i in ids:
            groups.setdefault(find(i), set()).add(i)
        comps = [SimplexSet(K, g) for g in groups.values()]
        comps.sort(key=lambda s: min(s.ids))
        return comps

    def __repr__(self):
        return "SimplexSet(%d simplices)" % len(self.ids)


def order_chains(P, length):
    """All strictly increasing chains s0 ⊂ … ⊂ s_length in P, lexicographic."""
    K = P.complex
    members = sorted(P.ids)
    mset = P.ids
    out = []

    def extend(chain, top):
        if len(chain) == length + 1:
            out.append(tuple(chain))
            return
        # strict supersets of top inside P, ascending id order
        for j in K.up_set(top):
            if j == top or j not in mset:
                continue
            chain.append(j)
            extend(chain, j)
            chain.pop()

    for i in members:
        extend([i], i)
    return sorted(out)


def all_chains(K, members):
    """All strict chains (any length >= 1) in the subposet given by members."""
    mset = frozenset(members)
    out = []

    def extend(chain, top):
        out.append(tuple(chain))
        for j in K.up_set(top):
            if j == top or j not in mset:
                continue
            chain.append(j)
            extend(chain, j)
            chain.pop()

    for i in sorted(mset):
        extend([i], i)
    return out


def load_complex(doc):
    """Build a complex from the JSON document format.

    {"vertices": [ids], "maximal_simplices": [[ids], ...]}
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    if "vertices" not in doc or "maximal_simplices" not in doc:
        raise ComplexError("document must have 'vertices' and 'maximal_simplices'")
    return SimplicialComplex(doc["vertices"], doc["maximal_simplices"])


def complex_to_doc(K):
    maximal = [list(s) for i, s in enumerate(K.simplices) if not K.cofacets[i]]
    return {"vertices": list(K.vertices), "maximal_simplices": maximal}
