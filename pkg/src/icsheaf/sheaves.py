"""Cellular sheaves and complexes of them on a face poset.

A cellular sheaf assigns a finite-dimensional vector space to every
simplex of its domain and a matrix to every covering pair σ ⋖ τ (maps go
from faces to cofaces); path independence makes arbitrary restrictions
well-defined.  A SheafComplex is a finite family of such assignments
indexed by cohomological degree together with per-simplex differentials
commuting with the restrictions.  Everything is immutable and explicit;
operations return new objects.
"""

from . import matrices as mx
from .simplicial import canonical_simplex


class SheafError(ValueError):
    pass


def _mul(F, A, B, m, k, n):
    # shape-safe composition for possibly zero-dimensional matrices
    if m == 0 or n == 0 or k == 0:
        return mx.zeros(F, m, n)
    return mx.mat_mul(F, A, B)


class CellularSheaf:
    """Stalk dims + covering-pair matrices on a SimplexSet domain."""

    def __init__(self, F, complex, domain, stalk_dim, restriction):
        self.F = F
        self.complex = complex
        self.domain = domain
        self.stalk_dim = {s: d for s, d in stalk_dim.items() if d}
        self.restriction = restriction  # (sid, sid) -> matrix, cover pairs only

    def dim(self, sid):
        return self.stalk_dim.get(sid, 0)

    def restriction_matrix(self, sid, tid):
        r = self.restriction.get((sid, tid))
        if r is None:
            return mx.zeros(self.F, self.dim(tid), self.dim(sid))
        return r

    def cover_pairs(self):
        K = self.complex
        for s in sorted(self.domain.ids):
            for c, _ in K.cofacets[s]:
                if c in self.domain.ids:
                    yield (s, c)

    def check_path_independence(self):
        """All two-step composites between a codim-2 pair must agree."""
        K = self.complex
        F = self.F
        dom = self.domain.ids
        for s in sorted(dom):
            mids = [c for c, _ in K.cofacets[s] if c in dom]
            targets = {}
            for m in mids:
                for t, _ in K.cofacets[m]:
                    if t in dom:
                        targets.setdefault(t, []).append(m)
            for t, ms in targets.items():
                if len(ms) < 2:
                    continue
                comps = []
                for m in ms:
                    comps.append(_mul(F, self.restriction_matrix(m, t),
                                      self.restriction_matrix(s, m),
                                      self.dim(t), self.dim(m), self.dim(s)))
                for other in comps[1:]:
                    if other != comps[0]:
                        raise SheafError(
                            "path independence fails between %r and %r"
                            % (K.simplices[s], K.simplices[t]))

    def is_invertible_everywhere(self):
        for (s, t) in self.cover_pairs():
            if self.dim(s) != self.dim(t):
                return False
            if not mx.is_invertible(self.F, self.restriction_matrix(s, t)):
                return False
        return True

    def restrict(self, subset):
        dims = {s: d for s, d in self.stalk_dim.items() if s in subset.ids}
        rest = {p: m for p, m in self.restriction.items()
                if p[0] in subset.ids and p[1] in subset.ids}
        return CellularSheaf(self.F, self.complex, subset, dims, rest)

    def to_complex(self, degree=0):
        dims = {s: {degree: d} for s, d in self.stalk_dim.items()}
        restr = {p: {degree: m} for p, m in self.restriction.items()}
        return SheafComplex(self.F, self.complex, self.domain, dims, {}, restr)


def make_local_system(F, complex, domain, spec):
    """Build and verify a local system on an up-closed domain.

    spec: {"rank": r} for the constant system, or
          {"stalk_dim": {...}, "matrices": {(σ,τ): matrix}} with explicit
          invertible covering-pair matrices (keys may also be canonical
          tuple pairs).
    """
    if not domain.is_up_closed():
        raise SheafError("local system domain must be up-closed")
    if "rank" in spec:
        r = int(spec["rank"])
        if r < 0:
            raise SheafError("rank must be nonnegative")
        dims = {s: r for s in domain.ids}
        ident = mx.identity(F, r)
        restr = {}
        sheaf = CellularSheaf(F, complex, domain, dims, restr)
        for p in sheaf.cover_pairs():
            restr[p] = ident
        return sheaf
    dims = dict(spec["stalk_dim"])
    restr = dict(spec["matrices"])
    sheaf = CellularSheaf(F, complex, domain, dims, restr)
    for (s, t) in sheaf.cover_pairs():
        m = sheaf.restriction_matrix(s, t)
        if sheaf.dim(s) != sheaf.dim(t) or not mx.is_invertible(F, m):
            raise SheafError(
                "restriction %r -> %r is not invertible"
                % (complex.simplices[s], complex.simplices[t]))
    sheaf.check_path_independence()
    return sheaf


class SheafComplex:
    """A bounded complex of cellular sheaves on a common domain."""

    def __init__(self, F, complex, domain, dims, diffs, restrictions,
                 validate=False):
        self.F = F
        self.complex = complex
        self.domain = domain
        # dims: sid -> {q: dim}; diffs: sid -> {q: matrix}; restrictions:
        # (sid,tid) -> {q: matrix}.  Missing entries mean zero.
        self.dims = {s: {q: d for q, d in qs.items() if d}
                     for s, qs in dims.items()}
        self.dims = {s: qs for s, qs in self.dims.items() if qs}
        self.diffs = diffs
        self.restrictions = restrictions
        self._stalk_cache = {}
        self._restr_cache = {}
        if validate:
            self.validate()

    # -- basic accessors ----------------------------------------------------

    def degrees(self):
        out = set()
        for qs in self.dims.values():
            out.update(qs)
        return sorted(out)

    def degree_range(self):
        degs = self.degrees()
        if not degs:
            return (0, -1)
        return (degs[0], degs[-1])

    def dim(self, sid, q):
        return self.dims.get(sid, {}).get(q, 0)

    def value_dims(self, sid):
        return dict(self.dims.get(sid, {}))

    def diff(self, sid, q):
        m = self.diffs.get(sid, {}).get(q)
        if m is None:
            return mx.zeros(self.F, self.dim(sid, q + 1), self.dim(sid, q))
        return m

    def restriction_cover(self, sid, tid, q):
        m = self.restrictions.get((sid, tid), {}).get(q)
        if m is None:
            return mx.zeros(self.F, self.dim(tid, q), self.dim(sid, q))
        return m

    def restriction(self, sid, tid, q):
        """Composite restriction along the canonical ascending-vertex path."""
        if sid == tid:
            return mx.identity(self.F, self.dim(sid, q))
        key = (sid, tid, q)
        got = self._restr_cache.get(key)
        if got is not None:
            return got
        K = self.complex
        s, t = K.simplices[sid], K.simplices[tid]
        missing = [v for v in t if v not in set(s)]
        assert set(s) <= set(t) and missing
        cur = sid
        out = None
        for v in missing:
            nxt = K.id_of(canonical_simplex(set(K.simplices[cur]) | {v}))
            step = self.restriction_cover(cur, nxt, q)
            out = step if out is None else _mul(self.F, step, out,
                                                self.dim(nxt, q), self.dim(cur, q), self.dim(sid, q))
            cur = nxt
        self._restr_cache[key] = out
        return out

    def cover_pairs(self):
        K = self.complex
        for s in sorted(self.domain.ids):
            for c, _ in K.cofacets[s]:
                if c in self.domain.ids:
                    yield (s, c)

    # -- derived data --------------------------------------------------------

    def stalk_cohomology(self, sid):
        got = self._stalk_cache.get(sid)
        if got is None:
            qs = self.dims.get(sid, {})
            if sum(qs.values()) > 64:
                got = _sparse_value_cohomology(self, sid, qs)
            else:
                diffs = {q: self.diff(sid, q) for q in qs if self.dim(sid, q + 1)}
                got = mx.complex_cohomology_dims(self.F, qs, diffs)
            self._stalk_cache[sid] = got
        return got

    def stalk_table(self):
        return {sid: self.stalk_cohomology(sid) for sid in sorted(self.domain.ids)}

    # -- validation -----------------------------------------------------------

    def validate(self):
        F = self.F
        for sid in self.dims:
            for q in self.dims[sid]:
                if self.dim(sid, q + 1) and self.dim(sid, q + 2):
                    dd = _mul(F, self.diff(sid, q + 1), self.diff(sid, q),
                              self.dim(sid, q + 2), self.dim(sid, q + 1), self.dim(sid, q))
                    if any(not F.is_zero(x) for row in dd for x in row):
                        raise SheafError("d² ≠ 0 at %r" % (self.complex.simplices[sid],))
        for (s, t) in self.cover_pairs():
            for q in self.value_dims(s):
                # restriction commutes with d
                a = _mul(F, self.diff(t, q), self.restriction_cover(s, t, q),
                         self.dim(t, q + 1), self.dim(t, q), self.dim(s, q))
                b = _mul(F, self.restriction_cover(s, t, q + 1), self.diff(s, q),
                         self.dim(t, q + 1), self.dim(s, q + 1), self.dim(s, q))
                if a != b:
                    raise SheafError(
                        "restriction does not commute with d at %r -> %r"
                        % (self.complex.simplices[s], self.complex.simplices[t]))
        for q in self.degrees():
            CellularSheaf(F, self.complex, self.domain,
                          {s: self.dim(s, q) for s in self.dims},
                          {p: m[q] for p, m in self.restrictions.items() if q in m}
                          ).check_path_independence()

    # -- operations -----------------------------------------------------------

    def shift(self, k):
        """Degree q becomes q−k; differentials pick up (−1)^k."""
        if k == 0:
            return self
        F = self.F
        sgn = F.one if k % 2 == 0 else F.neg(F.one)
        dims = {s: {q - k: d for q, d in qs.items()} for s, qs in self.dims.items()}
        diffs = {s: {q - k: (ms[q] if k % 2 == 0 else mx.mat_scale(F, sgn, ms[q]))
                     for q in ms}
                 for s, ms in self.diffs.items()}
        restr = {p: {q - k: m for q, m in ms.items()}
                 for p, ms in self.restrictions.items()}
        return SheafComplex(F, self.complex, self.domain, dims, diffs, restr)

    def direct_sum(self, other):
        if self.domain != other.domain:
            raise SheafError("direct sum requires equal domains")
        if self.F is not other.F:
            raise SheafError("direct sum requires a common field")
        F = self.F
        dims, diffs, restr = {}, {}, {}
        for sid in self.domain.ids:
            qa = self.value_dims(sid)
            qb = other.value_dims(sid)
            qs = sorted(set(qa) | set(qb))
            if qs:
                dims[sid] = {q: qa.get(q, 0) + qb.get(q, 0) for q in qs}
                dmap = {}
                for q in qs:
                    if dims[sid].get(q) and (qa.get(q + 1, 0) + qb.get(q + 1, 0)):
                        dmap[q] = _block_diag(F, self.diff(sid, q), other.diff(sid, q),
                                              qa.get(q + 1, 0), qa.get(q, 0),
                                              qb.get(q + 1, 0), qb.get(q, 0))
                if dmap:
                    diffs[sid] = dmap
        for (s, t) in self.cover_pairs():
            rmap = {}
            for q in sorted(set(self.value_dims(s)) | set(other.value_dims(s))
                            | set(self.value_dims(t)) | set(other.value_dims(t))):
                rmap[q] = _block_diag(F, self.restriction_cover(s, t, q),
                                      other.restriction_cover(s, t, q),
                                      self.dim(t, q), self.dim(s, q),
                                      other.dim(t, q), other.dim(s, q))
            if rmap:
                restr[(s, t)] = rmap
        return SheafComplex(F, self.complex, self.domain, dims, diffs, restr)

    def restrict_open(self, subset):
        if not subset.issubset(self.domain) or not subset.is_up_closed_in(self.domain):
            raise SheafError("restrict_open needs an up-closed subset of the domain")
        return self._restrict(subset)

    def restrict_closed(self, subset):
        if not subset.issubset(self.domain) or not subset.is_down_closed_in(self.domain):
            raise SheafError("restrict_closed needs a down-closed subset of the domain")
        return self._restrict(subset)

    def _restrict(self, subset):
        dims = {s: qs for s, qs in self.dims.items() if s in subset.ids}
        diffs = {s: ms for s, ms in self.diffs.items() if s in subset.ids}
        restr = {p: ms for p, ms in self.restrictions.items()
                 if p[0] in subset.ids and p[1] in subset.ids}
        return SheafComplex(self.F, self.complex, subset, dims, diffs, restr)

    def extend_by_zero(self, ambient):
        """Extension by zero to an ambient SimplexSet containing the domain.

        The domain must be down-closed inside the ambient set (closed
        pushforward); values outside are zero, so no new matrices appear.
        """
        if not self.domain.issubset(ambient):
            raise SheafError("ambient set must contain the domain")
        if not self.domain.is_down_closed_in(ambient):
            raise SheafError("extend_by_zero requires a domain closed in the ambient set")
        return SheafComplex(self.F, self.complex, ambient,
                            self.dims, self.diffs, self.restrictions)

    def extend_by_zero_raw(self, ambient):
        """Extension by zero without the closedness requirement.

        Only used by the deliberately wrong naive construction, where the
        lower local systems are not closed in the naive open sets.
        """
        if not self.domain.issubset(ambient):
            raise SheafError("ambient set must contain the domain")
        return SheafComplex(self.F, self.complex, ambient,
                            self.dims, self.diffs, self.restrictions)


def _sparse_value_cohomology(S, sid, qs):
    # large value complexes (cleanup disabled) go through sparse reduction
    from .reduction import SparseComplex
    F = S.F
    G = SparseComplex(F)
    for q in sorted(qs):
        for i in range(qs[q]):
            G.add_gen((q, i), q)
    for q in sorted(qs):
        if not S.dim(sid, q + 1):
            continue
        d = S.diff(sid, q)
        for i in range(qs[q]):
            for j in range(S.dim(sid, q + 1)):
                v = d[j][i]
                if not F.is_zero(v):
                    G.add_entry((q, i), (q + 1, j), v)
    return G.minimize_dims()


def _block_diag(F, A, B, ra, ca, rb, cb):
    out = mx.zeros(F, ra + rb, ca + cb)
    for i in range(ra):
        for j in range(ca):
            out[i][j] = A[i][j]
    for i in range(rb):
        for j in range(cb):
            out[ra + i][ca + j] = B[i][j]
    return out


def zero_complex(F, complex, domain):
    return SheafComplex(F, complex, domain, {}, {}, {})


def constant_complex(F, complex, domain, rank=1, degree=0):
    """The constant sheaf of the given rank on any domain, in one degree."""
    dims = {s: {degree: rank} for s in domain.ids}
    ident = mx.identity(F, rank)
    probe = SheafComplex(F, complex, domain, dims, {}, {})
    restr = {p: {degree: ident} for p in probe.cover_pairs()}
    return SheafComplex(F, complex, domain, dims, {}, restr)
