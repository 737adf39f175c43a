"""Derived functor engine for cellular sheaf complexes.

Sections over an Alexandrov-open set are computed by the order-chain
(nerve) cochain complex of the subposet: p-cochains are sums of stalks at
the tops of strict chains s0 ⊂ … ⊂ sp, the differential alternates over
chain-face deletions with a restriction on the top deletion, and the
coefficient complex is totalized in.  This is the derived limit over the
poset and is correct for every up-closed subset.

Open pushforward produces such a complex at every simplex of the target;
to keep iterated pushforwards small the result is reduced by Gaussian
elimination of differential entries between generators with the same
support simplex.  Each such elimination is an exact homotopy equivalence
of complexes of sheaves (the generator supports are down-sets, so a
same-support entry is an isomorphism between elementary summands), hence
stalk cohomology, costalks, hypercohomology and all restriction data are
preserved on the nose; a per-run check compares stalk tables against the
coefficient complex on the open part.
"""

from . import matrices as mx
from .reduction import SparseComplex
from .sheaves import SheafComplex, CellularSheaf, SheafError
from .simplicial import all_chains


class EngineError(RuntimeError):
    pass


def _chain_entries(G, S, chains, chain_set=None):
    """Install bar-differential entries for the given chains of S's poset.

    Entries from a chain c: insert an element below the top (sign (−1)^pos,
    identity coefficients), append a new top (sign (−1)^len(c) times the
    restriction matrix), plus the internal differential (sign (−1)^(len−1)).
    Only entries between chains present in chain_set are installed.
    """
    F = S.F
    if chain_set is None:
        chain_set = set(chains)
    for c in chains:
        ln = len(c)
        top = c[-1]
        vd = S.value_dims(top)
        # internal differential
        sgn = F.one if (ln - 1) % 2 == 0 else F.neg(F.one)
        for q in vd:
            if not S.dim(top, q + 1):
                continue
            d = S.diff(top, q)
            for i in range(vd[q]):
                for i2 in range(S.dim(top, q + 1)):
                    v = d[i2][i]
                    if not F.is_zero(v):
                        G.add_entry((c, q, i), (c, q + 1, i2), F.mul(sgn, v))
        if ln < 2:
            continue
        # face deletions: from each face of c into c
        for pos in range(ln):
            f = c[:pos] + c[pos + 1:]
            if f not in chain_set:
                continue
            if pos < ln - 1:
                sgn = F.one if pos % 2 == 0 else F.neg(F.one)
                for q in vd:
                    for i in range(vd[q]):
                        G.add_entry((f, q, i), (c, q, i), sgn)
            else:
                sgn = F.one if (ln - 1) % 2 == 0 else F.neg(F.one)
                for q in sorted(S.value_dims(c[-2])):
                    if not S.dim(top, q):
                        continue
                    rm = S.restriction(c[-2], top, q)
                    for i in range(S.dim(c[-2], q)):
                        for j in range(S.dim(top, q)):
                            v = rm[j][i]
                            if not F.is_zero(v):
                                G.add_entry((f, q, i), (c, q, j), F.mul(sgn, v))


def _add_chain_gens(G, S, chains, with_support=False):
    for c in chains:
        top = c[-1]
        for q, d in sorted(S.value_dims(top).items()):
            for i in range(d):
                G.add_gen((c, q, i), len(c) - 1 + q,
                          support=c[0] if with_support else None)


def rgamma_dims(S, member_ids):
    """Cohomology dims of RΓ over an up-set of S's domain (order-chain model)."""
    members = set(member_ids) & set(S.domain.ids)
    if not members:
        return {}
    G = SparseComplex(S.F)
    chains = all_chains(S.complex, members)
    _add_chain_gens(G, S, chains)
    _chain_entries(G, S, chains)
    return G.minimize_dims()


def rgamma_cellular_dims(S, member_ids):
    """Cohomology dims of RΓ over a clopen set via the cellular cochain model.

    Valid when the member set is both up- and down-closed in the complex
    (a union of connected components): there the one-summand-per-cell
    complex computes the same sections as the order-chain model.
    """
    K = S.complex
    F = S.F
    G = SparseComplex(F)
    members = sorted(set(member_ids) & set(S.domain.ids))
    mset = set(members)
    for sid in members:
        p = K.sdim(sid)
        for q, d in sorted(S.value_dims(sid).items()):
            for i in range(d):
                G.add_gen((sid, q, i), p + q)
    for sid in members:
        p = K.sdim(sid)
        vd = S.value_dims(sid)
        sgn_int = F.one if p % 2 == 0 else F.neg(F.one)
        for q in vd:
            if S.dim(sid, q + 1):
                d = S.diff(sid, q)
                for i in range(vd[q]):
                    for i2 in range(S.dim(sid, q + 1)):
                        v = d[i2][i]
                        if not F.is_zero(v):
                            G.add_entry((sid, q, i), (sid, q + 1, i2), F.mul(sgn_int, v))
        for cof, sign in K.cofacets[sid]:
            if cof not in mset:
                continue
            sg = F.one if sign > 0 else F.neg(F.one)
            for q in vd:
                rm = S.restriction_cover(sid, cof, q)
                for i in range(vd[q]):
                    for j in range(S.dim(cof, q)):
                        v = rm[j][i]
                        if not F.is_zero(v):
                            G.add_entry((sid, q, i), (cof, q, j), F.mul(sg, v))
    return G.minimize_dims()


def hypercohomology(S, subset=None, model="auto"):
    """Hypercohomology dims of S over an up-closed subset (default: whole domain)."""
    A = subset if subset is not None else S.domain
    if not A.issubset(S.domain):
        raise SheafError("hypercohomology subset must lie in the domain")
    if not A.is_up_closed_in(S.domain):
        raise SheafError("hypercohomology needs an up-closed subset")
    clopen = A.is_up_closed() and A.is_down_closed()
    if model == "cellular" or (model == "auto" and clopen):
        if not clopen:
            raise SheafError("cellular section model needs a clopen subset")
        return rgamma_cellular_dims(S, A.ids)
    return rgamma_dims(S, A.ids)


def star_chains(S, sid):
    """All chains of the subposet up(sid) ∩ domain."""
    K = S.complex
    members = [i for i in K.up_set(sid) if i in S.domain.ids]
    return all_chains(K, members)


def cell_costalk(S, sid):
    """Costalk dims at a simplex: supported sections at the open cell.

    Computed as the kernel complex of the surjection from sections over the
    star onto sections over the deleted star (the chains through the
    simplex), shifted down by the real dimension of the simplex.
    """
    if sid not in S.domain.ids:
        raise SheafError("simplex outside the domain")
    K = S.complex
    chains = [c for c in star_chains(S, sid) if c[0] == sid]
    G = SparseComplex(S.F)
    _add_chain_gens(G, S, chains)
    _chain_entries(G, S, chains)
    dims = G.minimize_dims()
    d = K.sdim(sid)
    return {q + d: v for q, v in dims.items()}


def costalk_table(S, sample=None):
    ids = sorted(S.domain.ids) if sample is None else sorted(sample)
    return {sid: cell_costalk(S, sid) for sid in ids}


def supported_section_dims(S, sid, z_ids):
    """Dims of the sections-supported-on-Z stalk at sid (no shift).

    Z must be closed in the domain near the star; the complex is the kernel
    of sections over the star mapping onto sections over star ∖ Z.
    """
    zset = set(z_ids)
    chains = [c for c in star_chains(S, sid) if any(e in zset for e in c)]
    G = SparseComplex(S.F)
    _add_chain_gens(G, S, chains)
    _chain_entries(G, S, chains, chain_set=set(chains))
    return G.minimize_dims()


def truncate_le(S, a):
    """Good truncation: degrees < a kept, degree a replaced by ker d^a."""
    F = S.F
    lo, hi = S.degree_range()
    if hi <= a:
        return S
    dims, diffs, restr = {}, {}, {}
    kernels = {}
    for sid, qs in S.dims.items():
        nd = {q: d for q, d in qs.items() if q < a}
        da = S.dim(sid, a)
        if da:
            if S.dim(sid, a + 1):
                kb = mx.right_kernel_basis(F, S.diff(sid, a), ncols=da)
            else:
                kb = [[F.one if i == j else F.zero for i in range(da)] for j in range(da)]
            if kb:
                nd[a] = len(kb)
                kernels[sid] = mx.transpose(F, kb, cols=da)
        if nd:
            dims[sid] = nd
            dm = {}
            for q in nd:
                if q + 1 < a and S.dim(sid, q + 1):
                    dm[q] = S.diff(sid, q)
                elif q + 1 == a and sid in kernels:
                    # express the image of d^{a-1} in the kernel basis
                    dm[q] = mx.solve_right(F, kernels[sid], S.diff(sid, q), ncols=nd[a])
            if dm:
                diffs[sid] = dm
    for (s, t), ms in S.restrictions.items():
        rm = {}
        for q, m in ms.items():
            if q < a:
                rm[q] = m
            elif q == a and s in kernels and t in kernels:
                mapped = mx.mat_mul(F, m, kernels[s])
                rm[q] = mx.solve_right(F, kernels[t], mapped, ncols=dims[t][a])
        if rm:
            restr[(s, t)] = rm
    return SheafComplex(F, S.complex, S.domain, dims, diffs, restr)


def cohomology_sheaf(S, a):
    """The degree-a cohomology sheaf with induced restriction maps."""
    F = S.F
    data = {}
    stalks = {}
    for sid in sorted(S.domain.ids):
        n = S.dim(sid, a)
        d_out = S.diff(sid, a) if S.dim(sid, a + 1) else None
        d_in = S.diff(sid, a - 1) if S.dim(sid, a - 1) else None
        coh = mx.CochainCohomology(F, n, d_in, d_out)
        data[sid] = coh
        if coh.h_dim:
            stalks[sid] = coh.h_dim
    restr = {}
    K = S.complex
    for (s, t) in S.cover_pairs():
        cs, ct = data[s], data[t]
        if cs.h_dim == 0 and ct.h_dim == 0:
            continue
        if cs.h_dim == 0:
            restr[(s, t)] = mx.zeros(F, ct.h_dim, 0)
            continue
        r = S.restriction_cover(s, t, a)
        images = [mx.mat_vec(F, r, rep) for rep in cs.reps]
        restr[(s, t)] = ct.project(images)
    return CellularSheaf(F, K, S.domain, stalks, restr)


def is_clc(S, strat):
    """Are all cohomology sheaves locally constant on each stratum?

    Returns (bool, witness) with witness naming the first failing
    restriction (stratum index, degree, face pair).
    """
    lo, hi = S.degree_range()
    for a in range(lo, hi + 1):
        H = cohomology_sheaf(S, a)
        for st in strat.strata:
            ids = st.simplex_set.ids
            for (s, t) in H.cover_pairs():
                if s in ids and t in ids:
                    if H.dim(s) != H.dim(t) or not mx.is_invertible(
                            H.F, H.restriction_matrix(s, t)):
                        return False, {"stratum": st.index, "degree": a,
                                       "pair": (S.complex.simplices[s],
                                                S.complex.simplices[t])}
    return True, None


def pushforward_open(S, V, cleanup=True, check_unit=True):
    """Derived pushforward of S along the open inclusion domain(S) → V.

    The value at a new simplex is the order-chain section complex of its
    deleted star inside the old domain; on the old domain the result stays
    literally S away from the boundary region and is the (reduced) section
    complex there, glued by the compatible-family chain map.
    """
    K = S.complex
    F = S.F
    U = S.domain
    if not U.is_up_closed() or not V.is_up_closed():
        raise SheafError("pushforward_open needs up-closed U and V")
    if not U.issubset(V):
        raise SheafError("U must be contained in V")
    new_ids = V.ids - U.ids
    if not new_ids:
        return S
    bids = set()
    for d in new_ids:
        bids.update(K.up_set(d))
    bids &= U.ids
    far = U.ids - bids
    region = bids | new_ids

    chains = all_chains(K, bids)
    G = SparseComplex(F)
    _add_chain_gens(G, S, chains, with_support=True)
    _chain_entries(G, S, chains)

    # compatible-family map from boundary-adjacent old simplices
    far_adjacent = set()
    for sid in far:
        for c, _ in K.cofacets[sid]:
            if c in bids:
                far_adjacent.add(sid)
                break
    for sid in sorted(far_adjacent):
        for rho in K.up_set(sid):
            if rho not in bids:
                continue
            for q, d in sorted(S.value_dims(sid).items()):
                if not S.dim(rho, q):
                    continue
                rm = S.restriction(sid, rho, q)
                for i in range(d):
                    for j in range(S.dim(rho, q)):
                        v = rm[j][i]
                        if not F.is_zero(v):
                            G.add_ucol(((rho,), q, j), (sid, q, i), v)

    if cleanup:
        G.reduce(same_support=True)

    # materialize
    dims, diffs, restr = {}, {}, {}
    for sid in far:
        if sid in S.dims:
            dims[sid] = dict(S.dims[sid])
        if sid in S.diffs:
            diffs[sid] = dict(S.diffs[sid])
    alive = {sid: {} for sid in region}
    down_cache = {}
    for g in G.gens_sorted():
        supp = g[0][0]
        lst = down_cache.get(supp)
        if lst is None:
            lst = [x for x in K.down_set(supp) if x in region]
            down_cache[supp] = lst
        q = G.degree[g]
        for sid in lst:
            alive[sid].setdefault(q, []).append(g)
    index_at = {}
    for sid in region:
        index_at[sid] = {q: {g: i for i, g in enumerate(gs)}
                         for q, gs in alive[sid].items()}
        nd = {q: len(gs) for q, gs in alive[sid].items()}
        if nd:
            dims[sid] = nd
    for sid in sorted(region):
        dm = {}
        for q, gs in alive[sid].items():
            tgt = alive[sid].get(q + 1)
            if not tgt:
                continue
            m = mx.zeros(F, len(tgt), len(gs))
            ti = index_at[sid][q + 1]
            hit = False
            for j, g in enumerate(gs):
                for h, v in G.dout.get(g, {}).items():
                    i = ti.get(h)
                    if i is not None:
                        m[i][j] = v
                        hit = True
            if hit:
                dm[q] = m
        if dm:
            diffs[sid] = dm
    for s in sorted(region):
        for t, _ in K.cofacets[s]:
            if t not in region:
                continue
            rm = {}
            for q, gs in alive[s].items():
                tgt = alive[t].get(q)
                if not tgt:
                    continue
                m = mx.zeros(F, len(tgt), len(gs))
                si = index_at[s][q]
                for i, g in enumerate(tgt):
                    m[i][si[g]] = F.one
                rm[q] = m
            if rm:
                restr[(s, t)] = rm
    for s in sorted(far_adjacent):
        for t, _ in K.cofacets[s]:
            if t not in bids:
                continue
            rm = {}
            for q, d in sorted(S.value_dims(s).items()):
                tgt = alive[t].get(q)
                if not tgt:
                    continue
                m = mx.zeros(F, len(tgt), d)
                hit = False
                for i, g in enumerate(tgt):
                    col = G.ucols.get(g)
                    if not col:
                        continue
                    for i2 in range(d):
                        v = col.get((s, q, i2))
                        if v is not None and not F.is_zero(v):
                            m[i][i2] = v
                            hit = True
                if hit:
                    rm[q] = m
            if rm:
                restr[(s, t)] = rm
    for (s, t), ms in S.restrictions.items():
        if s in far and t in far:
            restr[(s, t)] = dict(ms)

    out = SheafComplex(F, K, V, dims, diffs, restr)
    if cleanup and check_unit:
        for sid in sorted(bids):
            if out.stalk_cohomology(sid) != S.stalk_cohomology(sid):
                raise EngineError(
                    "pushforward cleanup broke the section unit at %r"
                    % (K.simplices[sid],))
    return out
