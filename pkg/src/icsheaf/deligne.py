"""The direct-sum intersection complex via the generalized open-filtration recursion.

Starting from a local system split over the open strata unions U^m and
shifted by complex dimension, the complex is pushed forward step by step
along the induced open filtration, truncated at the middle-perversity
cutoff k−1−n, with the lower-dimensional local systems re-attached as
closed extensions by zero at each stage.  The pure-dimensional recursion
(the classical construction) is the same loop on a single closure X^m.
"""

from .fields import QQ
from . import sections as sec
from .sheaves import (SheafComplex, CellularSheaf, SheafError, make_local_system,
                      zero_complex)
from .stratify import (compute_open_filtration, naive_filtration,
                       validate_stratification, StratificationError, TRUST_NOTE)


class ICBundle:
    """The constructed complex with its provenance and intermediate stages."""

    def __init__(self, strat, filt, systems, intermediates, log, field, naive):
        self.stratification = strat
        self.filtration = filt
        self.systems = systems              # m -> CellularSheaf on U^m
        self.intermediates = intermediates  # U_k-indexed complexes, I_1 first
        self.ic = intermediates[-1]
        self.log = log                      # per-step dicts
        self.field = field
        self.naive = naive
        self.convention = "local systems shifted by complex dimension"
        self.trust_note = TRUST_NOTE

    def stalk_table(self):
        return self.ic.stalk_table()


def default_local_system(F, filt, rank=1):
    """Constant local system of the given rank on the open dense part U_1."""
    K = filt.stratification.complex
    return make_local_system(F, K, filt.U[1], {"rank": rank})


def split_local_system(L, filt):
    """Restrict a local system on U_1 to the per-dimension pieces U^m."""
    if L.domain != filt.U[1]:
        raise SheafError("local system must live on the open dense part U_1")
    out = {}
    for m, um in filt.U_m.items():
        if len(um):
            out[m] = L.restrict(um)
    return out


def _attach_systems(F, K, systems, ambient, upto, raw=False):
    """⊕_{m ≤ upto} L^m[m] extended by zero into the ambient open set."""
    total = None
    for m in sorted(systems):
        if m > upto:
            continue
        piece = systems[m].to_complex(degree=-m)
        piece = piece.extend_by_zero_raw(ambient) if raw else piece.extend_by_zero(ambient)
        total = piece if total is None else total.direct_sum(piece)
    if total is None:
        return zero_complex(F, K, ambient)
    return total


def build_ic(strat, local_system=None, field=QQ, naive=False, cleanup=True,
             verify=True):
    """Run the recursion over the induced (or naive) open filtration.

    Returns an ICBundle whose final complex lives on the whole space.  With
    naive=True the stepwise-simultaneous filtration is used instead and
    runs of repeated open sets are collapsed into a single pushforward
    truncated at the cutoff of the last collapsed step; the result is the
    deliberately non-canonical comparison object.
    """
    F = field
    K = strat.complex
    n = strat.n
    filt = naive_filtration(strat) if naive else compute_open_filtration(strat)
    if local_system is None:
        local_system = default_local_system(F, filt, rank=1)
    if local_system.F is not F:
        raise SheafError("local system field does not match the build field")
    systems = split_local_system(local_system, filt)

    I = _attach_systems(F, K, systems, filt.U[1], upto=n)
    intermediates = [I]
    log = []
    k = 1
    while k <= n:
        k2 = k
        if naive:
            while k2 + 1 <= n and filt.U[k2 + 2] == filt.U[k + 1]:
                k2 += 1
        cutoff = k2 - 1 - n
        target = filt.U[k2 + 1]
        pushed = sec.pushforward_open(I, target, cleanup=cleanup)
        trunc = sec.truncate_le(pushed, cutoff)
        attach = _attach_systems(F, K, systems, target, upto=n - k2, raw=naive)
        I = trunc.direct_sum(attach)
        log.append({"step": k, "collapsed_through": k2, "cutoff": cutoff,
                    "target_size": len(target)})
        intermediates.append(I)
        k = k2 + 1

    bundle = ICBundle(strat, filt, systems, intermediates, log, F, naive)
    if verify and not naive:
        _verify_bundle(bundle)
    return bundle


def _verify_bundle(bundle):
    """Re-check the construction invariants on the finished tower."""
    filt = bundle.filtration
    inter = bundle.intermediates
    # first stage is the shifted local system sum
    t0 = inter[0].stalk_table()
    for m, Lm in bundle.systems.items():
        for sid in Lm.domain.ids:
            expect = {-m: Lm.dim(sid)} if Lm.dim(sid) else {}
            if t0.get(sid, {}) != expect:
                raise SheafError("first stage does not match the shifted local system")
    # each stage restricts back to the previous one
    steps = bundle.log
    for i, stepinfo in enumerate(steps):
        prev, cur = inter[i], inter[i + 1]
        back = cur.restrict_open(prev.domain)
        for sid in sorted(prev.domain.ids):
            if back.stalk_cohomology(sid) != prev.stalk_cohomology(sid):
                raise SheafError(
                    "stage %d does not restrict to stage %d at %r"
                    % (i + 1, i, bundle.stratification.complex.simplices[sid]))
    ok, witness = sec.is_clc(bundle.ic, bundle.stratification)
    if not ok:
        raise SheafError("constructed complex is not stratumwise locally constant: %r"
                         % (witness,))


def restrict_stratification(strat, closed_set):
    """The induced stratification of a down-closed union of strata."""
    K = strat.complex
    sub, to_parent, from_parent = K.subcomplex(closed_set)
    if sub.dim % 2 != 0:
        raise StratificationError("closed part has odd real dimension")
    m = sub.dim // 2
    levels = {}
    for k in range(m + 1):
        members = {from_parent[i] for i in strat.level(k).ids if i in from_parent}
        levels[k] = sub.simplex_set(members)
    return validate_stratification(sub, levels), sub, to_parent, from_parent


def transport_sheaf(L, target_complex, id_map, domain):
    """Move a CellularSheaf along a simplex id bijection."""
    dims = {id_map[s]: d for s, d in L.stalk_dim.items() if s in id_map}
    restr = {(id_map[s], id_map[t]): m for (s, t), m in L.restriction.items()
             if s in id_map and t in id_map}
    return CellularSheaf(L.F, target_complex, domain, dims, restr)


def transport_complex(S, target_complex, id_map, domain):
    dims = {id_map[s]: dict(qs) for s, qs in S.dims.items() if s in id_map}
    diffs = {id_map[s]: dict(ms) for s, ms in S.diffs.items() if s in id_map}
    restr = {(id_map[s], id_map[t]): dict(ms) for (s, t), ms in S.restrictions.items()
             if s in id_map and t in id_map}
    return SheafComplex(S.F, target_complex, domain, dims, diffs, restr)


def build_ic_pure(strat, m, Lm=None, field=QQ, cleanup=True):
    """The classical pure-dimensional complex on the closure X^m.

    Validates purity of the closed part, runs the recursion there, and
    returns the result extended by zero back over the ambient complex.
    """
    filt = compute_open_filtration(strat)
    if m not in filt.U_m or not len(filt.U_m[m]):
        raise StratificationError("no open strata of complex dimension %d" % m)
    closed = filt.X_m[m]
    substrat, sub, to_parent, from_parent = restrict_stratification(strat, closed)
    subfilt = compute_open_filtration(substrat)
    for j, uj in subfilt.U_m.items():
        if j != m and len(uj):
            raise StratificationError(
                "closure of the dimension-%d strata is not pure: open strata of dimension %d"
                % (m, j))
    if Lm is None:
        Lsub = None
    else:
        sub_dom = sub.simplex_set({from_parent[i] for i in Lm.domain.ids})
        Lsub = transport_sheaf(Lm, sub, from_parent, sub_dom)
    bundle = build_ic(substrat, Lsub, field=field, cleanup=cleanup, verify=False)
    parent_ic = transport_complex(bundle.ic, strat.complex, to_parent, closed)
    return parent_ic, bundle


def check_decomposition(bundle, cleanup=True):
    """Compare the direct construction with the sum of pure-closure complexes.

    Builds each pure piece independently, extends by zero, sums, and
    compares stalk cohomology tables at every simplex and degree.
    """
    strat = bundle.stratification
    K = strat.complex
    filt = bundle.filtration
    total = None
    summand_hyperco = {}
    for m in sorted(bundle.systems):
        piece, sub_bundle = build_ic_pure(strat, m, bundle.systems[m],
                                          field=bundle.field, cleanup=cleanup)
        summand_hyperco[m] = sec.hypercohomology(sub_bundle.ic)
        ext = piece.extend_by_zero(K.full_set())
        total = ext if total is None else total.direct_sum(ext)
    table_direct = bundle.ic.stalk_table()
    table_sum = total.stalk_table()
    mismatch = None
    for sid in sorted(K.full_set().ids):
        if table_direct.get(sid, {}) != table_sum.get(sid, {}):
            degrees = sorted(set(table_direct.get(sid, {})) | set(table_sum.get(sid, {})))
            bad = next(q for q in degrees
                       if table_direct.get(sid, {}).get(q, 0) != table_sum.get(sid, {}).get(q, 0))
            mismatch = {"simplex": list(K.simplices[sid]), "degree": bad,
                        "direct": table_direct.get(sid, {}).get(bad, 0),
                        "sum": table_sum.get(sid, {}).get(bad, 0)}
            break
    return {
        "passed": mismatch is None,
        "first_mismatch": mismatch,
        "summand_hypercohomology": {m: dict(h) for m, h in summand_hyperco.items()},
        "sum_hypercohomology": sec.hypercohomology(total),
        "direct_hypercohomology": sec.hypercohomology(bundle.ic),
    }


def default_costalk_sample(strat, limit=24):
    """Deterministic simplex sample: all singular simplices plus a spread."""
    K = strat.complex
    filt_sing = strat.level(strat.n - 1) if strat.n >= 1 else strat.complex.empty_set()
    sample = sorted(filt_sing.ids)
    rest = [i for i in sorted(K.full_set().ids) if i not in filt_sing.ids]
    if rest:
        step = max(1, len(rest) // max(1, limit))
        sample.extend(rest[::step][:limit])
    return sorted(set(sample))


def compare_stratifications(strat1, strat2, L1=None, L2=None, field=QQ,
                            cleanup=True, sample=None, naive_first=False):
    """Build both complexes and compare stalks, sampled costalks, sections.

    The local systems must have equal stalk tables on the common open dense
    part; by default both are constant of rank 1.  With naive_first the
    first build uses the non-canonical filtration (negative demonstrations).
    """
    if strat1.complex is not strat2.complex:
        raise StratificationError("stratifications live on different complexes")
    K = strat1.complex
    b1 = build_ic(strat1, L1, field=field, cleanup=cleanup, naive=naive_first)
    b2 = build_ic(strat2, L2, field=field, cleanup=cleanup)
    common = b1.filtration.U[1].intersection(b2.filtration.U[1])
    for sid in sorted(common.ids):
        d1 = {m: L.dim(sid) for m, L in b1.systems.items() if sid in L.domain.ids}
        d2 = {m: L.dim(sid) for m, L in b2.systems.items() if sid in L.domain.ids}
        if sum(d1.values()) != sum(d2.values()):
            raise SheafError("local systems disagree on the common open part")

    report = {"passed": True, "witnesses": []}
    t1, t2 = b1.ic.stalk_table(), b2.ic.stalk_table()
    for sid in sorted(K.full_set().ids):
        if t1.get(sid, {}) != t2.get(sid, {}):
            report["passed"] = False
            report["witnesses"].append(
                {"kind": "stalk", "simplex": list(K.simplices[sid]),
                 "first": t1.get(sid, {}), "second": t2.get(sid, {})})
            break
    if sample is None:
        sample = sorted(set(default_costalk_sample(strat1))
                        | set(default_costalk_sample(strat2)))
    for sid in sample:
        c1 = sec.cell_costalk(b1.ic, sid)
        c2 = sec.cell_costalk(b2.ic, sid)
        if c1 != c2:
            report["passed"] = False
            report["witnesses"].append(
                {"kind": "costalk", "simplex": list(K.simplices[sid]),
                 "first": c1, "second": c2})
            break
    h1 = sec.hypercohomology(b1.ic)
    h2 = sec.hypercohomology(b2.ic)
    if h1 != h2:
        report["passed"] = False
        report["witnesses"].append({"kind": "hypercohomology", "first": h1, "second": h2})
    report["hypercohomology"] = h1
    report["sample_size"] = len(sample)
    return report, b1, b2


class CoarseningState:
    def __init__(self, strat, levels, steps, merge_level):
        self.input_stratification = strat
        self.levels = levels            # k -> SimplexSet (closed filtration)
        self.steps = steps              # per-step witness records
        self.merge_level = merge_level  # stratum index -> level merged at (or None)
        self.note = ("merging is restricted to strata of the given stratification; "
                     "manifold-ness of merged pieces is not decidable and is not checked")

    def levels_doc(self):
        from .stratify import _generators
        K = self.input_stratification.complex
        return {str(k): [list(t) for t in _generators(K, s)]
                for k, s in sorted(self.levels.items())}


def clc_coarsen(strat, S):
    """Coarsen the filtration as far as the complex stays stratumwise constant.

    Top-down: at each level, a stratum merges into the open part when every
    cohomology-sheaf restriction map from it into already-merged strata is
    an isomorphism (and none lands in a stratum that stays closed).  The
    result is a filtration by closed unions of input strata refined by the
    input stratification.
    """
    K = strat.complex
    ok, witness = sec.is_clc(S, strat)
    if not ok:
        raise SheafError("complex is not locally constant on the input strata: %r"
                         % (witness,))
    lo, hi = S.degree_range()
    sheaves = {a: sec.cohomology_sheaf(S, a) for a in range(lo, hi + 1)}

    def maps_iso(sid, tid):
        for a, H in sheaves.items():
            if H.dim(sid) != H.dim(tid):
                return False
            from . import matrices as mx
            if H.dim(sid) and not mx.is_invertible(H.F, H.restriction_matrix(sid, tid)):
                return False
        return True

    stratum_of = {}
    for st in strat.strata:
        for sid in st.simplex_set.ids:
            stratum_of[sid] = st.index

    merged = {st.index: False for st in strat.strata}
    merge_level = {st.index: None for st in strat.strata}
    steps = []
    n = strat.n
    for j in range(n, 0, -1):
        # strata still closed and of complex dim <= j may merge at level j
        changed = True
        while changed:
            changed = False
            for st in strat.strata:
                if merged[st.index] or st.complex_dim > j:
                    continue
                # upward cover pairs leaving the stratum
                pairs = []
                blocked = False
                for sid in sorted(st.simplex_set.ids):
                    for cof, _ in K.cofacets[sid]:
                        tst = stratum_of[cof]
                        if tst == st.index:
                            continue
                        if not merged[tst]:
                            blocked = True
                            break
                        pairs.append((sid, cof))
                    if blocked:
                        break
                if blocked:
                    continue
                if st.complex_dim < j and not pairs:
                    # nothing above it: this stratum merges at its own level
                    continue
                bad = None
                for (sid, cof) in pairs:
                    if not maps_iso(sid, cof):
                        bad = (sid, cof)
                        break
                if bad is None:
                    merged[st.index] = True
                    merge_level[st.index] = j
                    changed = True
                    steps.append({"level": j, "stratum": st.index,
                                  "complex_dim": st.complex_dim,
                                  "merged": True, "pairs_checked": len(pairs)})
                elif st.complex_dim == j:
                    steps.append({"level": j, "stratum": st.index,
                                  "complex_dim": st.complex_dim, "merged": False,
                                  "witness_pair": [list(K.simplices[bad[0]]),
                                                   list(K.simplices[bad[1]])]})
    # a stratum merged at level j leaves the filtration below level j only
    levels = {}
    for k in range(n + 1):
        keep = K.empty_set()
        for st in strat.strata:
            ml = merge_level[st.index]
            if ml is None or ml <= k:
                keep = keep.union(st.simplex_set)
        levels[k] = keep if k < n else K.full_set()
    return CoarseningState(strat, levels, steps, merge_level)
