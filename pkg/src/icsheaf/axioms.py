"""Mechanical checkers for the axiom systems characterizing the complex.

AX1 (stratification dependent): normalization on the open dense part,
cohomology-sheaf vanishing above the middle-perversity cutoff on the W
sets, and the attaching condition checked through point costalks (the
equivalent vanishing form: costalks vanish in degrees ≤ n−k on the
non-open codimension-k strata).

AX2 (stratification independent): normalization on per-dimension dense
manifolds plus the pure-dimensional support and cosupport bounds, with
loci reported as unions of open simplices inside each closure X^m.

The classical global support/cosupport system (intended for pure spaces)
is kept as check_classic_ax2 for negative demonstrations.
"""

from . import matrices as mx
from . import sections as sec
from .sheaves import SheafError
from .stratify import compute_open_filtration, TRUST_NOTE


class AxiomInputError(ValueError):
    """Bad input to a checker (not a FAIL verdict): e.g. non-clc complex."""


class Witness:
    def __init__(self, kind, clause, simplex_ids, degree, observed_dim, bound, m=None):
        self.kind = kind
        self.clause = clause
        self.simplex_ids = sorted(simplex_ids)
        self.degree = degree
        self.observed_dim = observed_dim
        self.bound = bound
        self.m = m

    def to_json(self, K):
        return {
            "kind": self.kind,
            "clause": self.clause,
            "locus": [list(K.simplices[i]) for i in self.simplex_ids],
            "degree": self.degree,
            "observed_complex_dim": self.observed_dim,
            "required_bound": self.bound,
            "component_dim": self.m,
        }


class ClauseResult:
    def __init__(self, clause, description, passed, witnesses=()):
        self.clause = clause
        self.description = description
        self.passed = passed
        self.witnesses = list(witnesses)

    def to_json(self, K):
        return {"clause": self.clause, "description": self.description,
                "passed": self.passed,
                "witnesses": [w.to_json(K) for w in self.witnesses]}


class AxiomReport:
    def __init__(self, axiom_id, complex, clauses, notes=()):
        self.axiom_id = axiom_id
        self.complex = complex
        self.clauses = clauses
        self.passed = all(c.passed for c in clauses)
        self.notes = [TRUST_NOTE] + list(notes)

    def witnesses(self):
        return [w for c in self.clauses for w in c.witnesses]

    def to_json(self):
        return {"axiom": self.axiom_id, "passed": self.passed,
                "clauses": [c.to_json(self.complex) for c in self.clauses],
                "trust_notes": self.notes}


def _locus_complex_dim(K, ids):
    """Complex dimension of the closure of a union of open simplices."""
    if not ids:
        return None
    top = max(K.sdim(i) for i in ids)
    if top % 2 != 0:
        raise AxiomInputError(
            "support locus has odd real dimension %d; "
            "the complex is not locally constant on even-dimensional strata" % top)
    return top // 2


def support_locus(S, a, mode="stalk", within=None, costalks=None):
    """Open simplices with nonzero degree-a stalk (or costalk) cohomology.

    Returns (ids, real_dim, complex_dim); dimensions are those of the
    closure of the locus (None for the empty locus).
    """
    K = S.complex
    ids = set(within) if within is not None else set(S.domain.ids)
    out = []
    for sid in sorted(ids):
        if mode == "stalk":
            val = S.stalk_cohomology(sid).get(a, 0)
        else:
            table = costalks[sid] if costalks is not None else sec.cell_costalk(S, sid)
            val = table.get(a, 0)
        if val:
            out.append(sid)
    if not out:
        return out, None, None
    real = max(K.sdim(i) for i in out)
    return out, real, _locus_complex_dim(K, out)


def _normalization_clause(S, filt, clause_name, domains):
    """Stalk concentration in degree −m with invertible restrictions on each V^m."""
    K = S.complex
    witnesses = []
    for m, dom in sorted(domains.items()):
        Hm = None
        for sid in sorted(dom.ids):
            table = S.stalk_cohomology(sid)
            if set(table) - {-m}:
                bad = next(q for q in sorted(table) if q != -m and table[q])
                witnesses.append(Witness("stalk", clause_name, [sid], bad,
                                         None, None, m=m))
                break
        else:
            Hm = sec.cohomology_sheaf(S, -m)
            for (s, t) in Hm.cover_pairs():
                if s in dom.ids and t in dom.ids:
                    if Hm.dim(s) != Hm.dim(t) or (
                            Hm.dim(s) and not mx.is_invertible(Hm.F, Hm.restriction_matrix(s, t))):
                        witnesses.append(Witness("restriction", clause_name,
                                                 [s, t], -m, None, None, m=m))
                        break
    return ClauseResult(clause_name,
                        "restriction to each open dense piece is a local system "
                        "shifted by its complex dimension",
                        not witnesses, witnesses)


def check_ax1(S, strat):
    """Stratification-dependent axioms for a complex on the whole space."""
    K = strat.complex
    if S.domain != K.full_set():
        raise AxiomInputError("the complex must be defined on the whole space")
    n = strat.n
    filt = compute_open_filtration(strat)
    clauses = [_normalization_clause(S, filt, "a", filt.U_m)]

    # (b) vanishing above the cutoff on W_{k+1}
    witnesses = []
    lo, hi = S.degree_range()
    for k in range(1, n + 1):
        cutoff = k - 1 - n
        for a in range(cutoff + 1, hi + 1):
            ids = [sid for sid in sorted(filt.W[k + 1].ids)
                   if S.stalk_cohomology(sid).get(a, 0)]
            if ids:
                real = max(K.sdim(i) for i in ids)
                witnesses.append(Witness("stalk", "b", ids, a,
                                         _locus_complex_dim(K, ids), cutoff, m=k))
    clauses.append(ClauseResult(
        "b", "cohomology sheaves vanish above the middle-perversity cutoff on each W_{k+1}",
        not witnesses, witnesses))

    # (c) attaching, as costalk vanishing on the non-open strata
    witnesses = []
    costalk_cache = {}
    for k in range(1, n + 1):
        zone = filt.U[k + 1].difference(filt.U[k])
        for sid in sorted(zone.ids):
            table = costalk_cache.get(sid)
            if table is None:
                table = sec.cell_costalk(S, sid)
                costalk_cache[sid] = table
            bad = [a for a, d in table.items() if d and a <= n - k]
            if bad:
                witnesses.append(Witness("costalk", "c", [sid], min(bad),
                                         None, n - k, m=k))
    clauses.append(ClauseResult(
        "c", "costalks vanish in degrees ≤ n−k across the non-open codimension-k strata",
        not witnesses, witnesses))
    return AxiomReport("ax1", K, clauses)


def check_ax2(S, strat, v_domains=None, costalks=None):
    """Stratification-independent axioms, checked on V^m (default: U^m).

    The complex must be locally constant along the given strata; that is an
    input error, not a FAIL.  Support loci live in the closures X^m.
    """
    K = strat.complex
    if S.domain != K.full_set():
        raise AxiomInputError("the complex must be defined on the whole space")
    ok, witness = sec.is_clc(S, strat)
    if not ok:
        raise AxiomInputError(
            "complex is not locally constant on the strata: %r" % (witness,))
    n = strat.n
    filt = compute_open_filtration(strat)
    domains = v_domains if v_domains is not None else filt.U_m
    closures = {m: dom.down_closure() for m, dom in domains.items()}
    clauses = [_normalization_clause(S, filt, "a", domains)]
    lo, hi = S.degree_range()

    if costalks is None:
        costalks = {sid: sec.cell_costalk(S, sid) for sid in sorted(S.domain.ids)}
    crange = sorted({a for t in costalks.values() for a in t})

    support_w, cosupport_w = [], []
    for m in sorted(domains):
        xm = closures[m]
        for a in range(-m + 1, hi + 1):
            ids, real, cdim = support_locus(S, a, "stalk", within=xm.ids)
            if ids and cdim >= -a:
                support_w.append(Witness("stalk", "b", ids, a, cdim, -a, m=m))
        for a in (x for x in crange if x < m):
            ids, real, cdim = support_locus(S, a, "costalk", within=xm.ids,
                                            costalks=costalks)
            if ids and cdim >= a:
                cosupport_w.append(Witness("costalk", "c", ids, a, cdim, a, m=m))
    clauses.append(ClauseResult(
        "b", "stalk support loci in each X^m have complex dimension < −a",
        not support_w, support_w))
    clauses.append(ClauseResult(
        "c", "costalk support loci in each X^m have complex dimension < a",
        not cosupport_w, cosupport_w))
    return AxiomReport("ax2", K, clauses)


def check_classic_ax2(S, n=None, costalks=None):
    """The single-perversity global support/cosupport system.

    Correct for pure-dimensional spaces; on direct sums over components of
    different dimensions it fails, which is the point of keeping it.
    """
    K = S.complex
    if n is None:
        n = K.dim // 2
    lo, hi = S.degree_range()
    clauses = []

    # (a) normalization off a small closed subset: carve out the largest
    # open set where the complex is a shifted local system, then bound the
    # complement's dimension
    conc = {sid for sid in S.domain.ids
            if set(S.stalk_cohomology(sid)) == {-n}}
    v_ids = {sid for sid in conc if set(K.up_set(sid)) <= conc}
    Hn = sec.cohomology_sheaf(S, -n)
    changed = True
    while changed:
        changed = False
        for (s, t) in Hn.cover_pairs():
            if s in v_ids and t in v_ids:
                if Hn.dim(s) != Hn.dim(t) or (
                        Hn.dim(s) and not mx.is_invertible(Hn.F, Hn.restriction_matrix(s, t))):
                    v_ids -= set(K.down_set(s))
                    changed = True
    V = K.simplex_set(v_ids)
    witnesses = []
    sigma = V.complement()
    ok = len(V) > 0
    if not ok:
        witnesses.append(Witness("stalk", "a", [], -n, None, None))
    elif len(sigma) and sigma.max_real_dim() > 2 * (n - 1):
        ok = False
        witnesses.append(Witness("stalk", "a", sorted(sigma.ids),
                                 -n, sigma.max_real_dim() // 2, n - 1))
    clauses.append(ClauseResult(
        "a", "local system in degree −n off a closed subset of complex dimension < n",
        ok, witnesses))

    # (b) lower bound
    witnesses = []
    for a in range(lo, -n):
        ids, real, cdim = support_locus(S, a, "stalk")
        if ids:
            witnesses.append(Witness("stalk", "b", ids, a, cdim, None))
    clauses.append(ClauseResult("b", "no cohomology below degree −n",
                                not witnesses, witnesses))

    # (c) support, (d) cosupport -- global loci
    if costalks is None:
        costalks = {sid: sec.cell_costalk(S, sid) for sid in sorted(S.domain.ids)}
    crange = sorted({a for t in costalks.values() for a in t})
    support_w, cosupport_w = [], []
    for a in range(-n + 1, hi + 1):
        ids, real, cdim = support_locus(S, a, "stalk")
        if ids and cdim >= -a:
            support_w.append(Witness("stalk", "c", ids, a, cdim, -a))
    for a in (x for x in crange if x < n):
        ids, real, cdim = support_locus(S, a, "costalk", costalks=costalks)
        if ids and cdim >= a:
            cosupport_w.append(Witness("costalk", "d", ids, a, cdim, a))
    clauses.append(ClauseResult("c", "global stalk support loci have complex dimension < −a",
                                not support_w, support_w))
    clauses.append(ClauseResult("d", "global costalk support loci have complex dimension < a",
                                not cosupport_w, cosupport_w))
    return AxiomReport("classic-ax2", K, clauses)
