"""Sparse Gaussian reduction of cochain complexes.

A complex is presented by generator keys with integer degrees and a sparse
differential.  Eliminating an invertible entry is an exact homotopy
equivalence; exhaustive free elimination leaves a zero differential, so
the surviving generator counts are the cohomology dimensions.  In sheaf
mode (same_support=True) only entries between generators with the same
support simplex are eliminated, which keeps every move an isomorphism of
elementary down-set summands and hence an equivalence of complexes of
sheaves, slice by slice.
"""

import heapq


class SparseComplex:
    """A cochain complex with generator keys and a sparse differential."""

    def __init__(self, F):
        self.F = F
        self.degree = {}
        self.support = {}
        self.order = {}
        self.dout = {}
        self.din = {}
        self.ucols = {}
        self._counter = 0

    def add_gen(self, gid, degree, support=None):
        self.degree[gid] = degree
        if support is not None:
            self.support[gid] = support
        self.order[gid] = self._counter
        self._counter += 1

    def add_entry(self, g, h, val):
        F = self.F
        if F.is_zero(val):
            return
        row = self.dout.setdefault(g, {})
        cur = row.get(h)
        if cur is None:
            row[h] = val
            self.din.setdefault(h, {})[g] = val
        else:
            new = F.add(cur, val)
            if F.is_zero(new):
                del row[h]
                del self.din[h][g]
            else:
                row[h] = new
                self.din[h][g] = new

    def add_ucol(self, h, ext, val):
        if self.F.is_zero(val):
            return
        col = self.ucols.setdefault(h, {})
        cur = col.get(ext)
        new = val if cur is None else self.F.add(cur, val)
        if self.F.is_zero(new):
            col.pop(ext, None)
        else:
            col[ext] = new

    def _detach(self, g):
        for t in self.dout.pop(g, {}):
            del self.din[t][g]
        for s in self.din.pop(g, {}):
            del self.dout[s][g]
        self.ucols.pop(g, None)
        del self.degree[g]
        self.support.pop(g, None)
        del self.order[g]

    def eliminate(self, g, h):
        """Gaussian elimination of the differential entry g -> h."""
        F = self.F
        alpha = self.dout[g][h]
        ins = {s: a for s, a in self.din[h].items() if s != g}
        outs = {t: b for t, b in self.dout[g].items() if t != h}
        uh = dict(self.ucols.get(h, ()))
        self._detach(g)
        self._detach(h)
        inv = F.inv(alpha)
        for s, a in ins.items():
            coeff = F.mul(a, inv)
            for t, b in outs.items():
                self.add_entry(s, t, F.neg(F.mul(coeff, b)))
        for ext, a in uh.items():
            coeff = F.mul(a, inv)
            for t, b in outs.items():
                self.add_ucol(t, ext, F.neg(F.mul(coeff, b)))
        return ins, outs

    def _pivot_ok(self, g, h, same_support):
        if same_support:
            return self.support.get(g) == self.support.get(h)
        return True

    def reduce(self, same_support=False):
        """Exhaustively eliminate admissible pivots, deterministically.

        Uses lazy Markowitz ordering: candidates are kept in a heap keyed
        by (fill estimate, insertion order) and revalidated on pop.
        """
        heap = []

        def push(g, h):
            cost = (len(self.din.get(h, ())) - 1) * (len(self.dout.get(g, ())) - 1)
            heapq.heappush(heap, (cost, self.order[g], self.order[h], g, h))

        for g, row in self.dout.items():
            for h in row:
                if self._pivot_ok(g, h, same_support):
                    push(g, h)
        while heap:
            cost, _, _, g, h = heapq.heappop(heap)
            if g not in self.degree or h not in self.degree:
                continue
            val = self.dout.get(g, {}).get(h)
            if val is None:
                continue
            cur = (len(self.din.get(h, ())) - 1) * (len(self.dout.get(g, ())) - 1)
            if cur > cost:
                heapq.heappush(heap, (cur, self.order[g], self.order[h], g, h))
                continue
            ins, outs = self.eliminate(g, h)
            for s in ins:
                if s not in self.degree:
                    continue
                for t in self.dout.get(s, ()):
                    if self._pivot_ok(s, t, same_support):
                        push(s, t)

    def minimize_dims(self):
        """Free reduction to zero differential; returns degree -> dimension."""
        self.reduce(same_support=False)
        assert not any(self.dout.values())
        out = {}
        for g, d in self.degree.items():
            out[d] = out.get(d, 0) + 1
        return {d: n for d, n in sorted(out.items()) if n}

    def gens_sorted(self):
        return sorted(self.degree, key=lambda g: self.order[g])


