"""Chart decomposition of projective point counting.

Chart j of P^N fixes x_0 = ... = x_{j-1} = 0, x_j = 1 and leaves
x_{j+1}..x_N free, so every projective point is enumerated exactly once.
Generators are compiled per chart into flat term records consumed by the
counting kernels, with coefficients embedded into the extension field and
encoded as table indices.

Within a chart, one free variable is designated "inner": the kernels
enumerate all others and resolve the inner one per slice.  The inner
variable is the free variable of smallest maximal degree (ties to the last),
which keeps the per-slice univariate degree low; quadratic slices then admit
closed-form root counts.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass


@dataclass
class CompiledChart:
    chart: int
    nfree: int
    nprefix: int
    inner_var: int  # ambient variable index resolved per slice
    gen_terms: list  # list of array('q'), one per generator, possibly empty

    def max_last_deg(self):
        out = 0
        stride = 2 + self.nprefix
        for terms in self.gen_terms:
            for t in range(1, len(terms), stride):
                if terms[t] > out:
                    out = terms[t]
        return out

    def cheapest_gen_deg(self):
        stride = 2 + self.nprefix
        degs = []
        for terms in self.gen_terms:
            degs.append(max((terms[t] for t in range(1, len(terms), stride)), default=0))
        return min(degs) if degs else 0

    def term_count(self):
        stride = 2 + self.nprefix
        return sum(len(t) // stride for t in self.gen_terms)


def compile_charts(ideal, embedding, ext_index_of):
    """Compile every chart of the ideal for counting over the extension.

    ext_index_of maps an extension FieldElement to its table index.
    Generators identically zero on a chart are dropped there (they impose
    nothing); nonzero-constant restrictions are left to the kernels, which
    report zero points for such charts.
    """
    nvars = ideal.nvars
    coeff_index = {}

    def cidx(c):
        key = c.coeffs
        hit = coeff_index.get(key)
        if hit is None:
            hit = ext_index_of(embedding(c))
            coeff_index[key] = hit
        return hit

    charts = []
    for j in range(nvars):
        nfree = nvars - 1 - j
        free_vars = list(range(j + 1, nvars))
        # surviving terms per generator
        survivors = []
        for g in ideal.generators:
            terms = [
                (exps, c)
                for exps, c in g.terms.items()
                if not any(exps[i] for i in range(j))
            ]
            if terms:
                survivors.append(terms)
        if nfree == 0:
            charts.append(
                CompiledChart(chart=j, nfree=0, nprefix=0, inner_var=-1, gen_terms=[])
            )
            continue
        # inner variable: smallest max-degree across generators, ties last
        maxdeg = {v: 0 for v in free_vars}
        for terms in survivors:
            for exps, _ in terms:
                for v in free_vars:
                    if exps[v] > maxdeg[v]:
                        maxdeg[v] = exps[v]
        inner = max(free_vars, key=lambda v: (-maxdeg[v], v))
        prefix_vars = [v for v in free_vars if v != inner]
        nprefix = len(prefix_vars)
        stride = 2 + nprefix

        gen_terms = []
        for terms in survivors:
            flat = array("q")
            for exps, c in terms:
                rec = [cidx(c), exps[inner]]
                rec.extend(exps[v] for v in prefix_vars)
                flat.extend(rec)
            gen_terms.append(flat)

        def sort_key(terms):
            degs = [terms[t] for t in range(1, len(terms), stride)]
            return (max(degs, default=0), len(terms))

        gen_terms.sort(key=sort_key)
        charts.append(
            CompiledChart(
                chart=j,
                nfree=nfree,
                nprefix=nprefix,
                inner_var=inner,
                gen_terms=gen_terms,
            )
        )
    return charts


def evaluate_origin_chart(ideal, embedding, ext, chart_j):
    """Value test for the 0-free-variable chart (the point (0,..,0,1))."""
    nvars = ideal.nvars
    for g in ideal.generators:
        acc = ext.zero()
        for exps, c in g.terms.items():
            if any(exps[i] for i in range(nvars - 1)):
                continue
            acc = acc + embedding(c)
        if acc:
            return 0
    return 1
