"""Zeta series of lattices over orders.

A partial zeta series between two isomorphism classes counts, per colength,
the full stable sublattices of a representative of the first class that are
isomorphic to the second; arranging these over a catalog of classes gives a
square matrix of truncated series with unit diagonal constant terms.  This
module computes those matrices, reconstructs their determinants as rational
functions in T (the variable standing for p^(-s)), checks the closed product
formula for the determinant, checks integrality of the inverse matrix,
computes the ideal-counting zeta series of the order itself together with its
self-duality (functional) equation, and verifies the one-class peeling
identity that block-triangularizes a zeta matrix along a subcategory chain.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import chainring as cr
from . import orders
from .errors import (
    CatalogIncomplete,
    CheckFailed,
    EmptyChainStep,
    NonIntegralScale,
    NotGorenstein,
    PrecisionExhausted,
    UnsupportedModule,
)
from .orders import OrderContext, OrderSpec, _as_module
from .series import (
    RatFunc,
    TruncSeries,
    fit_rational_auto,
    poly_mul,
    poly_trim,
)

ZERO_CLASS_LABEL = "0"


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class PartialZeta:
    """Counting series of sublattices of one class isomorphic to another.

    ``series`` coefficient k is the number of full stable sublattices N of a
    representative of class ``row_label`` with N isomorphic to the class
    ``col_label`` and colength k.
    """

    order_label: str
    module: tuple
    row_label: str
    col_label: str
    series: TruncSeries


@dataclass(frozen=True)
class ZetaMatrix:
    """Square matrix of partial zeta series over a catalog of classes.

    ``labels`` fixes the row/column order; ``series[i][j]`` counts sublattices
    of class ``labels[i]`` isomorphic to class ``labels[j]``.  ``catalog`` is
    the backing class catalog (None for the zero module, whose only class is
    the zero lattice).
    """

    order_label: str
    module: tuple
    labels: tuple
    series: tuple
    truncation: int
    catalog: object = None

    @property
    def size(self) -> int:
        return len(self.labels)

    def index_of(self, label) -> int:
        for i, lab in enumerate(self.labels):
            if lab == label:
                return i
        raise KeyError(label)

    def entry(self, row_label, col_label) -> TruncSeries:
        return self.series[self.index_of(row_label)][self.index_of(col_label)]

    def partials(self):
        return [
            PartialZeta(self.order_label, self.module, rl, cl,
                        self.series[i][j])
            for i, rl in enumerate(self.labels)
            for j, cl in enumerate(self.labels)
        ]


@dataclass(frozen=True)
class DetFactor:
    """One factor (1 - coeff * T^tpow) ** exponent of the determinant formula."""

    coeff: int
    tpow: int
    exponent: int

    def rational(self) -> RatFunc:
        base = [Fraction(1)] + [Fraction(0)] * (self.tpow - 1) + [Fraction(-self.coeff)]
        out = RatFunc((Fraction(1),))
        for _ in range(abs(self.exponent)):
            out = out * RatFunc(base) if self.exponent > 0 else out / RatFunc(base)
        return out


@dataclass(frozen=True)
class DetReport:
    """Direct determinant vs. the closed product formula."""

    order_label: str
    module: tuple
    determinant: RatFunc
    factors: tuple
    formula: RatFunc
    verdict: bool


# ---------------------------------------------------------------------------
# helpers


_P_LABEL = re.compile(r"^P_(\d+)$")
_L_LABEL = re.compile(r"^Lambda_(\d+)$")


def _display_order(labels):
    """Presentation permutation: P-numbered labels ascending, Lambda-numbered
    labels descending (the order in which the worked examples print them),
    anything else in catalog order."""
    idx = list(range(len(labels)))
    if labels and all(_P_LABEL.match(l) for l in labels):
        return sorted(idx, key=lambda i: int(_P_LABEL.match(labels[i]).group(1)))
    if labels and all(_L_LABEL.match(l) for l in labels):
        return sorted(idx, key=lambda i: -int(_L_LABEL.match(labels[i]).group(1)))
    return idx


def _int_series(counts, order) -> TruncSeries:
    return TruncSeries([Fraction(c) for c in counts[: order + 1]], order)


def _class_walk_counts(ctx: OrderContext, catalog, row_index: int,
                       truncation: int, budget: int):
    """Counts per (class, colength) of the stable sublattices of the class
    representative ``row_index``, from a single walk of its sublattice tree."""
    key = ("zeta_row", catalog.module.mults, row_index, truncation, budget)
    if key in ctx._misc:
        return ctx._misc[key]
    L = catalog.entry(row_index).lattice
    counts = [[0] * (truncation + 1) for _ in range(catalog.size)]
    for N, c in orders.iter_stable_sublattices(L, truncation, budget=budget):
        counts[catalog.classify(N)][c] += 1
    ctx._misc[key] = counts
    return counts


def _zero_module_matrix(ctx: OrderContext, module, truncation: int) -> ZetaMatrix:
    one = TruncSeries.one(truncation)
    return ZetaMatrix(ctx.spec.label, module.mults, (ZERO_CLASS_LABEL,),
                      ((one,),), truncation, None)


# ---------------------------------------------------------------------------
# partial zeta and zeta matrices


def partial_zeta(ctx: OrderContext, module, row_label, col_label,
                 truncation: int,
                 budget: int = orders._SUBLATTICE_BUDGET) -> PartialZeta:
    """The counting series of sublattices of class ``row_label`` isomorphic
    to class ``col_label``, to the given truncation order."""
    module = _as_module(module)
    if module.total == 0:
        if row_label != ZERO_CLASS_LABEL or col_label != ZERO_CLASS_LABEL:
            raise CatalogIncomplete("the zero module has only the zero class")
        return PartialZeta(ctx.spec.label, module.mults, row_label, col_label,
                           TruncSeries.one(truncation))
    catalog = orders.full_lattice_catalog(ctx, module)
    try:
        i = catalog.index_of_label(row_label)
        j = catalog.index_of_label(col_label)
    except KeyError as exc:
        raise CatalogIncomplete(f"unknown class label {exc.args[0]!r}") from exc
    counts = _class_walk_counts(ctx, catalog, i, truncation, budget)
    return PartialZeta(ctx.spec.label, module.mults, row_label, col_label,
                       _int_series(counts[j], truncation))


def zeta_matrix(ctx: OrderContext, module, truncation: int,
                budget: int = orders._SUBLATTICE_BUDGET) -> ZetaMatrix:
    """The full matrix of partial zeta series over the class catalog of the
    module, rows and columns in presentation order."""
    module = _as_module(module)
    if module.total == 0:
        return _zero_module_matrix(ctx, module, truncation)
    catalog = orders.full_lattice_catalog(ctx, module)
    labels = catalog.labels()
    perm = _display_order(labels)
    all_counts = [
        _class_walk_counts(ctx, catalog, i, truncation, budget)
        for i in range(catalog.size)
    ]
    series = tuple(
        tuple(_int_series(all_counts[pi][pj], truncation) for pj in perm)
        for pi in perm
    )
    return ZetaMatrix(ctx.spec.label, module.mults,
                      tuple(labels[i] for i in perm), series, truncation,
                      catalog)


def zeta_matrix_sub(ctx: OrderContext, module, truncation: int, labels,
                    budget: int = orders._SUBLATTICE_BUDGET) -> ZetaMatrix:
    """Zeta matrix restricted to a subset of the catalog's class labels, kept
    in the order given.  The entries are the same partial zeta series as in
    the full matrix; only the index set shrinks."""
    module = _as_module(module)
    if module.total == 0:
        if list(labels) != [ZERO_CLASS_LABEL]:
            raise CatalogIncomplete("the zero module has only the zero class")
        return _zero_module_matrix(ctx, module, truncation)
    catalog = orders.full_lattice_catalog(ctx, module)
    try:
        idxs = [catalog.index_of_label(l) for l in labels]
    except KeyError as exc:
        raise CatalogIncomplete(f"unknown class label {exc.args[0]!r}") from exc
    rows = []
    for i in idxs:
        counts = _class_walk_counts(ctx, catalog, i, truncation, budget)
        rows.append(tuple(_int_series(counts[j], truncation) for j in idxs))
    return ZetaMatrix(ctx.spec.label, module.mults, tuple(labels),
                      tuple(rows), truncation, catalog)


def row_sum_series(zm: ZetaMatrix, row_label) -> TruncSeries:
    """Sum over all columns of one row: the iso-class-free count of stable
    sublattices of the row class, per colength."""
    i = zm.index_of(row_label)
    total = TruncSeries.zero(zm.truncation)
    for s in zm.series[i]:
        total = total + s
    return total


# ---------------------------------------------------------------------------
# determinant and inverse


def _det_series(zm: ZetaMatrix) -> TruncSeries:
    """Determinant of the series matrix by elimination with exact rational
    coefficients.  Every diagonal entry has constant term 1 and every
    off-diagonal entry constant term 0, and elimination preserves that, so
    the pivots are always invertible series."""
    n = zm.size
    A = [[zm.series[i][j] for j in range(n)] for i in range(n)]
    det = TruncSeries.one(zm.truncation)
    sign = 1
    for k in range(n):
        piv = None
        for r in range(k, n):
            if A[r][k].coeffs[0] != 0:
                piv = r
                break
        if piv is None:
            raise CheckFailed("series matrix lost every unit pivot during "
                              "elimination; not a zeta matrix")
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        det = det * A[k][k]
        inv = A[k][k].invert()
        for r in range(k + 1, n):
            if A[r][k].is_zero():
                continue
            f = A[r][k] * inv
            for c in range(k, n):
                A[r][c] = A[r][c] - f * A[k][c]
    if sign < 0:
        det = -det
    for c in det.coeffs:
        if Fraction(c).denominator != 1:
            raise CheckFailed("determinant series has a non-integer "
                              "coefficient; elimination lost exactness")
    return det


def det_zeta(zm: ZetaMatrix) -> RatFunc:
    """Rational reconstruction of the determinant of the zeta matrix."""
    return fit_rational_auto(_det_series(zm))


def verify_solomon2(ctx: OrderContext, module, truncation: int,
                    budget: int = orders._SUBLATTICE_BUDGET) -> DetReport:
    """Compare the zeta-matrix determinant with the closed product formula.

    The formula multiplies, over each component j of the ambient semisimple
    algebra and each n below the multiplicity of simple j in the module, the
    factor (1 - q_j^n * T^(length_j)) to the power minus the number of full
    lattice classes in the module obtained by replacing the j-th multiplicity
    with n; the count for the zero module is 1 (the zero lattice).  All
    structured realizations here have residue size q_j = p.
    """
    module = _as_module(module)
    zm = zeta_matrix(ctx, module, truncation, budget=budget)
    direct = det_zeta(zm)
    semi = ctx.semisimple
    factors = []
    formula = RatFunc((Fraction(1),))
    for j in range(semi.ncomp):
        q = semi.residue_sizes[j]
        tpow = semi.lengths[j]
        for n in range(module.mults[j]):
            sub = list(module.mults)
            sub[j] = n
            if sum(sub) == 0:
                cnt = 1
            else:
                cnt = orders.full_lattice_catalog(ctx, tuple(sub)).size
            fac = DetFactor(q ** n, tpow, -cnt)
            factors.append(fac)
            formula = formula * fac.rational()
    verdict = direct == formula
    return DetReport(ctx.spec.label, module.mults, direct, tuple(factors),
                     formula, verdict)


def _inverse_series_matrix(zm: ZetaMatrix):
    """Inverse of the series matrix by elimination on the augmented matrix."""
    n = zm.size
    A = [[zm.series[i][j] for j in range(n)] for i in range(n)]
    one = TruncSeries.one(zm.truncation)
    zero = TruncSeries.zero(zm.truncation)
    B = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = None
        for r in range(k, n):
            if A[r][k].coeffs[0] != 0:
                piv = r
                break
        if piv is None:
            raise CheckFailed("series matrix is not invertible at order 0")
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            B[k], B[piv] = B[piv], B[k]
        inv = A[k][k].invert()
        A[k] = [x * inv for x in A[k]]
        B[k] = [x * inv for x in B[k]]
        for r in range(n):
            if r == k or A[r][k].is_zero():
                continue
            f = A[r][k]
            A[r] = [a - f * ak for a, ak in zip(A[r], A[k])]
            B[r] = [b - f * bk for b, bk in zip(B[r], B[k])]
    return B


def verify_inverse_polynomial(zm: ZetaMatrix) -> bool:
    """Whether every entry of the inverse of the zeta matrix reconstructs to
    a polynomial in T with integer coefficients."""
    inv = _inverse_series_matrix(zm)
    for row in inv:
        for s in row:
            f = fit_rational_auto(s)
            if len(f.den) != 1 or f.den[0] != 1:
                return False
            if any(Fraction(c).denominator != 1 for c in f.num):
                return False
    return True


# ---------------------------------------------------------------------------
# the order's own zeta series and its functional equation


def whole_zeta(ctx: OrderContext, truncation: int,
               budget: int = orders._SUBLATTICE_BUDGET) -> TruncSeries:
    """Counting series of all finite-colength stable sublattices of the
    regular lattice (ideals of the order), per colength.  Equals the row sum
    of the regular-module zeta matrix at the regular class."""
    counts = [0] * (truncation + 1)
    reg = ctx.regular_lattice()
    for _N, c in orders.iter_stable_sublattices(reg, truncation,
                                                budget=budget):
        counts[c] += 1
    return _int_series(counts, truncation)


def maximal_overring_context(ctx: OrderContext) -> OrderContext:
    """The maximal-order realization sharing the coordinate model of the
    given structured variant (level-0 congruence or cusp presentation; tiled
    with all exponents zero)."""
    spec = ctx.spec
    if spec.variant == "congruence":
        gspec = OrderSpec.congruence(0)
    elif spec.variant == "cusp":
        gspec = OrderSpec.cusp(0)
    elif spec.variant == "tiled":
        gspec = OrderSpec.tiled([[0] * spec.n for _ in range(spec.n)])
    else:
        raise UnsupportedModule(
            "no structured maximal overring is known for the generic variant")
    return OrderContext(gspec, ctx.p, ctx.flavor, ctx.precision)


def _reciprocal_pair(f: RatFunc, p: int):
    """Numerator/denominator pair of f(1/(pT)), cleared of the common T
    power: (T^d N(1/(pT)), T^d D(1/(pT))) with d the larger degree.  Kept as
    a raw pair because the substituted function may have a pole at T = 0."""
    d = max(len(f.num), len(f.den)) - 1
    s = Fraction(p)

    def tilde(P):
        out = [Fraction(0)] * (d + 1)
        for k, ck in enumerate(P):
            out[d - k] = ck * s ** (-k)
        return poly_trim(out)

    return tilde(f.num), tilde(f.den)


def functional_equation_check(ctx: OrderContext, truncation: int,
                              budget: int = orders._SUBLATTICE_BUDGET) -> bool:
    """Self-duality of the ideal zeta series against the maximal overring.

    With G the maximal overring sharing the coordinate model, index p^c over
    the order, and f* denoting the substitution T -> 1/(pT), the identity

        zeta_order(T) * zeta_G*(T) == p^c * T^(2c) * zeta_G(T) * zeta_order*(T)

    is checked as an exact polynomial cross-multiplication (the substituted
    factors may individually carry a pole at T = 0 that only the full
    combination cancels).  Requires the regular lattice to be injective among
    lattices (NotGorenstein otherwise, since self-duality fails without a
    dualizing regular module).
    """
    if not orders.is_injective_lattice(ctx, ctx.regular_lattice()):
        raise NotGorenstein(
            f"{ctx.spec.label}: the regular lattice is not injective; "
            "the zeta self-duality requires a Gorenstein order")
    gam = maximal_overring_context(ctx)
    c = cr.colength_in(ctx.ring,
                       [list(r) for r in gam.regular_lattice().rows],
                       [list(r) for r in ctx.regular_lattice().rows])
    z_ord = fit_rational_auto(whole_zeta(ctx, truncation, budget=budget))
    z_max = fit_rational_auto(whole_zeta(gam, truncation, budget=budget))
    p = ctx.p
    num_os, den_os = _reciprocal_pair(z_ord, p)
    num_ms, den_ms = _reciprocal_pair(z_max, p)
    mono = [Fraction(0)] * (2 * c) + [Fraction(p) ** c]
    lhs = poly_mul(poly_mul(z_ord.num, num_ms),
                   poly_mul(z_max.den, den_os))
    rhs = poly_mul(mono, poly_mul(poly_mul(z_max.num, num_os),
                                  poly_mul(z_ord.den, den_ms)))
    return poly_trim(lhs) == poly_trim(rhs)


# ---------------------------------------------------------------------------
# the one-class peeling identity


def _step_parts(step):
    """Normalize a chain step to (ctx, kept labels, remaining labels, removed).

    Accepts a (ctx, ind_labels, removed_label) tuple or any object with
    ``ctx``, ``before`` (indecomposable class labels of the larger
    subcategory) and ``removed`` attributes.
    """
    if step is None:
        raise EmptyChainStep("no chain step to verify")
    if isinstance(step, tuple):
        ctx, before, removed = step
    else:
        ctx, before, removed = step.ctx, step.before, step.removed
    before = tuple(before)
    if removed is None or removed not in before:
        raise EmptyChainStep(
            f"step does not remove a class of its subcategory: {removed!r}")
    after = tuple(l for l in before if l != removed)
    if not after:
        raise EmptyChainStep(
            "removing the class would empty the subcategory; terminal "
            "categories are not peeled")
    return ctx, before, after, removed


def _block_offsets(space):
    return {(j, c): (off, d) for (j, c, off, d) in space.blocks}


def _embed_rows(rows, src_space, dst_space, copy_shift):
    """Re-place lattice rows, sending copy c of component j to copy
    copy_shift[j] + c of the destination space."""
    dst = _block_offsets(dst_space)
    out = []
    for r in rows:
        v = [0] * dst_space.dim
        for (j, c, off, d) in src_space.blocks:
            o2, _w = dst[(j, copy_shift[j] + c)]
            v[o2:o2 + d] = r[off:off + d]
        out.append(v)
    return out


def _normalized_rep(L):
    X = orders.class_normal_form(L)
    if X.denom != 0:
        raise CheckFailed("class representative kept a denominator after "
                          "normalization")
    return X


def _direct_sum_lattice(ctx: OrderContext, parts, module):
    """The block-diagonal lattice with the given part lattices, placed in
    consecutive copy slots of the module's space."""
    sp = ctx.space(module)
    shift = [0] * ctx.semisimple.ncomp
    rows = []
    for part in parts:
        part = _normalized_rep(part)
        rows.extend(_embed_rows([list(r) for r in part.rows],
                                part.space, sp, shift))
        for j in range(ctx.semisimple.ncomp):
            shift[j] += part.space.module.mults[j]
    return orders.make_lattice(sp, rows)


def class_summand_labels(ctx: OrderContext, module):
    """Indecomposable-class label multiset of every full-lattice class of the
    module, as a mapping from class label to a sorted tuple of labels."""
    module = _as_module(module)
    key = ("summands", module.mults)
    if key in ctx._misc:
        return ctx._misc[key]
    cat = orders.full_lattice_catalog(ctx, module)
    ind = orders.ind_lattices(ctx)
    out = {}
    for e in cat.entries:
        parts = orders.decompose_lattice(e.lattice)
        out[e.label] = tuple(sorted(
            ind.entry(ind.classify(P)).label for P in parts))
    ctx._misc[key] = out
    return out


def _hom_lattice_rows(ctx: OrderContext, X, L):
    """Rows spanning a fixed rescale of the lattice of maps X -> L inside the
    flattened space of K-linear maps from X's span to L's ambient module.

    The rescale (by pi to the largest elementary-divisor exponent of X's
    rows) keeps the inverse-basis factor integral and is the same for every
    target L, so it cancels in every index of two such row lattices.  Rows
    are value-cut: the map generators are exact at working precision but
    their products carry junk above the guard window.
    """
    R = ctx.ring
    Xrows = [list(r) for r in _normalized_rep(X).rows]
    exps, U, V = cr.smith(R, [list(r) for r in Xrows])
    if any(e is cr.INF for e in exps):
        raise PrecisionExhausted("full lattice with a vanishing elementary "
                                 "divisor at working precision")
    eX = max(exps)
    k = len(Xrows)
    D = [[R.pi_power(eX - exps[i]) if i == j else 0 for j in range(k)]
         for i in range(k)]
    P = cr.mat_mul(R, cr.mat_mul(R, V, D), U)
    Ln = _normalized_rep(L)
    Lrows = [list(r) for r in Ln.rows]
    rows = []
    for C in orders.hom_generators(X, Ln):
        phi = cr.mat_mul(R, cr.mat_mul(R, P, C), Lrows)
        rows.append([x for row in phi for x in row])
    return orders._clean_rows(R, rows)


def _shift_scale_coeffs(series: TruncSeries, a: Fraction, delta: Fraction,
                        p: int) -> TruncSeries:
    """Coefficientwise rescale c_k -> p^(a*k + delta) * c_k with exact
    rational exponents; NonIntegralScale if a nonzero coefficient would pick
    up a fractional power of p."""
    out = []
    for k, c in enumerate(series.coeffs):
        if c == 0:
            out.append(Fraction(0))
            continue
        e = a * k + delta
        if e.denominator != 1:
            raise NonIntegralScale(
                f"coefficient {k} would be scaled by p^({e}), "
                "not an integral power")
        out.append(c * Fraction(p) ** int(e))
    return TruncSeries(out, series.order)


def verify_block_lemma(step, module, truncation: int,
                       budget: int = orders._SUBLATTICE_BUDGET) -> bool:
    """Verify the one-class peeling identity on a subcategory chain step.

    Let C be the additive category of the step's indecomposable classes, X
    the removed class, C' the rest.  Ordering the classes of full lattices in
    the module that lie in C as (classes with an X summand, then classes in
    C'), the identity states that subtracting from each X-summand row its
    trace-approximation row (weighted by T^colength of the approximation)
    leaves zeros in the C' columns and, in the X-summand columns, a conjugated
    and shift-scaled copy of the C zeta matrix of the module quotiented by
    X's span.  All comparisons are entrywise on truncated series.

    The conjugation exponents compare indices of map-lattices and of the
    lattices themselves against a fixed reference (the standard lattice of
    the quotient module); the shift scales coefficient k by p^(a k) with a
    the span-length ratio.  Both can demand fractional powers of p, in which
    case NonIntegralScale is raised.
    """
    ctx, before, after, removed = _step_parts(step)
    module = _as_module(module)
    ind = orders.ind_lattices(ctx)
    for lab in before:
        ind.index_of_label(lab)
    X = _normalized_rep(ind.entry(ind.index_of_label(removed)).lattice)
    mults_X = X.space.module.mults

    summands = class_summand_labels(ctx, module)
    cat = orders.full_lattice_catalog(ctx, module)
    in_C = [e.label for e in cat.entries
            if all(s in before for s in summands[e.label])]
    if not in_C:
        return True
    top = [l for l in in_C if removed in summands[l]]
    bottom = [l for l in in_C if removed not in summands[l]]
    if not top:
        return True

    quot = tuple(m - x for m, x in zip(module.mults, mults_X))
    if any(q < 0 for q in quot):
        raise CheckFailed("removed class spans more than the module")
    a = Fraction(sum(mults_X), sum(ctx.semisimple.lengths))
    p = ctx.p

    # classes of the quotient module lying in C, each paired with the class
    # of its direct sum with X; these must exhaust the X-summand classes
    if sum(quot) == 0:
        sub_labels = [ZERO_CLASS_LABEL]
        sub_lattices = [None]
        zm_sub = _zero_module_matrix(ctx, _as_module(quot), truncation)
    else:
        qsummands = class_summand_labels(ctx, quot)
        qcat = orders.full_lattice_catalog(ctx, quot)
        sub_labels = [e.label for e in qcat.entries
                      if all(s in before for s in qsummands[e.label])]
        sub_lattices = [qcat.entry(qcat.index_of_label(l)).lattice
                        for l in sub_labels]
        zm_sub = zeta_matrix_sub(ctx, quot, truncation, sub_labels,
                                 budget=budget)

    pair_label = {}
    for l, Lq in zip(sub_labels, sub_lattices):
        parts = [X] if Lq is None else [X, Lq]
        S = _direct_sum_lattice(ctx, parts, module)
        pair_label[l] = cat.entry(cat.classify(S)).label
    if sorted(pair_label.values()) != sorted(top):
        raise CheckFailed(
            "direct sums with the removed class do not biject onto the "
            f"X-summand classes: {sorted(pair_label.values())} vs {sorted(top)}")

    # the trace approximation of X from the remaining classes
    sources = [ind.entry(ind.index_of_label(l)).lattice for l in after]
    Y = orders.trace_lattice(X, sources)
    if Y.rank < X.rank:
        gamma = None
    else:
        gamma = orders.lattice_colength(X, Y)
        ylabel = {}
        for l, Lq in zip(sub_labels, sub_lattices):
            parts = [Y] if Lq is None else [Y, Lq]
            S = _direct_sum_lattice(ctx, parts, module)
            lab = cat.entry(cat.classify(S)).label
            if lab not in in_C:
                raise CheckFailed(
                    "trace approximation leaves the subcategory; the step "
                    "is not rejective")
            ylabel[l] = lab

    # conjugation exponents against the standard reference of the quotient
    if len(sub_labels) > 1:
        ref = orders.standard_lattice(ctx, quot)
        ref_hom = _hom_lattice_rows(ctx, X, ref)
        ref_rows = [list(r) for r in _normalized_rep(ref).rows]
        b_exp = {}
        for l, Lq in zip(sub_labels, sub_lattices):
            h = cr.index_exponent(ctx.ring, _hom_lattice_rows(ctx, X, Lq),
                                  ref_hom)
            c = cr.index_exponent(ctx.ring,
                                  [list(r) for r in _normalized_rep(Lq).rows],
                                  ref_rows)
            b_exp[l] = Fraction(h) - a * c
    else:
        b_exp = {l: Fraction(0) for l in sub_labels}

    order_labels = [pair_label[l] for l in sub_labels] + bottom
    zm = zeta_matrix_sub(ctx, module, truncation, order_labels, budget=budget)
    # a correction of colength beyond the truncation is identically zero at
    # this order, so the subtraction is skipped
    subtract = gamma is not None and gamma <= truncation
    tgam = TruncSeries.monomial(gamma, truncation) if subtract else None

    for l in sub_labels:
        i = zm.index_of(pair_label[l])
        row = list(zm.series[i])
        if subtract:
            iy = zm.index_of(ylabel[l])
            row = [x - tgam * y for x, y in zip(row, zm.series[iy])]
        for bl in bottom:
            if not row[zm.index_of(bl)].is_zero():
                return False
        for l2 in sub_labels:
            expected = _shift_scale_coeffs(
                zm_sub.entry(l, l2), a, b_exp[l] - b_exp[l2], p)
            if row[zm.index_of(pair_label[l2])] != expected:
                return False
    return True
