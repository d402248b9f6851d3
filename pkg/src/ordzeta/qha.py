"""Rejective chains of additive subcategories, heredity chains of
endomorphism algebras, and representation-dimension bounds.

Two ambient contexts are supported: finite-dimensional algebras over a
prime field (objects are FinModule instances) and orders over a complete
local chain ring (objects are Lattice instances).  Chains are produced by
iterating the endomorphism-radical trace and every step is re-verified by
exact linear algebra: a monic right (or epic left) approximation is
exhibited through the trace (or reject) construction, and the vanishing of
the factor-category radical is decided by solving factoring equations.
No certificate is assumed from theory; failures raise rather than warn.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import chainring as cr
from . import fields as fd
from . import finmod
from . import orders
from . import zeta as zeta_mod
from .errors import (
    CatalogIncomplete,
    CheckFailed,
    HeredityFailed,
    NoStabilization,
    NotRightRejective,
    UnsupportedModule,
)
from .finmod import FinAlgebra, FinModule, INFINITY
from .orders import Lattice, OrderContext

_MAX_LAYERS = 64


# ---------------------------------------------------------------------------
# object-kind dispatch


def _obj_kind(obj) -> str:
    if isinstance(obj, FinModule):
        return "algebra"
    if isinstance(obj, Lattice):
        return "order"
    raise UnsupportedModule(
        f"chains are built over FinModule or Lattice objects, not {type(obj).__name__}")


def _iso(kind, X, Y) -> bool:
    if kind == "algebra":
        return finmod.certified_isomorphic(X, Y)
    return X.rank == Y.rank and orders.is_isomorphic(X, Y)


def _decompose(kind, X):
    if kind == "algebra":
        return finmod.decompose(X)
    return orders.decompose_lattice(X)


def _normalize(kind, X):
    if kind == "order":
        return orders.class_normal_form(X)
    return X


def _is_zero(kind, X) -> bool:
    return X.dim == 0 if kind == "algebra" else X.rank == 0


def _hom_mats(kind, X, Y):
    """Basis (algebra) or free generators (order) of the maps X -> Y as
    matrices in the row-vector convention."""
    if kind == "algebra":
        return finmod.hom_space(X, Y)
    return orders.hom_generators(X, Y)


# ---------------------------------------------------------------------------
# additive subcategories


@dataclass(frozen=True)
class AddSubcat:
    """Additive subcategory given by pairwise non-isomorphic indecomposable
    representatives; closure under finite sums and summands is implicit."""

    kind: str
    reps: tuple
    labels: tuple

    @property
    def size(self) -> int:
        return len(self.reps)

    def rep(self, label):
        return self.reps[self.labels.index(label)]

    def match(self, X):
        """Label of the class of X among the representatives, or None."""
        for lab, rp in zip(self.labels, self.reps):
            if _iso(self.kind, X, rp):
                return lab
        return None

    def restricted(self, labels) -> "AddSubcat":
        keep = [(l, r) for l, r in zip(self.labels, self.reps) if l in labels]
        return AddSubcat(self.kind,
                         tuple(r for _l, r in keep),
                         tuple(l for l, _r in keep))

    def __repr__(self):
        return f"AddSubcat({self.kind}, {list(self.labels)})"


def add_subcat(objects, labels=None, kind=None, validate=True) -> AddSubcat:
    """Build an additive subcategory from indecomposable representatives.

    ``kind`` is inferred from the objects when any are present; labels
    default to positional names.  With ``validate`` the representatives are
    checked to be pairwise non-isomorphic.
    """
    objects = list(objects)
    if objects:
        kind = _obj_kind(objects[0])
        for o in objects[1:]:
            if _obj_kind(o) != kind:
                raise UnsupportedModule("mixed object kinds in one subcategory")
    elif kind is None:
        raise UnsupportedModule("an empty subcategory needs an explicit kind")
    if labels is None:
        labels = tuple(f"X{i}" for i in range(len(objects)))
    labels = tuple(labels)
    if len(labels) != len(objects) or len(set(labels)) != len(labels):
        raise CheckFailed("subcategory labels must be distinct and match the objects")
    if validate:
        for i in range(len(objects)):
            for j in range(i + 1, len(objects)):
                if _iso(kind, objects[i], objects[j]):
                    raise CheckFailed(
                        f"representatives {labels[i]} and {labels[j]} are isomorphic")
    return AddSubcat(kind, tuple(objects), labels)


# ---------------------------------------------------------------------------
# approximations


@dataclass(frozen=True)
class ApproxWitness:
    """A monic right (or epic left) approximation certificate for one class.

    ``identity`` flags targets already inside the smaller subcategory.  For
    a right approximation the witness object is the trace of the smaller
    subcategory in the target and ``defect`` counts what the trace misses
    (codimension for algebra objects, colength for full-rank lattice
    traces, None for rank-deficient ones); for a left approximation it is
    the quotient by the reject and ``defect`` the dimension of the reject.
    ``summands`` lists the classes of the witness object.
    """

    target: str
    identity: bool
    summands: tuple
    defect: int | None


def _algebra_trace_rows(X: FinModule, sources):
    rows = []
    for Z in sources:
        for f in finmod.hom_space(Z, X):
            rows.extend(list(r) for r in f)
    return rows


def _match_parts(sub: AddSubcat, parts, target_label):
    labs = []
    for P in parts:
        lab = sub.match(_normalize(sub.kind, P))
        if lab is None:
            raise NotRightRejective(
                f"approximation of {target_label} has a summand outside the "
                "smaller subcategory")
        labs.append(lab)
    return tuple(sorted(labs))


def _monic_right_approx(sub: AddSubcat, X, label) -> ApproxWitness:
    """Certificate that X admits a monic right approximation by ``sub``.

    The trace of the subcategory in X (the sum of all map images) is the
    image of any right approximation, and the inclusion of the trace is one
    precisely when the trace lies in the subcategory's additive closure; so
    existence is decided by decomposing the trace and matching summands.
    """
    m = sub.match(X)
    if m is not None:
        return ApproxWitness(label, True, (m,), 0)
    if sub.kind == "algebra":
        T = finmod.submodule_module(X, _algebra_trace_rows(X, sub.reps))
        parts = finmod.decompose(T)
        defect = X.dim - T.dim
    else:
        T = orders.trace_lattice(X, list(sub.reps))
        parts = orders.decompose_lattice(T) if T.rank else []
        defect = orders.lattice_colength(X, T) if T.rank == X.rank else None
    return ApproxWitness(label, False, _match_parts(sub, parts, label), defect)


def _epic_left_approx(sub: AddSubcat, X, label) -> ApproxWitness:
    """Certificate that X admits an epic left approximation by ``sub``
    (algebra objects only): the projection onto X modulo the reject, the
    common kernel of all maps into the subcategory."""
    if sub.kind != "algebra":
        raise UnsupportedModule("left approximations are implemented for "
                                "algebra objects only")
    m = sub.match(X)
    if m is not None:
        return ApproxWitness(label, True, (m,), 0)
    F = X.A.F
    stacked = None
    for Z in sub.reps:
        for f in finmod.hom_space(X, Z):
            cols = [list(r) for r in f]
            if stacked is None:
                stacked = [list(row) for row in cols]
            else:
                for i, row in enumerate(cols):
                    stacked[i] = stacked[i] + row
    if stacked is None:
        rej_rows = fd.mat_identity(F, X.dim)
    else:
        rej_rows = fd.kernel_basis(F, fd.mat_transpose(stacked))
    Q, _proj = finmod.quotient_module(X, rej_rows)
    parts = finmod.decompose(Q)
    return ApproxWitness(label, False, _match_parts(sub, parts, label),
                         len(rej_rows))


# ---------------------------------------------------------------------------
# factor-category radical


def _in_row_span_fp(F, rows, vec):
    if all(x == F.zero for x in vec):
        return True
    if not rows:
        return False
    return fd.rank(F, rows) == fd.rank(F, rows + [list(vec)])


def _flatten(mat):
    return [x for row in mat for x in row]


def _factoring_span(kind, ring_or_field, X, Y, mids):
    """Flattened matrices spanning the maps X -> Y that factor through an
    object of ``mids``."""
    rows = []
    for Z in mids:
        left = _hom_mats(kind, X, Z)
        right = _hom_mats(kind, Z, Y)
        for a in left:
            for b in right:
                if kind == "algebra":
                    rows.append(_flatten(fd.mat_mul(ring_or_field, a, b)))
                else:
                    rows.append(_flatten(cr.mat_mul(ring_or_field, a, b)))
    return rows


def _radical_endo_targets(kind, X):
    """Generators of the radical of End(X) for an indecomposable X, as
    matrices: lifts of a residue-radical basis, plus (order case) the
    uniformizer multiples of the endomorphism generators."""
    if kind == "algebra":
        E, mats = finmod.end_algebra(X)
        F = E.F
        out = []
        for rv in E.radical_rows():
            acc = fd.mat_zero(F, X.dim, X.dim)
            for c, mat in zip(rv, mats):
                if c != F.zero:
                    for i in range(X.dim):
                        row = mat[i]
                        arow = acc[i]
                        for j in range(X.dim):
                            if row[j] != F.zero:
                                arow[j] = F.add(arow[j], F.mul(c, row[j]))
            out.append(acc)
        return out
    R = X.space.ring
    alg, gens = orders.end_residue_algebra(X)
    out = []
    for rv in alg.radical_rows():
        acc = cr.zmat(X.rank, X.rank)
        for c, mat in zip(rv, gens):
            if c:
                acc = cr.mat_add(R, acc, cr.mat_scal(R, c % R.p, mat))
        out.append(acc)
    for mat in gens:
        out.append([[R.shift_up(x, 1) for x in row] for row in mat])
    return out


def _radical_maps_factor(big: AddSubcat, small: AddSubcat):
    """Check that every radical map between classes of ``big`` outside
    ``small`` factors through ``small``; maps with either end inside the
    smaller subcategory factor through that end trivially."""
    kind = big.kind
    outside = [l for l in big.labels if l not in small.labels]
    for l1 in outside:
        X = big.rep(l1)
        if kind == "algebra":
            K = X.A.F
        else:
            K = X.space.ring
        for l2 in outside:
            Y = big.rep(l2)
            if l1 == l2:
                targets = _radical_endo_targets(kind, X)
            else:
                targets = _hom_mats(kind, X, Y)
            if not targets:
                continue
            span = _factoring_span(kind, K, X, Y, small.reps)
            for t in targets:
                vec = _flatten(t)
                if kind == "algebra":
                    ok = _in_row_span_fp(K, span, vec)
                else:
                    cols = cr.transpose(span) if span else [[0] for _ in vec]
                    ok = orders._solve_linear_reduced(K, cols, list(vec)) is not None
                if not ok:
                    raise NotRightRejective(
                        f"a radical map {l1} -> {l2} does not factor through "
                        "the smaller subcategory")


# ---------------------------------------------------------------------------
# step verification


@dataclass(frozen=True)
class StepReport:
    """Verification record for one chain step small <= big."""

    before: tuple
    after: tuple
    side: str
    witnesses: tuple
    strong: bool | None
    radical_ok: bool

    @property
    def holds(self) -> bool:
        return self.radical_ok


def verify_rejective_step(small: AddSubcat, big: AddSubcat, side: str = "right",
                          ambient: AddSubcat | None = None) -> StepReport:
    """Verify that ``small`` is a one-step rejective subcategory of ``big``.

    Exhibits, for every class of ``big``, a monic right (epic left)
    approximation by ``small`` and checks that all radical maps between
    classes of ``big`` factor through ``small``; failures raise
    NotRightRejective.  With ``ambient`` the approximation condition is
    additionally probed for every ambient class and the outcome recorded in
    ``strong`` (the chain-wide form of rejectivity) without raising.
    """
    if small.kind != big.kind:
        raise UnsupportedModule("subcategories live over different contexts")
    for lab in small.labels:
        if lab not in big.labels:
            raise CheckFailed(f"class {lab} of the smaller subcategory is "
                              "missing from the larger one")
    approx = _monic_right_approx if side == "right" else _epic_left_approx
    if side not in ("right", "left"):
        raise CheckFailed(f"unknown approximation side {side!r}")
    witnesses = tuple(approx(small, big.rep(lab), lab) for lab in big.labels)
    _radical_maps_factor(big, small)
    strong = None
    if ambient is not None:
        strong = True
        try:
            for lab in ambient.labels:
                if lab not in big.labels:
                    approx(small, ambient.rep(lab), lab)
        except NotRightRejective:
            strong = False
    after = tuple(l for l in big.labels if l in small.labels)
    return StepReport(big.labels, after, side, witnesses, strong, True)


# ---------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class ChainStep:
    """One single-class removal, in the shape consumed by the zeta-side
    block verification: the ambient context, the class labels of the larger
    subcategory, and the removed label."""

    ctx: object
    before: tuple
    removed: str

    @property
    def after(self) -> tuple:
        return tuple(l for l in self.before if l != self.removed)


@dataclass(frozen=True)
class RejectiveChain:
    """A descending chain of additive subcategories with verified steps.

    ``subcats`` runs from the full category of the chain down to the
    terminal one (the zero category for algebra chains, the first
    radical-stable catalog for order chains); ``layer_objects`` are the
    iterated trace objects when the chain came from an iteration (None for
    synthesized intermediate layers); ``reports`` verify each consecutive
    pair."""

    kind: str
    context: object
    subcats: tuple
    layer_objects: tuple
    reports: tuple
    side: str = "right"
    endo_algebra: FinAlgebra | None = None

    @property
    def length(self) -> int:
        return len(self.subcats) - 1

    @property
    def terminal(self) -> AddSubcat:
        return self.subcats[-1]

    def steps(self):
        """The chain as single-class removals; raises when some step drops
        several classes at once (refine first)."""
        out = []
        for n in range(len(self.subcats) - 1):
            cur, nxt = self.subcats[n], self.subcats[n + 1]
            diff = [l for l in cur.labels if l not in nxt.labels]
            if len(diff) != 1:
                raise CheckFailed(
                    f"chain step {n} removes {len(diff)} classes; refine to "
                    "single-class steps first")
            out.append(ChainStep(self.context, cur.labels, diff[0]))
        return out


class _ClassTracker:
    """Accumulates distinct indecomposable classes across chain layers.

    Algebra contexts label classes by discovery order; order contexts use
    the indecomposable-catalog labels so chain steps speak the same names
    as the lattice catalogs."""

    def __init__(self, kind, ctx=None):
        self.kind = kind
        self.reps = []
        self.labels = []
        self._ind = orders.ind_lattices(ctx) if kind == "order" else None

    def classify(self, part):
        part = _normalize(self.kind, part)
        if self.kind == "order":
            lab = self._ind.entry(self._ind.classify(part)).label
            if lab not in self.labels:
                self.labels.append(lab)
                self.reps.append(part)
            return lab
        for lab, rp in zip(self.labels, self.reps):
            if _iso(self.kind, part, rp):
                return lab
        lab = f"X{len(self.labels)}"
        self.labels.append(lab)
        self.reps.append(part)
        return lab

    def ordered(self, labels):
        """The given labels in canonical order (catalog order for order
        contexts, discovery order otherwise)."""
        if self.kind == "order":
            master = [e.label for e in self._ind.entries]
            known = [l for l in master if l in labels]
            extra = [l for l in labels if l not in master]
            return known + extra
        return [l for l in self.labels if l in labels]

    def subcat(self, labels) -> AddSubcat:
        order = self.ordered(labels)
        return AddSubcat(self.kind,
                         tuple(self.reps[self.labels.index(l)] for l in order),
                         tuple(order))


def _layer_classes(tracker, obj):
    if _is_zero(tracker.kind, obj):
        return set()
    return {tracker.classify(P) for P in _decompose(tracker.kind, obj)}


def _radical_trace_algebra(M: FinModule) -> FinModule:
    """The submodule traced out by the radical of the endomorphism algebra."""
    E, mats = finmod.end_algebra(M)
    F = E.F
    rows = []
    for rv in E.radical_rows():
        for i in range(M.dim):
            acc = [F.zero] * M.dim
            for c, mat in zip(rv, mats):
                if c != F.zero:
                    row = mat[i]
                    for j in range(M.dim):
                        if row[j] != F.zero:
                            acc[j] = F.add(acc[j], F.mul(c, row[j]))
            rows.append(acc)
    return finmod.submodule_module(M, rows)


def _radical_trace_order(M: Lattice) -> Lattice:
    """The sublattice traced out by the radical of the endomorphism ring:
    images of residue-radical lifts plus the uniformizer multiples of all
    endomorphism generators."""
    R = M.space.ring
    rows = []
    for mat in _radical_endo_targets("order", M):
        rows.extend(cr.mat_mul(R, mat, [list(r) for r in M.rows]))
    rows = orders._clean_rows(R, rows)
    return orders.make_lattice(M.space, rows, M.denom)


def _hom_rank_stable(M: Lattice):
    if len(orders.hom_generators(M, M)) != len(orders.hom_generators(M, M, boost=2)):
        raise NoStabilization(
            "endomorphism rank of a chain layer changed under extra guard "
            "digits; raise the working precision")


def iterated_radical_chain(M, max_layers: int = _MAX_LAYERS) -> RejectiveChain:
    """Chain of subcategories obtained by repeatedly passing to the trace
    of the endomorphism radical.

    Algebra contexts iterate to the zero module; order contexts stop when
    the layer's additive closure stabilizes.  Every consecutive pair of
    subcategories is verified as a rejective step, and the chain-wide
    (strong) approximation property is probed and recorded.
    """
    kind = _obj_kind(M)
    if kind == "order":
        ctx = M.space.ctx
        tracker = _ClassTracker(kind, ctx)
        _hom_rank_stable(M)
    else:
        ctx = M.A
        tracker = _ClassTracker(kind)
    layers = [M]
    classes = [_layer_classes(tracker, M)]
    while len(layers) <= max_layers:
        cur = layers[-1]
        if _is_zero(kind, cur):
            break
        nxt = _radical_trace_algebra(cur) if kind == "algebra" \
            else _radical_trace_order(cur)
        cls = _layer_classes(tracker, nxt)
        if kind == "algebra":
            if nxt.dim >= cur.dim:
                raise CheckFailed("radical trace failed to shrink the module")
            layers.append(nxt)
            classes.append(cls)
        else:
            if cls == classes[-1]:
                break
            _hom_rank_stable(nxt)
            layers.append(nxt)
            classes.append(cls)
    else:
        raise NoStabilization(
            f"no terminal layer within {max_layers} radical iterations")

    tails = []
    acc = set()
    for cls in reversed(classes):
        acc = acc | cls
        tails.append(set(acc))
    tails.reverse()
    subcats = tuple(tracker.subcat(t) for t in tails)
    reports = tuple(
        verify_rejective_step(subcats[n + 1], subcats[n], side="right",
                              ambient=subcats[0])
        for n in range(len(subcats) - 1))
    return RejectiveChain(kind, ctx, subcats, tuple(layers), reports)


def refine_single_class(chain: RejectiveChain) -> RejectiveChain:
    """Refine every chain step to remove exactly one class, dropping classes
    of larger rank (algebra: dimension) first, ties broken by label order;
    each synthesized step is re-verified."""
    subcats = [chain.subcats[0]]
    layer_objects = [chain.layer_objects[0]]
    for n in range(chain.length):
        cur, nxt = chain.subcats[n], chain.subcats[n + 1]
        removed = [l for l in cur.labels if l not in nxt.labels]

        def _size(lab):
            X = cur.rep(lab)
            return X.rank if chain.kind == "order" else X.dim

        removed.sort(key=lambda l: (-_size(l), cur.labels.index(l)))
        working = list(cur.labels)
        for lab in removed:
            working.remove(lab)
            sub = cur.restricted(working) if working else \
                AddSubcat(chain.kind, (), ())
            subcats.append(sub)
            layer_objects.append(chain.layer_objects[n + 1]
                                 if set(working) == set(nxt.labels) else None)
    reports = tuple(
        verify_rejective_step(subcats[k + 1], subcats[k], side=chain.side,
                              ambient=subcats[0])
        for k in range(len(subcats) - 1))
    return RejectiveChain(chain.kind, chain.context, tuple(subcats),
                          tuple(layer_objects), reports, chain.side,
                          chain.endo_algebra)


# ---------------------------------------------------------------------------
# layered-quotient chain over an algebra


def radical_layer_chain(A: FinAlgebra) -> RejectiveChain:
    """Left rejective chain built from the quotients of the regular module
    by radical powers: the n-th subcategory is generated by the quotients
    of length at most (Loewy length - n).  The endomorphism algebra of the
    sum of all quotients is attached to the returned chain."""
    F = A.F
    reg = A.regular_module()
    radv = A.radical_rows()

    def times_radical(rows):
        out = []
        for v in rows:
            for j in radv:
                out.append(fd.mat_mul(F, [list(v)],
                                      reg.act_of_vec(j))[0])
        rr, piv = fd.rref(F, out) if out else ([], [])
        return rr[: len(piv)]

    powers = [fd.mat_identity(F, A.dim)]
    while powers[-1]:
        powers.append(times_radical(powers[-1]))
    loewy = len(powers) - 1

    quots = []
    for i in range(1, loewy + 1):
        Q, _ = finmod.quotient_module(reg, powers[i])
        quots.append(Q)

    tracker = _ClassTracker("algebra")
    layer_classes = [ _layer_classes(tracker, Q) for Q in quots ]
    subcats = []
    for n in range(loewy + 1):
        keep = set()
        for i in range(loewy - n):
            keep |= layer_classes[i]
        subcats.append(tracker.subcat(keep))
    reports = tuple(
        verify_rejective_step(subcats[n + 1], subcats[n], side="left",
                              ambient=subcats[0])
        for n in range(loewy))
    gen = finmod.direct_sum_module(quots)
    E, _mats = finmod.end_algebra(gen)
    return RejectiveChain("algebra", A, tuple(subcats),
                          tuple(reversed(quots)) + (None,), reports,
                          side="left", endo_algebra=E)


# ---------------------------------------------------------------------------
# heredity chains


@dataclass(frozen=True)
class HeredityCertificate:
    step: int
    idempotent_ok: bool
    projective_ok: bool
    sandwich_ok: bool

    @property
    def holds(self) -> bool:
        return self.idempotent_ok and self.projective_ok and self.sandwich_ok


@dataclass(frozen=True)
class HeredityChain:
    """Descending ideal chain of an endomorphism algebra with per-step
    heredity certificates (checked in the successive quotients)."""

    algebra: FinAlgebra
    ideal_rows: tuple
    certificates: tuple

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.certificates)


def _quotient_algebra(E: FinAlgebra, ideal_rows):
    """(Q, project) for E modulo a two-sided ideal given by spanning rows."""
    F = E.F
    rr, piv = fd.rref(F, ideal_rows) if ideal_rows else ([], [])
    rr = rr[: len(piv)]
    for v in rr:
        for k in range(E.dim):
            basis = [F.one if t == k else F.zero for t in range(E.dim)]
            for prod in (E.product(basis, v), E.product(v, basis)):
                if not _in_row_span_fp(F, rr, prod):
                    raise CheckFailed("ideal rows are not two-sided")
    free = [c for c in range(E.dim) if c not in piv]

    def reduce_vec(v):
        v = list(v)
        for row, pc in zip(rr, piv):
            c = v[pc]
            if c != F.zero:
                for t in range(E.dim):
                    if row[t] != F.zero:
                        v[t] = F.sub(v[t], F.mul(c, row[t]))
        return [v[c] for c in free]

    table = []
    for a in free:
        row = []
        ea = [F.one if t == a else F.zero for t in range(E.dim)]
        for b in free:
            eb = [F.one if t == b else F.zero for t in range(E.dim)]
            row.append(reduce_vec(E.product(ea, eb)))
        table.append(row)
    Q = FinAlgebra(F, table, reduce_vec(E.one),
                   name=(E.name + "/ideal") if E.name else "quotient")
    return Q, reduce_vec


def heredity_chain(M: FinModule, chain: RejectiveChain) -> HeredityChain:
    """Heredity ideal chain of End(M) induced by a rejective chain.

    The n-th ideal consists of the endomorphisms of M factoring through the
    n-th subcategory; each successive quotient ideal is certified to be
    idempotent, projective as a left module, and to kill the radical on
    both sides (HeredityFailed names the first broken certificate)."""
    if chain.kind != "algebra":
        raise UnsupportedModule("heredity chains are built over algebra contexts")
    A = M.A
    F = A.F
    E, mats = finmod.end_algebra(M)
    flat = [_flatten(mat) for mat in mats]
    flat_T = fd.mat_transpose(flat)

    def coords(mat):
        x = fd.solve(F, flat_T, _flatten(mat))
        if x is None:
            raise CheckFailed("a factoring endomorphism left the computed "
                              "endomorphism algebra")
        return x

    ideals = []
    for sub in chain.subcats:
        rows = []
        for Z in sub.reps:
            left = finmod.hom_space(M, Z)
            right = finmod.hom_space(Z, M)
            for a in left:
                for b in right:
                    rows.append(coords(fd.mat_mul(F, a, b)))
        rr, piv = fd.rref(F, rows) if rows else ([], [])
        ideals.append(tuple(tuple(r) for r in rr[: len(piv)]))
    if len(ideals[0]) != E.dim:
        raise HeredityFailed("the top subcategory does not generate the full "
                             "endomorphism algebra")
    if ideals[-1]:
        raise HeredityFailed("the terminal subcategory induces a nonzero ideal")

    certs = []
    for n in range(len(ideals) - 1):
        Q, proj = _quotient_algebra(E, [list(r) for r in ideals[n + 1]])
        bar = [proj(list(r)) for r in ideals[n]]
        rrb, pivb = fd.rref(F, bar) if bar else ([], [])
        bar = rrb[: len(pivb)]
        if not bar:
            raise HeredityFailed(f"step {n}: the quotient ideal vanished")
        prods = [Q.product(a, b) for a in bar for b in bar]
        idem = fd.rank(F, prods) == len(bar) if prods else not bar
        Qop = Q.op()
        sub = finmod.submodule_module(Qop.regular_module(),
                                      [list(r) for r in bar])
        projective = finmod.is_projective_module(sub)
        radQ = Q.radical_rows()
        sandwich = True
        for a in bar:
            for j in radQ:
                aj = Q.product(a, j)
                for b in bar:
                    if any(x != F.zero for x in Q.product(aj, b)):
                        sandwich = False
        cert = HeredityCertificate(n, idem, projective, sandwich)
        certs.append(cert)
        if not cert.holds:
            broken = ("ideal not idempotent" if not idem else
                      "ideal not projective" if not projective else
                      "ideal does not kill the radical")
            raise HeredityFailed(f"step {n}: {broken}")
    return HeredityChain(E, tuple(ideals), tuple(certs))


# ---------------------------------------------------------------------------
# representation dimension


def rep_dim_upper(A: FinAlgebra) -> int:
    """Upper bound for the representation dimension: the global dimension
    of the endomorphism algebra of the sum of all chain classes of the
    iterated radical chain of (regular module) + (its dual)."""
    reg = A.regular_module()
    M = finmod.direct_sum_module([reg, finmod.dual_regular_module(A)])
    chain = iterated_radical_chain(M)
    top = chain.subcats[0]
    if top.size == 0:
        return 0
    gen = finmod.direct_sum_module(list(top.reps))
    E, _mats = finmod.end_algebra(gen)
    gd = finmod.global_dimension(E)
    if gd is INFINITY:
        raise CheckFailed("the chain generator produced an endomorphism "
                          "algebra of infinite global dimension")
    return gd


# ---------------------------------------------------------------------------
# the two-sided catalog check


@dataclass(frozen=True)
class AuslanderReport:
    catalog_size: int
    endo_dim: int
    gl_dim: object
    dom_dim_ge_2: bool

    @property
    def holds(self) -> bool:
        return self.gl_dim is not INFINITY and self.gl_dim <= 2 and \
            self.dom_dim_ge_2


def serial_indecomposables(A: FinAlgebra):
    """All indecomposables of a serial (Nakayama) algebra: the quotients of
    each projective indecomposable by its radical powers.  Returns None when
    some projective indecomposable is not uniserial (the construction is
    then not exhaustive)."""
    F = A.F
    reg = A.regular_module()
    radv = A.radical_rows()
    found = []
    for _e, rows in A.primitive_idempotent_decomposition():
        P = finmod.submodule_module(reg, [list(r) for r in rows])
        powers = []
        power = fd.mat_identity(F, P.dim)
        while power:
            powers.append(power)
            nxt = []
            for v in power:
                for j in radv:
                    nxt.append(fd.mat_mul(F, [list(v)], P.act_of_vec(j))[0])
            rr, piv = fd.rref(F, nxt) if nxt else ([], [])
            power = rr[: len(piv)]
        for rows_k in powers:
            sub = finmod.submodule_module(P, rows_k)
            if sub.dim and sum(finmod.top_multiplicities(sub)) != 1:
                return None
        for k in range(1, len(powers)):
            found.append(finmod.quotient_module(P, powers[k])[0])
        found.append(P)
    dedup = []
    for Q in found:
        if not any(finmod.certified_isomorphic(Q, S) for S in dedup):
            dedup.append(Q)
    return dedup


def auslander_check(A: FinAlgebra, catalog=None) -> AuslanderReport:
    """Report on the endomorphism algebra of the sum of all indecomposables.

    With no catalog the serial-algebra construction is attempted; a
    non-serial algebra without an explicit catalog, or a probe module with
    a summand outside the catalog, raises CatalogIncomplete.  The report
    carries the global dimension (expected at most 2) and the rank-2
    dominant dimension certificate of the endomorphism algebra."""
    if catalog is None:
        catalog = serial_indecomposables(A)
        if catalog is None:
            raise CatalogIncomplete(
                "no native indecomposable catalog for a non-serial algebra; "
                "pass one explicitly")
    catalog = list(catalog)
    probes = [A.regular_module(), finmod.dual_regular_module(A)]
    for probe in probes:
        for S in finmod.decompose(probe):
            if not any(finmod.certified_isomorphic(S, C) for C in catalog):
                raise CatalogIncomplete(
                    "a probe module has a summand outside the catalog")
    gen = finmod.direct_sum_module(catalog)
    E, _mats = finmod.end_algebra(gen)
    gd = finmod.global_dimension(E)
    dom2 = finmod.dominant_dimension_at_least(E, 2) if E.dim else True
    return AuslanderReport(len(catalog), E.dim, gd, dom2)


# ---------------------------------------------------------------------------
# order-side chain for a module


def build_CV_chain(ctx: OrderContext, module) -> RejectiveChain:
    """Single-class rejective chain of the lattice classes supported by a
    module: the iterated radical chain of the sum of all indecomposable
    classes living on the module's components, refined so each step removes
    one class.  The steps feed the zeta-side block verification."""
    module = orders._as_module(module)
    ind = orders.ind_lattices(ctx)
    support = {j for j, m in enumerate(module.mults) if m > 0}
    keep = []
    for e in ind.entries:
        mv = e.lattice.space.module.mults
        if all(m == 0 or j in support for j, m in enumerate(mv)):
            keep.append(e.lattice)
    if not keep:
        empty = AddSubcat("order", (), ())
        return RejectiveChain("order", ctx, (empty,), (None,), ())
    total = tuple(sum(x.space.module.mults[j] for x in keep)
                  for j in range(ctx.semisimple.ncomp))
    M = zeta_mod._direct_sum_lattice(ctx, keep, total)
    chain = iterated_radical_chain(M)
    return refine_single_class(chain)


@dataclass(frozen=True)
class TerminalReport:
    labels: tuple
    stable: tuple
    projective: tuple
    injective: tuple

    @property
    def holds(self) -> bool:
        return all(self.stable) and all(self.projective) and all(self.injective)


def terminal_overring_report(chain: RejectiveChain) -> TerminalReport:
    """Check the terminal classes of an order chain against the maximal
    overring sharing the coordinate model: each class must be stable under
    the overring action and both projective and injective over it."""
    if chain.kind != "order":
        raise UnsupportedModule("terminal overring reports require an order chain")
    over = zeta_mod.maximal_overring_context(chain.context)
    labels, stab, proj, inj = [], [], [], []
    for lab, X in zip(chain.terminal.labels, chain.terminal.reps):
        Xn = orders.class_normal_form(X)
        mv = Xn.space.module.mults
        Y = orders.make_lattice(over.space(mv), [list(r) for r in Xn.rows],
                                Xn.denom)
        st = orders.is_stable(Y)
        if st:
            pj, ij = orders.proj_inj_flags(over, Y)
        else:
            pj = ij = False
        labels.append(lab)
        stab.append(st)
        proj.append(pj)
        inj.append(ij)
    return TerminalReport(tuple(labels), tuple(stab), tuple(proj), tuple(inj))
