"""Orders over a chain ring, their lattices, and lattice class catalogs.

An order is an R-subalgebra, spanning over the fraction field K, of a
semisimple K-algebra A.  It is presented by one of four structured variants:

* ``congruence(n)`` -- pairs (a, b) in R x R with a = b mod pi^n.
* ``cusp(n)`` -- the subring R + pi^n x R[x] with x^2 = pi (defined over the
  equal-characteristic flavor only, where adjoining such an x keeps the
  fraction field separable-free bookkeeping consistent).
* ``tiled(E)`` -- matrices over K whose (i, j) entry lies in pi^E[i][j] R,
  for an exponent matrix E with zero diagonal, nonnegative entries, and
  E[i][j] + E[j][k] >= E[i][k] (closure under matrix multiplication).
* ``generic`` -- user-supplied component data and basis matrices.

A module over the ambient algebra is a multiplicity vector over the simple
components; its realization is a row-vector space with one action matrix per
order basis element.  A lattice is a finitely generated R-submodule of such
a space, stored as a canonical echelon basis at the working precision plus a
power-of-pi denominator for scaled lattices.

The classification layer walks full stable sublattices through maximal
stable sublattices, tests isomorphism by unit combinations of Hom-module
generators, splits lattices by lifting idempotents from End/pi, and builds
class catalogs with a canonical ordering, per-variant fast classifiers
validated against the generic enumeration, projectivity/injectivity flags
via an explicit splitting test, and overring restriction of indecomposable
catalogs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import chainring as cr
from . import fields as fd
from .chainring import INF, ChainRing
from .errors import (
    BudgetExceeded,
    CatalogIncomplete,
    CheckFailed,
    ConfigInvalid,
    DecompositionUncertified,
    NoStabilization,
    NotAnOverring,
    PrecisionExhausted,
    Undecided,
    UnsupportedModule,
)
from .fields import prime_field
from .finmod import FinAlgebra, find_unit_combination

_ISO_SEARCH_CAP = 16384
_CLASS_BFS_BUDGET = 50000
_SUBSPACE_BUDGET = 200000
_SUBLATTICE_BUDGET = 500000
DEFAULT_PRECISION = 24


# ---------------------------------------------------------------------------
# specifications


@dataclass(frozen=True)
class OrderSpec:
    """Hashable structured presentation of an order."""

    variant: str
    n: int = 0
    exponents: tuple = ()
    data: tuple = ()

    @staticmethod
    def congruence(n: int) -> "OrderSpec":
        if n < 0:
            raise ConfigInvalid("/order/n: congruence level must be >= 0")
        return OrderSpec("congruence", n=n)

    @staticmethod
    def cusp(n: int) -> "OrderSpec":
        if n < 0:
            raise ConfigInvalid("/order/n: cusp level must be >= 0")
        return OrderSpec("cusp", n=n)

    @staticmethod
    def tiled(exponents) -> "OrderSpec":
        E = tuple(tuple(int(x) for x in row) for row in exponents)
        n = len(E)
        if n < 1 or any(len(row) != n for row in E):
            raise ConfigInvalid("/order/exponents: need a square matrix")
        for i in range(n):
            if E[i][i] != 0:
                raise ConfigInvalid("/order/exponents: diagonal must be zero")
            for j in range(n):
                if E[i][j] < 0:
                    raise ConfigInvalid("/order/exponents: entries must be >= 0")
                for k in range(n):
                    if E[i][j] + E[j][k] < E[i][k]:
                        raise ConfigInvalid(
                            "/order/exponents: not closed under products "
                            f"(({i},{j}) + ({j},{k}) < ({i},{k}))")
        return OrderSpec("tiled", n=n, exponents=E)

    @staticmethod
    def tiled_triangular(n: int) -> "OrderSpec":
        """Exponent 1 above the diagonal, 0 on and below it.

        With row lattices P_i as right modules this orientation makes the
        radical series cycle P_1 -> P_n -> P_(n-1) -> ... -> P_2 -> pi P_1,
        so a sublattice of P_i isomorphic to P_j first appears at colength
        (i - j) mod n."""
        return OrderSpec.tiled([[1 if i < j else 0 for j in range(n)]
                                for i in range(n)])

    @staticmethod
    def generic(ranks, lengths, basis, commutative=None) -> "OrderSpec":
        """Arbitrary order from per-component basis matrices.

        ``basis`` is a sequence of elements; each element is a sequence of
        per-component matrices whose entries are either ints (unit residues)
        or (coefficient, pi-exponent) pairs.  ``commutative`` flags, per
        component, whether left and right multiplication agree.
        """
        ranks = tuple(int(r) for r in ranks)
        lengths = tuple(int(l) for l in lengths)
        if len(ranks) != len(lengths) or not ranks:
            raise ConfigInvalid("/order/generic: ranks and lengths must match")
        if commutative is None:
            commutative = tuple(l == 1 for l in lengths)
        enc = []
        for elem in basis:
            comps = []
            for mat in elem:
                comps.append(tuple(
                    tuple(tuple(x) if isinstance(x, (tuple, list)) else (int(x), 0)
                          for x in row)
                    for row in mat))
            enc.append(tuple(comps))
        return OrderSpec("generic", n=len(ranks),
                         data=(ranks, lengths, tuple(bool(c) for c in commutative),
                               tuple(enc)))

    @property
    def label(self) -> str:
        if self.variant == "tiled":
            return f"tiled({self.n})"
        if self.variant == "generic":
            return f"generic({self.n} components)"
        return f"{self.variant}({self.n})"


@dataclass(frozen=True)
class SemisimpleData:
    """Component data of the ambient semisimple algebra.

    ``ranks[j]`` is the K-dimension of the simple right module of component
    j, ``lengths[j]`` its multiplicity in the regular module, and
    ``residue_sizes[j]`` the size of the residue field of the component's
    maximal order (= p for every structured variant here).
    """

    labels: tuple
    ranks: tuple
    lengths: tuple
    residue_sizes: tuple

    @property
    def ncomp(self) -> int:
        return len(self.ranks)


def semisimple_data(spec: OrderSpec, p: int) -> SemisimpleData:
    if spec.variant == "congruence":
        return SemisimpleData(("S1", "S2"), (1, 1), (1, 1), (p, p))
    if spec.variant == "cusp":
        return SemisimpleData(("S1",), (2,), (1,), (p,))
    if spec.variant == "tiled":
        return SemisimpleData(("S1",), (spec.n,), (spec.n,), (p,))
    if spec.variant == "generic":
        ranks, lengths, _, _ = spec.data
        labels = tuple(f"S{j + 1}" for j in range(len(ranks)))
        return SemisimpleData(labels, ranks, lengths, (p,) * len(ranks))
    raise ConfigInvalid(f"/order/variant: unknown variant {spec.variant!r}")


@dataclass(frozen=True)
class AModule:
    """A module over the ambient algebra: multiplicities of the simples."""

    mults: tuple

    def __post_init__(self):
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))
        if any(m < 0 for m in self.mults):
            raise UnsupportedModule("multiplicities must be >= 0")

    @property
    def total(self) -> int:
        return sum(self.mults)

    @property
    def length(self) -> int:
        """Composition length over the ambient algebra."""
        return sum(self.mults)

    def zeroed(self, j: int) -> "AModule":
        """Same module with the j-th multiplicity replaced by zero."""
        m = list(self.mults)
        m[j] = 0
        return AModule(tuple(m))

    def __repr__(self):
        return f"AModule{self.mults}"


def _as_module(module) -> AModule:
    if isinstance(module, AModule):
        return module
    return AModule(tuple(module))


# ---------------------------------------------------------------------------
# basis matrices per variant


def _generic_entry(ring: ChainRing, pair):
    c, e = pair
    return ring.shift_up(ring.from_int(c), e)


def _basis_matrices(spec: OrderSpec, ring: ChainRing):
    """One tuple of per-component action matrices per R-basis element."""
    if spec.variant == "congruence":
        return [([[1]], [[1]]),
                ([[0]], [[ring.pi_power(spec.n)]])]
    if spec.variant == "cusp":
        n = spec.n
        u1 = [[0, ring.pi_power(n)], [ring.pi_power(n + 1), 0]]
        return [(cr.eye(ring, 2),), (u1,)]
    if spec.variant == "tiled":
        n, E = spec.n, spec.exponents
        out = []
        for i in range(n):
            for j in range(n):
                M = cr.zmat(n, n)
                M[i][j] = ring.pi_power(E[i][j])
                out.append((M,))
        return out
    if spec.variant == "generic":
        _, _, _, enc = spec.data
        out = []
        for elem in enc:
            out.append(tuple([[_generic_entry(ring, x) for x in row] for row in mat]
                             for mat in elem))
        return out
    raise ConfigInvalid(f"/order/variant: unknown variant {spec.variant!r}")


def _flatten_elem(mats) -> list:
    flat = []
    for M in mats:
        for row in M:
            flat.extend(row)
    return flat


# ---------------------------------------------------------------------------
# context and module spaces


class OrderContext:
    """An order spec realized at a prime, flavor, and working precision.

    The internal chain ring carries ``2 * precision + 8`` digits so that
    colength walks up to ``precision`` keep a wide guard band above every
    valuation they produce.  All caches (module spaces, catalogs, structure
    coefficients) live here.
    """

    def __init__(self, spec: OrderSpec, p: int, flavor: str = "mixed",
                 precision: int = DEFAULT_PRECISION):
        if flavor not in ("mixed", "equal"):
            raise ConfigInvalid("/flavor: must be 'mixed' or 'equal'")
        if spec.variant == "cusp" and flavor != "equal":
            raise ConfigInvalid("/flavor: cusp orders are defined over the "
                                "equal-characteristic flavor only")
        if p < 2 or any(p % q == 0 for q in range(2, min(p, 1000)) if q * q <= p):
            raise ConfigInvalid("/prime: p must be a prime")
        if precision < 6:
            raise ConfigInvalid("/precision: need at least 6")
        self.spec = spec
        self.p = p
        self.flavor = flavor
        self.precision = precision
        self.ring = ChainRing(p, 2 * precision + 8, flavor)
        self.semisimple = semisimple_data(spec, p)
        self.basis = _basis_matrices(spec, self.ring)
        self._spaces = {}
        self._catalogs = {}
        self._misc = {}
        self._validate_closure()

    # -- structure ------------------------------------------------------

    def _validate_closure(self):
        R = self.ring
        raw = self.raw_basis_rows()
        ident = _flatten_elem(self.identity_components())
        if not cr.row_module_contains(R, raw, [ident]):
            raise ConfigInvalid("/order: identity is not in the R-span of the basis")
        for a in self.basis:
            for b in self.basis:
                prod = tuple(cr.mat_mul(R, Ma, Mb) for Ma, Mb in zip(a, b))
                if not cr.row_module_contains(R, raw, [_flatten_elem(prod)]):
                    raise ConfigInvalid("/order: basis is not multiplicatively "
                                        "closed over R")

    def identity_components(self):
        return tuple(cr.eye(self.ring, d) for d in self.semisimple.ranks)

    def raw_basis_rows(self):
        """Fully flattened basis elements (faithful element coordinates,
        used for algebra-level membership and structure solves)."""
        if "raw" not in self._misc:
            self._misc["raw"] = [_flatten_elem(m) for m in self.basis]
        return self._misc["raw"]

    def module_basis_rows(self):
        """Coordinates of the basis elements inside the regular module space.

        Copy c of component j reads row c of the component matrix: for a
        split (matrix-algebra) component that is the row-major bijection
        with a direct sum of row-vector simples, and for a one-copy
        component it is the orbit of the first coordinate vector, which is
        the identity's first row.  Right multiplication then acts on every
        copy by the component matrix, matching ``ModuleSpace.place``."""
        if "module_rows" not in self._misc:
            rows = []
            for elem in self.basis:
                vec = []
                for (j, c, _off, _d) in self.regular_space().blocks:
                    vec.extend(elem[j][c])
                rows.append(vec)
            self._misc["module_rows"] = rows
        return self._misc["module_rows"]

    def structure_coeffs(self, s: int, t: int):
        """Coordinates of basis[s] * basis[t] over the basis."""
        key = ("struct", s, t)
        if key not in self._misc:
            R = self.ring
            prod = tuple(cr.mat_mul(R, Ma, Mb)
                         for Ma, Mb in zip(self.basis[s], self.basis[t]))
            y = _solve_linear(R, cr.transpose(self.raw_basis_rows()),
                              _flatten_elem(prod))
            if y is None:
                raise CheckFailed("closed basis product failed to express")
            self._misc[key] = y
        return self._misc[key]

    def one_coeffs(self):
        if "one" not in self._misc:
            y = _solve_linear(self.ring, cr.transpose(self.raw_basis_rows()),
                              _flatten_elem(self.identity_components()))
            if y is None:
                raise CheckFailed("identity failed to express over the basis")
            self._misc["one"] = y
        return self._misc["one"]

    def order_residue_algebra(self) -> FinAlgebra:
        """The order modulo pi as an F_p-algebra on the basis residues."""
        if "res_alg" not in self._misc:
            F = prime_field(self.p)
            k0 = len(self.basis)
            table = [[[self.structure_coeffs(s, t)[r] % self.p for r in range(k0)]
                      for t in range(k0)] for s in range(k0)]
            one = [c % self.p for c in self.one_coeffs()]
            self._misc["res_alg"] = FinAlgebra(F, table, one,
                                               name=f"{self.spec.label}/pi")
        return self._misc["res_alg"]

    def radical_coeff_rows(self):
        """F_p coordinate rows (over the basis) of the radical of order/pi."""
        return self.order_residue_algebra().radical_rows()

    # -- modules --------------------------------------------------------

    def regular_module(self) -> AModule:
        return AModule(self.semisimple.lengths)

    def space(self, module) -> "ModuleSpace":
        module = _as_module(module)
        key = ("right", module.mults)
        if key not in self._spaces:
            sp = ModuleSpace(self, module)
            sp.gens = [sp.place(elem) for elem in self.basis]
            self._spaces[key] = sp
        return self._spaces[key]

    def regular_space(self) -> "ModuleSpace":
        return self.space(self.regular_module())

    def regular_lattice(self) -> "Lattice":
        if "reg_lat" not in self._misc:
            L = make_lattice(self.regular_space(), self.module_basis_rows())
            if L.rank != self.regular_space().dim:
                raise CheckFailed("basis rows do not span the regular module; "
                                  "the first coordinate is not a generator")
            if not is_stable(L):
                raise CheckFailed("regular lattice is not stable")
            self._misc["reg_lat"] = L
        return self._misc["reg_lat"]

    def _split_component(self, j: int) -> bool:
        """Does component j carry a full matrix-unit basis (so that left
        multiplication is the transposed-Kronecker action)?"""
        if self.spec.variant == "tiled":
            return True
        if self.spec.variant == "generic":
            _, lengths, commutative, _ = self.data_generic()
            return self.semisimple.ranks[j] == lengths[j] and not commutative[j]
        return False

    def data_generic(self):
        return self.spec.data

    def op_regular_space(self) -> "ModuleSpace":
        """The regular coordinate space with the opposite (left) action."""
        if "op_space" not in self._spaces:
            semi = self.semisimple
            sp = ModuleSpace(self, self.regular_module(), tag="op")
            gens = []
            for elem in self.basis:
                G = cr.zmat(sp.dim, sp.dim)
                for j in range(semi.ncomp):
                    d, l = semi.ranks[j], semi.lengths[j]
                    off = sp.comp_offset[j]
                    M = elem[j]
                    if l == 1:
                        self._check_commutative(j)
                        for a in range(d):
                            for b in range(d):
                                if M[a][b]:
                                    G[off + a][off + b] = M[a][b]
                    elif l == d and self._split_component(j):
                        # left action on row-major (copy=row, col) coordinates
                        for k in range(l):
                            for i in range(l):
                                c = M[i][k]
                                if c:
                                    for s in range(d):
                                        G[off + k * d + s][off + i * d + s] = c
                    else:
                        raise UnsupportedModule(
                            f"no opposite action model for component {j}")
                gens.append(G)
            sp.gens = gens
            self._spaces["op_space"] = sp
        return self._spaces["op_space"]

    def _check_commutative(self, j: int):
        key = ("comm", j)
        if key in self._misc:
            if not self._misc[key]:
                raise UnsupportedModule(f"component {j} is not commutative")
            return
        R = self.ring
        ok = True
        mats = [elem[j] for elem in self.basis]
        for a in mats:
            for b in mats:
                if cr.mat_key(cr.mat_mul(R, a, b)) != cr.mat_key(cr.mat_mul(R, b, a)):
                    ok = False
        self._misc[key] = ok
        if not ok:
            raise UnsupportedModule(f"component {j} is not commutative")

    def op_regular_lattice(self) -> "Lattice":
        if "op_reg_lat" not in self._misc:
            L = make_lattice(self.op_regular_space(), self.module_basis_rows())
            if not is_stable(L):
                raise CheckFailed("regular lattice is not stable on the left")
            self._misc["op_reg_lat"] = L
        return self._misc["op_reg_lat"]

    def hnf_row_coords(self):
        """Coordinates of each echelon row of the regular lattice over the
        module rows of the basis (shared by the right and opposite sides,
        which use the same underlying rows)."""
        if "hnf_coords" not in self._misc:
            R = self.ring
            At = cr.transpose(self.module_basis_rows())
            out = []
            for eps in self.regular_lattice().rows:
                y = _solve_linear(R, At, list(eps))
                if y is None:
                    raise CheckFailed("echelon row failed to express over the basis")
                out.append(y)
            self._misc["hnf_coords"] = out
        return self._misc["hnf_coords"]

    def __repr__(self):
        return (f"OrderContext({self.spec.label}, p={self.p}, "
                f"flavor={self.flavor!r}, precision={self.precision})")


class ModuleSpace:
    """Realization of a module as a row-vector space with one action matrix
    per order basis element (filled in by the owning context)."""

    def __init__(self, ctx: OrderContext, module: AModule, tag: str = "right"):
        self.ctx = ctx
        self.ring = ctx.ring
        self.module = module
        self.tag = tag
        semi = ctx.semisimple
        blocks = []
        comp_offset = {}
        off = 0
        for j in range(semi.ncomp):
            comp_offset[j] = off
            d = semi.ranks[j]
            for c in range(module.mults[j]):
                blocks.append((j, c, off, d))
                off += d
        self.blocks = tuple(blocks)
        self.comp_offset = comp_offset
        self.dim = off
        self.gens = []
        self._cache = {}

    def place(self, comp_mats):
        """Block-diagonal right-action matrix built from per-component ones."""
        G = cr.zmat(self.dim, self.dim)
        for (j, _c, off, d) in self.blocks:
            M = comp_mats[j]
            for a in range(d):
                row = G[off + a]
                src = M[a]
                for b in range(d):
                    if src[b]:
                        row[off + b] = src[b]
        return G

    def comp_columns(self, j: int):
        cols = []
        for (jj, _c, off, d) in self.blocks:
            if jj == j:
                cols.extend(range(off, off + d))
        return cols

    def radical_action_mats(self):
        """Action matrices of lifted generators of the order's radical."""
        if "rad_mats" not in self._cache:
            R = self.ring
            out = []
            for coeffs in self.ctx.radical_coeff_rows():
                M = cr.zmat(self.dim, self.dim)
                for t, c in enumerate(coeffs):
                    if c:
                        M = cr.mat_add(R, M, cr.mat_scal(R, c % R.p, self.gens[t]))
                out.append(M)
            self._cache["rad_mats"] = out
        return self._cache["rad_mats"]

    def radical_ideal_action_mats(self):
        """Action matrices spanning the right ideal J(order): the lifted
        radical generators multiplied by every basis element."""
        if "rad_ideal" not in self._cache:
            R = self.ring
            out = []
            for Rm in self.radical_action_mats():
                for g in self.gens:
                    out.append(cr.mat_mul(R, Rm, g))
            self._cache["rad_ideal"] = out
        return self._cache["rad_ideal"]

    def __repr__(self):
        return f"ModuleSpace({self.module}, dim={self.dim}, tag={self.tag!r})"


class AbstractSpace:
    """A bare coordinate space with explicit action matrices (used for duals)."""

    def __init__(self, ctx: OrderContext, gens, dim: int, tag: str = "abstract"):
        self.ctx = ctx
        self.ring = ctx.ring
        self.module = None
        self.tag = tag
        self.dim = dim
        self.gens = gens
        self.blocks = ()
        self._cache = {}


# ---------------------------------------------------------------------------
# generic linear solve over the chain ring (Smith-based)


def _mat_vec(R: ChainRing, M, v):
    out = []
    for row in M:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc = R.add(acc, R.mul(a, b))
        out.append(acc)
    return out


def _clean_rows(R: ChainRing, rows):
    """Zero out entries with valuation in the top window of the precision.

    Free kernel generators are exact solutions mod pi^m, but their span can
    deviate from the true solution lattice by components of valuation
    >= m - e (e the largest Smith exponent of the system).  Rows derived
    from them therefore carry junk content at such valuations, while all
    genuine lattice structure lives far below; cutting at m - 10 separates
    the two exactly for the working precisions used here."""
    cut = R.m - 10
    out = []
    for row in rows:
        cleaned = [x if x and R.val(x) < cut else 0 for x in row]
        if any(cleaned):
            out.append(cleaned)
    return out


_REDUCED_RINGS = {}


def _reduced_ring(R: ChainRing, drop: int = 10) -> ChainRing:
    key = (R.p, R.m - drop, R.flavor)
    if key not in _REDUCED_RINGS:
        _REDUCED_RINGS[key] = ChainRing(R.p, R.m - drop, R.flavor)
    return _REDUCED_RINGS[key]


def _solve_linear_reduced(R: ChainRing, A, b, drop: int = 10):
    """Solve A x = b demanding consistency only below the junk window
    (entries reduced mod pi^(m - drop) first)."""
    Rr = _reduced_ring(R, drop)
    Ar = [[x % Rr.modulus for x in row] for row in A]
    br = [x % Rr.modulus for x in b]
    return _solve_linear(Rr, Ar, br)


def _solve_linear(R: ChainRing, A, b):
    """One solution x of A x = b over the chain ring, or None.

    Diagonalizes A once, then divides through the Smith factors; entries of
    the answer are valid mod pi^(m - max exponent), which leaves a wide
    margin at the working precisions used here.  A None answer certifies
    that no solution exists at precision m.
    """
    r = len(A)
    c = len(A[0]) if r else 0
    if r == 0:
        return [0] * c
    if c == 0:
        return [] if all(x % R.modulus == 0 for x in b) else None
    exps, U, V = cr.smith(R, A)
    cvec = _mat_vec(R, U, b)
    nmin = min(r, c)
    z = [0] * c
    for i in range(nmin):
        e = exps[i] if i < len(exps) else INF
        ci = cvec[i]
        if e is INF:
            if ci % R.modulus != 0:
                return None
        else:
            if ci % R.modulus != 0:
                v = R.val(ci)
                if v is not INF and v < e:
                    return None
                z[i] = R.shift_down(ci, e)
    for i in range(nmin, r):
        if cvec[i] % R.modulus != 0:
            return None
    return _mat_vec(R, V, z)


# ---------------------------------------------------------------------------
# lattices


class Lattice:
    """pi^{-denom} times the row span of a canonical echelon basis."""

    __slots__ = ("space", "rows", "pivots", "exps", "denom", "_cache")

    def __init__(self, space, rows, pivots, exps, denom):
        self.space = space
        self.rows = tuple(tuple(r) for r in rows)
        self.pivots = tuple(pivots)
        self.exps = tuple(exps)
        self.denom = denom
        self._cache = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def key(self):
        return (self.denom, self.rows)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.key() == other.key() \
            and self.space is other.space

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Lattice(rank={self.rank}, denom={self.denom}, rows={self.rows})"


def make_lattice(space, rows, denom: int = 0) -> Lattice:
    R = space.ring
    H, piv, exps = cr.hnf(R, [list(r) for r in rows])
    while denom > 0 and H and all(
            x == 0 or R.val(x) >= 1 for row in H for x in row):
        H = [[R.shift_down(x, 1) if x else 0 for x in row] for row in H]
        H, piv, exps = cr.hnf(R, H)
        denom -= 1
    if not H:
        denom = 0
    return Lattice(space, H, piv, exps, denom)


def scaled(L: Lattice, e: int) -> Lattice:
    """pi^e L for any integer e."""
    d = L.denom - e
    rows = [list(r) for r in L.rows]
    if d < 0:
        R = L.space.ring
        rows = [[R.shift_up(x, -d) for x in row] for row in rows]
        d = 0
    return make_lattice(L.space, rows, d)


def class_normal_form(L: Lattice) -> Lattice:
    """Scale representative: denominator 0 and at least one unit entry."""
    if "norm" in L._cache:
        return L._cache["norm"]
    R = L.space.ring
    if not L.rows:
        out = make_lattice(L.space, [])
    else:
        vmin = None
        for row in L.rows:
            for x in row:
                if x:
                    v = R.val(x)
                    vmin = v if vmin is None or v < vmin else vmin
        if vmin:
            rows = [[R.shift_down(x, vmin) if x else 0 for x in row]
                    for row in L.rows]
            out = make_lattice(L.space, rows)
        else:
            out = make_lattice(L.space, [list(r) for r in L.rows])
    L._cache["norm"] = out
    return out


def _common_denom_rows(L: Lattice, M: Lattice):
    R = L.space.ring
    d = max(L.denom, M.denom)
    ra = [list(r) for r in L.rows]
    rb = [list(r) for r in M.rows]
    if d > L.denom:
        ra = [[R.shift_up(x, d - L.denom) for x in row] for row in ra]
    if d > M.denom:
        rb = [[R.shift_up(x, d - M.denom) for x in row] for row in rb]
    return ra, rb, d


def lattice_contains(L: Lattice, M: Lattice) -> bool:
    ra, rb, _ = _common_denom_rows(L, M)
    return cr.row_module_contains(L.space.ring, ra, rb)


def lattice_equal(L: Lattice, M: Lattice) -> bool:
    return L.key() == M.key()


def lattice_sum(L: Lattice, M: Lattice) -> Lattice:
    ra, rb, d = _common_denom_rows(L, M)
    return make_lattice(L.space, ra + rb, d)


def lattice_intersection(L: Lattice, M: Lattice) -> Lattice:
    ra, rb, d = _common_denom_rows(L, M)
    return make_lattice(L.space, cr.row_module_intersection(L.space.ring, ra, rb), d)


def lattice_colength(L: Lattice, M: Lattice) -> int:
    """log_p of the index [L : M] for M <= L of the same rank."""
    ra, rb, _ = _common_denom_rows(L, M)
    return cr.colength_in(L.space.ring, ra, rb)


def lattice_index(L: Lattice, M: Lattice) -> int:
    """Generalized index exponent e with [L : M] = p^e (may be negative)."""
    ra, rb, _ = _common_denom_rows(L, M)
    return cr.index_exponent(L.space.ring, ra, rb)


def is_stable(L: Lattice) -> bool:
    """Is the lattice closed under the order action?"""
    if "stable" in L._cache:
        return L._cache["stable"]
    R = L.space.ring
    ok = True
    for g in L.space.gens:
        imgs = [cr.vec_matmul(R, list(row), g) for row in L.rows]
        if not cr.row_module_contains(R, [list(r) for r in L.rows], imgs):
            ok = False
            break
    L._cache["stable"] = ok
    return ok


def induced_action(L: Lattice, ring: ChainRing | None = None):
    """One rank x rank coefficient matrix per basis element: row i holds the
    coordinates of (echelon row i) . g over the echelon basis."""
    if ring is None and "act" in L._cache:
        return L._cache["act"]
    R = ring or L.space.ring
    out = []
    rows = [list(r) for r in L.rows]
    for g in L.space.gens:
        imgs = [cr.vec_matmul(R, row, g) for row in rows]
        X, _H = cr.express_rows(R, rows, imgs)
        if X is None:
            raise CheckFailed("action does not stabilize the lattice")
        out.append(X)
    if ring is None:
        L._cache["act"] = out
    return out


def standard_lattice(ctx: OrderContext, module) -> Lattice:
    """The distinguished full lattice: the regular lattice for the regular
    module, the unit coordinate lattice otherwise."""
    module = _as_module(module)
    if module.total == 0:
        raise UnsupportedModule("module with no positive multiplicity")
    if module.mults == ctx.semisimple.lengths:
        return ctx.regular_lattice()
    sp = ctx.space(module)
    return make_lattice(sp, cr.eye(ctx.ring, sp.dim))


# ---------------------------------------------------------------------------
# residue subspaces and sublattice walks


def _residue_matrix(R: ChainRing, M):
    return [[x % R.p for x in row] for row in M]


def _gauss_subspace_count(p: int, k: int) -> int:
    total = 0
    for r in range(k + 1):
        num = 1
        den = 1
        for i in range(r):
            num *= p ** (k - i) - 1
            den *= p ** (i + 1) - 1
        total += num // den
    return total


def _iter_subspaces(p: int, k: int):
    """All subspaces of F_p^k as (rref_rows, pivots), every dimension,
    in a deterministic order."""
    for r in range(k + 1):
        for pivs in itertools.combinations(range(k), r):
            free_pos = []
            for i, pc in enumerate(pivs):
                for j in range(pc + 1, k):
                    if j not in pivs:
                        free_pos.append((i, j))
            for vals in itertools.product(range(p), repeat=len(free_pos)):
                rows = [[0] * k for _ in range(r)]
                for i, pc in enumerate(pivs):
                    rows[i][pc] = 1
                for (i, j), v in zip(free_pos, vals):
                    rows[i][j] = v
                yield rows, pivs


def _row_times_mat(F, v, M):
    out = [F.zero] * (len(M[0]) if M else 0)
    for i, c in enumerate(v):
        if c != F.zero:
            row = M[i]
            for j in range(len(out)):
                if row[j] != F.zero:
                    out[j] = F.add(out[j], F.mul(c, row[j]))
    return out


def _stable_subspaces(L: Lattice, budget: int = _SUBSPACE_BUDGET):
    """All subspaces of L/pi L stable under the induced action, as
    (rref_rows, pivots, dim) triples."""
    k = L.rank
    R = L.space.ring
    p = R.p
    if _gauss_subspace_count(p, k) > budget:
        raise BudgetExceeded(
            f"subspace enumeration over F_{p}^{k} exceeds budget {budget}")
    F = prime_field(p)
    mats = [_residue_matrix(R, A) for A in induced_action(L)]
    out = []
    for rows, pivs in _iter_subspaces(p, k):
        ok = True
        for g in mats:
            for v in rows:
                img = _row_times_mat(F, v, g)
                if not fd.in_row_space(F, rows, pivs, img):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append((rows, pivs, len(rows)))
    return out


def _subspace_contained(F, rows_a, sub_b):
    rows_b, pivs_b, _ = sub_b
    return all(fd.in_row_space(F, rows_b, pivs_b, v) for v in rows_a)


def _lift_subspace_lattice(L: Lattice, srows) -> Lattice:
    R = L.space.ring
    rows = [cr.vec_matmul(R, list(v), [list(r) for r in L.rows]) for v in srows]
    rows += [[R.shift_up(x, 1) for x in row] for row in L.rows]
    return make_lattice(L.space, rows, L.denom)


def maximal_stable_sublattices(L: Lattice):
    """The maximal proper stable sublattices of L (all contain pi L), with
    their colengths."""
    k = L.rank
    if k == 0:
        return []
    F = prime_field(L.space.ring.p)
    subs = [s for s in _stable_subspaces(L) if s[2] < k]
    out = []
    for s in subs:
        rows, _pivs, dim = s
        maximal = True
        for s2 in subs:
            if s2[2] > dim and _subspace_contained(F, rows, s2):
                maximal = False
                break
        if maximal:
            out.append((_lift_subspace_lattice(L, rows), k - dim))
    out.sort(key=lambda t: (t[1], t[0].key()))
    return out


def iter_stable_sublattices(L: Lattice, max_colength: int,
                            budget: int = _SUBLATTICE_BUDGET):
    """Yield (N, colength) for every full stable sublattice of L of colength
    at most ``max_colength``, each exactly once, in a deterministic order.

    The walk descends through maximal stable sublattices; every full stable
    sublattice of finite colength is reached along a maximal chain, and the
    colength labels are path-independent because the index is additive.
    """
    ctx = L.space.ctx
    if max_colength > ctx.precision - 4:
        raise PrecisionExhausted(
            f"colength walk to {max_colength} exceeds precision "
            f"{ctx.precision} minus guard")
    seen = {L.key()}
    count = 1
    yield L, 0
    level = [(L, 0)]
    while level:
        nxt = []
        for (M, c) in level:
            if c >= max_colength:
                continue
            for N, codim in maximal_stable_sublattices(M):
                cc = c + codim
                if cc > max_colength:
                    continue
                kk = N.key()
                if kk in seen:
                    continue
                seen.add(kk)
                count += 1
                if count > budget:
                    raise BudgetExceeded(
                        f"sublattice walk exceeded budget {budget}")
                nxt.append((N, cc))
        nxt.sort(key=lambda t: (t[1], t[0].key()))
        for item in nxt:
            yield item
        level = nxt


def sublattices_of_colength(L: Lattice, k: int,
                            budget: int = _SUBLATTICE_BUDGET):
    """The full stable sublattices of L of colength exactly k."""
    return [N for (N, c) in iter_stable_sublattices(L, k, budget=budget)
            if c == k]


# ---------------------------------------------------------------------------
# Hom and End


def hom_generators(L: Lattice, N: Lattice, boost: int = 0):
    """Free generators of the R-module of maps L -> N, as coefficient
    matrices: row t holds the coordinates of the image of echelon row t of L
    over the echelon basis of N.

    The defining condition is A_g C = C B_g for the induced coefficient
    actions of every basis element; the solutions form a lattice in the
    K-Hom space, and the free directions of the linearized kernel generate
    it.  With ``boost`` the whole computation is redone with extra guard
    digits (the echelon rows are exact integers, so they re-enter a larger
    ring unchanged); callers compare generator counts across boosts.
    """
    if L.rank == 0 or N.rank == 0:
        return []
    base = L.space.ring
    Rb = base.boosted(boost) if boost else base
    A = induced_action(L, ring=Rb) if boost else induced_action(L)
    B = induced_action(N, ring=Rb) if boost else induced_action(N)
    kL, kN = L.rank, N.rank
    rows = []
    for Ag, Bg in zip(A, B):
        for i in range(kL):
            for j in range(kN):
                eq = [0] * (kL * kN)
                for s in range(kL):
                    if Ag[i][s]:
                        eq[s * kN + j] = Rb.add(eq[s * kN + j], Ag[i][s])
                for t in range(kN):
                    if Bg[t][j]:
                        eq[i * kN + t] = Rb.sub(eq[i * kN + t], Bg[t][j])
                if any(eq):
                    rows.append(eq)
    if not rows:
        gens = [[1 if i == j else 0 for j in range(kL * kN)]
                for i in range(kL * kN)]
    else:
        gens = cr.kernel_free_generators(Rb, rows)
    return [[x[i * kN:(i + 1) * kN] for i in range(kL)] for x in gens]


def end_generators(L: Lattice):
    if "end" not in L._cache:
        L._cache["end"] = hom_generators(L, L)
    return L._cache["end"]


def hom_rank_stable(L: Lattice, N: Lattice) -> int:
    """Number of Hom generators, recomputed with two extra guard digits;
    a disagreement raises NoStabilization."""
    h0 = len(hom_generators(L, N))
    h1 = len(hom_generators(L, N, boost=2))
    if h0 != h1:
        raise NoStabilization(
            f"Hom rank changed from {h0} to {h1} under extra precision")
    return h0


def end_residue_algebra(L: Lattice):
    """(End(L)/pi as a FinAlgebra on the generator residues, generators).

    The residues of the free End generators are F_p-independent (free
    directions of a direct summand stay independent mod pi); products and
    the identity are genuine endomorphisms, so they express over the
    generators, giving structure constants and the unit."""
    if "end_alg" in L._cache:
        return L._cache["end_alg"]
    R = L.space.ring
    gens = end_generators(L)
    h = len(gens)
    if h == 0:
        raise CheckFailed("nonzero lattice with no endomorphisms")
    F = prime_field(R.p)
    flat = [[x % R.p for row in g for x in row] for g in gens]
    if fd.rank(F, flat) != h:
        raise PrecisionExhausted("endomorphism residues unexpectedly dependent")
    Gt = fd.mat_transpose(flat)
    k = L.rank
    table = []
    for i in range(h):
        row = []
        for j in range(h):
            P = cr.mat_mul(R, gens[i], gens[j])
            y = fd.solve(F, Gt, [x % R.p for r in P for x in r])
            if y is None:
                raise PrecisionExhausted("endomorphism product failed to express")
            row.append(y)
        table.append(row)
    yone = fd.solve(F, Gt, [x % R.p for r in cr.eye(R, k) for x in r])
    if yone is None:
        raise PrecisionExhausted("identity endomorphism failed to express")
    alg = FinAlgebra(F, table, yone, name="End/pi")
    L._cache["end_alg"] = (alg, gens)
    return alg, gens


# ---------------------------------------------------------------------------
# isomorphism and decomposition


def isomorphism_witness(L: Lattice, N: Lattice, cap: int = _ISO_SEARCH_CAP):
    """Coefficient matrix of an isomorphism L -> N (up to pi-power scaling),
    or None -- a certified answer either way; raises Undecided only when an
    oversized search space was sampled without success.

    A combination of Hom generators is an isomorphism iff its residue
    matrix is invertible over F_p: an invertible residue lifts to a unit,
    and an isomorphism stays invertible mod pi.  Whether the residue is
    invertible depends only on the F_p coefficients, so the search over
    F_p^h is complete.
    """
    if L.rank != N.rank:
        return None
    if L.rank == 0:
        return []
    Ln, Nn = class_normal_form(L), class_normal_form(N)
    if Ln.key() == Nn.key():
        return cr.eye(L.space.ring, L.rank)
    R = L.space.ring
    gens = hom_generators(Ln, Nn)
    if not gens:
        return None
    F = prime_field(R.p)
    res = [_residue_matrix(R, g) for g in gens]
    coeffs, certified = find_unit_combination(F, res, cap=cap)
    if coeffs is None:
        if certified:
            return None
        raise Undecided(
            f"isomorphism search space p^{len(gens)} exceeded cap {cap}")
    W = cr.zmat(L.rank, L.rank)
    for c, g in zip(coeffs, gens):
        if c:
            W = cr.mat_add(R, W, cr.mat_scal(R, c % R.p, g))
    return W


def is_isomorphic(L: Lattice, N: Lattice, cap: int = _ISO_SEARCH_CAP) -> bool:
    return isomorphism_witness(L, N, cap=cap) is not None


def decompose_lattice(L: Lattice):
    """Indecomposable sublattices whose direct sum is L.

    A primitive idempotent of End(L)/pi is lifted by Newton steps
    F <- 3F^2 - 2F^3 (each step at least doubles the valuation of the
    idempotency defect), the image and co-image rows split L, and both
    parts recurse.  Indecomposability of the leaves is certified by their
    End/pi having a single primitive idempotent (a local quotient)."""
    if L.rank == 0:
        return []
    R = L.space.ring
    alg, gens = end_residue_algebra(L)
    pid = alg.primitive_idempotent_decomposition()
    if len(pid) == 1:
        return [L]
    evec, _rows = pid[0]
    E = cr.zmat(L.rank, L.rank)
    for c, g in zip(evec, gens):
        if c:
            E = cr.mat_add(R, E, cr.mat_scal(R, c % R.p, g))
    for _ in range(64):
        E2 = cr.mat_mul(R, E, E)
        if cr.mat_key(E2) == cr.mat_key(E):
            break
        E3 = cr.mat_mul(R, E2, E)
        E = cr.mat_sub(R, cr.mat_scal(R, R.from_int(3), E2),
                       cr.mat_scal(R, R.from_int(2), E3))
    else:
        raise DecompositionUncertified("idempotent lift did not converge")
    rows = [list(r) for r in L.rows]
    part1 = make_lattice(L.space, cr.mat_mul(R, E, rows), L.denom)
    comp = cr.mat_sub(R, cr.eye(R, L.rank), E)
    part2 = make_lattice(L.space, cr.mat_mul(R, comp, rows), L.denom)
    if part1.rank + part2.rank != L.rank or \
            lattice_sum(part1, part2).key() != L.key():
        raise DecompositionUncertified("idempotent split failed to recover the lattice")
    return decompose_lattice(part1) + decompose_lattice(part2)


# ---------------------------------------------------------------------------
# radical and trace lattices


def radical_sublattice(L: Lattice) -> Lattice:
    """L . J(order): pi L plus the images of the radical ideal generators."""
    R = L.space.ring
    rows = [[R.shift_up(x, 1) for x in row] for row in L.rows]
    for M in L.space.radical_ideal_action_mats():
        for row in L.rows:
            rows.append(cr.vec_matmul(R, list(row), M))
    return make_lattice(L.space, rows, L.denom)


def radical_colength(L: Lattice) -> int:
    """F_p-dimension of the top L / L J(order)."""
    return lattice_colength(L, radical_sublattice(L))


def trace_lattice(target: Lattice, sources) -> Lattice:
    """Sum of the images of all maps from the source lattices into target.

    Image rows are value-cut: generator coefficients are exact mod pi^m but
    their span carries junk above pi^(m-10), while genuine image content
    lives at small valuations."""
    R = target.space.ring
    rows = []
    for S in sources:
        for C in hom_generators(S, target):
            rows.extend(cr.mat_mul(R, C, [list(r) for r in target.rows]))
    rows = _clean_rows(R, rows)
    if not rows:
        return make_lattice(target.space, [])
    return make_lattice(target.space, rows, target.denom)


def radical_hom_generators(S: Lattice, T: Lattice):
    """Generators of the radical of Hom(S, T), for indecomposable S and T:
    every map if S and T are non-isomorphic; otherwise iso . J(End S),
    with J(End S) generated by lifts of the residue radical plus pi End."""
    if S.rank != T.rank or not is_isomorphic(S, T):
        return hom_generators(S, T)
    R = S.space.ring
    theta = isomorphism_witness(S, T)
    alg, gens = end_residue_algebra(S)
    out = []
    for coeffs in alg.radical_rows():
        M = cr.zmat(S.rank, S.rank)
        for c, g in zip(coeffs, gens):
            if c:
                M = cr.mat_add(R, M, cr.mat_scal(R, c % R.p, g))
        out.append(cr.mat_mul(R, M, theta))
    for g in gens:
        out.append(cr.mat_mul(R, [[R.shift_up(x, 1) for x in row] for row in g],
                              theta))
    return out


def radical_trace_lattice(target: Lattice, sources) -> Lattice:
    """Sum of images of radical maps from (indecomposable) sources."""
    R = target.space.ring
    rows = []
    for S in sources:
        for C in radical_hom_generators(S, target):
            rows.extend(cr.mat_mul(R, C, [list(r) for r in target.rows]))
    rows = _clean_rows(R, rows)
    if not rows:
        return make_lattice(target.space, [])
    return make_lattice(target.space, rows, target.denom)


# ---------------------------------------------------------------------------
# invariants used by catalogs


def multiplier_lattice(L: Lattice) -> Lattice:
    """The coefficient order O(L) = {a in ambient algebra : L a <= L} as a
    lattice in the regular coordinate space.

    Requires a full lattice in the regular-multiplicity module.  Since the
    identity lies in the order's standard lattice S, O(L) <= pi^{-c} S for
    c bounded by the two-sided distance between L and S, so a single kernel
    computation at denominator level c captures O(L) exactly.  O(L) is an
    isomorphism-class invariant (an isomorphism extends to the ambient
    module and transports multipliers), unchanged under scaling."""
    sp = L.space
    ctx = sp.ctx
    if sp.module is None or sp.module.mults != ctx.semisimple.lengths:
        raise UnsupportedModule("multipliers need the regular-multiplicity module")
    if L.rank != sp.dim:
        raise UnsupportedModule("multipliers need a full lattice")
    R = sp.ring
    S = ctx.regular_lattice()
    e1 = _containment_shift(S, L)
    e2 = _containment_shift(L, S)
    c = e1 + e2
    k = L.rank
    raw = ctx.module_basis_rows()
    k0 = len(raw)
    picc = R.pi_power(c)
    rows = []
    Hg = []
    for g in sp.gens:
        Hg.append([cr.vec_matmul(R, list(row), g) for row in L.rows])
    for i in range(k):
        for col in range(sp.dim):
            eq = [0] * (k0 + k * k)
            for t in range(k0):
                eq[t] = Hg[t][i][col]
            for j in range(k):
                if L.rows[j][col]:
                    eq[k0 + i * k + j] = R.neg(R.mul(picc, L.rows[j][col]))
            rows.append(eq)
    sols = cr.kernel_free_generators(R, rows)
    out_rows = _clean_rows(R, [cr.vec_matmul(R, y[:k0], raw) for y in sols])
    return make_lattice(ctx.regular_space(), out_rows, c)


def _containment_shift(A: Lattice, B: Lattice) -> int:
    """Smallest e >= 0 with pi^e A <= B."""
    limit = 2 * A.space.ctx.precision
    for e in range(limit + 1):
        if lattice_contains(B, scaled(A, e)):
            return e
    raise PrecisionExhausted(f"no containment shift up to {limit}")


def split_defect(L: Lattice):
    """Colength in L of the sum of its per-component coordinate sections,
    or None when the sections do not fill the rank.  Zero iff L is the
    direct sum of its component intersections; invariant under isomorphism
    because isomorphisms commute with the central component projections."""
    sp = L.space
    R = sp.ring
    support = sorted({j for (j, _c, _o, _d) in sp.blocks})
    rows_all = []
    for j in support:
        other = [c for jj in support if jj != j for c in sp.comp_columns(jj)]
        if not other:
            rows_all.extend(list(r) for r in L.rows)
            continue
        sub = [[row[c] for c in other] for row in L.rows]
        for y in cr.left_kernel_free_generators(R, sub):
            rows_all.append(cr.vec_matmul(R, y, [list(r) for r in L.rows]))
    S = make_lattice(sp, _clean_rows(R, rows_all), L.denom)
    if S.rank != L.rank:
        return None
    return lattice_colength(L, S)


def hom_profile(L: Lattice, probes) -> tuple:
    """Hom-generator counts against a fixed probe list, both directions."""
    return tuple(len(hom_generators(P, L)) for P in probes) + \
        tuple(len(hom_generators(L, P)) for P in probes)


def congruence_split_profile(L: Lattice) -> tuple:
    """Nonzero diagonal exponents of L inside its component-split closure.

    The closure is the sum of the two coordinate-block projections of L:
    a lattice that splits over the components and contains L with finite
    colength.  Expressing L over the closure basis and diagonalizing gives
    exponents invariant under isomorphism (lattice maps commute with the
    central projections) and additive over direct sums, so the sorted
    positive part is a classifying key wherever the two-generator classes
    are the only glued indecomposables.
    """
    sp = L.space
    R = sp.ring
    support = sorted({j for (j, _c, _o, _d) in sp.blocks})
    split_rows = []
    for j in support:
        cols = set(sp.comp_columns(j))
        for row in L.rows:
            masked = [row[c] if c in cols else 0 for c in range(sp.dim)]
            if any(masked):
                split_rows.append(masked)
    X, _ = cr.express_rows(R, split_rows, [list(r) for r in L.rows])
    if X is None:
        raise CatalogIncomplete("lattice escaped its split closure")
    X = [[x % R.modulus for x in row] for row in X]
    exps, _, _ = cr.smith(R, X)
    if any(e is None for e in exps):
        raise CatalogIncomplete("split closure quotient not of finite length")
    return tuple(sorted((e for e in exps if e), reverse=True))


# ---------------------------------------------------------------------------
# class enumeration


def enumerate_classes(ctx: OrderContext, module,
                      budget: int = _CLASS_BFS_BUDGET):
    """Canonical representatives of the isomorphism classes of full stable
    lattices in the given module.

    Discovery walks sublattices of the standard lattice in colength order,
    descending only through one representative per class: an isomorphism of
    lattices transports maximal stable sublattices bijectively, so pruning
    known classes loses nothing, and processing in colength order makes the
    discovery colength of each class its minimal colength inside the
    standard lattice.  Every class scales into the standard lattice, so the
    walk is complete; it halts once every child lands in a known class.

    Representatives are then chosen intrinsically -- the minimal-key member
    of the (finite) set of sublattices at the class's minimal colength -- so
    the output does not depend on traversal order.
    """
    import heapq

    module = _as_module(module)
    if module.total == 0:
        raise UnsupportedModule("cannot enumerate lattice classes in the zero module")
    key = ("enum", module.mults)
    if key in ctx._catalogs:
        return ctx._catalogs[key]
    std = class_normal_form(standard_lattice(ctx, module))
    reps = [std]
    cmin = [0]
    seen = {std.key()}
    heap = [(0, std.key(), std)]
    while heap:
        c, _k, node = heapq.heappop(heap)
        for N, codim in maximal_stable_sublattices(node):
            kk = N.key()
            if kk in seen:
                continue
            seen.add(kk)
            if any(is_isomorphic(N, rp) for rp in reps):
                continue
            if len(reps) >= budget:
                raise BudgetExceeded(
                    f"class walk exceeded budget {budget} for {module}")
            reps.append(N)
            cmin.append(c + codim)
            heapq.heappush(heap, (c + codim, kk, N))
    cstar = max(cmin)
    best = {}
    for N, c in iter_stable_sublattices(std, cstar):
        for i, rp in enumerate(reps):
            if c == cmin[i] and N.rank == rp.rank and is_isomorphic(N, rp):
                if i not in best or N.key() < best[i].key():
                    best[i] = N
                break
    out = [best[i] for i in range(len(reps))]
    ctx._catalogs[key] = out
    return out


# ---------------------------------------------------------------------------
# catalogs


class CatalogEntry:
    __slots__ = ("label", "lattice", "invariant", "projective", "injective")

    def __init__(self, label, lattice, invariant=(), projective=None,
                 injective=None):
        self.label = label
        self.lattice = lattice
        self.invariant = invariant
        self.projective = projective
        self.injective = injective

    def __repr__(self):
        return f"CatalogEntry({self.label!r}, rank={self.lattice.rank})"


class IsoCatalog:
    """Ordered catalog of pairwise non-isomorphic lattice classes with a
    classification routine.  Construction validates the entries against the
    traversal-based enumeration, so the fast per-variant classifiers are
    certified on the module they serve."""

    def __init__(self, ctx, kind, module, entries, mode, aux=None):
        self.ctx = ctx
        self.kind = kind
        self.module = module
        self.entries = list(entries)
        self.mode = mode
        self.aux = aux or {}

    @property
    def size(self) -> int:
        return len(self.entries)

    def labels(self):
        return [e.label for e in self.entries]

    def lattices(self):
        return [e.lattice for e in self.entries]

    def entry(self, i) -> CatalogEntry:
        return self.entries[i]

    def index_of_label(self, label) -> int:
        for i, e in enumerate(self.entries):
            if e.label == label:
                return i
        raise KeyError(label)

    def classify(self, L: Lattice) -> int:
        """Index of the class of L; CatalogIncomplete if unmatched."""
        if self.mode == "single":
            if L.rank != self.entries[0].lattice.rank:
                raise CatalogIncomplete("rank outside the catalog")
            return 0
        if self.mode == "multiplier":
            mk = multiplier_lattice(L).key()
            idx = self.aux["multiplier_keys"].get(mk)
            if idx is None:
                raise CatalogIncomplete("unknown multiplier order")
            return idx
        if self.mode == "colength_mod":
            std = self.aux["std"]
            if L.space.module.mults != std.space.module.mults:
                # the colength residue only makes sense for full lattices in
                # the catalog's own module; match summands of larger modules
                # directly
                return self._classify_general(L)
            r = lattice_index(std, class_normal_form(L)) % self.aux["modulus"]
            idx = self.aux["residues"].get(r)
            if idx is None:
                raise CatalogIncomplete("unknown colength residue")
            return idx
        if self.mode == "split_defect":
            d = split_defect(L)
            idx = self.aux["defects"].get(d)
            if idx is None:
                raise CatalogIncomplete(f"unknown split defect {d}")
            return idx
        if self.mode == "split_multiset":
            prof = congruence_split_profile(L)
            idx = self.aux["profiles"].get(prof)
            if idx is None:
                raise CatalogIncomplete(f"unknown split profile {prof}")
            return idx
        if self.mode == "ind_components":
            return self._classify_ind_components(L)
        return self._classify_general(L)

    def _classify_general(self, L: Lattice) -> int:
        probes = self.aux.get("probes")
        inv = hom_profile(L, probes) if probes else None
        for i, e in enumerate(self.entries):
            if e.lattice.rank != L.rank:
                continue
            if inv is not None and e.invariant and e.invariant != inv:
                continue
            if is_isomorphic(e.lattice, L):
                return i
        raise CatalogIncomplete("lattice matches no catalog class")

    def _classify_ind_components(self, L: Lattice) -> int:
        # congruence/cusp indecomposables: full-support rank-2 classes are
        # told apart by their multiplier order, rank-1 by their component.
        ctx = self.ctx
        if L.rank == ctx.semisimple.ncomp == 2 or \
                (ctx.spec.variant == "cusp" and L.rank == 2):
            if L.space.module is not None and \
                    L.space.module.mults == ctx.semisimple.lengths:
                mk = multiplier_lattice(L).key()
                idx = self.aux["multiplier_keys"].get(mk)
                if idx is not None:
                    return idx
        return self._classify_general(L)

    def __repr__(self):
        return (f"IsoCatalog({self.ctx.spec.label}, kind={self.kind!r}, "
                f"classes={self.labels()})")


def _congruence_lambda_rows(ctx, k):
    return [[1, 1], [0, ctx.ring.pi_power(k)]]


def _cusp_lambda_rows(ctx, k):
    return [[1, 0], [0, ctx.ring.pi_power(k)]]


def _validate_catalog(cat: IsoCatalog, reps):
    """Entries must biject with the enumerated classes and classify back to
    themselves; any failure marks the catalog (or its classifier) wrong."""
    if len(reps) != cat.size:
        raise CatalogIncomplete(
            f"catalog lists {cat.size} classes, enumeration found {len(reps)}")
    seen = set()
    for rep in reps:
        idx = cat.classify(rep)
        if idx in seen:
            raise CatalogIncomplete("two enumerated classes classified alike")
        seen.add(idx)
        if not is_isomorphic(cat.entries[idx].lattice, rep):
            raise CatalogIncomplete("classifier disagrees with isomorphism test")
    for i, e in enumerate(cat.entries):
        if cat.classify(e.lattice) != i:
            raise CatalogIncomplete("catalog entry classifies away from itself")


def full_lattice_catalog(ctx: OrderContext, module) -> IsoCatalog:
    """Catalog of the isomorphism classes of full stable lattices in the
    module, with the presentation ordering of each structured variant."""
    module = _as_module(module)
    key = ("full", module.mults)
    if key in ctx._catalogs:
        return ctx._catalogs[key]
    reps = enumerate_classes(ctx, module)
    sp = ctx.space(module)
    variant = ctx.spec.variant
    n = ctx.spec.n
    cat = None
    if variant == "congruence" and module.mults == (1, 1):
        entries = [CatalogEntry(f"Lambda_{k}",
                                make_lattice(sp, _congruence_lambda_rows(ctx, k)))
                   for k in range(n, -1, -1)]
        keys = {}
        for i, e in enumerate(entries):
            keys[multiplier_lattice(e.lattice).key()] = i
        if len(keys) != len(entries):
            raise CatalogIncomplete("multiplier orders failed to separate classes")
        cat = IsoCatalog(ctx, "full", module, entries, "multiplier",
                         {"multiplier_keys": keys})
    elif variant == "cusp" and module.mults == (1,):
        entries = [CatalogEntry(f"Lambda_{k}",
                                make_lattice(sp, _cusp_lambda_rows(ctx, k)))
                   for k in range(n, -1, -1)]
        keys = {}
        for i, e in enumerate(entries):
            keys[multiplier_lattice(e.lattice).key()] = i
        if len(keys) != len(entries):
            raise CatalogIncomplete("multiplier orders failed to separate classes")
        cat = IsoCatalog(ctx, "full", module, entries, "multiplier",
                         {"multiplier_keys": keys})
    elif variant == "tiled" and module.mults == (1,):
        E = ctx.spec.exponents
        order = [1] + list(range(n, 1, -1))
        entries = []
        for i in order:
            rows = cr.zmat(n, n)
            for j in range(n):
                rows[j][j] = ctx.ring.pi_power(E[i - 1][j])
            entries.append(CatalogEntry(f"P_{i}", make_lattice(sp, rows)))
        distinct = all(not is_isomorphic(a.lattice, b.lattice)
                       for a, b in itertools.combinations(entries, 2))
        std = class_normal_form(standard_lattice(ctx, module))
        residues = {}
        for i, e in enumerate(entries):
            r = lattice_index(std, class_normal_form(e.lattice)) % n
            residues[r] = i
        if distinct and len(residues) == len(entries):
            cat = IsoCatalog(ctx, "full", module, entries, "colength_mod",
                             {"std": std, "modulus": n, "residues": residues})
        # else fall through to the general catalog below
    elif variant == "congruence" and module.mults == (2, 1):
        entries = []
        defects = {}
        for k in range(n, 0, -1):
            rows = [[1, 0, 1], [0, 0, ctx.ring.pi_power(k)], [0, 1, 0]]
            entries.append(CatalogEntry(f"Lambda_{k}+RxO", make_lattice(sp, rows)))
            defects[k] = len(entries) - 1
        entries.append(CatalogEntry("RxO+RxO+OxR",
                                    make_lattice(sp, cr.eye(ctx.ring, 3))))
        defects[0] = len(entries) - 1
        for d, i in defects.items():
            if split_defect(entries[i].lattice) != d:
                raise CatalogIncomplete("split defect of a catalog entry is off")
        cat = IsoCatalog(ctx, "full", module, entries, "split_defect",
                         {"defects": defects})
    elif variant == "congruence" and module.mults[0] > 0 and module.mults[1] > 0:
        key_of = {}
        for rep in reps:
            prof = congruence_split_profile(rep)
            if prof in key_of:
                raise CatalogIncomplete("split profiles failed to separate classes")
            key_of[prof] = rep
        m1, m2 = module.mults
        entries = []
        profiles = {}
        for prof in sorted(key_of, key=lambda t: (sum(t), t), reverse=True):
            s = len(prof)
            if s > min(m1, m2):
                raise CatalogIncomplete("split profile longer than the module allows")
            parts = [f"Lambda_{k}" for k in prof] + \
                ["RxO"] * (m1 - s) + ["OxR"] * (m2 - s)
            profiles[prof] = len(entries)
            entries.append(CatalogEntry("+".join(parts), key_of[prof]))
        cat = IsoCatalog(ctx, "full", module, entries, "split_multiset",
                         {"profiles": profiles})
    elif variant == "congruence" and module.total and \
            (module.mults[0] == 0 or module.mults[1] == 0):
        comp = 0 if module.mults[1] == 0 else 1
        m = module.mults[comp]
        lab = "+".join(["RxO" if comp == 0 else "OxR"] * m)
        entries = [CatalogEntry(lab, standard_lattice(ctx, module))]
        cat = IsoCatalog(ctx, "full", module, entries, "single")
    if cat is None:
        std = class_normal_form(standard_lattice(ctx, module))
        probes = [std, radical_sublattice(std),
                  radical_sublattice(radical_sublattice(std))]
        entries = [CatalogEntry(f"class_{i}", rep) for i, rep in enumerate(reps)]
        for e in entries:
            e.invariant = hom_profile(e.lattice, probes)
        cat = IsoCatalog(ctx, "full", module, entries, "general",
                         {"probes": probes})
    _validate_catalog(cat, reps)
    ctx._catalogs[key] = cat
    return cat


def ind_lattices(ctx: OrderContext, budget: int = _CLASS_BFS_BUDGET) -> IsoCatalog:
    """Catalog of the indecomposable lattice classes, with projectivity and
    injectivity flags, in the presentation order of each variant.

    Scans every module with multiplicities at most the regular ones,
    enumerates its classes, and splits them into indecomposables; a
    subspace-enumeration budget overflow raises BudgetExceeded, except that
    the triangular tiled preset is hereditary and served directly by its
    (validated) diagonal-pattern classes."""
    key = ("ind",)
    if key in ctx._catalogs:
        return ctx._catalogs[key]
    variant = ctx.spec.variant
    n = ctx.spec.n
    if variant == "tiled" and ctx.spec.exponents == \
            OrderSpec.tiled_triangular(n).exponents:
        cat = full_lattice_catalog(ctx, (1,))
        entries = []
        for e in cat.entries:
            alg, _ = end_residue_algebra(e.lattice)
            if len(alg.primitive_idempotent_decomposition()) != 1:
                raise CatalogIncomplete("diagonal pattern unexpectedly decomposable")
            entries.append(CatalogEntry(e.label, e.lattice))
        out = IsoCatalog(ctx, "ind", None, entries, cat.mode, cat.aux)
    else:
        reg = ctx.regular_module()
        found = []
        ranges = [range(m + 1) for m in reg.mults]
        for mv in sorted(itertools.product(*ranges)):
            if sum(mv) == 0:
                continue
            for rep in enumerate_classes(ctx, mv, budget=budget):
                for S in decompose_lattice(rep):
                    Sn = class_normal_form(S)
                    if not any(Sn.rank == X.rank and is_isomorphic(Sn, X)
                               for X in found):
                        found.append(Sn)
        entries, mode, aux = _label_ind_entries(ctx, found)
        out = IsoCatalog(ctx, "ind", None, entries, mode, aux)
    for e in out.entries:
        e.projective = is_projective_lattice(ctx, e.lattice)
        e.injective = is_injective_lattice(ctx, e.lattice)
    ctx._catalogs[key] = out
    return out


def _label_ind_entries(ctx, found):
    variant = ctx.spec.variant
    n = ctx.spec.n
    if variant == "congruence":
        full = [X for X in found if X.rank == 2 and
                X.space.module.mults == (1, 1)]
        rank1 = [X for X in found if X.rank == 1]
        by_mult = {}
        for X in full:
            by_mult[multiplier_lattice(X).key()] = X
        entries = []
        keys = {}
        for k in range(n, 0, -1):
            lam = make_lattice(ctx.space((1, 1)), _congruence_lambda_rows(ctx, k))
            mk = multiplier_lattice(lam).key()
            if mk not in by_mult:
                raise CatalogIncomplete(f"Lambda_{k} missing from the scan")
            keys[mk] = len(entries)
            entries.append(CatalogEntry(f"Lambda_{k}", by_mult.pop(mk)))
        if by_mult:
            raise CatalogIncomplete("unexpected extra full indecomposables")
        comps = {}
        for X in rank1:
            j = X.space.blocks[0][0]
            comps.setdefault(j, []).append(X)
        for j, lab in ((0, "RxO"), (1, "OxR")):
            if len(comps.get(j, [])) != 1:
                raise CatalogIncomplete(f"rank-1 classes on component {j} != 1")
            entries.append(CatalogEntry(lab, comps[j][0]))
        if len(entries) != len(found):
            raise CatalogIncomplete("indecomposable count mismatch")
        return entries, "ind_components", {"multiplier_keys": keys,
                                           "probes": _default_probes(ctx)}
    if variant == "cusp":
        by_mult = {}
        for X in found:
            if X.rank != 2:
                raise CatalogIncomplete("cusp indecomposable of unexpected rank")
            by_mult[multiplier_lattice(X).key()] = X
        entries = []
        keys = {}
        for k in range(n, -1, -1):
            lam = make_lattice(ctx.space((1,)), _cusp_lambda_rows(ctx, k))
            mk = multiplier_lattice(lam).key()
            if mk not in by_mult:
                raise CatalogIncomplete(f"Lambda_{k} missing from the scan")
            keys[mk] = len(entries)
            entries.append(CatalogEntry(f"Lambda_{k}", by_mult.pop(mk)))
        if by_mult:
            raise CatalogIncomplete("unexpected extra cusp indecomposables")
        return entries, "ind_components", {"multiplier_keys": keys,
                                           "probes": _default_probes(ctx)}
    entries = [CatalogEntry(f"ind_{i}", X)
               for i, X in enumerate(sorted(found, key=lambda L: (L.rank, L.key())))]
    return entries, "general", {"probes": _default_probes(ctx)}


def _default_probes(ctx):
    std = ctx.regular_lattice()
    return [std, radical_sublattice(std)]


# ---------------------------------------------------------------------------
# projectivity / injectivity


def _hnf_row_actions(ctx, gens):
    """Action matrices, on a space with the given generator list, of the
    algebra elements carried by the echelon rows of the regular lattice."""
    R = ctx.ring
    coords = ctx.hnf_row_coords()
    out = []
    for y in coords:
        dim = len(gens[0])
        G = cr.zmat(dim, dim)
        for t, c in enumerate(y):
            if c:
                G = cr.mat_add(R, G, cr.mat_scal(R, c, gens[t]))
        out.append(G)
    return out


def _is_split_projective(ctx, X: Lattice, reg: Lattice, row_actions) -> bool:
    """Does the evaluation surjection (reg)^rank -> X split?

    The i-th component sends a to (echelon row i of X) . a; its coefficient
    matrix over reg's echelon basis is assembled from the row actions.  A
    section is an R-combination of Hom(X, reg) generators per component with
    sum of composites equal to the identity -- a linear system whose
    solvability is equivalent to projectivity (a solution at working
    precision differs from a genuine section by a unit automorphism)."""
    if X.rank == 0:
        return True
    R = ctx.ring
    k = X.rank
    rho = []
    for h in X.rows:
        imgs = [cr.vec_matmul(R, list(h), G) for G in row_actions]
        C, _H = cr.express_rows(R, [list(r) for r in X.rows], imgs)
        if C is None:
            raise CheckFailed("evaluation image left the lattice")
        rho.append(C)
    psis = hom_generators(X, reg)
    if not psis:
        return False
    cols = []
    for Ci in rho:
        for psi in psis:
            M = cr.mat_mul(R, psi, Ci)
            cols.append([x for row in M for x in row])
    A = cr.transpose(cols)
    b = [x for row in cr.eye(R, k) for x in row]
    return _solve_linear_reduced(R, A, b) is not None


def is_projective_lattice(ctx: OrderContext, X: Lattice) -> bool:
    acts = _hnf_row_actions(ctx, X.space.gens)
    return _is_split_projective(ctx, X, ctx.regular_lattice(), acts)


def is_injective_lattice(ctx: OrderContext, X: Lattice) -> bool:
    """X is injective among lattices iff its R-dual, a lattice over the
    opposite order realized on the dual basis of X's echelon rows (opposite
    action = transposed induced matrices), is projective on that side."""
    if X.rank == 0:
        return True
    dual_gens = [cr.transpose(A) for A in induced_action(X)]
    dsp = AbstractSpace(ctx, dual_gens, X.rank, tag="dual")
    Xdual = make_lattice(dsp, cr.eye(ctx.ring, X.rank))
    opreg = ctx.op_regular_lattice()
    acts = _hnf_row_actions(ctx, dual_gens)
    return _is_split_projective(ctx, Xdual, opreg, acts)


def proj_inj_flags(ctx: OrderContext, X: Lattice):
    """(projective, injective) for a lattice over the context's order."""
    return is_projective_lattice(ctx, X), is_injective_lattice(ctx, X)


# ---------------------------------------------------------------------------
# overrings


def overring_restriction(ctx: OrderContext, over: OrderSpec,
                         catalog: IsoCatalog | None = None) -> IsoCatalog:
    """Restrict the indecomposable catalog to lattices stable over a larger
    order inside the same ambient algebra.

    Verifies that ``over`` really is an overring: same component shapes,
    basis containment of the context's order, multiplicative closure, and
    the identity; then keeps the catalog entries stable under the overring
    action."""
    R = ctx.ring
    over_semi = semisimple_data(over, ctx.p)
    base_semi = ctx.semisimple
    if over_semi.ranks != base_semi.ranks or over_semi.lengths != base_semi.lengths:
        raise NotAnOverring("candidate lives in a different ambient algebra")
    if over.variant == "cusp" and ctx.flavor != "equal":
        raise NotAnOverring("cusp overring needs the equal-characteristic flavor")
    over_basis = _basis_matrices(over, R)
    over_rows = [_flatten_elem(m) for m in over_basis]
    base_rows = ctx.raw_basis_rows()
    if not cr.row_module_contains(R, over_rows, base_rows):
        raise NotAnOverring("order is not contained in the candidate")
    ident = _flatten_elem(ctx.identity_components())
    if not cr.row_module_contains(R, over_rows, [ident]):
        raise NotAnOverring("candidate does not contain the identity")
    for a in over_basis:
        for b in over_basis:
            prod = tuple(cr.mat_mul(R, Ma, Mb) for Ma, Mb in zip(a, b))
            if not cr.row_module_contains(R, over_rows, [_flatten_elem(prod)]):
                raise NotAnOverring("candidate is not multiplicatively closed")
    cat = catalog or ind_lattices(ctx)
    survivors = []
    for e in cat.entries:
        sp = e.lattice.space
        stable = True
        for elem in over_basis:
            g = sp.place(elem)
            imgs = [cr.vec_matmul(R, list(row), g) for row in e.lattice.rows]
            if not cr.row_module_contains(R, [list(r) for r in e.lattice.rows],
                                          imgs):
                stable = False
                break
        if stable:
            survivors.append(CatalogEntry(e.label, e.lattice, e.invariant,
                                          e.projective, e.injective))
    return IsoCatalog(ctx, "ind", None, survivors, "general",
                      {"probes": _default_probes(ctx)})


# ---------------------------------------------------------------------------
# finite quotient modules


def finite_quotients_isomorphic(pair_a, pair_b,
                                cap: int = _ISO_SEARCH_CAP) -> bool:
    """Are L/W and L'/W' isomorphic as modules over the order?

    Maps L -> L'/W' are coefficient matrices C with the Hom condition
    holding modulo the coordinate span of W' (one slack block per basis
    element) and killing W; the free generators of that solution module
    cover every module map.  By Nakayama a map between equal-cardinality
    quotients is an isomorphism iff the mod-pi rank of its image rows
    stacked on W's coordinates is full, which depends only on the F_p
    coefficient vector, so the search is complete; exhausting an oversized
    space raises Undecided."""
    L, W = pair_a
    L2, W2 = pair_b
    if L.denom != W.denom or L2.denom != W2.denom:
        raise UnsupportedModule("quotient pairs must share a denominator")
    c1 = lattice_colength(L, W)
    c2 = lattice_colength(L2, W2)
    if c1 != c2:
        return False
    if c1 == 0:
        return True
    R = L.space.ring
    k, k2 = L.rank, L2.rank
    A = induced_action(L)
    B = induced_action(L2)
    CW, _ = cr.express_rows(R, [list(r) for r in L.rows],
                            [list(r) for r in W.rows])
    CW2, _ = cr.express_rows(R, [list(r) for r in L2.rows],
                             [list(r) for r in W2.rows])
    if CW is None or CW2 is None:
        raise CheckFailed("quotient pair is not nested")
    ng = len(A)
    nC = k * k2
    # unknowns: C (nC), one slack Z_g per basis element (nC each), and Z_w
    total = nC * (ng + 2)
    rows = []
    for gidx, (Ag, Bg) in enumerate(zip(A, B)):
        zoff = nC * (1 + gidx)
        for i in range(k):
            for j in range(k2):
                eq = [0] * total
                for s in range(k):
                    if Ag[i][s]:
                        eq[s * k2 + j] = R.add(eq[s * k2 + j], Ag[i][s])
                for t in range(k2):
                    if Bg[t][j]:
                        eq[i * k2 + t] = R.sub(eq[i * k2 + t], Bg[t][j])
                for t in range(k2):
                    if CW2[t][j]:
                        eq[zoff + i * k2 + t] = R.neg(CW2[t][j])
                rows.append(eq)
    zoff = nC * (1 + ng)
    for i in range(k):
        for j in range(k2):
            eq = [0] * total
            for s in range(k):
                if CW[i][s]:
                    eq[s * k2 + j] = R.add(eq[s * k2 + j], CW[i][s])
            for t in range(k2):
                if CW2[t][j]:
                    eq[zoff + i * k2 + t] = R.neg(CW2[t][j])
            rows.append(eq)
    sols = cr.kernel_free_generators(R, rows)
    cand = []
    seen = set()
    F = prime_field(R.p)
    for x in sols:
        Cbar = [[x[i * k2 + j] % R.p for j in range(k2)] for i in range(k)]
        mk = tuple(tuple(r) for r in Cbar)
        if any(any(row) for row in Cbar) and mk not in seen:
            seen.add(mk)
            cand.append(Cbar)
    if not cand:
        return False
    W2bar = [[x % R.p for x in row] for row in CW2]
    h = len(cand)
    if R.p ** h > cap:
        raise Undecided(f"quotient isomorphism search space p^{h} exceeds cap")
    for coeffs in itertools.product(range(R.p), repeat=h):
        if not any(coeffs):
            continue
        S = fd.mat_zero(F, k, k2)
        for c, Cb in zip(coeffs, cand):
            if c:
                S = fd.mat_add(F, S, fd.mat_scal(F, c, Cb))
        if fd.rank(F, S + W2bar) == k2:
            return True
    return False
