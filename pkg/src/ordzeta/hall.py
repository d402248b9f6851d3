"""Hall numbers, Hall polynomials and Hall modules for nilpotent
representations of the cyclic quiver, together with the lattice-counting
realization of the degree-m Hall module over the cyclic tiled order, the
bridge identifying the generating-series action with zeta matrices, and the
T = 1 Lie-theoretic checks on the generic module.

Two counting worlds meet here:

* the *quiver world*: finite-dimensional nilpotent representations of the
  cyclic quiver on ``n`` vertices over a finite field, whose iso classes are
  multipartitions; Hall numbers count subrepresentations with prescribed
  sub/quotient types, and Hall polynomials interpolate them in the field
  size;
* the *lattice world*: full lattices over the cyclic tiled order inside a
  fixed module; iso classes are compositions of ``m`` over the ``n``
  projectives, and the Hall module action counts overlattices with
  prescribed quotient type.

Vertices are indexed ``0 .. n-1`` with arrows ``i -> i+1 (mod n)``; all
vector conventions are row vectors acting on the right.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import chainring as cr
from . import fields as fd
from . import orders
from . import series
from . import zeta as zz
from .errors import (
    BudgetExceeded,
    CheckFailed,
    ConfigInvalid,
    InterpolationUnstable,
    NotNilpotent,
    UnsupportedModule,
)
from .orders import OrderContext, OrderSpec

_SUBSPACE_BUDGET = 500_000
_NODE_BUDGET = 200_000
_SAMPLE_POINTS = (2, 3, 4, 5)
_EXTENSION_POINTS = (7, 11, 13)
_PRIME_SAMPLES = (2, 3, 5, 7, 11, 13)


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    f = 2
    while f * f <= x:
        if x % f == 0:
            return False
        f += 1
    return True


def _hall_field(q: int):
    """Field of order q for Hall counting: primes and 4 are supported."""
    if q == 4 or _is_prime(q):
        return fd.field_of_order(q)
    raise UnsupportedModule(
        f"no field table for order {q}; primes and 4 are available")


# ---------------------------------------------------------------------------
# integer polynomials in one variable, coefficients low to high


def _poly_norm(cs) -> tuple:
    return tuple(series.poly_trim(list(cs)))


def poly_eval_int(cs, x):
    return series.poly_eval(list(cs), x)


def _fit_through(points):
    """Exact interpolation polynomial through (x, y) pairs, as a Fraction
    coefficient tuple (Lagrange over the rationals)."""
    acc = []
    for i, (xi, yi) in enumerate(points):
        term = [Fraction(yi)]
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            term = series.poly_mul(term, [Fraction(-xj), Fraction(1)])
            term = series.poly_scale(Fraction(1, xi - xj), term)
        acc = series.poly_add(acc, term)
    return tuple(series.poly_trim(acc))


def _stable_fit(values_at, sample_points, extension_points):
    """Interpolate a table of integer-valued functions of the sample point.

    ``values_at(x)`` returns a dict key -> int.  The fit through the first
    k points must agree with the fit through k+1 before it is accepted
    (degree stability); extension points are consumed one at a time when
    the initial sample set does not settle.  Returns dict key -> integer
    coefficient tuple.  Raises InterpolationUnstable when the points run
    out or a settled fit is not integral.
    """
    seq = list(sample_points) + list(extension_points)
    tables = []

    def fits(k):
        while len(tables) < k:
            tables.append(values_at(seq[len(tables)]))
        keys = set()
        for t in tables[:k]:
            keys.update(t)
        out = {}
        for key in keys:
            pts = [(seq[i], tables[i].get(key, 0)) for i in range(k)]
            out[key] = _fit_through(pts)
        return out

    prev = fits(max(2, len(sample_points) - 1))
    for k in range(max(3, len(sample_points)), len(seq) + 1):
        cur = fits(k)
        if prev == cur:
            result = {}
            for key, cs in cur.items():
                if any(c.denominator != 1 for c in cs):
                    raise InterpolationUnstable(
                        "settled fit has non-integral coefficients")
                result[key] = tuple(int(c) for c in cs)
            return result
        prev = cur
    raise InterpolationUnstable(
        f"no two consecutive fits agree after {len(seq)} sample points")


# ---------------------------------------------------------------------------
# multipartitions: iso classes of nilpotent cyclic-quiver representations


@dataclass(frozen=True)
class MultiPartition:
    """One partition per vertex; the partition at vertex i lists the lengths
    of the strings (uniserial summands) whose top sits at vertex i."""

    n: int
    parts: tuple

    @property
    def weight(self) -> int:
        return sum(sum(p) for p in self.parts)

    @property
    def is_empty(self) -> bool:
        return self.weight == 0

    def dim_vector(self) -> tuple:
        dims = [0] * self.n
        for i, l in self.strings():
            for k in range(l):
                dims[(i + k) % self.n] += 1
        return tuple(dims)

    def strings(self):
        """All (top vertex, length) pairs with multiplicity."""
        return [(i, l) for i, part in enumerate(self.parts) for l in part]

    def __str__(self):
        return "(" + "; ".join(
            ",".join(map(str, p)) if p else "-" for p in self.parts) + ")"


def multipartition(n: int, parts) -> MultiPartition:
    parts = list(parts)
    if len(parts) > n:
        raise ConfigInvalid("more partitions than vertices")
    parts += [()] * (n - len(parts))
    norm = []
    for p in parts:
        p = sorted((int(x) for x in p if x), reverse=True)
        if any(x < 0 for x in p):
            raise ConfigInvalid("partition parts must be positive")
        norm.append(tuple(p))
    return MultiPartition(n, tuple(norm))


def empty_mp(n: int) -> MultiPartition:
    return multipartition(n, [])


def simple_mp(n: int, vertex: int) -> MultiPartition:
    """Class of the one-dimensional representation at the given vertex."""
    return string_mp(n, vertex, 1)


def string_mp(n: int, vertex: int, length: int) -> MultiPartition:
    """Class of the uniserial representation of the given length whose top
    sits at the given vertex."""
    parts = [[] for _ in range(n)]
    parts[vertex % n] = [length]
    return multipartition(n, parts)


def multipartitions_with_dim_vector(n: int, dv) -> list:
    """All multipartitions whose representation has the given dimension
    vector (the possible iso types of an extension)."""
    dv = tuple(dv)
    total = sum(dv)
    strings = [(i, l) for i in range(n) for l in range(1, total + 1)]
    found = []

    def contrib(i, l):
        out = [0] * n
        for k in range(l):
            out[(i + k) % n] += 1
        return out

    def rec(idx, remaining, chosen):
        if all(x == 0 for x in remaining):
            parts = [[] for _ in range(n)]
            for (i, l) in chosen:
                parts[i].append(l)
            found.append(multipartition(n, parts))
            return
        if idx == len(strings):
            return
        i, l = strings[idx]
        c = contrib(i, l)
        max_count = min(
            (remaining[v] // c[v] for v in range(n) if c[v]), default=0)
        for count in range(max_count + 1):
            rem2 = [remaining[v] - count * c[v] for v in range(n)]
            if min(rem2) >= 0:
                rec(idx + 1, rem2, chosen + [(i, l)] * count)

    rec(0, list(dv), [])
    return found


# ---------------------------------------------------------------------------
# quiver representations


@dataclass(frozen=True)
class QuiverRep:
    """Row-vector representation of the cyclic quiver: vertex spaces
    F^dims[i] and arrow matrices maps[i] of shape dims[i] x dims[i+1 mod n];
    a vector v at vertex i moves along the arrow as v . maps[i]."""

    F: object
    n: int
    dims: tuple
    maps: tuple

    @property
    def total_dim(self) -> int:
        return sum(self.dims)


def quiver_rep(F, n, dims, maps) -> QuiverRep:
    dims = tuple(int(d) for d in dims)
    if len(dims) != n or len(maps) != n:
        raise ConfigInvalid("need one dimension and one arrow map per vertex")
    mats = []
    for i in range(n):
        M = [list(row) for row in maps[i]]
        if len(M) != dims[i] or any(len(r) != dims[(i + 1) % n] for r in M):
            raise ConfigInvalid(f"arrow map {i} has the wrong shape")
        mats.append(tuple(tuple(r) for r in M))
    return QuiverRep(F, n, dims, tuple(mats))


def zero_rep(F, n) -> QuiverRep:
    return QuiverRep(F, n, (0,) * n, ((),) * n)


def build_rep(F, mp: MultiPartition) -> QuiverRep:
    """The direct sum of strings realizing the multipartition."""
    n = mp.n
    dims = list(mp.dim_vector())
    slots = [0] * n
    entries = []
    for (i, l) in sorted(mp.strings()):
        pos = []
        for k in range(l):
            v = (i + k) % n
            pos.append((v, slots[v]))
            slots[v] += 1
        for k in range(l - 1):
            (v1, r1), (v2, r2) = pos[k], pos[k + 1]
            entries.append((v1, r1, r2))
    maps = []
    for i in range(n):
        M = [[F.zero] * dims[(i + 1) % n] for _ in range(dims[i])]
        maps.append(M)
    for (v, r1, r2) in entries:
        maps[v][r1][r2] = F.one
    return quiver_rep(F, n, dims, maps)


def _path_ranks(r: QuiverRep, max_len: int):
    """ranks[i][l] = rank of the composite of l consecutive arrows starting
    at vertex i (l = 0 gives the vertex dimension)."""
    F = r.F
    ranks = []
    for i in range(r.n):
        row = [r.dims[i]]
        P = fd.mat_identity(F, r.dims[i])
        for l in range(1, max_len + 1):
            P = fd.mat_mul(F, P, r.maps[(i + l - 1) % r.n])
            row.append(fd.rank(F, P))
        ranks.append(row)
    return ranks


def rep_iso_type(r: QuiverRep) -> MultiPartition:
    """Iso class of a nilpotent representation, recovered from the ranks of
    all path composites (no search)."""
    n, total = r.n, r.total_dim
    if total == 0:
        return empty_mp(n)
    ranks = _path_ranks(r, total + 1)
    if any(ranks[i][total] for i in range(n)):
        raise NotNilpotent("the cycle composite is not nilpotent")
    # c[i][l] = number of strings holding a vector at vertex i exactly l
    # steps above their socle
    c = [[ranks[i][l] - ranks[i][l + 1] for l in range(total + 1)]
         for i in range(n)]
    parts = [[] for _ in range(n)]
    for i in range(n):
        for j in range(1, total + 1):
            mult = c[i][j - 1] - c[(i - 1) % n][j]
            if mult < 0:
                raise NotNilpotent("inconsistent path-rank profile")
            parts[i].extend([j] * mult)
    mp = multipartition(n, parts)
    if mp.weight != total:
        raise NotNilpotent("path-rank profile does not resolve the type")
    return mp


def sub_rep(r: QuiverRep, rows) -> QuiverRep:
    """The representation on the subspaces spanned by the given rows (which
    must be arrow-stable)."""
    F = r.F
    dims = [len(rows[i]) for i in range(r.n)]
    maps = []
    for i in range(r.n):
        nxt = (i + 1) % r.n
        tgt = fd.mat_transpose([list(x) for x in rows[nxt]]) \
            if rows[nxt] else []
        M = []
        for b in rows[i]:
            v = fd.mat_mul(F, [list(b)], [list(x) for x in r.maps[i]])[0] \
                if r.dims[i] and r.dims[nxt] else [F.zero] * dims[nxt]
            if dims[nxt] == 0:
                if any(x != F.zero for x in v):
                    raise CheckFailed("rows are not arrow-stable")
                M.append([])
                continue
            coeffs = fd.solve(F, tgt, list(v))
            if coeffs is None:
                raise CheckFailed("rows are not arrow-stable")
            M.append(coeffs)
        maps.append(M)
    return quiver_rep(F, r.n, dims, maps)


def quotient_rep(r: QuiverRep, rows) -> QuiverRep:
    """The representation on the quotients by the row spans."""
    F = r.F
    red = []
    for i in range(r.n):
        rr, piv = fd.rref(F, [list(x) for x in rows[i]]) if rows[i] \
            else ([], [])
        nonpiv = [c for c in range(r.dims[i]) if c not in piv]
        red.append((rr, piv, nonpiv))

    def project(i, v):
        rr, piv, nonpiv = red[i]
        w = list(v)
        for k, pc in enumerate(piv):
            if w[pc] != F.zero:
                f = w[pc]
                w = [F.sub(x, F.mul(f, y)) for x, y in zip(w, rr[k])]
        return [w[c] for c in nonpiv]

    dims = [len(red[i][2]) for i in range(r.n)]
    maps = []
    for i in range(r.n):
        nxt = (i + 1) % r.n
        M = []
        for c in red[i][2]:
            v = r.maps[i][c] if r.dims[(i + 1) % r.n] else []
            M.append(project(nxt, v) if r.dims[nxt] else [])
        maps.append(M)
    return quiver_rep(F, r.n, dims, maps)


# ---------------------------------------------------------------------------
# subspace enumeration


def gaussian_binomial(q: int, d: int, e: int) -> int:
    if e < 0 or e > d:
        return 0
    num = den = 1
    for i in range(1, e + 1):
        num *= q ** (d - e + i) - 1
        den *= q ** i - 1
    return num // den


def subspaces(F, d: int, e: int):
    """All e-dimensional subspaces of F^d, one canonical reduced row-echelon
    basis each."""
    if e == 0:
        yield ()
        return
    elems = list(F.elements())
    for pivots in itertools.combinations(range(d), e):
        free = [(r, c) for r in range(e)
                for c in range(pivots[r] + 1, d) if c not in pivots]
        for assign in itertools.product(elems, repeat=len(free)):
            rows = [[F.zero] * d for _ in range(e)]
            for r, p in enumerate(pivots):
                rows[r][p] = F.one
            for (r, c), val in zip(free, assign):
                rows[r][c] = val
            yield tuple(tuple(row) for row in rows)


# ---------------------------------------------------------------------------
# Hall numbers


def hall_number(lam: MultiPartition, nu: MultiPartition, mu: MultiPartition,
                q: int, budget: int = _SUBSPACE_BUDGET) -> int:
    """Number of subrepresentations W of the representation of type mu over
    the q-element field with W of type nu and quotient of type lam."""
    n = mu.n
    if lam.n != n or nu.n != n:
        raise ConfigInvalid("multipartitions live on different quivers")
    dv = mu.dim_vector()
    sub_dv = nu.dim_vector()
    if tuple(a + b for a, b in zip(lam.dim_vector(), sub_dv)) != dv:
        return 0
    F = _hall_field(q)
    Y = build_rep(F, mu)
    combos = 1
    for i in range(n):
        combos *= gaussian_binomial(q, dv[i], sub_dv[i])
    if combos > budget:
        raise BudgetExceeded(
            f"{combos} subspace tuples exceed the budget {budget}")
    per_vertex = []
    for i in range(n):
        opts = []
        for rows in subspaces(F, dv[i], sub_dv[i]):
            rr, piv = fd.rref(F, [list(x) for x in rows]) if rows else ([], [])
            opts.append((rows, rr, piv))
        per_vertex.append(opts)
    count = 0
    for choice in itertools.product(*per_vertex):
        stable = True
        for i in range(n):
            rows = choice[i][0]
            if not rows:
                continue
            nxt = (i + 1) % n
            if dv[nxt] == 0:
                img = fd.mat_mul(F, [list(b) for b in rows],
                                 [list(x) for x in Y.maps[i]])
                if any(any(x != F.zero for x in v) for v in img):
                    stable = False
                    break
                continue
            rr, piv = choice[nxt][1], choice[nxt][2]
            for b in rows:
                v = fd.mat_mul(F, [list(b)],
                               [list(x) for x in Y.maps[i]])[0]
                if not fd.in_row_space(F, rr, piv, v):
                    stable = False
                    break
            if not stable:
                break
        if not stable:
            continue
        W = [choice[i][0] for i in range(n)]
        if rep_iso_type(sub_rep(Y, W)) != nu:
            continue
        if rep_iso_type(quotient_rep(Y, W)) != lam:
            continue
        count += 1
    return count


# ---------------------------------------------------------------------------
# Hall polynomials


def hall_polynomial(lam: MultiPartition, nu: MultiPartition,
                    mu: MultiPartition,
                    samples=_SAMPLE_POINTS, extension=_EXTENSION_POINTS,
                    budget: int = _SUBSPACE_BUDGET) -> tuple:
    """Integer polynomial in the field size whose value at every sample
    point is the corresponding Hall number, with the fit degree-stable
    under adding one more point.  Coefficients low to high."""

    def values_at(q):
        return {"c": hall_number(lam, nu, mu, q, budget)}

    return _stable_fit(values_at, samples, extension)["c"]


# ---------------------------------------------------------------------------
# Hall algebra elements


def _coeff_is_zero(c):
    return c == 0 or c == ()


def _cadd(a, b, generic):
    if generic:
        return _poly_norm(series.poly_add(list(a), list(b)))
    return a + b


def _cmul(a, b, generic):
    if generic:
        return _poly_norm(series.poly_mul(list(a), list(b)))
    return a * b


@dataclass(frozen=True)
class HallElem:
    """Finitely supported combination of class symbols u_lambda.

    Specialized elements (q a field size) have integer coefficients;
    generic elements (q is None) have integer polynomial coefficients,
    stored low to high."""

    n: int
    q: object
    coeffs: tuple

    def as_dict(self):
        return dict(self.coeffs)

    @property
    def generic(self) -> bool:
        return self.q is None

    def __add__(self, other):
        if not isinstance(other, HallElem):
            return NotImplemented
        if (self.n, self.q) != (other.n, other.q):
            raise ConfigInvalid("elements live over different Hall algebras")
        acc = dict(self.coeffs)
        for mp, c in other.coeffs:
            acc[mp] = _cadd(acc.get(mp, () if self.generic else 0), c,
                            self.generic)
        return _hall_elem(self.n, self.q, acc)

    def scale(self, c):
        gen = self.generic
        if gen and isinstance(c, int):
            c = (c,)
        return _hall_elem(self.n, self.q,
                          {mp: _cmul(v, c, gen) for mp, v in self.coeffs})

    def __mul__(self, other):
        if not isinstance(other, HallElem):
            return NotImplemented
        return hall_product(self, other)


def _hall_elem(n, q, coeffs: dict) -> HallElem:
    items = tuple(sorted(((mp, c) for mp, c in coeffs.items()
                          if not _coeff_is_zero(c)),
                         key=lambda kv: (kv[0].weight, str(kv[0]))))
    return HallElem(n, q, items)


def hall_unit(n: int, mp: MultiPartition, q=None) -> HallElem:
    """The basis symbol u_mp (generic when q is None)."""
    return _hall_elem(n, q, {mp: (1,) if q is None else 1})


def hall_one(n: int, q=None) -> HallElem:
    return hall_unit(n, empty_mp(n), q)


def hall_product(a: HallElem, b: HallElem,
                 budget: int = _SUBSPACE_BUDGET) -> HallElem:
    """u_lam u_nu = sum over mu of (Hall number or polynomial) u_mu."""
    if (a.n, a.q) != (b.n, b.q):
        raise ConfigInvalid("elements live over different Hall algebras")
    n, q = a.n, a.q
    gen = q is None
    acc = {}
    for lam, ca in a.coeffs:
        for nu, cb in b.coeffs:
            weight = _cmul(ca, cb, gen)
            dv = tuple(x + y
                       for x, y in zip(lam.dim_vector(), nu.dim_vector()))
            for mu in multipartitions_with_dim_vector(n, dv):
                if gen:
                    f = hall_polynomial(lam, nu, mu, budget=budget)
                else:
                    f = hall_number(lam, nu, mu, q, budget)
                if _coeff_is_zero(f):
                    continue
                term = _cmul(weight, f, gen)
                key = mu
                acc[key] = _cadd(acc.get(key, () if gen else 0), term, gen)
    return _hall_elem(n, q, acc)


# ---------------------------------------------------------------------------
# the lattice world: full lattices over the cyclic tiled order


def compositions(n: int, m: int) -> list:
    """All n-part compositions of m, largest-first lexicographic order."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for x in range(remaining, -1, -1):
            rec(prefix + [x], remaining - x, slots - 1)

    if n == 0:
        return [()] if m == 0 else []
    rec([], m, n)
    return out


def _space_structure(space):
    """Vertex idempotents, radical generators and arrow generators of the
    order acting on a module space, read off from the action matrices."""
    if "hall_struct" in space._cache:
        return space._cache["hall_struct"]
    R = space.ring
    idems, others = [], []
    for G in space.gens:
        nz = any(any(row) for row in G)
        if nz and cr.mat_mul(R, G, G) == G:
            idems.append(G)
        elif nz:
            others.append(G)
    idems.sort(key=lambda G: min(
        c for c in range(space.dim) if G[c][c]))
    vertex_cols = [
        [c for c in range(space.dim) if G[c][c]] for G in idems]
    arrows = []
    for j in range(len(idems)):
        nxt = (j + 1) % len(idems)
        found = None
        for G in others:
            sandwich = cr.mat_mul(R, cr.mat_mul(R, idems[j], G), idems[nxt])
            if sandwich == G:
                found = G
                break
        arrows.append(found)
    struct = (idems, others, vertex_cols, arrows)
    space._cache["hall_struct"] = struct
    return struct


def _top_profile(L) -> tuple:
    """Multiplicity of each vertex simple in the top of a full lattice over
    the cyclic tiled order (a complete iso invariant there, the order being
    hereditary with the projectives as the only indecomposables)."""
    space = L.space
    R = space.ring
    idems, others, vertex_cols, _ = _space_structure(space)
    rad_rows = []
    for G in others:
        rad_rows.extend(cr.mat_mul(R, [list(r) for r in L.rows], G))
    rad_rows.extend(
        [[R.shift_up(x, 1) for x in row] for row in L.rows])
    N = orders.make_lattice(space, rad_rows)
    prof = []
    for cols in vertex_cols:
        outer = [[row[c] for c in cols] for row in L.rows]
        inner = [[row[c] for c in cols] for row in N.rows]
        outer = [r for r in outer if any(r)]
        inner = [r for r in inner if any(r)]
        prof.append(cr.colength_in(R, outer, inner))
    return tuple(prof)


class LatticeHallContext:
    """Degree-m Hall module over the cyclic tiled order with n vertices at
    a prime residue field size q: basis indexed by compositions (c_0 ..
    c_{n-1}) of m, the class of the direct sum of c_j copies of the
    projective with top at vertex j."""

    def __init__(self, n: int, m: int, q: int, precision: int = 18):
        if not _is_prime(q):
            raise UnsupportedModule(
                "lattice Hall contexts need a prime residue field")
        if n < 1 or m < 0:
            raise ConfigInvalid("need n >= 1 vertices and m >= 0 copies")
        self.n = n
        self.m = m
        self.q = q
        self.octx = OrderContext(OrderSpec.tiled_triangular(n), q, "equal",
                                 precision=precision)
        self.module = orders._as_module((m,))
        self.space = self.octx.space(self.module)
        self.F = fd.prime_field(q)
        # the order is hereditary, so the indecomposable lattices are the n
        # projectives; build each directly as an idempotent orbit
        sp1 = self.octx.space((1,))
        R = sp1.ring
        _, _, vertex_cols, _ = _space_structure(sp1)
        by_vertex = [None] * n
        for j in range(n):
            u = [0] * sp1.dim
            u[vertex_cols[j][0]] = 1
            rows = [cr.vec_matmul(R, u, G) for G in sp1.gens]
            P = orders.make_lattice(sp1, [r for r in rows if any(r)])
            prof = _top_profile(P)
            if sum(prof) != 1:
                raise CheckFailed(
                    f"projective at vertex {j} has a non-simple top")
            by_vertex[prof.index(1)] = P
        if any(P is None for P in by_vertex):
            raise CheckFailed("projectives do not cover all vertices")
        self.proj_by_vertex = by_vertex
        self.basis = compositions(n, m)
        self._reps = {}
        self._models = {}
        self._tallies = {}

    def comp_rep(self, c):
        c = tuple(c)
        if len(c) != self.n or any(x < 0 for x in c) or sum(c) != self.m:
            raise ConfigInvalid(f"{c} is not an n-part composition of m")
        if c not in self._reps:
            parts = []
            for j, mult in enumerate(c):
                parts.extend([self.proj_by_vertex[j]] * mult)
            self._reps[c] = zz._direct_sum_lattice(self.octx, parts,
                                                   self.module)
        return self._reps[c]


_LATTICE_CTX_CACHE = {}


def lattice_hall_context(n: int, m: int, q: int,
                         precision: int = 18) -> LatticeHallContext:
    key = (n, m, q, precision)
    if key not in _LATTICE_CTX_CACHE:
        _LATTICE_CTX_CACHE[key] = LatticeHallContext(n, m, q, precision)
    return _LATTICE_CTX_CACHE[key]


# --- digit model of M / pi^w M and its stable submodules -------------------


def _digit_model(space, F, M, w):
    """F_p-matrices generating the order action on M / pi^w M in the digit
    basis (row i*w + a represents pi^a times the i-th canonical basis row
    of M).  The last matrix is multiplication by pi itself -- the order is
    an algebra over the base ring, so submodule stability needs the shift
    alongside the basis-element actions."""
    R = space.ring
    p = R.p
    r = M.rank
    bigs = []
    for G in space.gens:
        B = [[F.zero] * (r * w) for _ in range(r * w)]
        for i in range(r):
            v = cr.vec_matmul(R, list(M.rows[i]), G)
            x = cr.solve_in_rows(R, M.rows, M.pivots, M.exps, v)
            if x is None:
                raise CheckFailed("lattice is not closed under the action")
            for a in range(w):
                row = B[i * w + a]
                for j in range(r):
                    xj = x[j]
                    if not xj:
                        continue
                    for b in range(a, w):
                        d = (xj // p ** (b - a)) % p
                        if d:
                            row[j * w + b] = d
        bigs.append(B)
    shift = [[F.zero] * (r * w) for _ in range(r * w)]
    for i in range(r):
        for a in range(w - 1):
            shift[i * w + a][i * w + a + 1] = F.one
    bigs.append(shift)
    return bigs


def _joint_eigen_lines(F, mats, basis):
    """One representative per line that every matrix maps into itself,
    inside the span of the given basis rows."""
    out = []

    def rec(B, idx):
        if not B:
            return
        if idx == len(mats):
            k = len(B)
            elems = list(F.elements())
            for lead in range(k):
                rest = [c for c in range(lead + 1, k)]
                for assign in itertools.product(elems, repeat=len(rest)):
                    coeff = [F.zero] * k
                    coeff[lead] = F.one
                    for c, val in zip(rest, assign):
                        coeff[c] = val
                    out.append(fd.mat_mul(F, [coeff], B)[0])
            return
        A = mats[idx]
        img = fd.mat_mul(F, B, A)
        for lam in F.elements():
            rows = [[F.sub(x, F.mul(lam, y)) for x, y in zip(ri, bi)]
                    for ri, bi in zip(img, B)]
            ker = fd.kernel_basis(F, fd.mat_transpose(rows))
            if ker:
                rec(fd.mat_mul(F, ker, B), idx + 1)

    rec(basis, 0)
    return out


def _stable_lines_mod(F, bigs, dim, S_rows):
    """Lines of the quotient by the span of S_rows that every action matrix
    stabilizes, lifted to full coordinates."""
    rr, piv = fd.rref(F, [list(r) for r in S_rows]) if S_rows else ([], [])
    nonpiv = [c for c in range(dim) if c not in piv]
    if not nonpiv:
        return []

    def project(v):
        w = list(v)
        for k, pc in enumerate(piv):
            if w[pc] != F.zero:
                f = w[pc]
                w = [F.sub(x, F.mul(f, y)) for x, y in zip(w, rr[k])]
        return [w[c] for c in nonpiv]

    induced = []
    for B in bigs:
        induced.append([project(B[c]) for c in nonpiv])
    lifted = []
    for y in _joint_eigen_lines(F, induced, fd.mat_identity(F, len(nonpiv))):
        v = [F.zero] * dim
        for k, c in enumerate(nonpiv):
            v[c] = y[k]
        lifted.append(v)
    return lifted


def _stable_submodules(F, bigs, dim, max_len, budget=_NODE_BUDGET):
    """All action-stable submodules of the digit model of length at most
    max_len, keyed by canonical row basis, with their lengths."""
    root = ()
    nodes = {root: 0}
    frontier = [root]
    for level in range(1, max_len + 1):
        new = []
        for key in frontier:
            for v in _stable_lines_mod(F, bigs, dim, list(key)):
                k2 = fd.row_space_canonical(F, list(key) + [v])
                if k2 not in nodes:
                    nodes[k2] = level
                    new.append(k2)
                    if len(nodes) > budget:
                        raise BudgetExceeded(
                            f"stable-submodule walk passed {budget} nodes")
        frontier = new
        if not frontier:
            break
    return nodes


def _lift_rows(space, M, w, S_rows):
    """Rows of the lattice pi^w L inside M corresponding to a stable
    submodule of M / pi^w M (digit coordinates)."""
    R = space.ring
    rows = []
    for s in S_rows:
        vec = [0] * space.dim
        for idx, coeff in enumerate(s):
            if not coeff:
                continue
            i, a = divmod(idx, w)
            for col in range(space.dim):
                x = M.rows[i][col]
                if x:
                    vec[col] = R.add(vec[col],
                                     R.mul(coeff, R.shift_up(x, a)))
        rows.append(vec)
    for i in range(M.rank):
        rows.append([R.shift_up(x, w) for x in M.rows[i]])
    return rows


def _submodule_type(hctx: LatticeHallContext, bigs_idem, bigs_arrow,
                    S_rows, w) -> MultiPartition:
    """Iso type of a stable submodule of the digit model as a cyclic-quiver
    representation (vertex split by the idempotents, arrows restricted)."""
    F = hctx.F
    n = hctx.n
    vert_rows = []
    for j in range(n):
        img = fd.mat_mul(F, [list(r) for r in S_rows], bigs_idem[j]) \
            if S_rows else []
        rr, piv = fd.rref(F, img) if img else ([], [])
        vert_rows.append([list(r) for r in rr[:len(piv)]])
    if sum(len(v) for v in vert_rows) != len(S_rows):
        raise CheckFailed("submodule does not split over the vertices")
    dims = [len(v) for v in vert_rows]
    maps = []
    for j in range(n):
        nxt = (j + 1) % n
        tgt = fd.mat_transpose(vert_rows[nxt]) if vert_rows[nxt] else []
        M = []
        for b in vert_rows[j]:
            v = fd.mat_mul(F, [b], bigs_arrow[j])[0]
            if not vert_rows[nxt]:
                if any(x != F.zero for x in v):
                    raise CheckFailed("arrow image leaves the submodule")
                M.append([])
                continue
            coeffs = fd.solve(F, tgt, v)
            if coeffs is None:
                raise CheckFailed("arrow image leaves the submodule")
            M.append(coeffs)
        maps.append(M)
    return rep_iso_type(quiver_rep(F, n, dims, maps))


def _action_tally(hctx: LatticeHallContext, c, w: int,
                  budget: int = _NODE_BUDGET):
    """Counts of overlattices of the composition-c representative with
    quotient of length w, keyed by (target composition, quotient type)."""
    c = tuple(c)
    key = (c, w)
    if key in hctx._tallies:
        return hctx._tallies[key]
    if w == 0:
        hctx._tallies[key] = {(c, empty_mp(hctx.n)): 1}
        return hctx._tallies[key]
    if hctx.m == 0:
        hctx._tallies[key] = {}
        return hctx._tallies[key]
    M = hctx.comp_rep(c)
    space = hctx.space
    F = hctx.F
    mkey = (c, "model", w)
    if mkey not in hctx._models:
        hctx._models[mkey] = _digit_model(space, F, M, w)
    bigs = hctx._models[mkey]
    idems, others, _, arrows = _space_structure(space)
    if any(A is None for A in arrows):
        raise UnsupportedModule("missing arrow generators for the quotient "
                                "type computation")
    gen_index = {id(G): k for k, G in enumerate(space.gens)}
    bigs_idem = [bigs[gen_index[id(G)]] for G in idems]
    bigs_arrow = [bigs[gen_index[id(G)]] for G in arrows]
    # classification model one digit deeper: every enumerated lattice N
    # satisfies pi^(w+1) M < N.rad <= N <= M, so the top multiplicity at a
    # vertex is a rank difference inside M / pi^(w+1) M -- no chain-ring
    # arithmetic per node
    qkey = (c, "model", w + 1)
    if qkey not in hctx._models:
        hctx._models[qkey] = _digit_model(space, F, M, w + 1)
    bigsq = hctx._models[qkey]
    idems_q = [bigsq[gen_index[id(G)]] for G in idems]
    rad_q = [bigsq[gen_index[id(G)]] for G in others] + [bigsq[-1]]
    r = M.rank

    def embed(srow):
        v = [F.zero] * (r * (w + 1))
        for idx, x in enumerate(srow):
            if x != F.zero:
                i, a = divmod(idx, w)
                v[i * (w + 1) + a] = x
        return v

    floor_rows = []
    for i in range(r):
        u = [F.zero] * (r * (w + 1))
        u[i * (w + 1) + w] = F.one
        floor_rows.append(u)
    tally = {}
    for rows, length in _stable_submodules(F, bigs, r * w, w,
                                           budget).items():
        if length != w:
            continue
        n_rows = [embed(s) for s in rows] + floor_rows
        rad_rows = []
        for B in rad_q:
            rad_rows.extend(fd.mat_mul(F, n_rows, B))
        prof = []
        for E in idems_q:
            prof.append(fd.rank(F, fd.mat_mul(F, n_rows, E))
                        - fd.rank(F, fd.mat_mul(F, rad_rows, E)))
        c2 = tuple(prof)
        if sum(c2) != hctx.m:
            raise CheckFailed("overlattice top profile does not resolve "
                              "to a class")
        lam = _submodule_type(hctx, bigs_idem, bigs_arrow, list(rows), w)
        tkey = (c2, lam)
        tally[tkey] = tally.get(tkey, 0) + 1
    hctx._tallies[key] = tally
    return tally


# ---------------------------------------------------------------------------
# Hall module elements and the action


@dataclass(frozen=True)
class HallModuleElem:
    """Finitely supported combination of lattice-class symbols indexed by
    compositions of m (q None = generic coefficients in Z[T])."""

    n: int
    m: int
    q: object
    coeffs: tuple

    def as_dict(self):
        return dict(self.coeffs)

    @property
    def generic(self) -> bool:
        return self.q is None

    def __add__(self, other):
        if not isinstance(other, HallModuleElem):
            return NotImplemented
        if (self.n, self.m, self.q) != (other.n, other.m, other.q):
            raise ConfigInvalid("elements live in different Hall modules")
        acc = dict(self.coeffs)
        for comp, c in other.coeffs:
            acc[comp] = _cadd(acc.get(comp, () if self.generic else 0), c,
                              self.generic)
        return _module_elem(self.n, self.m, self.q, acc)


def _module_elem(n, m, q, coeffs: dict) -> HallModuleElem:
    items = tuple(sorted((k, v) for k, v in coeffs.items()
                         if not _coeff_is_zero(v)))
    return HallModuleElem(n, m, q, items)


def module_unit(n: int, m: int, comp, q=None) -> HallModuleElem:
    comp = tuple(comp)
    if len(comp) != n or sum(comp) != m or any(x < 0 for x in comp):
        raise ConfigInvalid(f"{comp} is not an n-part composition of m")
    return _module_elem(n, m, q, {comp: (1,) if q is None else 1})


_PSI_CACHE = {}


def _psi_table(n: int, m: int, lam: MultiPartition,
               budget: int = _NODE_BUDGET):
    """Generic transition polynomials for the action of u_lam on the
    degree-m module: dict (from composition, to composition) -> integer
    coefficient tuple, interpolated from prime specializations."""
    key = (n, m, lam)
    if key in _PSI_CACHE:
        return _PSI_CACHE[key]
    w = lam.weight

    def values_at(q):
        hctx = lattice_hall_context(n, m, q)
        out = {}
        for c in hctx.basis:
            for (c2, typ), cnt in _action_tally(hctx, c, w, budget).items():
                if typ == lam:
                    out[(c, c2)] = cnt
        return out

    _PSI_CACHE[key] = _stable_fit(values_at, _PRIME_SAMPLES[:3],
                                  _PRIME_SAMPLES[3:])
    return _PSI_CACHE[key]


def hall_module_action(x: HallElem, v: HallModuleElem,
                       budget: int = _NODE_BUDGET) -> HallModuleElem:
    """u_lam . u_c = sum over classes c' of (count of overlattices of the
    c-representative with quotient of type lam and class c') u_c', with
    counts specialized at q or generic polynomials in the field size."""
    if x.n != v.n:
        raise ConfigInvalid("quiver sizes differ")
    if x.q != v.q:
        raise ConfigInvalid("mixed specializations in the module action")
    n, m, q = v.n, v.m, v.q
    gen = q is None
    acc = {}
    for lam, cx in x.coeffs:
        w = lam.weight
        if gen:
            table = _psi_table(n, m, lam, budget)
            for comp, cv in v.coeffs:
                for (c_from, c_to), poly in table.items():
                    if c_from != comp:
                        continue
                    term = _cmul(_cmul(cx, cv, True), poly, True)
                    acc[c_to] = _cadd(acc.get(c_to, ()), term, True)
        else:
            hctx = lattice_hall_context(n, m, q)
            for comp, cv in v.coeffs:
                for (c_to, typ), cnt in _action_tally(hctx, comp, w,
                                                      budget).items():
                    if typ != lam:
                        continue
                    term = cx * cv * cnt
                    acc[c_to] = _cadd(acc.get(c_to, 0), term, False)
    return _module_elem(n, m, q, acc)


def generic_module_dimension(n: int, m: int) -> int:
    """Size of the generic degree-m basis (compositions of m in n parts)."""
    return len(compositions(n, m))


# ---------------------------------------------------------------------------
# the bridge to zeta matrices


def hall_action_matrix(ctx: OrderContext, module, truncation: int,
                       budget: int = _NODE_BUDGET):
    """Matrix of the colength-graded overlattice counts between the full
    lattice classes of the module: entry [from][to] is the series whose
    k-th coefficient counts overlattices L of the from-class representative
    with [L : M] of size q^k and L of the to-class.  In the row-vector
    convention this is the matrix of the generating-series action that
    sends a class symbol to the sum of its overlattice classes graded by
    colength.

    Returns (labels, series dict keyed by (from, to) label pairs as
    integer coefficient lists).
    """
    if ctx.ring.flavor != "equal":
        raise UnsupportedModule(
            "overlattice counting uses the equal-characteristic digit model")
    if ctx.ring.m < 2 * truncation + 8:
        raise ConfigInvalid(
            "/precision: too small for the requested overlattice depth")
    mod_obj = orders._as_module(module)
    cat = orders.full_lattice_catalog(ctx, mod_obj)
    labels = cat.labels()
    sp = cat.entries[0].lattice.space
    F = fd.prime_field(ctx.p)
    counts = {(lf, lt): [0] * (truncation + 1)
              for lt in labels for lf in labels}
    for ent in cat.entries:
        M = orders.class_normal_form(ent.lattice)
        bigs = _digit_model(sp, F, M, truncation)
        for rows, length in _stable_submodules(
                F, bigs, M.rank * truncation, truncation, budget).items():
            N = orders.make_lattice(sp, _lift_rows(sp, M, truncation, rows))
            lt = labels[cat.classify(N)]
            counts[(ent.label, lt)][length] += 1
    return labels, counts


def verify_zeta_bridge(ctx: OrderContext, module, truncation: int,
                       budget: int = _NODE_BUDGET) -> bool:
    """The overlattice-counting action matrix equals the zeta matrix of
    the module entrywise up to the truncation order: the number of
    colength-k overlattices of a class-c representative that land in class
    c' equals the number of colength-k sublattices of a class-c
    representative that are isomorphic to the c' one."""
    labels, counts = hall_action_matrix(ctx, module, truncation, budget)
    zm = zz.zeta_matrix(ctx, module, truncation)
    for lf in labels:
        for lt in labels:
            got = counts[(lf, lt)]
            want = zm.entry(lf, lt)
            if any(Fraction(got[k]) != want[k]
                   for k in range(truncation + 1)):
                return False
    return True


# ---------------------------------------------------------------------------
# T = 1 Lie-theoretic checks on the generic module


@dataclass(frozen=True)
class LieReport:
    """Outcome of the T = 1 checks on the generic degree-m module."""

    n: int
    m: int
    dim: int
    irreducible: bool
    pairing: str
    h_spectrum: tuple
    commuting_pairs: int

    @property
    def holds(self) -> bool:
        return self.irreducible and self.dim == math.comb(
            self.m + self.n - 1, self.n - 1)


def _simple_action_matrix(n: int, m: int, vertex: int):
    """Integer matrix of the u_{S_vertex} action on the generic basis at
    T = 1 (entry [to][from])."""
    comps = compositions(n, m)
    index = {c: i for i, c in enumerate(comps)}
    table = _psi_table(n, m, simple_mp(n, vertex))
    d = len(comps)
    A = [[0] * d for _ in range(d)]
    for (c_from, c_to), poly in table.items():
        A[index[c_to]][index[c_from]] = poly_eval_int(poly, 1)
    return A


def _int_mat_mul(A, B):
    n, k = len(A), len(B)
    cols = len(B[0]) if B else 0
    out = [[0] * cols for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(cols):
                    if Bt[j]:
                        row[j] += a * Bt[j]
    return out


def _int_mat_sub(A, B):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def _int_mat_scale(c, A):
    return [[c * x for x in row] for row in A]


def _commutator(A, B):
    return _int_mat_sub(_int_mat_mul(A, B), _int_mat_mul(B, A))


def _is_zero_mat(A):
    return all(all(x == 0 for x in row) for row in A)


def _operator_algebra_dim(mats, d):
    """Dimension of the unital algebra generated by the matrices, by
    closing the span under left multiplication by the generators."""
    QQ = fd.QQ
    basis_rows = []
    members = []
    pending = [[[1 if i == j else 0 for j in range(d)] for i in range(d)]]
    pending.extend(mats)
    while pending:
        Mt = pending.pop()
        flat = [Fraction(x) for row in Mt for x in row]
        if fd.rank(QQ, basis_rows + [flat]) > len(basis_rows):
            rr, piv = fd.rref(QQ, basis_rows + [flat])
            basis_rows = [list(r) for r in rr[:len(piv)]]
            members.append(Mt)
            pending.extend(_int_mat_mul(G, Mt) for G in mats)
    return len(basis_rows)


def lie_checks(n: int, m: int) -> LieReport:
    """Specialize the generic degree-m module at T = 1 and certify its
    Lie-theoretic structure.

    Checks: (i) the basis has the predicted binomial size; (ii) the
    operator algebra generated by the simple-class actions is the full
    matrix algebra (so no proper nonzero invariant subspace exists);
    (iii) for n = 2 the two simple actions satisfy the sl_2 relations --
    under the direct or the swapped pairing, recorded in the report -- and
    the commutator H has simple spectrum m, m-2, ..., -m; (iv) for n >= 4
    cyclically non-adjacent simple actions commute.  Raises CheckFailed
    with the first violated identity."""
    comps = compositions(n, m)
    d = len(comps)
    expected = math.comb(m + n - 1, n - 1)
    if d != expected:
        raise CheckFailed(
            f"basis has {d} compositions, expected {expected}")
    acts = [_simple_action_matrix(n, m, i) for i in range(n)]
    alg_dim = _operator_algebra_dim(acts, d)
    if alg_dim != d * d:
        raise CheckFailed(
            f"could not certify irreducibility: the operator algebra has "
            f"dimension {alg_dim}, not {d * d}")
    pairing = ""
    spectrum = ()
    if n == 2:
        attempts = [("direct", acts[0], acts[1]),
                    ("swapped", acts[1], acts[0])]
        errors = []
        for name, E, Fm in attempts:
            H = _commutator(E, Fm)
            if not _is_zero_mat(
                    _int_mat_sub(_commutator(H, E), _int_mat_scale(2, E))):
                errors.append(f"[H,E] != 2E under the {name} pairing")
                continue
            if not _is_zero_mat(
                    _int_mat_sub(_commutator(H, Fm),
                                 _int_mat_scale(-2, Fm))):
                errors.append(f"[H,F] != -2F under the {name} pairing")
                continue
            pairing = name
            break
        if not pairing:
            raise CheckFailed("; ".join(errors))
        evs = [m - 2 * k for k in range(m + 1)]
        ident = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
        prod = ident
        for ev in evs:
            prod = _int_mat_mul(prod, _int_mat_sub(H, _int_mat_scale(ev,
                                                                     ident)))
        if not _is_zero_mat(prod):
            raise CheckFailed("H does not satisfy its predicted minimal "
                              "polynomial")
        QQ = fd.QQ
        for ev in evs:
            shifted = [[Fraction(x - (ev if i == j else 0))
                        for j, x in enumerate(row)]
                       for i, row in enumerate(H)]
            if fd.rank(QQ, shifted) != d - 1:
                raise CheckFailed(
                    f"eigenvalue {ev} of H does not have multiplicity one")
        spectrum = tuple(evs)
    commuting = 0
    if n >= 4:
        for i in range(n):
            for j in range(i + 1, n):
                if (j - i) % n in (1, n - 1):
                    continue
                if not _is_zero_mat(_commutator(acts[i], acts[j])):
                    raise CheckFailed(
                        f"simple actions at vertices {i} and {j} do not "
                        "commute")
                commuting += 1
    return LieReport(n, m, d, True, pairing, spectrum, commuting)
