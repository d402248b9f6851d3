"""Finite-dimensional algebras over F_p and their right modules.

Everything is a row vector: a module element is a row, an algebra element
acts by a matrix on the right, and the action map is a homomorphism (so
``act(a*b) = act(a) . act(b)``).  Left modules are handled through the
opposite algebra.

The layer provides:

* ``FinAlgebra`` — structure constants, Jacobson radical (computed by the
  characteristic-power trace chain over F_p, or supplied structurally by a
  trusted constructor), quotients, the opposite algebra, simple modules and
  projective indecomposables;
* ``FinModule`` — Hom spaces, endomorphism algebras, certified direct-sum
  decomposition (idempotent lifting with a Fitting fallback), isomorphism
  testing, radical/socle series;
* minimal projective covers, syzygies, projective dimension, global
  dimension, and dominant dimension (via dual resolutions over the opposite
  algebra).

Certification stance: decompose() either returns an explicitly certified
decomposition (each summand indecomposable with local endomorphism algebra)
or raises DecompositionUncertified; isomorphism testing raises Undecided
rather than guessing when its search budget cannot settle the question.
"""

from __future__ import annotations

import itertools
import random

from .errors import (
    CutoffReached,
    DecompositionUncertified,
    NotNilpotent,
    Undecided,
)
from . import fields as fm

INFINITY = float("inf")

_UNIT_SEARCH_CAP = 16384  # exhaustive unit-combination search bound
_UNIT_SEARCH_TRIALS = 600
_UNIT_SEARCH_SEED = 214001


# ---------------------------------------------------------------------------
# small F_p[x] helpers (dense coefficient lists, low degree first)


def _fp_poly_trim(p, cs):
    cs = [c % p for c in cs]
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _fp_poly_divmod(p, a, b):
    a = _fp_poly_trim(p, a)
    b = _fp_poly_trim(p, b)
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], p - 2, p) if b[-1] != 1 else 1
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(b):
            break
        c = (r[-1] * inv) % p
        k = len(r) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            r[k + i] = (r[k + i] - c * bc) % p
        r.pop()
    return _fp_poly_trim(p, q), _fp_poly_trim(p, r)


def _fp_poly_mul(p, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = (out[i + j] + x * y) % p
    return _fp_poly_trim(p, out)


def _fp_poly_gcdext(p, a, b):
    """g, s, t with s*a + t*b = g (g monic)."""
    r0, r1 = _fp_poly_trim(p, a), _fp_poly_trim(p, b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _fp_poly_divmod(p, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _fp_poly_trim(p, [x - y for x, y in itertools.zip_longest(
            s0, _fp_poly_mul(p, q, s1), fillvalue=0)])
        t0, t1 = t1, _fp_poly_trim(p, [x - y for x, y in itertools.zip_longest(
            t0, _fp_poly_mul(p, q, t1), fillvalue=0)])
    if r0:
        lead_inv = pow(r0[-1], p - 2, p)
        r0 = [(c * lead_inv) % p for c in r0]
        s0 = [(c * lead_inv) % p for c in s0]
        t0 = [(c * lead_inv) % p for c in t0]
    return r0, s0, t0


def _fp_monic_polys(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def _fp_poly_factor(p, poly):
    """Full factorization by trial division (small degrees only)."""
    poly = _fp_poly_trim(p, poly)
    if len(poly) <= 1:
        raise ValueError("cannot factor a constant")
    inv = pow(poly[-1], p - 2, p)
    poly = [(c * inv) % p for c in poly]
    factors = []
    d = 1
    while len(poly) - 1 >= 2 * d:
        found = True
        while found and len(poly) - 1 >= d:
            found = False
            for cand in _fp_monic_polys(p, d):
                q, r = _fp_poly_divmod(p, poly, cand)
                if not r:
                    mult = 1
                    poly = q
                    while True:
                        q2, r2 = _fp_poly_divmod(p, poly, cand)
                        if r2:
                            break
                        poly = q2
                        mult += 1
                    factors.append((cand, mult))
                    found = True
                    break
        d += 1
    if len(poly) > 1:
        factors.append((poly, 1))
    return factors


def _fp_poly_irreducible(p, poly):
    poly = _fp_poly_trim(p, poly)
    deg = len(poly) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for cand in _fp_monic_polys(p, d):
            _, r = _fp_poly_divmod(p, poly, cand)
            if not r:
                return False
    return True


# ---------------------------------------------------------------------------


class FinAlgebra:
    """Associative unital algebra over a prime field.

    ``table[i][j]`` is the coordinate vector of e_i * e_j.  ``one`` is the
    coordinate vector of the identity.  ``known_radical_rows`` may be passed
    by constructors that know the radical structurally (e.g. endomorphism
    algebras of decomposed modules); it is checked for nilpotency on first
    use.
    """

    def __init__(self, field, table, one, known_radical_rows=None, name=""):
        self.F = field
        self.dim = len(table)
        self.table = table
        self.one = list(one)
        self.name = name
        self._known_radical = known_radical_rows
        self._cache = {}

    # -- basic ops ------------------------------------------------------

    def product(self, u, v):
        F = self.F
        out = [F.zero] * self.dim
        for i, a in enumerate(u):
            if a == F.zero:
                continue
            for j, b in enumerate(v):
                if b == F.zero:
                    continue
                c = F.mul(a, b)
                row = self.table[i][j]
                for k in range(self.dim):
                    if row[k] != F.zero:
                        out[k] = F.add(out[k], F.mul(c, row[k]))
        return out

    def right_mult_matrix(self, v):
        """Matrix of x -> x*v on row vectors."""
        return [self.product([self.F.one if t == j else self.F.zero
                              for t in range(self.dim)], v)
                for j in range(self.dim)]

    def left_mult_matrix(self, v):
        """Matrix of x -> v*x on row vectors."""
        return [self.product(v, [self.F.one if t == j else self.F.zero
                                 for t in range(self.dim)])
                for j in range(self.dim)]

    def regular_action(self):
        """Right regular module action matrices (one per basis element)."""
        if "regular_action" not in self._cache:
            basis = fm.mat_identity(self.F, self.dim)
            self._cache["regular_action"] = [
                self.right_mult_matrix(e) for e in basis
            ]
        return self._cache["regular_action"]

    def regular_module(self):
        if "regular_module" not in self._cache:
            self._cache["regular_module"] = FinModule(self, self.regular_action())
        return self._cache["regular_module"]

    def generators(self):
        """A small generating set (with 1) of the algebra, cached."""
        if "generators" not in self._cache:
            F = self.F
            span_rows = [list(self.one)]
            gens = []
            basis = fm.mat_identity(F, self.dim)

            def closure(rows):
                rows = [list(r) for r in rows]
                while True:
                    rr, piv = fm.rref(F, rows)
                    cur = [list(r) for r in rr[: len(piv)]]
                    new = []
                    for a in cur:
                        for b in cur:
                            v = self.product(a, b)
                            if not fm.in_row_space(F, cur, piv, v):
                                new.append(v)
                    if not new:
                        return cur, piv
                    rows = cur + new

            rows, piv = closure(span_rows)
            while len(piv) < self.dim:
                added = False
                for e in basis:
                    if not fm.in_row_space(F, rows, piv, e):
                        gens.append(e)
                        rows, piv = closure(rows + [e])
                        added = True
                        break
                if not added:  # pragma: no cover - defensive
                    raise RuntimeError("generator search failed to span")
            self._cache["generators"] = gens
        return self._cache["generators"]

    # -- radical --------------------------------------------------------

    def radical_rows(self):
        """Canonical (RREF) basis of the Jacobson radical."""
        if "radical" in self._cache:
            return self._cache["radical"]
        if self._known_radical is not None:
            rows = fm.row_space_canonical(self.F, self._known_radical)
            rows = [list(r) for r in rows]
            self._check_nilpotent(rows)
        else:
            rows = self._radical_chain()
            self._check_nilpotent(rows)
        self._cache["radical"] = rows
        return rows

    def _radical_chain(self):
        """Jacobson radical over F_p via the characteristic-power chain.

        Iteratively cuts the current subspace by the vanishing of the
        coefficient functions c_{p^k} of the regular characteristic
        polynomial evaluated on products; over a prime field each cut is
        F_p-linear on the previous stage.
        """
        F = self.F
        p = F.p
        n = self.dim
        if n == 0:
            return []
        reg = self.regular_action()

        def reg_matrix(v):
            out = None
            for i, c in enumerate(v):
                if c == F.zero:
                    continue
                term = fm.mat_scal(F, c, reg[i])
                out = term if out is None else fm.mat_add(F, out, term)
            return out if out is not None else fm.mat_zero(F, n, n)

        basis = [list(r) for r in fm.mat_identity(F, n)]
        k = 0
        while p ** k <= n:
            target = n - p ** k
            rows = []
            for y in basis:
                row = []
                for x in basis:
                    z = self.product(x, y)
                    cp = fm.charpoly(F, reg_matrix(z))
                    row.append(cp[target])
                rows.append(row)
            ker = fm.kernel_basis(F, rows)
            if not ker:
                basis = []
                break
            basis = [
                [F.zero] * n if not basis else _combine_rows(F, coeffs, basis)
                for coeffs in ker
            ]
            rr = fm.row_space_canonical(F, basis)
            basis = [list(r) for r in rr]
            if not basis:
                break
            k += 1
        return basis

    def _check_nilpotent(self, rows):
        if not rows:
            return
        F = self.F
        cur = [list(r) for r in rows]
        for _ in range(self.dim + 1):
            if not cur:
                return
            nxt = []
            for a in cur:
                for b in rows:
                    nxt.append(self.product(a, b))
            nxt = [list(r) for r in fm.row_space_canonical(F, nxt)]
            if len(nxt) >= len(cur) and nxt == cur:
                raise NotNilpotent("claimed radical is not nilpotent")
            cur = nxt
        if cur:
            raise NotNilpotent("claimed radical is not nilpotent")

    def is_semisimple(self):
        return not self.radical_rows()

    # -- quotients and opposite ----------------------------------------

    def quotient(self, ideal_rows, name=""):
        """Quotient by a two-sided ideal.  Returns (B, proj, lift): proj is
        a dim x dim_B matrix, lift a dim_B x dim matrix of representatives.
        If the ideal sits inside the known radical, the quotient inherits
        the image radical structurally."""
        F = self.F
        rr, piv = fm.rref(F, ideal_rows) if ideal_rows else ([], [])
        rr = rr[: len(piv)]
        free = [c for c in range(self.dim) if c not in piv]
        qdim = len(free)

        def reduce_vec(v):
            w = list(v)
            for r, pc in enumerate(piv):
                if w[pc] != F.zero:
                    f = w[pc]
                    w = [F.sub(x, F.mul(f, y)) for x, y in zip(w, rr[r])]
            return w

        def proj_vec(v):
            w = reduce_vec(v)
            return [w[c] for c in free]

        lift = [[F.one if t == c else F.zero for t in range(self.dim)] for c in free]
        proj = [proj_vec(e) for e in fm.mat_identity(F, self.dim)]
        table = []
        for i in range(qdim):
            rowt = []
            for j in range(qdim):
                prod = self.product(lift[i], lift[j])
                rowt.append(proj_vec(prod))
            table.append(rowt)
        one_q = proj_vec(self.one)
        known = None
        if self._known_radical is not None or "radical" in self._cache:
            J = self.radical_rows()
            Jrr, Jpiv = fm.rref(F, J) if J else ([], [])
            Jrr = Jrr[: len(Jpiv)]
            if all(fm.in_row_space(F, Jrr, Jpiv, r) for r in rr):
                known = [proj_vec(j) for j in J]
        B = FinAlgebra(F, table, one_q, known_radical_rows=known,
                       name=name or (self.name + "/I"))
        return B, proj, lift

    def quotient_by_radical(self):
        if "semisimple_quotient" not in self._cache:
            J = self.radical_rows()
            B, proj, lift = self.quotient(J, name=(self.name + "/J"))
            B._known_radical = []
            self._cache["semisimple_quotient"] = (B, proj, lift)
        return self._cache["semisimple_quotient"]

    def op(self):
        """Opposite algebra (same basis, reversed products)."""
        if "op" not in self._cache:
            table = [[self.table[j][i] for j in range(self.dim)]
                     for i in range(self.dim)]
            known = self._known_radical
            if known is None and "radical" in self._cache:
                known = self._cache["radical"]
            A = FinAlgebra(self.F, table, self.one,
                           known_radical_rows=known, name=self.name + "^op")
            A._cache["op"] = self
            self._cache["op"] = A
        return self._cache["op"]

    # -- simples and projective indecomposables -------------------------

    def primitive_idempotent_decomposition(self):
        """Orthogonal idempotents e_i with sum 1 and e_i*A indecomposable.

        Returns a list of (idempotent_vector, rows) pairs where rows span
        e_i*A inside the regular module.
        """
        if "pid" in self._cache:
            return self._cache["pid"]
        F = self.F
        reg = self.regular_module()
        # endomorphisms of the regular module are left multiplications;
        # the radical of that endomorphism algebra is left multiplication
        # by the radical — no Hom solving needed.
        items = [(list(self.one), fm.mat_identity(F, self.dim))]
        result = []
        while items:
            e, rows = items.pop()
            sub = _split_regular_summand(self, e, rows)
            if sub is None:
                result.append((e, rows))
            else:
                items.extend(sub)
        # canonical order: by dimension then lexicographic rows
        result.sort(key=lambda t: (len(t[1]), fm.row_space_canonical(F, t[1])))
        self._cache["pid"] = result
        return result

    def simples(self):
        """Representatives of the simple right modules (as modules over
        this algebra, acting through the semisimple quotient)."""
        if "simples" in self._cache:
            return self._cache["simples"]
        reps = []
        for e, rows in self.primitive_idempotent_decomposition():
            P = submodule_module(self.regular_module(), rows)
            S = top_module(P)
            if not any(certified_isomorphic(S, T) for T in reps):
                reps.append(S)
        self._cache["simples"] = reps
        return reps

    def pims(self):
        """Projective indecomposables aligned with simples(): pims()[i] has
        top isomorphic to simples()[i].  Each carries .idempotent."""
        if "pims" in self._cache:
            return self._cache["pims"]
        simples = self.simples()
        chosen = [None] * len(simples)
        for e, rows in self.primitive_idempotent_decomposition():
            P = submodule_module(self.regular_module(), rows)
            P.idempotent = e
            S = top_module(P)
            for i, T in enumerate(simples):
                if chosen[i] is None and certified_isomorphic(S, T):
                    chosen[i] = P
                    break
        if any(P is None for P in chosen):  # pragma: no cover - defensive
            raise RuntimeError("projective indecomposable matching failed")
        self._cache["pims"] = chosen
        return chosen

    def __repr__(self):
        return f"FinAlgebra({self.name or 'dim %d' % self.dim} over {self.F})"


def _combine_rows(F, coeffs, rows):
    n = len(rows[0])
    out = [F.zero] * n
    for c, r in zip(coeffs, rows):
        if c != F.zero:
            for t in range(n):
                if r[t] != F.zero:
                    out[t] = F.add(out[t], F.mul(c, r[t]))
    return out


# ---------------------------------------------------------------------------


class FinModule:
    """Right module over a FinAlgebra: action[i] is the matrix of the i-th
    algebra basis element acting on row vectors."""

    def __init__(self, algebra, action):
        self.A = algebra
        self.action = action
        self.dim = len(action[0]) if algebra.dim and action else 0

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, [[] for _ in range(algebra.dim)])

    def act_of_vec(self, v):
        F = self.A.F
        out = fm.mat_zero(F, self.dim, self.dim)
        for i, c in enumerate(v):
            if c != F.zero:
                out = fm.mat_add(F, out, fm.mat_scal(F, c, self.action[i]))
        return out

    def apply(self, row, v):
        """row . act(v) for an algebra coordinate vector v."""
        F = self.A.F
        out = [F.zero] * self.dim
        for i, c in enumerate(v):
            if c == F.zero:
                continue
            Ai = self.action[i]
            for r, x in enumerate(row):
                if x != F.zero:
                    cx = F.mul(c, x)
                    Ar = Ai[r]
                    for t in range(self.dim):
                        if Ar[t] != F.zero:
                            out[t] = F.add(out[t], F.mul(cx, Ar[t]))
        return out

    def __repr__(self):
        return f"FinModule(dim {self.dim} over {self.A.name or self.A})"


def submodule_module(M, rows):
    """The submodule spanned by rows, as a module with its own basis.

    The returned module keeps the embedding in ``.embedding_rows``.
    """
    F = M.A.F
    rr, piv = fm.rref(F, rows) if rows else ([], [])
    basis = [list(r) for r in rr[: len(piv)]]
    d = len(basis)
    action = []
    for g in range(M.A.dim):
        Ag = M.action[g]
        mat = []
        for b in basis:
            img = [F.zero] * M.dim
            for r, x in enumerate(b):
                if x != F.zero:
                    row = Ag[r]
                    for t in range(M.dim):
                        if row[t] != F.zero:
                            img[t] = F.add(img[t], F.mul(x, row[t]))
            # coordinates w.r.t. RREF basis: read off pivot columns
            coords = [img[pc] for pc in piv]
            # verify containment (defensive)
            chk = list(img)
            for r2, pc in enumerate(piv):
                if chk[pc] != F.zero:
                    f = chk[pc]
                    chk = [F.sub(x, F.mul(f, y)) for x, y in zip(chk, basis[r2])]
            if any(x != F.zero for x in chk):
                raise ValueError("rows do not span an invariant subspace")
            mat.append(coords)
        action.append(mat)
    N = FinModule(M.A, action)
    N.dim = d
    N.embedding_rows = basis
    return N


def quotient_module(M, rows):
    """M modulo the submodule spanned by rows; returns (Q, proj_matrix)."""
    F = M.A.F
    rr, piv = fm.rref(F, rows) if rows else ([], [])
    rr = rr[: len(piv)]
    free = [c for c in range(M.dim) if c not in piv]

    def proj_vec(v):
        w = list(v)
        for r, pc in enumerate(piv):
            if w[pc] != F.zero:
                f = w[pc]
                w = [F.sub(x, F.mul(f, y)) for x, y in zip(w, rr[r])]
        return [w[c] for c in free]

    action = []
    for g in range(M.A.dim):
        Ag = M.action[g]
        mat = [proj_vec(Ag[c]) for c in free]
        action.append(mat)
    Q = FinModule(M.A, action)
    Q.dim = len(free)
    proj = [proj_vec(e) for e in fm.mat_identity(F, M.dim)]
    return Q, proj


def direct_sum_module(mods):
    if not mods:
        raise ValueError("empty direct sum")
    A = mods[0].A
    F = A.F
    total = sum(M.dim for M in mods)
    action = []
    for g in range(A.dim):
        mat = fm.mat_zero(F, total, total)
        off = 0
        for M in mods:
            Ag = M.action[g]
            for i in range(M.dim):
                for j in range(M.dim):
                    mat[off + i][off + j] = Ag[i][j]
            off += M.dim
        action.append(mat)
    S = FinModule(A, action)
    S.dim = total
    S.summand_offsets = []
    off = 0
    for M in mods:
        S.summand_offsets.append((off, M.dim))
        off += M.dim
    return S


def dual_module(M, target_algebra):
    """Dual of a right module over A, as a right module over A^op (or back).

    ``target_algebra`` must be ``M.A.op()`` (same basis indexing); the action
    matrices are the transposes.
    """
    action = [fm.mat_transpose(a) if M.dim else [] for a in M.action]
    D = FinModule(target_algebra, action)
    D.dim = M.dim
    return D


# ---------------------------------------------------------------------------
# Hom spaces


def hom_space(M, N):
    """Basis of Hom(M, N) as a list of dim_M x dim_N matrices."""
    A = M.A
    F = A.F
    if M.dim == 0 or N.dim == 0:
        return []
    gens = A.generators()
    if not gens:
        gens = []
    m, n = M.dim, N.dim
    rows = []
    for g in gens:
        AM = M.act_of_vec(g)
        AN = N.act_of_vec(g)
        # constraint: AM . Phi - Phi . AN = 0; unknown Phi[k][c'] at k*n+c'
        for r in range(m):
            for c in range(n):
                row = [F.zero] * (m * n)
                for k in range(m):
                    if AM[r][k] != F.zero:
                        row[k * n + c] = F.add(row[k * n + c], AM[r][k])
                for cp in range(n):
                    if AN[cp][c] != F.zero:
                        row[r * n + cp] = F.sub(row[r * n + cp], AN[cp][c])
                if any(x != F.zero for x in row):
                    rows.append(row)
    if not rows:
        ker = fm.mat_identity(F, m * n)
    else:
        ker = fm.kernel_basis(F, rows)
    return [[vec[i * n:(i + 1) * n] for i in range(m)] for vec in ker]


def end_algebra(M):
    """(FinAlgebra E, mats): E has basis the returned endo matrices."""
    F = M.A.F
    mats = hom_space(M, M)
    h = len(mats)
    flat = [sum((list(r) for r in mat), []) for mat in mats]
    table = []
    for i in range(h):
        rowt = []
        for j in range(h):
            prod = fm.mat_mul(F, mats[i], mats[j])
            coords = fm.solve(F, fm.mat_transpose(flat),
                              sum((list(r) for r in prod), []))
            if coords is None:  # pragma: no cover - defensive
                raise RuntimeError("endomorphism product left the span")
            rowt.append(coords)
        table.append(rowt)
    one = fm.solve(F, fm.mat_transpose(flat),
                   sum((list(r) for r in fm.mat_identity(F, M.dim)), []))
    E = FinAlgebra(F, table, one, name="End")
    return E, mats


# ---------------------------------------------------------------------------
# unit-combination search (shared by isomorphism tests and cover maps)


def find_unit_combination(F, mats, cap=_UNIT_SEARCH_CAP,
                          trials=_UNIT_SEARCH_TRIALS, seed=_UNIT_SEARCH_SEED):
    """Coefficients c with det(sum c_k mats[k]) != 0, or None.

    Returns (coeffs_or_None, certified): certified means a None answer is a
    proof of nonexistence (exhaustive search).
    """
    h = len(mats)
    if h == 0:
        return None, True
    d = len(mats[0])
    if d == 0:
        return None, True

    def is_unit(coeffs):
        S = fm.mat_zero(F, d, d)
        for c, mat in zip(coeffs, mats):
            if c != F.zero:
                S = fm.mat_add(F, S, fm.mat_scal(F, c, mat))
        return fm.rank(F, S) == d

    p = F.p
    if p ** h <= cap:
        for coeffs in itertools.product(range(p), repeat=h):
            if any(coeffs) and is_unit(list(coeffs)):
                return list(coeffs), True
        return None, True
    for k in range(h):
        coeffs = [F.zero] * h
        coeffs[k] = F.one
        if is_unit(coeffs):
            return coeffs, True
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [rng.randrange(p) for _ in range(h)]
        if any(coeffs) and is_unit(coeffs):
            return coeffs, True
    return None, False


# ---------------------------------------------------------------------------
# isomorphism testing


def radical_series_dims(M):
    A = M.A
    F = A.F
    J = A.radical_rows()
    dims = [M.dim]
    rows = fm.mat_identity(F, M.dim)
    while dims[-1] > 0:
        nxt = []
        for j in J:
            mat = M.act_of_vec(j)
            for r in rows:
                img = [F.zero] * M.dim
                for k, x in enumerate(r):
                    if x != F.zero:
                        for t in range(M.dim):
                            if mat[k][t] != F.zero:
                                img[t] = F.add(img[t], F.mul(x, mat[k][t]))
                nxt.append(img)
        can = fm.row_space_canonical(F, nxt) if nxt else ()
        rows = [list(r) for r in can]
        if len(rows) == dims[-1]:
            break  # not nilpotent on M? defensive stop
        dims.append(len(rows))
        if not rows:
            break
    return tuple(dims)


def socle_series_dims(M):
    A = M.A
    F = A.F
    J = A.radical_rows()
    dims = []
    cur = M
    total = 0
    guard = 0
    while cur.dim > 0 and guard <= M.dim + 1:
        guard += 1
        if not J:
            dims.append(M.dim)
            break
        stacked = []
        for r in range(cur.dim):
            row = []
            for j in J:
                row.extend(cur.act_of_vec(j)[r])
            stacked.append(row)
        soc = fm.kernel_basis(F, fm.mat_transpose(stacked)) if stacked and stacked[0] else \
            [list(r) for r in fm.mat_identity(F, cur.dim)]
        if not soc:
            break
        total += len(soc)
        dims.append(total)
        cur, _ = quotient_module(cur, soc)
        # series on quotient counts cumulative socle dims
    return tuple(dims)


def certified_isomorphic(M, N):
    """True/False with certainty, or raises Undecided."""
    if M.dim != N.dim:
        return False
    if M.dim == 0:
        return True
    if radical_series_dims(M) != radical_series_dims(N):
        return False
    homs = hom_space(M, N)
    if not homs:
        return False
    coeffs, certified = find_unit_combination(M.A.F, homs)
    if coeffs is not None:
        return True
    if certified:
        return False
    raise Undecided(
        f"isomorphism of {M.dim}-dim modules undecided: unit-combination "
        f"search budget exhausted over {len(homs)} homs"
    )


# ---------------------------------------------------------------------------
# radical/top of modules


def module_radical_rows(M):
    A = M.A
    F = A.F
    J = A.radical_rows()
    rows = []
    for j in J:
        rows.extend(M.act_of_vec(j))
    can = fm.row_space_canonical(F, rows) if rows else ()
    return [list(r) for r in can]


def top_module(M):
    Q, _ = quotient_module(M, module_radical_rows(M))
    return Q


# ---------------------------------------------------------------------------
# decomposition


def _fitting_split(F, fmat, dim):
    """(rows_ker, rows_im) for the stable kernel/image of an endo, or None
    if the split is trivial."""
    power = fmat
    r_prev = fm.rank(F, power)
    for _ in range(dim + 2):
        nxt = fm.mat_mul(F, power, power)
        r = fm.rank(F, nxt)
        if r == r_prev:
            power = nxt
            break
        power, r_prev = nxt, r
    rk = fm.rank(F, power)
    if rk == 0 or rk == dim:
        return None
    ker = fm.kernel_basis(F, fm.mat_transpose(power))
    im = [list(r) for r in fm.row_space_canonical(F, power)]
    if len(ker) + len(im) != dim:
        return None
    return ker, im


def _element_min_poly(B, u):
    """Minimal polynomial of u in algebra B (coefficients low to high)."""
    F = B.F
    powers = [list(B.one)]
    cur = list(B.one)
    while True:
        if len(powers) > B.dim + 1:  # pragma: no cover - defensive
            raise RuntimeError("minimal polynomial search overflow")
        cur = B.product(cur, u)
        # is cur in span of powers?
        rr, piv = fm.rref(F, powers)
        if fm.in_row_space(F, rr[: len(piv)], piv, cur):
            coords = fm.solve(F, fm.mat_transpose(powers), cur)
            # cur = sum coords_k u^k  ->  u^d - sum = 0
            mp = [F.neg(c) for c in coords] + [F.zero] * (len(powers) - len(coords))
            mp.append(F.one)
            return _fp_poly_trim(F.p, mp)
        powers.append(cur)


def _idempotent_in_semisimple(B):
    """A nontrivial idempotent of a (semisimple, dim>1) algebra, or None if
    B is certified to be a field, or raises DecompositionUncertified."""
    F = B.F
    p = F.p
    basis = fm.mat_identity(F, B.dim)
    palette = [list(b) for b in basis]
    for i in range(min(len(basis), 6)):
        for j in range(i + 1, min(len(basis), 6)):
            palette.append(B.product(basis[i], basis[j]))
            palette.append([F.add(x, y) for x, y in zip(basis[i], basis[j])])
    rng = random.Random(_UNIT_SEARCH_SEED + 7)
    for _ in range(40):
        palette.append([rng.randrange(p) for _ in range(B.dim)])

    commutative = all(
        B.product(basis[i], basis[j]) == B.product(basis[j], basis[i])
        for i in range(B.dim) for j in range(i + 1, B.dim)
    )
    best_prim = None
    for u in palette:
        if all(c == F.zero for c in u):
            continue
        mp = _element_min_poly(B, u)
        if len(mp) - 1 <= 0:
            continue
        factors = _fp_poly_factor(p, mp)
        if len(factors) >= 2:
            g = []
            f0, e0 = factors[0]
            g = f0
            for _ in range(e0 - 1):
                g = _fp_poly_mul(p, g, f0)
            h, _ = _fp_poly_divmod(p, mp, g)
            gg, s, t = _fp_poly_gcdext(p, g, h)
            if len(gg) == 1:  # coprime: s*g + t*h = 1
                # e := (t*h)(u) is 1 on the g-part, 0 on the h-part
                th = _fp_poly_mul(p, t, h)
                e = _poly_eval_in_algebra(B, th, u)
                if e != [F.zero] * B.dim and e != list(B.one) \
                        and B.product(e, e) == e:
                    return e
        elif commutative and len(mp) - 1 == B.dim and _fp_poly_irreducible(p, mp):
            best_prim = u
    if commutative and best_prim is not None:
        return None  # certified field: local
    raise DecompositionUncertified(
        "no nontrivial idempotent found in a semisimple endomorphism quotient "
        f"of dimension {B.dim}"
    )


def _poly_eval_in_algebra(B, poly, u):
    F = B.F
    out = [F.zero] * B.dim
    power = list(B.one)
    for c in poly:
        if c:
            out = [F.add(x, F.mul(c, y)) for x, y in zip(out, power)]
        power = B.product(power, u)
    return out


def _lift_idempotent_matrix(F, mat, dim, max_iter=80):
    """Newton-lift a matrix idempotent mod nilpotents: f -> 3f^2 - 2f^3."""
    f = mat
    three = 3 % F.p
    two = 2 % F.p
    for _ in range(max_iter):
        f2 = fm.mat_mul(F, f, f)
        if f2 == f:
            return f
        f3 = fm.mat_mul(F, f2, f)
        f = fm.mat_sub(F, fm.mat_scal(F, three, f2), fm.mat_scal(F, two, f3))
    return None


def decompose(M, _depth=0):
    """Indecomposable summands of M, each certified by a local endomorphism
    algebra.  Raises DecompositionUncertified when certification fails."""
    if _depth > 64:  # pragma: no cover - defensive
        raise DecompositionUncertified("decomposition recursion overflow")
    if M.dim == 0:
        return []
    F = M.A.F
    E, mats = end_algebra(M)
    if len(mats) == 1:
        return [M]
    J = E.radical_rows()
    Ebar, proj, lift = E.quotient(J)
    if Ebar.dim == 1:
        return [M]
    eb = _idempotent_in_semisimple(Ebar)
    if eb is None:
        return [M]  # local: End/J is a field
    # lift to an idempotent endomorphism matrix
    e_coords = _combine_rows(F, eb, lift) if Ebar.dim else eb
    f = fm.mat_zero(F, M.dim, M.dim)
    for c, mat in zip(e_coords, mats):
        if c != F.zero:
            f = fm.mat_add(F, f, fm.mat_scal(F, c, mat))
    lifted = _lift_idempotent_matrix(F, f, M.dim)
    if lifted is not None:
        rk = fm.rank(F, lifted)
        if 0 < rk < M.dim:
            im = [list(r) for r in fm.row_space_canonical(F, lifted)]
            ker = fm.kernel_basis(F, fm.mat_transpose(lifted))
            if len(im) + len(ker) == M.dim:
                out = []
                for rows in (im, ker):
                    sub = submodule_module(M, rows)
                    out.extend(decompose(sub, _depth + 1))
                return out
    # Fitting fallback over the endo palette
    palette = list(mats)
    for i in range(min(len(mats), 5)):
        for j in range(min(len(mats), 5)):
            if i != j:
                palette.append(fm.mat_mul(F, mats[i], mats[j]))
                palette.append(fm.mat_add(F, mats[i], mats[j]))
    for fmat in palette:
        split = _fitting_split(F, fmat, M.dim)
        if split is not None:
            out = []
            for rows in split:
                sub = submodule_module(M, rows)
                out.extend(decompose(sub, _depth + 1))
            return out
    raise DecompositionUncertified(
        f"could not certify a decomposition of a {M.dim}-dimensional module"
    )


def _split_regular_summand(A, e, rows):
    """One split step for a summand e*A of the regular module, or None if
    certified indecomposable.  Returns [(e1, rows1), (e2, rows2)]."""
    F = A.F
    d = len(rows)
    if d == 0 or d == 1:
        return None
    # endomorphisms of e*A are left multiplications by elements of e*A*e
    # basis of e*A*e:
    eae = []
    for r in rows:
        v = A.product(e, A.product(r, e))
        eae.append(v)
    can = fm.row_space_canonical(F, eae) if eae else ()
    eae = [list(r) for r in can]
    if len(eae) == 1:
        return None  # End = F * e: local
    # radical of End(eA) = e J(A) e (structural)
    J = A.radical_rows()
    eJe = []
    for j in J:
        eJe.append(A.product(e, A.product(j, e)))
    eJe_can = [list(r) for r in fm.row_space_canonical(F, eJe)] if eJe else []
    # quotient algebra (eAe)/(eJe) with identity e
    Ebar_basis, proj_fn, lift_rows, mult = _corner_quotient(A, e, eae, eJe_can)
    if len(Ebar_basis) == 1:
        return None  # local
    B = FinAlgebra(F, mult["table"], mult["one"], known_radical_rows=[],
                   name="corner")
    eb = _idempotent_in_semisimple(B)
    if eb is None:
        return None  # field: local
    c_coords = _combine_rows(F, eb, lift_rows)
    # Newton-lift inside eAe toward an idempotent element
    x = c_coords
    for _ in range(80):
        x2 = A.product(x, x)
        if x2 == x:
            break
        x3 = A.product(x2, x)
        x = [F.sub(F.mul(3 % F.p, a), F.mul(2 % F.p, b)) for a, b in zip(x2, x3)]
    else:  # pragma: no cover - defensive
        raise DecompositionUncertified("idempotent lifting did not converge")
    e1 = x
    e2 = [F.sub(a, b) for a, b in zip(e, e1)]
    if all(c == F.zero for c in e1) or all(c == F.zero for c in e2):
        raise DecompositionUncertified("degenerate idempotent split")
    out = []
    for ei in (e1, e2):
        rows_i = [A.product(ei, r) for r in rows]
        can_i = [list(r) for r in fm.row_space_canonical(F, rows_i)]
        out.append((ei, can_i))
    if len(out[0][1]) + len(out[1][1]) != d:  # pragma: no cover - defensive
        raise DecompositionUncertified("idempotent split dimensions mismatch")
    return out


def _corner_quotient(A, e, eae_rows, eJe_rows):
    """Coordinates for (eAe)/(eJe) as an abstract algebra with identity e."""
    F = A.F
    rrJ, pivJ = fm.rref(F, eJe_rows) if eJe_rows else ([], [])
    rrJ = rrJ[: len(pivJ)]
    # basis of eAe modulo eJe: reduce eae rows, keep independent ones
    basis = []
    key_rows = []
    for r in eae_rows:
        w = list(r)
        for rr, pc in zip(rrJ, pivJ):
            if w[pc] != F.zero:
                f = w[pc]
                w = [F.sub(x, F.mul(f, y)) for x, y in zip(w, rr)]
        cand = key_rows + [w]
        if fm.rank(F, cand) > len(key_rows):
            key_rows.append(w)
            basis.append(r)  # representative in eAe

    def reduce_to_coords(v):
        w = list(v)
        for rr, pc in zip(rrJ, pivJ):
            if w[pc] != F.zero:
                f = w[pc]
                w = [F.sub(x, F.mul(f, y)) for x, y in zip(w, rr)]
        coords = fm.solve(F, fm.mat_transpose(key_rows), w)
        if coords is None:  # pragma: no cover - defensive
            raise RuntimeError("corner quotient coordinates failed")
        return coords

    q = len(basis)
    table = [[reduce_to_coords(A.product(basis[i], basis[j]))
              for j in range(q)] for i in range(q)]
    one = reduce_to_coords(e)
    return basis, reduce_to_coords, basis, {"table": table, "one": one}


# ---------------------------------------------------------------------------
# projective covers, syzygies, homological dimensions


def top_multiplicities(M):
    """Multiplicity vector of simples in top(M), aligned with A.simples()."""
    A = M.A
    simples = A.simples()
    T = top_module(M)
    mults = [0] * len(simples)
    if T.dim == 0:
        return mults
    for S in decompose(T):
        for i, X in enumerate(simples):
            if certified_isomorphic(S, X):
                mults[i] += 1
                break
        else:  # pragma: no cover - defensive
            raise RuntimeError("top summand matched no simple")
    return mults


def _pim_hom_basis(A, P, M):
    """Basis of Hom(P, M) for P = e*A projective: one hom per basis element
    of M*e, sending row r of P to m . act(r)."""
    F = A.F
    e = P.idempotent
    rows_Me = fm.row_space_canonical(F, M.act_of_vec(e))
    homs = []
    for m in rows_Me:
        mat = []
        for r in P.embedding_rows:
            mat.append(M.apply(list(m), r))
        homs.append(mat)
    return homs


def projective_cover(M):
    """(P, cover_matrix, blocks): minimal projective cover Phi: P -> M.

    P is a direct sum of projective indecomposables matching top(M); the
    cover matrix is dim_P x dim_M and induces an isomorphism on tops.
    """
    A = M.A
    F = A.F
    mults = top_multiplicities(M)
    pims = A.pims()
    blocks = []
    for i, m in enumerate(mults):
        blocks.extend([pims[i]] * m)
    if not blocks:
        if M.dim != 0:  # pragma: no cover - defensive
            raise RuntimeError("nonzero module with empty top")
        return None, None, []
    P = direct_sum_module(blocks)
    # candidate homs per block
    block_homs = []
    for B in blocks:
        block_homs.append(_pim_hom_basis(A, B, M))
    # top projections
    radM = module_radical_rows(M)
    TM, projM = quotient_module(M, radM)
    radP = module_radical_rows(P)
    TP, projP = quotient_module(P, radP)
    # parameter space: choice of hom for each block; induced top maps
    top_mats = []
    param_index = []  # (block, hom index)
    for bi, homs in enumerate(block_homs):
        off, bdim = P.summand_offsets[bi]
        for hi, h in enumerate(homs):
            big = fm.mat_zero(F, P.dim, M.dim)
            for r in range(bdim):
                big[off + r] = list(h[r])
            # induced map on tops: TP -> TM.  Rows of TP correspond to the
            # free coordinates of P; build via sections.
            tmat = _induced_top_map(F, big, projP, projM, TP.dim, TM.dim, P.dim)
            top_mats.append(tmat)
            param_index.append((bi, hi, big))
    if TP.dim != TM.dim:  # pragma: no cover - defensive
        raise RuntimeError("top dimension mismatch in cover construction")
    coeffs, certified = find_unit_combination(F, top_mats)
    if coeffs is None:
        raise DecompositionUncertified(
            "projective cover map search failed"
            + ("" if certified else " (budget exhausted)")
        )
    cover = fm.mat_zero(F, P.dim, M.dim)
    for c, (_, _, big) in zip(coeffs, param_index):
        if c != F.zero:
            cover = fm.mat_add(F, cover, fm.mat_scal(F, c, big))
    return P, cover, blocks


def _induced_top_map(F, big, projP, projM, tp, tm, pdim):
    """Top-level map from a lift matrix: section of projP, then big, projM."""
    # projP: pdim x tp; pick for each top-basis vector a preimage row:
    # use rows of identity whose projection is the basis vector — the free
    # coordinates.  Solve projP^T x = e_k instead (small systems).
    out = []
    for k in range(tp):
        target = [F.one if t == k else F.zero for t in range(tp)]
        x = fm.solve(F, fm.mat_transpose(projP), target)
        if x is None:  # pragma: no cover - defensive
            raise RuntimeError("top projection is not surjective")
        img = [F.zero] * len(big[0])
        for r, c in enumerate(x):
            if c != F.zero:
                for t in range(len(big[0])):
                    if big[r][t] != F.zero:
                        img[t] = F.add(img[t], F.mul(c, big[r][t]))
        # project to top of M
        red = [F.zero] * tm
        for r, c in enumerate(img):
            if c != F.zero:
                for t in range(tm):
                    if projM[r][t] != F.zero:
                        red[t] = F.add(red[t], F.mul(c, projM[r][t]))
        out.append(red)
    return out


def syzygy(M):
    """(K, P, cover): kernel of the minimal projective cover of M."""
    P, cover, _ = projective_cover(M)
    if P is None:
        return None, None, None
    F = M.A.F
    ker_rows = fm.kernel_basis(F, fm.mat_transpose(cover))
    K = submodule_module(P, ker_rows) if ker_rows else FinModule.zero(M.A)
    if ker_rows:
        K.embedding_rows_in_cover = ker_rows
    return K, P, cover


def is_projective_module(M):
    if M.dim == 0:
        return True
    K, _, _ = syzygy(M)
    return K.dim == 0


def projective_dimension(M, max_steps=40):
    """pd(M): an int, INFINITY (certified by syzygy periodicity), or raises
    CutoffReached."""
    if M.dim == 0:
        return 0
    seen = []
    cur = M
    k = 0
    while k <= max_steps:
        K, _, _ = syzygy(cur)
        if K.dim == 0:
            return k
        for prev in seen:
            try:
                if certified_isomorphic(K, prev):
                    return INFINITY
            except Undecided:
                pass
        seen.append(K)
        cur = K
        k += 1
    raise CutoffReached(f"projective dimension exceeds {max_steps}")


def global_dimension(A, max_steps=40):
    dims = []
    for S in A.simples():
        d = projective_dimension(S, max_steps=max_steps)
        if d == INFINITY:
            return INFINITY
        dims.append(d)
    return max(dims) if dims else 0


def _cosyzygy_chain(A, count):
    """First ``count`` terms of the minimal injective resolution of the
    regular module, each returned as a right A-module (dual of a projective
    over the opposite algebra), plus the flag that the chain ended (the
    resolution became zero)."""
    Aop = A.op()
    reg = A.regular_module()
    N = dual_module(reg, Aop)
    terms = []
    cur = N
    for _ in range(count):
        if cur.dim == 0:
            return terms, True
        K, P, cover = syzygy(cur)
        terms.append(dual_module(P, A))
        cur = K
    return terms, False


def dominant_dimension_at_least(A, n):
    """Certified check that the first n injective terms are projective."""
    terms, ended = _cosyzygy_chain(A, n)
    for I in terms:
        if not is_projective_module(I):
            return False
    return True


def dominant_dimension(A, max_steps=8):
    """Exact dominant dimension up to max_steps; INFINITY if the injective
    resolution terminates while all terms are projective; CutoffReached if
    still projective at the cutoff."""
    terms, ended = _cosyzygy_chain(A, max_steps)
    count = 0
    for I in terms:
        if is_projective_module(I):
            count += 1
        else:
            return count
    if ended:
        return INFINITY
    raise CutoffReached(f"dominant dimension is at least {max_steps}")


# ---------------------------------------------------------------------------
# stock constructions


def dual_regular_module(A):
    """The linear dual of the regular bimodule as a right module over A
    (the standard injective cogenerator): (phi . a)(x) = phi(a x), written
    on the dual basis."""
    action = []
    for i in range(A.dim):
        action.append([[A.table[i][k][j] for k in range(A.dim)]
                       for j in range(A.dim)])
    return FinModule(A, action)


def polynomial_quotient_algebra(p, mod_coeffs, name=""):
    """F_p[x]/(f) on the basis 1, x, ..., x^(deg f - 1); f monic, given by
    its coefficients from constant to leading."""
    d = len(mod_coeffs) - 1
    if d < 1 or mod_coeffs[-1] % p != 1:
        raise ValueError("modulus must be monic of positive degree")
    F = fm.prime_field(p)

    def red(vec):
        vec = list(vec)
        while len(vec) > d:
            c = vec.pop()
            if c:
                for i in range(d):
                    vec[len(vec) - d + i] = (vec[len(vec) - d + i]
                                             - c * mod_coeffs[i]) % p
        vec += [0] * (d - len(vec))
        return [c % p for c in vec]

    table = [[red([0] * (i + j) + [1]) for j in range(d)] for i in range(d)]
    return FinAlgebra(F, table, red([1]), name=name)


def truncated_polynomial_algebra(p, m, name=""):
    """The local serial algebra F_p[x]/(x^m)."""
    return polynomial_quotient_algebra(p, [0] * m + [1],
                                       name=name or f"F_{p}[x]/x^{m}")


def upper_triangular_algebra(p, n, name=""):
    """Upper-triangular n x n matrices over F_p, basis e_ij (i <= j) in
    lexicographic order."""
    keys = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {k: t for t, k in enumerate(keys)}
    F = fm.prime_field(p)
    d = len(keys)
    table = []
    for (ra, ca) in keys:
        row = []
        for (rb, cb) in keys:
            vec = [0] * d
            if ca == rb:
                vec[pos[(ra, cb)]] = 1
            row.append(vec)
        table.append(row)
    one = [0] * d
    for i in range(n):
        one[pos[(i, i)]] = 1
    return FinAlgebra(F, table, one, name=name or f"UT_{n}(F_{p})")


def full_matrix_algebra(p, n, name=""):
    """The full n x n matrix algebra over F_p, basis e_ij row-major."""
    F = fm.prime_field(p)
    d = n * n
    table = []
    for a in range(d):
        ra, ca = divmod(a, n)
        row = []
        for b in range(d):
            rb, cb = divmod(b, n)
            vec = [0] * d
            if ca == rb:
                vec[ra * n + cb] = 1
            row.append(vec)
        table.append(row)
    one = [0] * d
    for i in range(n):
        one[i * n + i] = 1
    return FinAlgebra(F, table, one, name=name or f"M_{n}(F_{p})")
