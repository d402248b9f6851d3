"""Exact arithmetic over finite chain rings R/pi^m.

Two flavors share one element encoding (ints in [0, p^m)):

* ``mixed``: Z/p^m, residues of the p-adic integers; pi = p.
* ``equal``: F_p[t]/t^m, a polynomial sum(c_i t^i) stored in base p as
  sum(c_i p^i); pi = t.  Addition is digitwise, multiplication is a truncated
  convolution, so the int encoding is purely a container.

In both flavors the valuation of an element is the number of trailing zero
base-p digits, and reduction mod pi^e is the same int operation (% p^e), so
the matrix toolkit below is flavor-agnostic.

Precision discipline: lattice data (echelon bases, action matrices) is kept
in canonical representatives whose valuations stay far below the working
precision m.  Division by pi^e loses the top e digits, so every routine that
back-substitutes through a triangular system first lifts its inputs into a
ring with enough extra guard digits ("boosting") and reduces the result back
to precision m; the answers are then exact mod pi^m.  Smith and echelon
elimination never lose digits (each update subtracts an exact multiple of the
pivot), so they need no boost.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PrecisionExhausted

INF = None  # valuation of 0 at working precision


@dataclass(frozen=True)
class ChainRing:
    p: int
    m: int
    flavor: str = "mixed"  # "mixed" | "equal"

    def __post_init__(self):
        if self.flavor not in ("mixed", "equal"):
            raise ValueError("flavor must be 'mixed' or 'equal'")
        if self.m < 1:
            raise ValueError("precision must be >= 1")
        object.__setattr__(self, "_mod", self.p ** self.m)

    @property
    def modulus(self):
        return self._mod

    def boosted(self, extra):
        """Same ring with ``extra`` more guard digits; elements carry over."""
        return ChainRing(self.p, self.m + extra, self.flavor)

    def reduce_from(self, a):
        """Reduce an element of a boosted ring back to this precision."""
        return a % self._mod

    # -- digits ---------------------------------------------------------

    def _digits(self, a):
        p = self.p
        out = []
        for _ in range(self.m):
            a, d = divmod(a, p)
            out.append(d)
        return out

    def _undigits(self, ds):
        out = 0
        for d in reversed(ds):
            out = out * self.p + d
        return out

    def from_digits(self, ds):
        ds = list(ds)[: self.m]
        ds = ds + [0] * (self.m - len(ds))
        return self._undigits([d % self.p for d in ds])

    def digits(self, a):
        return self._digits(a % self._mod)

    # -- ring operations ------------------------------------------------

    def from_int(self, n: int):
        if self.flavor == "mixed":
            return n % self._mod
        return n % self.p  # integer constants embed through F_p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        if self.flavor == "mixed":
            return (a + b) % self._mod
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x + y) % self.p for x, y in zip(da, db)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        if self.flavor == "mixed":
            return (-a) % self._mod
        return self._undigits([(-x) % self.p for x in self._digits(a)])

    def mul(self, a, b):
        if self.flavor == "mixed":
            return (a * b) % self._mod
        if a == 0 or b == 0:
            return 0
        da, db = self._digits(a), self._digits(b)
        m, p = self.m, self.p
        out = [0] * m
        for i, x in enumerate(da):
            if x == 0:
                continue
            for j in range(m - i):
                y = db[j]
                if y:
                    out[i + j] = (out[i + j] + x * y) % p
        return self._undigits(out)

    def val(self, a):
        """Number of trailing zero digits; INF for 0."""
        a %= self._mod
        if a == 0:
            return INF
        v = 0
        p = self.p
        while a % p == 0:
            a //= p
            v += 1
        return v

    def is_unit(self, a):
        return a % self.p != 0

    def unit_inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError("not a unit")
        if self.flavor == "mixed":
            return pow(a, -1, self._mod)
        # power-series inversion by Newton iteration x -> x(2 - a x)
        x = pow(a % self.p, -1, self.p)
        two = self.from_int(2)
        prec = 1
        while prec < self.m:
            x = self.mul(x, self.sub(two, self.mul(a, x)))
            prec *= 2
        return x

    def shift_up(self, a, e):
        """Multiply by pi^e (digit shift in both flavors)."""
        if e == 0:
            return a % self._mod
        return ((a % self._mod) * self.p ** e) % self._mod

    def shift_down(self, a, e):
        """Exact division by pi^e; requires val(a) >= e.

        The top e digits of the result are unknown (taken as 0); callers keep
        guard digits so the loss is harmless.
        """
        a %= self._mod
        if e == 0 or a == 0:
            return a
        v = self.val(a)
        if v < e:
            raise PrecisionExhausted(f"division by pi^{e} of element with valuation {v}")
        return a // (self.p ** e)  # base-p digit shift in both flavors

    def divexact(self, a, b):
        """a / b when val(a) >= val(b); loses val(b) top digits."""
        vb = self.val(b)
        if vb is INF:
            raise ZeroDivisionError("division by zero")
        u = self.shift_down(b, vb)
        return self.mul(self.shift_down(a, vb) if a % self._mod else 0, self.unit_inv(u))

    def unit_part(self, a):
        v = self.val(a)
        if v is INF:
            raise ZeroDivisionError("unit part of zero")
        return self.shift_down(a, v)

    def reduce_mod_pi_power(self, a, e):
        """Canonical residue of a modulo pi^e (e <= m)."""
        return (a % self._mod) % (self.p ** e)

    def residue(self, a):
        """Image in the residue field F_p."""
        return a % self.p

    def lift_residue(self, c):
        """Canonical lift of a residue-field element (digit in position 0)."""
        return c % self.p

    def pi_power(self, e):
        return self.shift_up(1, e)

    def elements(self):
        return range(self._mod)

    def __repr__(self):
        base = f"Z/{self.p}^{self.m}" if self.flavor == "mixed" else f"F_{self.p}[t]/t^{self.m}"
        return f"ChainRing({base})"


# ---------------------------------------------------------------------------
# dense matrices over a chain ring: plain lists of lists of encoded ints


def zmat(r, c):
    return [[0] * c for _ in range(r)]


def eye(R, n):
    M = zmat(n, n)
    for i in range(n):
        M[i][i] = 1
    return M


def mat_mul(R, A, B):
    rb = len(B)
    cb = len(B[0]) if rb else 0
    out = []
    for row in A:
        acc = [0] * cb
        for k, a in enumerate(row):
            if a == 0:
                continue
            bk = B[k]
            for j in range(cb):
                if bk[j]:
                    acc[j] = R.add(acc[j], R.mul(a, bk[j]))
        out.append(acc)
    return out


def mat_add(R, A, B):
    return [[R.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(R, A, B):
    return [[R.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scal(R, c, A):
    return [[R.mul(c, x) for x in row] for row in A]


def vec_matmul(R, v, A):
    acc = [0] * (len(A[0]) if A else 0)
    for k, a in enumerate(v):
        if a == 0:
            continue
        row = A[k]
        for j in range(len(acc)):
            if row[j]:
                acc[j] = R.add(acc[j], R.mul(a, row[j]))
    return acc


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_key(A):
    return tuple(tuple(row) for row in A)


def mat_reduce_from(R, A):
    return [[R.reduce_from(x) for x in row] for row in A]


def _min_val_position(R, M, rows, cols):
    best = None
    bestv = None
    for i in rows:
        for j in cols:
            v = R.val(M[i][j])
            if v is INF:
                continue
            if bestv is None or v < bestv:
                bestv, best = v, (i, j)
                if v == 0:
                    return best, 0
    return best, bestv


# ---------------------------------------------------------------------------
# Smith diagonalization


def smith(R, A):
    """Diagonalize: returns (exps, U, V) with U*A*V = diag(pi^e).

    U, V are square products of swaps, unit row scalings, and transvections
    (so invertible); ``exps`` holds the diagonal exponents in nondecreasing
    order, INF meaning 0 at working precision.  Every elimination subtracts
    an exact multiple of the pivot row/column, so the form is exact mod pi^m
    for exact input.
    """
    M = [list(row) for row in A]
    r = len(M)
    c = len(M[0]) if r else 0
    U = eye(R, r)
    V = eye(R, c)
    exps = []
    k = 0
    while k < min(r, c):
        pos, v = _min_val_position(R, M, range(k, r), range(k, c))
        if pos is None:
            break
        i, j = pos
        if i != k:
            M[i], M[k] = M[k], M[i]
            U[i], U[k] = U[k], U[i]
        if j != k:
            for row in M:
                row[j], row[k] = row[k], row[j]
            for row in V:
                row[j], row[k] = row[k], row[j]
        uinv = R.unit_inv(R.shift_down(M[k][k], v))
        M[k] = [R.mul(uinv, x) for x in M[k]]
        U[k] = [R.mul(uinv, x) for x in U[k]]
        for i in range(k + 1, r):
            if M[i][k]:
                f = R.shift_down(M[i][k], v)  # pivot is exactly pi^v
                M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], M[k])]
                U[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(U[i], U[k])]
        for j in range(k + 1, c):
            if M[k][j]:
                f = R.shift_down(M[k][j], v)
                for row in M:
                    row[j] = R.sub(row[j], R.mul(f, row[k]))
                for row in V:
                    row[j] = R.sub(row[j], R.mul(f, row[k]))
        exps.append(v)
        k += 1
    exps.extend([INF] * (min(r, c) - len(exps)))
    return exps, U, V


def smith_exponent_sum(R, A, guard=2):
    """Sum of Smith exponents; PrecisionExhausted on gray-zone exponents."""
    exps, _, _ = smith(R, A)
    total = 0
    for e in exps:
        if e is INF:
            raise PrecisionExhausted("zero Smith factor where a finite exponent was expected")
        if e > R.m - guard:
            raise PrecisionExhausted(f"Smith exponent {e} inside guard zone (m={R.m})")
        total += e
    return total


def kernel_free_generators(R, A, guard=2):
    """Free generators of the column kernel {x : A x = 0} at precision m.

    Smith exponents that vanish mod pi^m give free directions; finite
    exponents give torsion (their kernel shadows have valuation >= m - e,
    invisible at the residue level callers consume).  Exponents inside the
    gray zone (m-guard, m) are ambiguous and raise PrecisionExhausted.
    """
    r = len(A)
    c = len(A[0]) if r else 0
    if r == 0 or c == 0:
        return [[1 if i == j else 0 for i in range(c)] for j in range(c)]
    exps, U, V = smith(R, A)
    gens = []
    for idx in range(c):
        e = exps[idx] if idx < len(exps) else INF
        if e is INF:
            gens.append([V[i][idx] for i in range(c)])
        elif e > R.m - guard:
            raise PrecisionExhausted(f"Smith exponent {e} too close to precision {R.m}")
    return gens


def left_kernel_free_generators(R, A, guard=2):
    """Free generators of the row kernel {y : y A = 0} at precision m."""
    return kernel_free_generators(R, transpose(A), guard=guard)


# ---------------------------------------------------------------------------
# canonical row echelon form (row span = module; pivots pi^e)


def hnf(R, rows, guard=2):
    """Canonical echelon basis of the row span.

    Returns (H, pivots, exps): one row per pivot column, in pivot-column
    order; the pivot entry is exactly pi^e, entries of earlier rows in that
    column are reduced mod pi^e, entries of later rows are 0.  Pivot choice
    is minimal valuation (ties: earliest row), but the result is independent
    of the generating set, so it doubles as a canonical key for the span.
    """
    M = [list(r) for r in rows]
    ncols = len(M[0]) if M else 0
    done = []
    pivots = []
    exps = []
    for j in range(ncols):
        pos, v = _min_val_position(R, M, range(len(M)), [j]) if M else (None, None)
        if pos is None:
            continue
        if v > R.m - guard:
            raise PrecisionExhausted(f"echelon pivot exponent {v} inside guard zone (m={R.m})")
        row = M.pop(pos[0])
        uinv = R.unit_inv(R.shift_down(row[j], v))
        row = [R.mul(uinv, x) for x in row]
        pe = R.p ** v
        for other in M:  # clear the column below (exact: f*pi^v == entry)
            if other[j]:
                f = R.shift_down(other[j], v)
                for t in range(ncols):
                    if row[t]:
                        other[t] = R.sub(other[t], R.mul(f, row[t]))
        for prev in done:  # reduce the column above mod pi^v
            red = prev[j] % pe
            if red != prev[j]:
                q = R.shift_down(R.sub(prev[j], red), v)
                for t in range(ncols):
                    if row[t]:
                        prev[t] = R.sub(prev[t], R.mul(q, row[t]))
        done.append(row)
        pivots.append(j)
        exps.append(v)
    return done, pivots, exps


def hnf_key(R, rows):
    H, _, _ = hnf(R, rows)
    return tuple(tuple(r) for r in H)


def _boost_for(exps):
    finite = [e for e in exps if e is not INF]
    return (max(finite) if finite else 0) + 2


def _reduce_against(R, H, pivots, exps, v, want_coeffs):
    """Shared back-substitution; call on a boosted ring for exactness."""
    w = list(v)
    coeffs = [0] * len(H)
    for idx, (row, j, e) in enumerate(zip(H, pivots, exps)):
        if w[j] % R.modulus == 0:
            continue
        vv = R.val(w[j])
        if vv < e:
            return None, w
        f = R.shift_down(w[j], e)
        if want_coeffs:
            coeffs[idx] = f
        for t in range(len(w)):
            if row[t]:
                w[t] = R.sub(w[t], R.mul(f, row[t]))
    return coeffs, w


def row_member(R, H, pivots, exps, v):
    """Is v in the row span (mod pi^m)?  Exact for any v: each pivot step
    subtracts an exact multiple, so the residual stays faithful mod pi^m."""
    coeffs, w = _reduce_against(R, H, pivots, exps, v, want_coeffs=False)
    if coeffs is None:
        return False
    return all(x % R.modulus == 0 for x in w)


def solve_in_rows(R, H, pivots, exps, v):
    """Coefficients x with x . H = v (mod pi^m), or None.

    For the coefficients (not just membership) to be exact mod pi^m, the
    entries of v and H must be canonical representatives of the true objects
    (echelon bases are; arbitrary sums/differences may wrap).  The solve runs
    in a boosted ring so no digits are lost to division.
    """
    big = R.boosted(_boost_for(exps))
    coeffs, w = _reduce_against(big, H, pivots, exps, v, want_coeffs=True)
    if coeffs is None or any(x % R.modulus != 0 for x in w):
        return None
    return [c % R.modulus for c in coeffs]


def express_rows(R, outer_rows, inner_rows):
    """Coefficient matrix X with X . H(outer) = inner mod pi^m, or None if
    not contained.  Returns (X, H) where H is the echelon basis used.  The
    same canonical-representative contract as solve_in_rows applies to
    inner_rows when the coefficients themselves are consumed.
    """
    H, piv, exps = hnf(R, outer_rows)
    big = R.boosted(_boost_for(exps))
    X = []
    for v in inner_rows:
        coeffs, w = _reduce_against(big, H, piv, exps, v, want_coeffs=True)
        if coeffs is None or any(x % R.modulus != 0 for x in w):
            return None, H
        X.append([c % R.modulus for c in coeffs])
    return X, H


def row_module_contains(R, outer_rows, inner_rows):
    H, piv, exps = hnf(R, outer_rows)
    return all(row_member(R, H, piv, exps, v) for v in inner_rows)


def row_module_equal(R, rows_a, rows_b):
    return hnf_key(R, rows_a) == hnf_key(R, rows_b)


def colength_in(R, outer_rows, inner_rows, guard=2):
    """log_p of the index of the inner row module inside the outer one.

    Both must be full lattices of the same rank; the answer is the sum of
    Smith exponents of the change-of-basis matrix.  The inner span is
    canonicalized first so arbitrary (possibly wrapped) generators are fine.
    """
    Hin, _, _ = hnf(R, inner_rows)
    X, H = express_rows(R, outer_rows, Hin)
    if X is None:
        raise ValueError("inner rows are not contained in the outer row module")
    exps, _, _ = smith(R, X)
    total = 0
    nfin = 0
    for e in exps:
        if e is INF:
            continue
        if e > R.m - guard:
            raise PrecisionExhausted("colength exponent inside guard zone")
        total += e
        nfin += 1
    if nfin != len(H):
        raise PrecisionExhausted("rank drop while computing a colength")
    return total


def row_module_intersection(R, rows_a, rows_b, guard=2):
    """Generators of the intersection of two full row modules."""
    Ha, _, _ = hnf(R, rows_a)
    Hb, _, _ = hnf(R, rows_b)
    stacked = Ha + Hb
    gens = left_kernel_free_generators(R, stacked, guard=guard)
    out = []
    for y in gens:
        a = y[: len(Ha)]
        out.append(vec_matmul(R, a, Ha))
    return out


def index_exponent(R, rows_a, rows_b):
    """Generalized index exponent e with [A : B] = p^e (may be negative).

    Computed as colength(A cap B in A) - colength(A cap B in B); additive in
    chains and antisymmetric in its arguments.
    """
    inter = row_module_intersection(R, rows_a, rows_b)
    return colength_in(R, rows_a, inter) - colength_in(R, rows_b, inter)
