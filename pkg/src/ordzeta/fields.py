"""Small finite fields and dense linear algebra over them.

Elements are plain ints.  For a prime field F_p the int is the canonical
residue; for GF4 it is an index into explicit multiplication tables.  All
matrix routines take the field as first argument and work on lists of lists.
"""

from __future__ import annotations

from fractions import Fraction


class PrimeField:
    def __init__(self, p: int):
        self.p = p
        self.size = p
        self.zero = 0
        self.one = 1
        self._inv = [0] * p
        for a in range(1, p):
            self._inv[a] = pow(a, p - 2, p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.p)
        return self._inv[a % self.p]

    def elements(self):
        return range(self.p)

    def __repr__(self):
        return f"F_{self.p}"


class GF4:
    """The four-element field with basis {1, w}, w^2 = w + 1.

    Elements 0,1,2,3 encode 0, 1, w, w+1.
    """

    size = 4
    zero = 0
    one = 1
    # addition is xor of coordinate bits
    _MUL = [
        [0, 0, 0, 0],
        [0, 1, 2, 3],
        [0, 2, 3, 1],
        [0, 3, 1, 2],
    ]
    _INV = [None, 1, 3, 2]

    def add(self, a, b):
        return a ^ b

    def sub(self, a, b):
        return a ^ b

    def neg(self, a):
        return a

    def mul(self, a, b):
        return self._MUL[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF4")
        return self._INV[a]

    def elements(self):
        return range(4)

    def __repr__(self):
        return "F_4"


class RationalField:
    """Exact rationals presented through the same protocol."""

    size = None
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / Fraction(a)

    def __repr__(self):
        return "Q"


QQ = RationalField()

_prime_fields = {}


def prime_field(p: int) -> PrimeField:
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def field_of_order(q: int):
    if q == 4:
        return GF4()
    return prime_field(q)


# ---------------------------------------------------------------------------
# matrices: lists of lists of field elements


def mat_zero(F, r, c):
    return [[F.zero] * c for _ in range(r)]


def mat_identity(F, n):
    m = mat_zero(F, n, n)
    for i in range(n):
        m[i][i] = F.one
    return m


def mat_add(F, A, B):
    return [[F.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]

def mat_sub(F, A, B):
    return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scal(F, c, A):
    return [[F.mul(c, a) for a in row] for row in A]


def mat_mul(F, A, B):
    rb = len(B)
    cb = len(B[0]) if rb else 0
    out = []
    for row in A:
        acc = [F.zero] * cb
        for k, a in enumerate(row):
            if a == F.zero:
                continue
            bk = B[k]
            for j in range(cb):
                if bk[j] != F.zero:
                    acc[j] = F.add(acc[j], F.mul(a, bk[j]))
        out.append(acc)
    return out


def mat_transpose(A):
    return [list(col) for col in zip(*A)]


def mat_copy(A):
    return [list(r) for r in A]


def rref(F, A):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    R = mat_copy(A)
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        sel = None
        for i in range(r, rows):
            if R[i][c] != F.zero:
                sel = i
                break
        if sel is None:
            continue
        R[r], R[sel] = R[sel], R[r]
        inv = F.inv(R[r][c])
        R[r] = [F.mul(inv, x) for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != F.zero:
                f = R[i][c]
                R[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(F, A):
    if not A or not A[0]:
        return 0
    _, piv = rref(F, A)
    return len(piv)


def kernel_basis(F, A):
    """Basis of {x row vector : x . A^T = 0}? No: of {x : A x = 0} as rows."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if cols == 0:
        return []
    R, piv = rref(F, A)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for fc in free:
        v = [F.zero] * cols
        v[fc] = F.one
        for r, pc in enumerate(piv):
            v[pc] = F.neg(R[r][fc])
        basis.append(v)
    return basis


def solve(F, A, b):
    """One solution x of A x = b (column vectors as lists), or None."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [list(A[i]) + [b[i]] for i in range(rows)]
    R, piv = rref(F, aug)
    for row in R:
        if all(x == F.zero for x in row[:cols]) and row[cols] != F.zero:
            return None
    x = [F.zero] * cols
    for r, pc in enumerate(piv):
        if pc == cols:
            return None
        x[pc] = R[r][cols]
    return x


def mat_inverse(F, A):
    n = len(A)
    aug = [list(A[i]) + [F.one if j == i else F.zero for j in range(n)]
           for i in range(n)]
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        return None
    return [row[n:] for row in R]


def row_space_canonical(F, A):
    """Hashable canonical form of the row space (RREF with zero rows dropped)."""
    if not A:
        return ()
    R, piv = rref(F, A)
    return tuple(tuple(row) for row in R[:len(piv)])


def in_row_space(F, A_rref, pivots, v):
    """Membership of v in a row space given by (rref rows, pivot cols)."""
    w = list(v)
    for r, pc in enumerate(pivots):
        if w[pc] != F.zero:
            f = w[pc]
            w = [F.sub(x, F.mul(f, y)) for x, y in zip(w, A_rref[r])]
    return all(x == F.zero for x in w)


def charpoly(F, A):
    """Characteristic polynomial det(xI - A), coefficients low to high.

    Hessenberg reduction then the standard recurrence; works over any field.
    """
    n = len(A)
    if n == 0:
        return [F.one]
    H = mat_copy(A)
    for j in range(n - 2):
        # find nonzero entry below subdiagonal position (j+1, j)
        pivot = None
        for i in range(j + 1, n):
            if H[i][j] != F.zero:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != j + 1:
            H[pivot], H[j + 1] = H[j + 1], H[pivot]
            for i in range(n):
                H[i][pivot], H[i][j + 1] = H[i][j + 1], H[i][pivot]
        inv = F.inv(H[j + 1][j])
        for i in range(j + 2, n):
            if H[i][j] != F.zero:
                f = F.mul(H[i][j], inv)
                H[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(H[i], H[j + 1])]
                for r in range(n):
                    H[r][j + 1] = F.add(H[r][j + 1], F.mul(f, H[r][i]))
    # p_k = charpoly of leading k x k block of Hessenberg H
    polys = [[F.one]]
    for k in range(1, n + 1):
        # x * p_{k-1}
        term = [F.zero] + polys[k - 1]
        # - H[k-1][k-1] * p_{k-1}
        term = _poly_axpy(F, term, F.neg(H[k - 1][k - 1]), polys[k - 1])
        prod = F.one
        for i in range(k - 1, 0, -1):
            prod = F.mul(prod, H[i][i - 1])
            coeff = F.neg(F.mul(prod, H[i - 1][k - 1]))
            term = _poly_axpy(F, term, coeff, polys[i - 1])
        polys.append(term)
    return polys[n]


def _poly_axpy(F, a, c, b):
    out = list(a)
    for i, x in enumerate(b):
        if i < len(out):
            out[i] = F.add(out[i], F.mul(c, x))
        else:
            out.append(F.mul(c, x))
    return out
