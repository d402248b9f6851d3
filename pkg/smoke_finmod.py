import itertools
import sys

sys.path.insert(0, "src")

from ordzeta import fields as fm
from ordzeta import finmod as fd
from ordzeta.fields import prime_field

INF = fd.INFINITY


def algebra_from_structure(p, table, one, name=""):
    F = prime_field(p)
    return fd.FinAlgebra(F, table, one, name=name)


def poly_quot_algebra(p, mod_coeffs, name):
    """F_p[x]/(f) with basis 1, x, ..., x^{d-1}; f monic given low->high."""
    d = len(mod_coeffs) - 1
    F = prime_field(p)

    def red(vec):
        vec = list(vec)
        while len(vec) > d:
            c = vec.pop()
            if c:
                for i in range(len(mod_coeffs) - 1):
                    vec[len(vec) - d + i] = (vec[len(vec) - d + i] - c * mod_coeffs[i]) % p
        vec += [0] * (d - len(vec))
        return [c % p for c in vec]

    table = []
    for i in range(d):
        row = []
        for j in range(d):
            v = [0] * (i + j) + [1]
            row.append(red(v))
        table.append(row)
    one = red([1])
    return fd.FinAlgebra(F, table, one, name=name)


def matrix_algebra(p, n, name):
    """M_n(F_p) with basis e_{rc} ordered row-major; right regular table."""
    F = prime_field(p)
    d = n * n

    def idx(r, c):
        return r * n + c

    table = []
    for a in range(d):
        ra, ca = divmod(a, n)
        row = []
        for b in range(d):
            rb, cb = divmod(b, n)
            vec = [0] * d
            if ca == rb:
                vec[idx(ra, cb)] = 1
            row.append(vec)
        table.append(row)
    one = [0] * d
    for r in range(n):
        one[idx(r, r)] = 1
    return fd.FinAlgebra(F, table, one, name=name)


def upper_triangular_2(p):
    """Basis e11, e12, e22."""
    F = prime_field(p)
    units = {(0, 0): 0, (0, 1): 1, (1, 1): 2}

    def mult(a, b):
        (ra, ca), (rb, cb) = a, b
        if ca != rb:
            return None
        return (ra, cb)

    keys = [(0, 0), (0, 1), (1, 1)]
    table = []
    for a in keys:
        row = []
        for b in keys:
            vec = [0, 0, 0]
            m = mult(a, b)
            if m is not None:
                vec[units[m]] = 1
            row.append(vec)
        table.append(row)
    return fd.FinAlgebra(F, table, [1, 0, 1], name=f"T2(F{p})")


def local_square_zero(p):
    """F_p[x,y]/(x,y)^2: basis 1, x, y."""
    F = prime_field(p)
    z = [0, 0, 0]
    e0 = [1, 0, 0]
    e1 = [0, 1, 0]
    e2 = [0, 0, 1]
    table = [
        [e0, e1, e2],
        [e1, z, z],
        [e2, z, z],
    ]
    return fd.FinAlgebra(F, table, e0, name=f"F{p}[x,y]/(x,y)^2")


def brute_radical(A):
    """Largest ideal of quasi-regular elements: {x : 1 - xy unit for all y}.
    Valid oracle for the Jacobson radical of a finite algebra."""
    F = A.F
    p = F.p
    n = A.dim
    all_elems = [list(v) for v in itertools.product(range(p), repeat=n)]
    rad = []
    for x in all_elems:
        ok = True
        for y in all_elems:
            u = [F.sub(a, b) for a, b in zip(A.one, A.product(x, y))]
            if fm.rank(F, A.right_mult_matrix(u)) != n:
                ok = False
                break
        if ok:
            rad.append(x)
    return fm.row_space_canonical(F, rad) if rad else ()


def check(label, got, want):
    flag = "OK " if got == want else "FAIL"
    print(f"{flag} {label}: got {got!r} want {want!r}")
    if got != want:
        raise SystemExit(1)


# --- radical against brute force --------------------------------------
cases = [
    poly_quot_algebra(2, [0, 0, 0, 1], "F2[x]/x^3"),
    poly_quot_algebra(3, [2, 0, 1], "F3[x]/(x^2-1)"),
    poly_quot_algebra(2, [1, 1, 1], "F4=F2[x]/(x^2+x+1)"),
    poly_quot_algebra(2, [1, 0, 1], "F2[x]/(x^2+1)"),
    upper_triangular_2(2),
    upper_triangular_2(3),
    local_square_zero(2),
    matrix_algebra(2, 2, "M2(F2)"),
]
for A in cases:
    got = tuple(tuple(r) for r in A.radical_rows())
    want = tuple(tuple(r) for r in brute_radical(A))
    check(f"radical {A.name}", got, want)

# --- primitive idempotents / simples / pims ---------------------------
T2 = upper_triangular_2(2)
pid = T2.primitive_idempotent_decomposition()
check("T2 pid count", len(pid), 2)
check("T2 pid dims", sorted(len(rows) for _, rows in pid), [1, 2])
check("T2 #simples", len(T2.simples()), 2)
check("T2 pim dims", sorted(P.dim for P in T2.pims()), [1, 2])

M2 = matrix_algebra(2, 2, "M2(F2)")
pid2 = M2.primitive_idempotent_decomposition()
check("M2 pid count", len(pid2), 2)
check("M2 pid dims", [len(rows) for _, rows in pid2], [2, 2])
check("M2 #simples", len(M2.simples()), 1)

A3 = poly_quot_algebra(2, [0, 0, 0, 1], "F2[x]/x^3")
check("F2[x]/x^3 #simples", len(A3.simples()), 1)
check("F2[x]/x^3 pim dims", [P.dim for P in A3.pims()], [3])

# --- decompose ---------------------------------------------------------
regM2 = M2.regular_module()
parts = fd.decompose(regM2)
check("M2 regular decompose dims", sorted(P.dim for P in parts), [2, 2])
check("M2 parts isomorphic", fd.certified_isomorphic(parts[0], parts[1]), True)

regT2 = T2.regular_module()
partsT = fd.decompose(regT2)
check("T2 regular decompose dims", sorted(P.dim for P in partsT), [1, 2])

S1, S2 = T2.simples()
check("T2 S1 vs S2 iso", fd.certified_isomorphic(S1, S2), False)
ds = fd.direct_sum_module([S1, S2, S1])
partsD = fd.decompose(ds)
check("sum decompose dims", sorted(P.dim for P in partsD), [1, 1, 1])
count_S1 = sum(1 for P in partsD if fd.certified_isomorphic(P, S1))
check("sum S1 multiplicity", count_S1, 2)

# F4 regular module is indecomposable over F2 with End a field
F4 = poly_quot_algebra(2, [1, 1, 1], "F4")
partsF4 = fd.decompose(F4.regular_module())
check("F4 regular indecomposable", [P.dim for P in partsF4], [2])

# --- projective covers, pd, gl dim ------------------------------------
P1 = next(P for P in T2.pims() if P.dim == 2)
P2 = next(P for P in T2.pims() if P.dim == 1)
topP1 = fd.top_module(P1)
cover, cmat, blocks = fd.projective_cover(topP1)
check("cover of top(P1) dim", cover.dim, 2)
K, _, _ = fd.syzygy(topP1)
check("syzygy of S1 dim", K.dim, 1)
check("S1 pd", fd.projective_dimension(topP1), 1)
check("S2 pd", fd.projective_dimension(fd.top_module(P2)), 0)
check("T2 gl.dim", fd.global_dimension(T2), 1)
check("T2 is hereditary: P1 projective", fd.is_projective_module(P1), True)

S = A3.simples()[0]
check("F2[x]/x^3 pd(S)", fd.projective_dimension(S), INF)
check("F2[x]/x^3 gl.dim", fd.global_dimension(A3), INF)
check("M2 gl.dim", fd.global_dimension(M2), 0)

# --- dominant dimension ------------------------------------------------
check("F2[x]/x^3 dom.dim (self-injective)", fd.dominant_dimension(A3), INF)
check("M2 dom.dim", fd.dominant_dimension(M2), INF)
check("T2 dom.dim", fd.dominant_dimension(T2), 1)
check("T2 dom.dim >= 1", fd.dominant_dimension_at_least(T2, 1), True)
check("T2 dom.dim >= 2 is False", fd.dominant_dimension_at_least(T2, 2), False)

# --- quotient / op -----------------------------------------------------
B, proj, lift = A3.quotient(A3.radical_rows())
check("A3/J dim", B.dim, 1)
check("A3/J semisimple", B.is_semisimple(), True)
op = T2.op()
check("op of op is original", op.op() is T2, True)
check("T2 op gl.dim", fd.global_dimension(op), 1)

# --- series invariants -------------------------------------------------
check("A3 radical series of regular", fd.radical_series_dims(A3.regular_module()),
      (3, 2, 1, 0))
check("A3 socle series dims", fd.socle_series_dims(A3.regular_module()),
      (1, 2, 3))

print("finmod smoke OK")
