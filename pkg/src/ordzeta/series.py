"""Truncated power series and rational functions in one variable T.

Coefficients are exact rationals (``fractions.Fraction``).  A ``TruncSeries``
carries values c_0..c_D for a fixed truncation order D; a ``RatFunc`` is a
reduced fraction of polynomials with invertible constant denominator term, so
it always admits a power-series expansion.

``fit_rational`` reconstructs a rational function from a truncated series by
solving the linear recurrence its denominator must satisfy.  The fit refuses
to answer unless the data over-determines the recurrence by at least a
two-coefficient margin and the reconstructed function reproduces every
available coefficient; otherwise it raises InterpolationUnstable.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InterpolationUnstable, NonIntegralScale
from .fields import QQ, solve as field_solve

# ---------------------------------------------------------------------------
# polynomials: tuples of Fractions, index = degree, trailing zeros stripped


def poly_trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def poly_deg(P):
    return len(P) - 1  # zero polynomial has degree -1


def poly_add(P, Q):
    n = max(len(P), len(Q))
    return poly_trim(
        [(P[i] if i < len(P) else 0) + (Q[i] if i < len(Q) else 0) for i in range(n)]
    )


def poly_neg(P):
    return tuple(-c for c in P)


def poly_sub(P, Q):
    return poly_add(P, poly_neg(Q))


def poly_mul(P, Q):
    if not P or not Q:
        return ()
    out = [Fraction(0)] * (len(P) + len(Q) - 1)
    for i, a in enumerate(P):
        if a == 0:
            continue
        for j, b in enumerate(Q):
            if b != 0:
                out[i + j] += a * b
    return poly_trim(out)


def poly_scale(c, P):
    if c == 0:
        return ()
    return poly_trim([c * x for x in P])


def poly_eval(P, x):
    acc = Fraction(0)
    for c in reversed(P):
        acc = acc * x + c
    return acc


def poly_divmod(P, Q):
    if not Q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(P)
    quo = [Fraction(0)] * max(len(P) - len(Q) + 1, 0)
    dq = len(Q) - 1
    lead = Q[-1]
    while len(rem) - 1 >= dq and any(c != 0 for c in rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < dq:
            break
        c = rem[-1] / lead
        k = len(rem) - 1 - dq
        quo[k] = c
        for i, q in enumerate(Q):
            rem[k + i] -= c * q
        rem.pop()
    return poly_trim(quo), poly_trim(rem)


def poly_gcd(P, Q):
    A, B = poly_trim(P), poly_trim(Q)
    while B:
        _, r = poly_divmod(A, B)
        A, B = B, r
    if A:
        A = poly_scale(1 / A[-1], A)  # monic
    return A


def poly_pow(P, n):
    out = (Fraction(1),)
    base = P
    while n:
        if n & 1:
            out = poly_mul(out, base)
        base = poly_mul(base, base)
        n >>= 1
    return out


def poly_from_ints(cs):
    return poly_trim([Fraction(c) for c in cs])


ONE_POLY = (Fraction(1),)
T_POLY = (Fraction(0), Fraction(1))


# ---------------------------------------------------------------------------


class TruncSeries:
    """Power-series jet c_0 + c_1 T + ... + c_D T^D with exact coefficients."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order=None):
        coeffs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        coeffs = coeffs[: order + 1]
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        self.coeffs = coeffs
        self.order = order

    @classmethod
    def zero(cls, order):
        return cls([], order)

    @classmethod
    def one(cls, order):
        return cls([1], order)

    @classmethod
    def monomial(cls, k, order, c=1):
        cs = [0] * (order + 1)
        if k <= order:
            cs[k] = c
        return cls(cs, order)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __eq__(self, other):
        return (
            isinstance(other, TruncSeries)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.order, tuple(self.coeffs)))

    def _check(self, other):
        if self.order != other.order:
            raise ValueError("truncation orders differ")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncSeries([other], self.order)
        self._check(other)
        return TruncSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncSeries([other], self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncSeries([a * other for a in self.coeffs], self.order)
        self._check(other)
        D = self.order
        out = [Fraction(0)] * (D + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(D + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return TruncSeries(out, D)

    __rmul__ = __mul__

    def invert(self):
        """Multiplicative inverse; requires c_0 invertible."""
        if self.coeffs[0] == 0:
            raise ZeroDivisionError("series with zero constant term")
        D = self.order
        inv = [Fraction(0)] * (D + 1)
        inv[0] = 1 / self.coeffs[0]
        for k in range(1, D + 1):
            acc = Fraction(0)
            for j in range(1, k + 1):
                acc += self.coeffs[j] * inv[k - j]
            inv[k] = -acc / self.coeffs[0]
        return TruncSeries(inv, D)

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncSeries(self.coeffs[: order + 1], order)

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __repr__(self):
        terms = [f"{c}*T^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return "TruncSeries(" + (" + ".join(terms) if terms else "0") + f"; O(T^{self.order + 1}))"


def series_shift_scale(series: TruncSeries, a, p: int) -> TruncSeries:
    """Coefficientwise rescale c_k -> p^(a*k) c_k for a rational exponent a.

    Raises NonIntegralScale if some nonzero coefficient would pick up a
    fractional power of p.
    """
    a = Fraction(a)
    out = []
    for k, c in enumerate(series.coeffs):
        if c == 0:
            out.append(Fraction(0))
            continue
        ek = a * k
        if ek.denominator != 1:
            raise NonIntegralScale(
                f"coefficient {k} would be scaled by p^({ek}), not an integral power"
            )
        out.append(c * Fraction(p) ** int(ek))
    return TruncSeries(out, series.order)


# ---------------------------------------------------------------------------


class RatFunc:
    """Reduced fraction of polynomials with den(0) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE_POLY):
        num = poly_trim(num)
        den = poly_trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if poly_deg(g) > 0:
            num, _ = poly_divmod(num, g)
            den, _ = poly_divmod(den, g)
        if den[0] == 0:
            raise ValueError("denominator has zero constant term; no series expansion")
        c = den[0]
        num = poly_scale(1 / c, num)
        den = poly_scale(1 / c, den)
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, c):
        return cls((Fraction(c),))

    @classmethod
    def T(cls):
        return cls(T_POLY)

    @classmethod
    def from_ints(cls, num, den=(1,)):
        return cls(poly_from_ints(num), poly_from_ints(den))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.constant(other)
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.constant(other)
        return RatFunc(
            poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den)),
            poly_mul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(poly_neg(self.num), self.den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.constant(other)
        return RatFunc(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatFunc":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return RatFunc((Fraction(1),)) / self ** (-n)
        return RatFunc(poly_pow(self.num, n), poly_pow(self.den, n))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.constant(other)
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(poly_mul(self.num, other.den), poly_mul(self.den, other.num))

    def __rtruediv__(self, other):
        return RatFunc.constant(other) / self

    def is_zero(self):
        return not self.num

    def expand(self, order) -> TruncSeries:
        num = TruncSeries(list(self.num), order)
        den = TruncSeries(list(self.den), order)
        return num * den.invert()

    def eval(self, x):
        return poly_eval(self.num, x) / poly_eval(self.den, x)

    def subst_reciprocal_scaled(self, scale) -> "RatFunc":
        """The rational function f(1/(scale*T)).

        Used for functional-equation checks with scale = residue cardinality.
        """
        s = Fraction(scale)
        dn, dd = poly_deg(self.num), poly_deg(self.den)
        d = max(dn, dd)
        # f(1/(sT)) = T^d N~(T) / (T^d D~(T)) with X~_k = x_{d-k} s^{k-d} ... build directly
        ntil = [Fraction(0)] * (d + 1)
        for k, c in enumerate(self.num):
            # c * (sT)^(-k) * T^d = c s^-k T^(d-k)
            ntil[d - k] = c * s ** (-k)
        dtil = [Fraction(0)] * (d + 1)
        for k, c in enumerate(self.den):
            dtil[d - k] = c * s ** (-k)
        dt = poly_trim(dtil)
        nt = poly_trim(ntil)
        if not dt:
            raise ZeroDivisionError("denominator vanished under substitution")
        # strip common powers of T so the denominator regains a constant term
        shift = 0
        while shift <= poly_deg(dt) and dt[shift] == 0:
            shift += 1
        if shift:
            if any(c != 0 for c in nt[:shift]):
                raise ValueError("substituted function has a pole at T=0")
            nt = poly_trim(nt[shift:])
            dt = poly_trim(dt[shift:])
        return RatFunc(nt, dt)

    def __repr__(self):
        def fmt(P):
            if not P:
                return "0"
            parts = []
            for k, c in enumerate(P):
                if c == 0:
                    continue
                if k == 0:
                    parts.append(f"{c}")
                elif k == 1:
                    parts.append(f"{c}*T")
                else:
                    parts.append(f"{c}*T^{k}")
            return " + ".join(parts)

        if self.den == ONE_POLY:
            return f"RatFunc({fmt(self.num)})"
        return f"RatFunc(({fmt(self.num)}) / ({fmt(self.den)}))"


# ---------------------------------------------------------------------------
# rational reconstruction from a truncated series


def fit_rational(series: TruncSeries, num_deg: int, den_deg: int, margin: int = 2) -> RatFunc:
    """Reconstruct N/D with deg N <= num_deg, deg D <= den_deg, D(0) = 1.

    The coefficients beyond num_deg must satisfy the order-den_deg linear
    recurrence given by D; the system must over-determine the recurrence by
    at least ``margin`` equations, and the result must reproduce the whole
    series, else InterpolationUnstable is raised.
    """
    D = series.order
    d, e = num_deg, den_deg
    if d < 0 or e < 0:
        raise ValueError("degrees must be nonnegative")
    n_eqs = D - d
    if n_eqs - e < margin:
        raise InterpolationUnstable(
            f"need at least {d + e + margin} series coefficients beyond degree 0 "
            f"(have order {D}) for a ({d},{e}) fit with margin {margin}"
        )
    c = series.coeffs
    if series.is_zero():
        return RatFunc(())
    # solve sum_{j=0}^{e} b_j c_{k-j} = 0 for k = d+1..D, with b_0 = 1
    A = [[c[k - j] if 0 <= k - j else Fraction(0) for j in range(1, e + 1)] for k in range(d + 1, D + 1)]
    b = [-c[k] for k in range(d + 1, D + 1)]
    if e == 0:
        if any(x != 0 for x in b):
            raise InterpolationUnstable("series does not terminate at the requested degree")
        sol = []
    else:
        sol = field_solve(QQ, A, b)
        if sol is None:
            raise InterpolationUnstable(
                f"no degree-({d},{e}) rational function matches the series"
            )
    den = poly_trim([Fraction(1)] + list(sol))
    num_full = poly_mul(den, poly_trim(c))
    num = poly_trim(num_full[: d + 1])
    cand = RatFunc(num, den)
    if cand.expand(D) != series:
        raise InterpolationUnstable("reconstructed function fails to reproduce the series")
    return cand


def fit_rational_auto(series: TruncSeries, margin: int = 2) -> RatFunc:
    """Smallest-total-degree rational reconstruction within the margin."""
    D = series.order
    if series.is_zero():
        return RatFunc(())
    last_err = None
    for s in range(0, D - margin + 1):
        for e in range(0, s + 1):
            d = s - e
            if (D - d) - e < margin:
                continue
            try:
                return fit_rational(series, d, e, margin=margin)
            except InterpolationUnstable as exc:
                last_err = exc
    raise InterpolationUnstable(
        "no rational function of any admissible degree matches the series"
        + (f" (last failure: {last_err})" if last_err else "")
    )
