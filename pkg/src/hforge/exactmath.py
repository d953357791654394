"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis modulo the cyclotomic polynomial
Phi_N as an integer numerator vector of length phi(N) over one positive
common denominator. That form is unique, so equality and hashing are
plain tuple comparisons.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "CycloNum",
    "GaloisAut",
    "cyclo_arith",
    "galois_apply",
    "gaussian_sum",
    "hilbert90_split",
    "to_complex",
    "is_prime",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    """Exact division of integer polynomials (low degree first, b monic)."""
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1]
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    if any(a[: len(b) - 1]):
        raise ArithmeticError("non-exact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for m in range(1, n):
        if n % m == 0:
            num = _poly_divexact(num, list(cyclotomic_poly(m)))
    return tuple(num)


class _Ctx:
    """Per-conductor tables: degree and reductions of zeta^e."""

    def __init__(self, N: int):
        self.N = N
        phi_poly = cyclotomic_poly(N)
        self.phi = len(phi_poly) - 1
        deg = self.phi
        # rows[e] = coefficients of zeta^e reduced mod Phi_N, e < max(N, 2*deg-1)
        top = max(N, 2 * deg - 1)
        rows: list[list[int]] = []
        cur = [0] * deg
        cur[0] = 1
        for _ in range(top):
            rows.append(list(cur))
            lead = cur[-1]
            cur = [0] + cur[:-1]
            if lead:
                for k in range(deg):
                    cur[k] -= lead * phi_poly[k]
        self.rows = rows
        self.sparse = [tuple((k, c) for k, c in enumerate(r) if c) for r in rows]
        self.units = [k for k in range(1, N + 1) if math.gcd(k, N) == 1]

    def reduce(self, poly: Sequence[int]) -> list[int]:
        """Reduce an integer polynomial of any length in zeta (exponents mod N)."""
        deg, N = self.phi, self.N
        out = [0] * deg
        sp = self.sparse
        for e, c in enumerate(poly):
            if c:
                if e < deg:
                    out[e] += c
                else:
                    for k, r in sp[e % N]:
                        out[k] += c * r
        return out


@lru_cache(maxsize=None)
def _ctx(N: int) -> _Ctx:
    if N < 1:
        raise ValueError("conductor must be positive")
    return _Ctx(N)


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = den
    for c in num:
        if c:
            g = math.gcd(g, c)
            if g == 1:
                break
    if not any(num):
        return tuple(0 for _ in num), 1
    if g != 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


class CycloNum:
    """Element of Q(zeta_N) in canonical reduced form."""

    __slots__ = ("N", "num", "den", "_hash")

    def __init__(self, N: int, coeffs: Iterable = (), *, _raw: tuple | None = None):
        self.N = N
        self._hash = None
        if _raw is not None:
            self.num, self.den = _raw
            return
        ctx = _ctx(N)
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            if c.denominator != 1:
                den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in fr]
        self.num, self.den = _normalize(ctx.reduce(ints), den)

    # construction helpers
    @classmethod
    def _make(cls, N: int, num: list[int], den: int) -> "CycloNum":
        return cls(N, _raw=_normalize(num, den))

    @classmethod
    def zero(cls, N: int) -> "CycloNum":
        return cls(N, _raw=((0,) * _ctx(N).phi, 1))

    @classmethod
    def one(cls, N: int) -> "CycloNum":
        return cls.rational(N, 1)

    @classmethod
    def rational(cls, N: int, q) -> "CycloNum":
        q = Fraction(q)
        num = [0] * _ctx(N).phi
        num[0] = q.numerator
        return cls(N, _raw=(tuple(num), q.denominator))

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CycloNum":
        return _zeta_cached(N, k % N)

    # views
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Length-N rational coefficient vector of zeta^0..zeta^{N-1}."""
        d = self.den
        out = [Fraction(c, d) for c in self.num]
        out.extend([Fraction(0)] * (self.N - len(out)))
        return tuple(out)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(self.num[0], self.den)

    # arithmetic
    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            if other.N != self.N:
                raise ValueError(f"conductor mismatch: {self.N} vs {other.N}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNum.rational(self.N, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d1, d2 = self.den, o.den
        if d1 == d2:
            return CycloNum._make(self.N, [a + b for a, b in zip(self.num, o.num)], d1)
        return CycloNum._make(self.N, [a * d2 + b * d1 for a, b in zip(self.num, o.num)], d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.N, _raw=(tuple(-a for a in self.num), self.den))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycloNum._make(self.N, [a * q.numerator for a in self.num], self.den * q.denominator)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ctx = _ctx(self.N)
        a, b = self.num, o.num
        prod = [0] * (2 * ctx.phi - 1)
        bnz = [(j, bj) for j, bj in enumerate(b) if bj]
        for i, ai in enumerate(a):
            if ai:
                for j, bj in bnz:
                    prod[i + j] += ai * bj
        return CycloNum._make(self.N, ctx.reduce(prod), self.den * o.den)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Absolute norm: product of all Galois conjugates."""
        ctx = _ctx(self.N)
        p = CycloNum.one(self.N)
        for k in ctx.units:
            p = p * self.galois(k)
        return p.as_rational()

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.is_rational():
            return CycloNum.rational(self.N, 1 / Fraction(self.num[0], self.den))
        ctx = _ctx(self.N)
        p = CycloNum.one(self.N)
        for k in ctx.units:
            if k % self.N != 1:
                p = p * self.galois(k)
        nrm = (self * p).as_rational()
        return p * (1 / nrm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycloNum.one(self.N)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def galois(self, k: int) -> "CycloNum":
        """Apply zeta -> zeta^k."""
        N = self.N
        if math.gcd(k, N) != 1:
            raise ValueError(f"exponent {k} not a unit mod {N}")
        k %= N
        if k == 1:
            return self
        ctx = _ctx(N)
        poly = [0] * N
        for j, c in enumerate(self.num):
            if c:
                poly[(j * k) % N] += c
        return CycloNum(N, _raw=_normalize(ctx.reduce(poly), self.den))

    def conj(self) -> "CycloNum":
        return self.galois(-1)

    def abs2(self) -> "CycloNum":
        return self * self.conj()

    def lift(self, M: int) -> "CycloNum":
        """Embed into Q(zeta_M) for M a multiple of N."""
        if M % self.N:
            raise ValueError("target conductor must be a multiple")
        s = M // self.N
        poly = [0] * M
        for j, c in enumerate(self.num):
            poly[j * s] += c
        return CycloNum(M, _raw=_normalize(_ctx(M).reduce(poly), self.den))

    # comparisons
    def __eq__(self, other):
        if isinstance(other, CycloNum):
            return self.N == other.N and self.den == other.den and self.num == other.num
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.N, self.num, self.den))
        return self._hash

    def __complex__(self):
        return to_complex(self)

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.num):
            if c:
                q = Fraction(c, self.den)
                terms.append(f"{q}" if j == 0 else f"{q}*z^{j}")
        return f"CycloNum(N={self.N}: {' + '.join(terms) or '0'})"


@lru_cache(maxsize=4096)
def _zeta_cached(N: int, k: int) -> CycloNum:
    ctx = _ctx(N)
    return CycloNum(N, _raw=_normalize(list(ctx.rows[k]), 1))


@dataclass(frozen=True)
class GaloisAut:
    """The automorphism zeta_N -> zeta_N^k of Q(zeta_N)."""

    N: int
    k: int

    def __post_init__(self):
        if math.gcd(self.k, self.N) != 1:
            raise ValueError(f"exponent {self.k} not a unit mod {self.N}")
        object.__setattr__(self, "k", self.k % self.N)

    def __call__(self, x: CycloNum) -> CycloNum:
        return galois_apply(self, x)

    def compose(self, other: "GaloisAut") -> "GaloisAut":
        if other.N != self.N:
            raise ValueError("conductor mismatch")
        return GaloisAut(self.N, self.k * other.k)

    __matmul__ = compose

    def inverse(self) -> "GaloisAut":
        return GaloisAut(self.N, pow(self.k, -1, self.N))

    def is_identity(self) -> bool:
        return self.k == 1 % self.N

    def order(self) -> int:
        m, x = 1, self.k
        while x != 1 % self.N:
            x = x * self.k % self.N
            m += 1
        return m


def cyclo_arith(a: CycloNum, b: CycloNum, op: str) -> CycloNum:
    if a.N != b.N:
        raise ValueError(f"conductor mismatch: {a.N} vs {b.N}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def galois_apply(g: GaloisAut, x: CycloNum) -> CycloNum:
    if g.N != x.N:
        raise ValueError(f"conductor mismatch: {g.N} vs {x.N}")
    return x.galois(g.k)


@lru_cache(maxsize=None)
def gaussian_sum(p: int) -> CycloNum:
    """sum_x omega_p^{x^2}, stored in conductor 4p."""
    if p == 2 or not is_prime(p):
        raise ValueError("gaussian_sum needs an odd prime")
    N = 4 * p
    poly = [0] * N
    for x in range(p):
        poly[4 * (x * x % p)] += 1
    return CycloNum(N, poly)


@lru_cache(maxsize=None)
def sqrt_prime(p: int) -> CycloNum:
    """Positive square root of the odd prime p in conductor 4p."""
    g = gaussian_sum(p)
    return g if p % 4 == 1 else g * CycloNum.zeta(4 * p, 3 * p)


def hilbert90_split(lam: CycloNum, g: GaloisAut, m: int) -> CycloNum:
    """Return mu != 0 with lam = mu / g(mu), given g of order m and norm 1."""
    if g.N != lam.N:
        raise ValueError("conductor mismatch")
    if g.order() != m:
        raise ValueError(f"automorphism order {g.order()} differs from m={m}")
    coeff = [CycloNum.one(lam.N)]
    for i in range(1, m):
        coeff.append(coeff[-1] * _gpow(g, i - 1)(lam))
    if coeff[-1] * _gpow(g, m - 1)(lam) != 1:
        raise ValueError("norm condition lam*g(lam)*...*g^{m-1}(lam) = 1 fails")
    ctx = _ctx(lam.N)
    for j in range(ctx.phi):
        x = CycloNum.zeta(lam.N, j)
        t = CycloNum.zero(lam.N)
        y = x
        for a in coeff:
            t = t + a * y
            y = g(y)
        if not t.is_zero():
            assert lam * g(t) == t
            return t
    raise ArithmeticError("no Hilbert-90 witness found")


def _gpow(g: GaloisAut, e: int) -> GaloisAut:
    return GaloisAut(g.N, pow(g.k, e, g.N))


def to_complex(x: CycloNum, digits: int = 15) -> complex:
    """Numerical embedding zeta_N -> exp(2 pi i / N)."""
    big = max((abs(c) for c in x.num), default=0).bit_length()
    if digits > 15 or big > 40:
        import mpmath

        with mpmath.workprec(int(digits * 3.33) + big + 20):
            z = mpmath.mpc(0)
            for j, c in enumerate(x.num):
                if c:
                    z += mpmath.mpf(c) * mpmath.expj(2 * mpmath.pi * j / x.N)
            return complex(z / x.den)
    tab = _roots(x.N)
    re = im = 0.0
    for j, c in enumerate(x.num):
        if c:
            re += c * tab[j].real
            im += c * tab[j].imag
    return complex(re / x.den, im / x.den)


@lru_cache(maxsize=None)
def _roots(N: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * math.pi * j / N) for j in range(N))
