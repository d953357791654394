"""Finite fields F_{p^n} with table-driven arithmetic.

Elements are integers 0..q-1; the integer sum c_0 + c_1 p + ... encodes the
polynomial c_0 + c_1 x + ... in the adjoined root x. Ordering by that integer
is the "coefficient-lex" order used for every deterministic choice here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exactmath import _prime_factors, is_prime

__all__ = ["FField", "FFElem", "QuadExt", "field_create", "ff_trace", "legendre", "ff_sqrt", "quad_ext"]


def _digits(i: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        out.append(i % p)
        i //= p
    return out


def _polymulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    """Product of coefficient lists modulo the monic polynomial mod (degree n)."""
    n = len(mod) - 1
    prod = [0] * (2 * n - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for e in range(len(prod) - 1, n - 1, -1):
        c = prod[e] % p
        if c:
            for k in range(n + 1):
                prod[e - n + k] -= c * mod[k]
    return [c % p for c in prod[:n]]


def _poly_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    n = len(mod) - 1
    result = [1] + [0] * (n - 1)
    while e:
        if e & 1:
            result = _polymulmod(result, base, mod, p)
        base = _polymulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd_is_one(a: list[int], b: list[int], p: int) -> bool:
    def trim(x):
        x = [c % p for c in x]
        while x and x[-1] == 0:
            x.pop()
        return x

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            shift = len(a) - len(b)
            for k, bk in enumerate(b):
                a[shift + k] -= c * bk
            a = trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) == 1


def _is_irreducible(mod: list[int], p: int) -> bool:
    n = len(mod) - 1
    if n == 1:
        return True
    if n <= 3:
        for r in range(p):
            if sum(c * pow(r, k, p) for k, c in enumerate(mod)) % p == 0:
                return False
        return True
    # Rabin: x^{p^n} = x mod f and gcd(x^{p^{n/r}} - x, f) = 1 for primes r | n
    x = [0, 1] + [0] * (n - 2)

    def frob_power(k):
        y = x
        for _ in range(k):
            y = _poly_powmod(y, p, mod, p)
        return y

    if frob_power(n) != x:
        return False
    for r in _prime_factors(n):
        y = frob_power(n // r)
        diff = [(a - b) % p for a, b in zip(y, x)]
        if not _poly_gcd_is_one(list(mod), diff, p):
            return False
    return True


class FField:
    """The field F_{p^n} with a fixed modulus and primitive element."""

    def __init__(self, p: int, n: int, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if n < 1:
            raise ValueError("exponent must be >= 1")
        self.p, self.n = p, n
        self.q = q = p**n
        if modulus is None:
            modulus = self._least_irreducible()
        self.modulus = tuple(modulus)
        mod = list(modulus)
        dig = np.array([_digits(i, p, n) for i in range(q)], dtype=np.int64).reshape(q, n)
        self._digits = dig
        weights = p ** np.arange(n, dtype=np.int64)
        self.add_table = (((dig[:, None, :] + dig[None, :, :]) % p) @ weights).astype(np.int64)
        self.neg_table = (((-dig) % p) @ weights).astype(np.int64)
        self.theta = self._least_primitive(mod)
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = [1] + [0] * (n - 1)
        tdig = _digits(self.theta, p, n)
        for k in range(q - 1):
            idx = sum(c * p**j for j, c in enumerate(cur))
            exp[k] = idx
            log[idx] = k
            cur = _polymulmod(cur, tdig, mod, p) if n > 1 else [cur[0] * tdig[0] % p]
        if (log[1:] < 0).any():
            raise AssertionError("primitive element does not generate")
        self.exp_table, self.log_table = exp, log
        la = log[:, None] + log[None, :]
        mul = exp[la % (q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        self.mul_table = mul
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (q - 1)]
        self.inv_table = inv
        # Frobenius x -> x^p as an index map
        self.frob_table = np.array([self._pow_idx(i, p) for i in range(q)], dtype=np.int64)
        tr = np.zeros(q, dtype=np.int64)
        y = np.arange(q)
        for _ in range(n):
            tr = self.add_table[tr, y]
            y = self.frob_table[y]
        self.trace_table = tr
        self.legendre_table = np.array([self.legendre_idx(i) for i in range(q)], dtype=np.int64)

    def _least_irreducible(self) -> tuple[int, ...]:
        p, n = self.p, self.n
        for idx in range(p**n):
            low = _digits(idx, p, n)
            mod = low + [1]
            if n == 1 or (low[0] != 0 and _is_irreducible(mod, p)):
                return tuple(mod)
        raise AssertionError("no irreducible polynomial found")

    def _least_primitive(self, mod: list[int]) -> int:
        p, n, q = self.p, self.n, self.q
        if q == 2:
            return 1
        factors = _prime_factors(q - 1)
        one = [1] + [0] * (n - 1)
        for idx in range(2, q):
            a = _digits(idx, p, n)
            if all(_poly_powmod(a, (q - 1) // r, mod, p) != one for r in factors):
                return idx
        raise AssertionError("no primitive element found")

    def _pow_idx(self, i: int, e: int) -> int:
        if i == 0:
            return 0 if e else 1
        return int(self.exp_table[(int(self.log_table[i]) * e) % (self.q - 1)])

    # element-level helpers on indices
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        return self._pow_idx(a, e)

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime subfield."""
        return k % self.p

    def trace_idx(self, a: int) -> int:
        """Field trace; the result lies in the prime subfield, so index = value."""
        return int(self.trace_table[a])

    def legendre_idx(self, a: int) -> int:
        if a == 0:
            return 0
        if self.p == 2:
            return 1
        return 1 if self.log_table[a] % 2 == 0 else -1

    def is_prime_subfield(self, a: int) -> bool:
        return 0 <= a < self.p

    def sqrt_idx(self, a: int) -> int | None:
        for r in range(self.q):
            if self.mul_table[r, r] == a:
                return r
        return None

    def order_idx(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        return (self.q - 1) // math.gcd(int(self.log_table[a]), self.q - 1)

    def elem(self, i: int) -> "FFElem":
        """Element with integer index i (see module docstring)."""
        return FFElem(self, int(i) % self.q)

    def elements(self) -> list["FFElem"]:
        return [FFElem(self, i) for i in range(self.q)]

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self._digits[a])

    @property
    def d(self) -> int:
        return self.q

    def __repr__(self):
        return f"FField(p={self.p}, n={self.n}, modulus={self.modulus}, theta={self.theta})"

    def __eq__(self, other):
        return isinstance(other, FField) and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))


@dataclass(frozen=True)
class FFElem:
    """An element of an FField, wrapping its integer index."""

    field: FField = field(repr=False, compare=False)
    idx: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.idx)

    def _o(self, other) -> int:
        if isinstance(other, FFElem):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other.idx
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._o(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.add(self.idx, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._o(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.sub(self.idx, o))

    def __rsub__(self, other):
        o = self._o(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.sub(o, self.idx))

    def __neg__(self):
        return FFElem(self.field, self.field.neg(self.idx))

    def __mul__(self, other):
        o = self._o(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.mul(self.idx, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._o(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.div(self.idx, o))

    def __rtruediv__(self, other):
        o = self._o(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.div(o, self.idx))

    def __pow__(self, e: int):
        return FFElem(self.field, self.field.pow(self.idx, e))

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.idx == other.idx and self.field == other.field
        if isinstance(other, int):
            return self.idx == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash(self.idx)

    def __lt__(self, other):
        return self.idx < other.idx

    def __bool__(self):
        return self.idx != 0

    def __int__(self):
        return self.idx

    def order(self) -> int:
        return self.field.order_idx(self.idx)


@lru_cache(maxsize=None)
def field_create(p: int, n: int = 1) -> FField:
    return FField(p, n)


def ff_trace(x: FFElem) -> int:
    return x.field.trace_idx(x.idx)


def legendre(x: FFElem) -> int:
    return x.field.legendre_idx(x.idx)


def ff_sqrt(x: FFElem) -> FFElem | None:
    r = x.field.sqrt_idx(x.idx)
    return None if r is None else FFElem(x.field, r)


class QuadExt:
    """F_{d^2} over F_d, with thetabar, eta and the base-field embedding."""

    def __init__(self, base: FField):
        if base.p == 2:
            raise ValueError("quadratic extension needs odd characteristic")
        self.base = base
        d, p = base.q, base.p
        self.ext = ext = field_create(p, 2 * base.n)
        self.thetabar = ext.theta
        self.eta = ext.pow(self.thetabar, (d - 1) // (p - 1))
        # embed the base field by sending its adjoined root to the least root in ext
        if base.n == 1:
            emb = np.arange(p, dtype=np.int64)
        else:
            emb = None
            for r in range(ext.q):
                val = 0
                for j, c in enumerate(base.modulus):
                    val = ext.add(val, ext.mul(c % p, ext.pow(r, j)))
                if val == 0:
                    emb = self._embedding(r)
                    break
            if emb is None:
                raise AssertionError("failed to embed base field")
        self.embed_table = emb
        self.unembed = {int(v): i for i, v in enumerate(emb)}
        order_eta = ext.order_idx(self.eta)
        if order_eta != (p - 1) * (d + 1):
            raise AssertionError("eta has wrong order")
        if base.order_idx(self.unembed[ext.pow(self.thetabar, d + 1)]) != d - 1:
            raise AssertionError("thetabar^(d+1) not primitive in base")
        # i_M lives in the extension: an element of order 4 built from eta
        self.i_M = ext.pow(self.eta, (p - 1) * (d + 1) // 4) if d % 4 == 3 else None

    def _embedding(self, r: int) -> np.ndarray:
        base, ext = self.base, self.ext
        out = np.zeros(base.q, dtype=np.int64)
        powers = [ext.pow(r, j) for j in range(base.n)]
        for i in range(base.q):
            acc = 0
            for j, c in enumerate(base.coeffs(i)):
                if c:
                    acc = ext.add(acc, ext.mul(c, powers[j]))
            out[i] = acc
        return out

    def embed(self, a: int) -> int:
        return int(self.embed_table[a])

    def in_base(self, a: int) -> int | None:
        return self.unembed.get(int(a))

    def eta_power(self, k: int) -> int:
        return self.ext.pow(self.eta, k)

    def norm_base(self, a: int) -> int:
        """N(a) = a^{d+1}, as a base-field index."""
        return self.unembed[self.ext.pow(a, self.base.q + 1)]

    def trace_base(self, a: int) -> int:
        """a + a^d, as a base-field index."""
        return self.unembed[self.ext.add(a, self.ext.pow(a, self.base.q))]


@lru_cache(maxsize=None)
def quad_ext(F: FField) -> QuadExt:
    return QuadExt(F)
