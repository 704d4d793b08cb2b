"""Arithmetic over GF(p) for odd primes p, plus the combinatorial quantities
used throughout the toolkit: binomials mod p via Lucas digit products, the
central binomial weights lambda_t = 4^(-t) * C(2t, t), odd double-factorial
products, and the unit (-1)^D * ((2D-1)!!)^2.

Field elements are canonical integers in [0, p).  The scalar-facing API wraps
them in :class:`Fp`; performance-critical code (polynomial convolution, dense
row reduction) works with the raw canonical ints through the same
:class:`PrimeField` methods.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24, which
# comfortably covers the allowed modulus range p <= 2^31 - 1.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

MAX_MODULUS = 2**31 - 1


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n <= 2^31 - 1."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    if n in small:
        return True
    if any(n % s == 0 for s in small):
        return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: returns (g, s, t) with s*a + t*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


class OddProducts(NamedTuple):
    """The four quantities of the odd-product identities at a given t,
    all reduced mod p:

    * ``factorial_2t``          -- (2t)!
    * ``split_factorial``       -- 2^t * t! * prod_{h<=t} (2h-1)
    * ``scaled_binomial``       -- t! * C(2t, t)
    * ``odd_product_squared``   -- (prod_{h<=t} (2h-1))^2
    """

    factorial_2t: "Fp"
    split_factorial: "Fp"
    scaled_binomial: "Fp"
    odd_product_squared: "Fp"


class PrimeField:
    """GF(p) for an odd prime 3 <= p <= 2^31 - 1.

    Primality is checked at construction; every downstream kernel computation
    silently corrupts if p were composite.
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int):
            raise TypeError(f"modulus must be an int, got {type(p).__name__}")
        if p < 3 or p > MAX_MODULUS:
            raise ValueError(f"modulus must satisfy 3 <= p <= 2^31-1, got {p}")
        if p % 2 == 0:
            raise ValueError(f"modulus must be odd, got {p}")
        if not is_prime(p):
            raise ValueError(f"modulus must be prime, got {p}")
        self.p = p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __call__(self, value: int) -> "Fp":
        return Fp(value, self)

    # -- raw canonical-int arithmetic ------------------------------------

    def normalize(self, a: int) -> int:
        return a % self.p

    def inv_int(self, a: int) -> int:
        """Inverse of a mod p by extended Euclid; raises on zero."""
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        g, s, _ = _xgcd(a, self.p)
        assert g == 1
        return s % self.p

    # -- combinatorics ----------------------------------------------------

    def binom(self, a: int, b: int) -> "Fp":
        """C(a, b) mod p by the digit-wise Lucas product.

        Total on nonnegative a, b of arbitrary magnitude; C(a, b) = 0 for
        b > a falls out of the digit comparison.
        """
        if a < 0 or b < 0:
            raise ValueError("binomial arguments must be nonnegative")
        p = self.p
        result = 1
        while b > 0 or a > 0:
            ai, bi = a % p, b % p
            if bi > ai:
                return Fp(0, self)
            result = result * self._binom_digit(ai, bi) % p
            a //= p
            b //= p
        return Fp(result, self)

    def _binom_digit(self, a: int, b: int) -> int:
        # a, b < p so the plain product formula cannot hit a zero divisor.
        num = 1
        den = 1
        for h in range(1, b + 1):
            num = num * ((a - b + h) % self.p) % self.p
            den = den * h % self.p
        return num * self.inv_int(den) % self.p

    def lambda_t(self, t: int) -> "Fp":
        """The weight 4^(-t) * C(2t, t) mod p, well defined since p is odd."""
        if t < 0:
            raise ValueError("t must be nonnegative")
        inv4 = self.inv_int(4)
        return Fp(pow(inv4, t, self.p) * int(self.binom(2 * t, t)) % self.p, self)

    def odd_product(self, t: int) -> int:
        """prod_{h=1}^{t} (2h-1) mod p (the double factorial (2t-1)!!)."""
        out = 1
        for h in range(1, t + 1):
            out = out * ((2 * h - 1) % self.p) % self.p
        return out

    def odd_product_identities(self, t: int) -> OddProducts:
        """Compute the four odd-product quantities at t and assert the four
        identities linking them; self-test primitive, total for t >= 0."""
        if t < 0:
            raise ValueError("t must be nonnegative")
        p = self.p
        fact_2t = 1
        for h in range(1, 2 * t + 1):
            fact_2t = fact_2t * (h % p) % p
        fact_t = 1
        for h in range(1, t + 1):
            fact_t = fact_t * (h % p) % p
        odd = self.odd_product(t)
        pow2 = pow(2, t, p)
        binom_2t_t = int(self.binom(2 * t, t))
        lam = int(self.lambda_t(t))

        split = pow2 * fact_t % p * odd % p
        scaled = fact_t * binom_2t_t % p
        odd_sq = odd * odd % p

        assert fact_2t == split, f"(2t)! != 2^t t! (2t-1)!! at t={t}, p={p}"
        assert pow2 * odd % p == scaled, f"2^t (2t-1)!! != t! C(2t,t) at t={t}, p={p}"
        assert odd == pow2 * fact_t % p * lam % p, f"(2t-1)!! != 2^t t! lambda_t at t={t}, p={p}"
        assert odd_sq == fact_2t * lam % p, f"((2t-1)!!)^2 != (2t)! lambda_t at t={t}, p={p}"

        return OddProducts(Fp(fact_2t, self), Fp(split, self), Fp(scaled, self), Fp(odd_sq, self))

    def unit_u(self, D: int) -> "Fp":
        """(-1)^D * ((2D-1)!!)^2 mod p; a unit whenever p > 2D-1."""
        if D < 1:
            raise ValueError("D must be a positive integer")
        if self.p <= 2 * D - 1:
            raise ValueError(
                f"characteristic too small: need p > 2D-1 = {2 * D - 1}, got p = {self.p}"
            )
        odd = self.odd_product(D)
        value = odd * odd % self.p
        if D % 2 == 1:
            value = (-value) % self.p
        assert value != 0
        return Fp(value, self)


class Fp:
    """An element of GF(p) in canonical form (value in [0, p))."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.field = field
        self.value = int(value) % field.p

    def _coerce(self, other) -> "Fp":
        if isinstance(other, Fp):
            if other.field.p != self.field.p:
                raise ValueError(f"modulus mismatch: {self.field.p} vs {other.field.p}")
            return other
        if isinstance(other, int):
            return Fp(other, self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.value + o.value, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.value - o.value, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(o.value - self.value, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.value * o.value, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.value, self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.value * self.field.inv_int(o.value), self.field)

    def __pow__(self, k: int):
        if k < 0:
            return Fp(pow(self.field.inv_int(self.value), -k, self.field.p), self.field)
        return Fp(pow(self.value, k, self.field.p), self.field)

    def inv(self) -> "Fp":
        return Fp(self.field.inv_int(self.value), self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, Fp):
            return self.field.p == other.field.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"Fp({self.value} mod {self.field.p})"


@dataclass(frozen=True)
class FrobeniusPower:
    """q = p^e with e >= 1, together with pi = (q-1)/2."""

    field: PrimeField
    q: int
    e: int
    pi: int

    @classmethod
    def of(cls, field: PrimeField, q: int) -> "FrobeniusPower":
        if q < field.p:
            raise ValueError(f"q = {q} is not a positive power of p = {field.p}")
        e = 0
        m = q
        while m % field.p == 0:
            m //= field.p
            e += 1
        if m != 1 or e < 1:
            raise ValueError(f"q = {q} is not a positive power of p = {field.p}")
        assert q % 2 == 1
        return cls(field, q, e, (q - 1) // 2)

    @classmethod
    def from_exponent(cls, field: PrimeField, e: int) -> "FrobeniusPower":
        if e < 1:
            raise ValueError("exponent must be >= 1")
        q = field.p**e
        return cls(field, q, e, (q - 1) // 2)
