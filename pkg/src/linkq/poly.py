"""Sparse multivariate polynomials over GF(p) with graded structure.

Terms live in a dict keyed by exponent tuples with canonical-int coefficients.
The single global monomial order is graded reverse lexicographic (grevlex),
descending, so every basis enumeration in the toolkit is deterministic and
reports are reproducible bit for bit.

Also houses the text grammar (parse/to_text), the Frobenius shortcut for
powers, and the expansion of z^q over the quadric xy - z^2.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from .primefield import Fp, FrobeniusPower, PrimeField

DEFAULT_VARS = ("x", "y", "z")


def grevlex_key(exps: tuple[int, ...]):
    """Sort key realizing grevlex: higher degree first, ties broken so the
    monomial with the smaller last-differing exponent is larger."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


@lru_cache(maxsize=None)
def degree_basis(degree: int, nvars: int = 3) -> tuple[tuple[int, ...], ...]:
    """All monomials of the given total degree, grevlex-descending.

    Length is C(degree + nvars - 1, nvars - 1); empty for negative degree.
    """
    if degree < 0:
        return ()
    if nvars == 1:
        return ((degree,),)
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), degree, nvars)
    out.sort(key=grevlex_key, reverse=True)
    return tuple(out)


def degree_dim(degree: int, nvars: int = 3) -> int:
    """dim of the degree-i graded piece of the polynomial ring."""
    if degree < 0:
        return 0
    n = degree + nvars - 1
    k = nvars - 1
    num = 1
    for j in range(k):
        num = num * (n - j) // (j + 1)
    return num


class Poly:
    """Immutable-by-convention sparse polynomial over GF(p).

    ``terms`` maps exponent tuples to nonzero canonical ints.  All operations
    return new values; never mutate ``terms`` after construction.
    """

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: PrimeField, nvars: int, terms: Mapping[tuple[int, ...], int]):
        self.field = field
        self.nvars = nvars
        clean: dict[tuple[int, ...], int] = {}
        for exps, coeff in terms.items():
            c = int(coeff) % field.p
            if c:
                if len(exps) != nvars or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
                clean[tuple(exps)] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field: PrimeField, nvars: int = 3) -> "Poly":
        return cls(field, nvars, {})

    @classmethod
    def one(cls, field: PrimeField, nvars: int = 3) -> "Poly":
        return cls.constant(field, 1, nvars)

    @classmethod
    def constant(cls, field: PrimeField, value, nvars: int = 3) -> "Poly":
        return cls(field, nvars, {(0,) * nvars: int(value)})

    @classmethod
    def variable(cls, field: PrimeField, index: int, nvars: int = 3) -> "Poly":
        exps = [0] * nvars
        exps[index] = 1
        return cls(field, nvars, {tuple(exps): 1})

    @classmethod
    def monomial(cls, field: PrimeField, exps: tuple[int, ...], coeff=1) -> "Poly":
        return cls(field, len(exps), {tuple(exps): int(coeff)})

    # -- basic structure ---------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return (
                self.field.p == other.field.p
                and self.nvars == other.nvars
                and self.terms == other.terms
            )
        if isinstance(other, int):
            return self == Poly.constant(self.field, other, self.nvars)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.nvars, frozenset(self.terms.items())))

    def degree(self) -> int | None:
        """Total degree, or None for the zero polynomial (marker value,
        deliberately not an integer)."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no homogeneous degree")
        degs = {sum(e) for e in self.terms}
        if len(degs) != 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop()

    def coefficient(self, exps: tuple[int, ...]) -> int:
        return self.terms.get(tuple(exps), 0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in descending grevlex order."""
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def leading_term(self) -> tuple[tuple[int, ...], int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self.terms, key=grevlex_key)
        return exps, self.terms[exps]

    def _check_compatible(self, other: "Poly"):
        if self.field.p != other.field.p:
            raise ValueError(f"modulus mismatch: {self.field.p} vs {other.field.p}")
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = self._as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_compatible(other)
        p = self.field.p
        out = dict(self.terms)
        for exps, c in other.terms.items():
            v = (out.get(exps, 0) + c) % p
            if v:
                out[exps] = v
            else:
                out.pop(exps, None)
        return Poly(self.field, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return Poly(self.field, self.nvars, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _as_poly(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly.constant(self.field, other, self.nvars)
        if isinstance(other, Fp):
            return Poly.constant(self.field, int(other), self.nvars)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fp)):
            c = int(other) % self.field.p
            if c == 0:
                return Poly.zero(self.field, self.nvars)
            p = self.field.p
            return Poly(self.field, self.nvars, {e: v * c % p for e, v in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_compatible(other)
        p = self.field.p
        out: dict[tuple[int, ...], int] = {}
        # iterate the smaller operand on the outside
        a, b = (self.terms, other.terms)
        if len(a) > len(b):
            a, b = b, a
        for ea, ca in a.items():
            for eb, cb in b.items():
                exps = tuple(i + j for i, j in zip(ea, eb))
                v = (out.get(exps, 0) + ca * cb) % p
                if v:
                    out[exps] = v
                else:
                    out.pop(exps, None)
        return Poly(self.field, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        if k == 0:
            return Poly.one(self.field, self.nvars)
        base = self
        # Frobenius shortcut: x^(p^e * m) = frobenius^e(x)^m
        p = self.field.p
        while k % p == 0 and k > 0:
            base = base.frobenius()
            k //= p
        result = Poly.one(self.field, self.nvars)
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def frobenius(self, e: int = 1) -> "Poly":
        """p^e-th power, term by term: coefficients are fixed (Fermat),
        exponents scale by p^e."""
        scale = self.field.p**e
        return Poly(self.field, self.nvars, {tuple(a * scale for a in exps): c for exps, c in self.terms.items()})

    # -- graded structure ---------------------------------------------------

    def graded_part(self, degree: int) -> "Poly":
        return Poly(
            self.field,
            self.nvars,
            {e: c for e, c in self.terms.items() if sum(e) == degree},
        )

    def graded_component(self, degree: int) -> list[int]:
        """Coordinates of the degree-i part in grevlex basis order."""
        basis = degree_basis(degree, self.nvars)
        return [self.terms.get(m, 0) for m in basis]

    @classmethod
    def from_graded_component(cls, field: PrimeField, degree: int, coords: Iterable[int], nvars: int = 3) -> "Poly":
        basis = degree_basis(degree, nvars)
        coords = list(coords)
        if len(coords) != len(basis):
            raise ValueError(f"expected {len(basis)} coordinates, got {len(coords)}")
        return cls(field, nvars, dict(zip(basis, coords)))

    # -- substitution and evaluation -----------------------------------------

    def substitute(self, images: list["Poly"]) -> "Poly":
        """Replace variable i by images[i] (ring homomorphism on generators)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        nv = images[0].nvars
        out = Poly.zero(self.field, nv)
        for exps, c in self.terms.items():
            term = Poly.constant(self.field, c, nv)
            for i, a in enumerate(exps):
                if a:
                    term = term * images[i] ** a
            out = out + term
        return out

    def evaluate(self, point: Iterable[int]) -> int:
        """Value at a point of GF(p)^n, as a canonical int."""
        pt = [v % self.field.p for v in point]
        if len(pt) != self.nvars:
            raise ValueError("point length must match variable count")
        p = self.field.p
        total = 0
        for exps, c in self.terms.items():
            v = c
            for base, a in zip(pt, exps):
                if a:
                    v = v * pow(base, a, p) % p
            total = (total + v) % p
        return total

    # -- division by a single polynomial --------------------------------------

    def reduce_mod(self, divisor: "Poly") -> "Poly":
        """Remainder of division by a single polynomial w.r.t. grevlex.

        A single polynomial generates its principal ideal as a Groebner basis,
        so the remainder is zero exactly when self lies in (divisor).
        """
        self._check_compatible(divisor)
        if not divisor:
            raise ZeroDivisionError("division by the zero polynomial")
        lt_e, lt_c = divisor.leading_term()
        inv_lt = self.field.inv_int(lt_c)
        p = self.field.p
        work = dict(self.terms)
        remainder: dict[tuple[int, ...], int] = {}
        while work:
            exps = max(work, key=grevlex_key)
            c = work.pop(exps)
            quot = tuple(a - b for a, b in zip(exps, lt_e))
            if all(a >= 0 for a in quot):
                factor = c * inv_lt % p
                for de, dc in divisor.terms.items():
                    if de == lt_e:
                        continue
                    target = tuple(a + b for a, b in zip(quot, de))
                    v = (work.get(target, 0) - factor * dc) % p
                    if v:
                        work[target] = v
                    else:
                        work.pop(target, None)
            else:
                remainder[exps] = c
        return Poly(self.field, self.nvars, remainder)

    def divisible_by(self, divisor: "Poly") -> bool:
        return not self.reduce_mod(divisor)

    # -- text ------------------------------------------------------------------

    def to_text(self, names: tuple[str, ...] | None = None) -> str:
        if names is None:
            names = DEFAULT_VARS if self.nvars == 3 else tuple(f"x{i+1}" for i in range(self.nvars))
        if not self.terms:
            return "0"
        chunks = []
        for exps, c in self.sorted_terms():
            factors = []
            if c != 1 or not any(exps):
                factors.append(str(c))
            for name, a in zip(names, exps):
                if a == 1:
                    factors.append(name)
                elif a > 1:
                    factors.append(f"{name}^{a}")
            chunks.append("*".join(factors))
        return "+".join(chunks)

    def __repr__(self) -> str:
        return f"Poly({self.to_text()} mod {self.field.p})"


# -- parsing ---------------------------------------------------------------


class ParseError(ValueError):
    """Syntax or name error with the byte offset where it occurred."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class _Tokens:
    def __init__(self, text: str, varnames: tuple[str, ...]):
        self.text = text
        self.varnames = varnames
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._lex()
        self.index = 0

    def _lex(self):
        text = self.text
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch in "+-*^":
                self.tokens.append((ch, ch, i))
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(("uint", text[i:j], i))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("name", text[i:j], i))
                i = j
                continue
            raise ParseError(f"unexpected character {ch!r}", i)
        self.tokens.append(("end", "", len(text)))

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        tok = self.tokens[self.index]
        self.index += 1
        return tok


def parse(text: str, field: PrimeField, varnames: tuple[str, ...] = DEFAULT_VARS) -> Poly:
    """Parse the ASCII grammar:

        expr   := term (('+'|'-') term)*
        term   := factor ('*' factor)*
        factor := uint | var ('^' uint)?

    Whitespace is insignificant; juxtaposition without '*' is rejected;
    integer literals are reduced mod p.  Errors carry a byte offset.
    """
    if not text or text.isspace():
        raise ParseError("empty input", 0)
    toks = _Tokens(text, tuple(varnames))
    nvars = len(varnames)
    var_index = {name: i for i, name in enumerate(varnames)}

    def parse_factor() -> Poly:
        kind, value, offset = toks.advance()
        if kind == "uint":
            return Poly.constant(field, int(value), nvars)
        if kind == "name":
            if value not in var_index:
                raise ParseError(f"unknown variable {value!r}", offset)
            exponent = 1
            if toks.peek()[0] == "^":
                toks.advance()
                k2, v2, o2 = toks.advance()
                if k2 != "uint":
                    raise ParseError("expected integer exponent after '^'", o2)
                exponent = int(v2)
            exps = [0] * nvars
            exps[var_index[value]] = exponent
            return Poly(field, nvars, {tuple(exps): 1})
        raise ParseError("expected a coefficient or variable", offset)

    def parse_term() -> Poly:
        result = parse_factor()
        while toks.peek()[0] == "*":
            toks.advance()
            result = result * parse_factor()
        return result

    result = parse_term()
    while toks.peek()[0] in ("+", "-"):
        op = toks.advance()[0]
        term = parse_term()
        result = result + term if op == "+" else result - term
    kind, _, offset = toks.peek()
    if kind != "end":
        raise ParseError("unexpected trailing input", offset)
    return result


# -- the z^q expansion -------------------------------------------------------


def quadric(field: PrimeField) -> Poly:
    """The rank-3 quadric xy - z^2 in three variables."""
    return Poly(field, 3, {(1, 1, 0): 1, (0, 0, 2): -1})


def zq_expansion(field: PrimeField, fp: FrobeniusPower, D: int) -> tuple[Poly, Poly]:
    """Split z^q = z * ((xy)^(pi-D+1) * g + F^D * G) with F = xy - z^2.

    g carries the weights lambda_t for t < D, G the weights for D <= t <= pi.
    The identity is verified exactly before returning; requires p > 2D-1 and
    q >= 2D+1 so that pi >= D.
    """
    if D < 1:
        raise ValueError("D must be a positive integer")
    if field.p <= 2 * D - 1:
        raise ValueError(
            f"characteristic too small: need p > 2D-1 = {2 * D - 1}, got p = {field.p}"
        )
    if fp.pi < D:
        raise ValueError(f"need q >= 2D+1 = {2 * D + 1}, got q = {fp.q}")
    F = quadric(field)
    xy = Poly(field, 3, {(1, 1, 0): 1})
    lam = [int(field.lambda_t(t)) for t in range(fp.pi + 1)]

    g = Poly.zero(field, 3)
    F_pow = Poly.one(field, 3)
    for t in range(D):
        g = g + lam[t] * (xy ** (D - 1 - t)) * F_pow
        F_pow = F_pow * F

    G = Poly.zero(field, 3)
    F_pow = Poly.one(field, 3)
    for t in range(D, fp.pi + 1):
        G = G + lam[t] * (xy ** (fp.pi - t)) * F_pow
        F_pow = F_pow * F

    z = Poly.variable(field, 2, 3)
    f = F**D
    lhs = Poly(field, 3, {(0, 0, fp.q): 1})
    rhs = z * ((xy ** (fp.pi - D + 1)) * g + f * G)
    if lhs != rhs:
        raise AssertionError(f"z^q expansion identity failed for p={field.p}, q={fp.q}, D={D}")
    return g, G
