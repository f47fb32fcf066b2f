"""Finite fields GF(p^k) and the cubic tower GF(q) < GF(q^3).

Elements are encoded as integers: the residue polynomial with coefficients
c_0..c_{k-1} (low degree first) is the integer sum(c_i * p**i).  Zero is 0
and one is 1 in every field, and the integer order is the order used for
deterministic enumeration everywhere else in the package.

Heavy code works on the raw integers through the methods of :class:`GF`;
:class:`FieldElement` is the thin value type for interactive and API use.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np


class FieldError(ValueError):
    """Invalid field parameters or an illegal field operation."""


class NotPrimePowerError(FieldError):
    pass


class FieldTooSmallError(FieldError):
    pass


MIN_Q = 7


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q == p**k, or raise NotPrimePowerError."""
    if q < 2:
        raise NotPrimePowerError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise NotPrimePowerError(f"{q} is not a prime power")
    return p, k


# -- polynomials over GF(p), coefficient lists low degree first --------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and a:
        f = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def monic_polys(p: int, degree: int) -> Iterator[list[int]]:
    """All monic polynomials of the given degree, in integer-encoding order."""
    for n in range(p**degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(n % p)
            n //= p
        yield coeffs + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg//2."""
    k = len(poly) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for f in monic_polys(p, d):
            if not poly_mod(poly, f, p):
                return False
    return True


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """The monic irreducible of degree k over GF(p) with the smallest integer code.

    The integer code sum(c_i p^i) orders polynomials by their highest
    differing coefficient, so over GF(2) degree 3 gives x^3 + x + 1.
    """
    for f in monic_polys(p, k):
        if is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if not is_irreducible(self.modulus, self.p):
            raise FieldError(f"modulus {self.modulus} is reducible over GF({self.p})")

    @property
    def order(self) -> int:
        return self.p**self.k

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        return cls(int(data["p"]), int(data["k"]), tuple(int(c) for c in data["modulus"]))


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


_TABLE_LIMIT = 1024


class GF:
    """The finite field described by a :class:`FieldSpec`.

    Use :func:`field` to obtain instances; they are cached per spec so that
    identity comparison between fields is meaningful.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.k = spec.k
        self.order = n = spec.order
        p, k = self.p, self.k

        self._digits = [self._to_digits(a) for a in range(n)]
        self.primitive = self._find_primitive()
        exp = [0] * (2 * n)
        log = [0] * n
        x = 1
        for i in range(n - 1):
            exp[i] = x
            log[x] = i
            x = self._mulmod(x, self.primitive)
        for i in range(n - 1, 2 * n):
            exp[i] = exp[i - (n - 1)]
        self._exp, self._log = exp, log

        if k == 1:
            self._neg = [(-a) % p for a in range(n)]
        else:
            self._neg = [self._from_digits([(-c) % p for c in self._digits[a]]) for a in range(n)]
        self._add_table: list[int] | None = None
        self._zech: list[int] | None = None
        if k > 1 and p != 2:
            if n <= _TABLE_LIMIT:
                self._add_table = [
                    self._from_digits([(x + y) % p for x, y in zip(self._digits[a], self._digits[b])])
                    for a in range(n)
                    for b in range(n)
                ]
            else:
                # Zech logarithms: 1 + g^i == g^zech[i], or -1 when it vanishes
                zech = [-1] * (n - 1)
                for i in range(n - 1):
                    d = list(self._digits[exp[i]])
                    d[0] = (d[0] + 1) % p
                    s = self._from_digits(d)
                    zech[i] = log[s] if s else -1
                self._zech = zech
        self._np_tables: dict[str, np.ndarray] | None = None

    # -- construction helpers -------------------------------------------------

    def _to_digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_digits(self, digits: Sequence[int]) -> int:
        a = 0
        for c in reversed(digits):
            a = a * self.p + c
        return a

    def _mulmod(self, a: int, b: int) -> int:
        prod = poly_mul(self._digits[a], self._digits[b], self.p)
        red = poly_mod(prod, self.spec.modulus, self.p)
        return self._from_digits(red + [0] * (self.k - len(red)))

    def _find_primitive(self) -> int:
        n = self.order
        if n == 2:
            return 1
        factors = _prime_factors(n - 1)
        for g in range(2, n):
            if all(self._powmod(g, (n - 1) // r) != 1 for r in factors):
                return g
        raise FieldError("no primitive element")  # pragma: no cover

    def _powmod(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mulmod(result, a)
            a = self._mulmod(a, a)
            e >>= 1
        return result

    # -- raw integer arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a * self.order + b]
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.order - 1)]
        return 0 if z < 0 else self._exp[la + z]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        s = 0
        for a, b in zip(u, v):
            if a and b:
                s = self.add(s, self.mul(a, b))
        return s

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(p) -> this field."""
        return n % self.p

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(self._digits[a])

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.k:
            coeffs = poly_mod(coeffs, self.spec.modulus, self.p)
        return self._from_digits([c % self.p for c in coeffs] + [0] * (self.k - len(coeffs)))

    def elements(self) -> range:
        return range(self.order)

    def __call__(self, value: int) -> "FieldElement":
        if not 0 <= value < self.order:
            raise FieldError(f"{value} is not an element code of GF({self.order})")
        return FieldElement(self, value)

    def __repr__(self) -> str:
        return f"GF({self.order})"

    # -- numpy tables for batch kernels ------------------------------------------

    def np_tables(self) -> dict[str, np.ndarray]:
        """add/sub/mul (flattened n*n) and neg/inv lookup arrays."""
        if self._np_tables is None:
            n = self.order
            if n > 4096:
                raise FieldError("numpy tables are only built for small fields")
            a = np.repeat(np.arange(n), n)
            b = np.tile(np.arange(n), n)
            add = np.array([self.add(x, y) for x, y in zip(a.tolist(), b.tolist())], dtype=np.int64)
            mul = np.array([self.mul(x, y) for x, y in zip(a.tolist(), b.tolist())], dtype=np.int64)
            neg = np.array(self._neg, dtype=np.int64)
            sub = add.reshape(n, n)[:, neg].reshape(-1)
            inv = np.array([0] + [self.inv(x) for x in range(1, n)], dtype=np.int64)
            self._np_tables = {"add": add, "sub": sub, "mul": mul, "neg": neg, "inv": inv}
        return self._np_tables

    def np_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.np_tables()["add"][a * self.order + b]

    def np_sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self.np_tables()["sub"][a * self.order + b]

    def np_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a * b) % self.p
        return self.np_tables()["mul"][a * self.order + b]

    def np_inv(self, a: np.ndarray) -> np.ndarray:
        return self.np_tables()["inv"][a]

    def np_dot(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Batched dot product along the last axis (broadcasting)."""
        if self.k == 1:
            return (a * b).sum(axis=-1) % self.p
        prods = self.np_mul(*np.broadcast_arrays(a, b))
        acc = prods[..., 0]
        for i in range(1, prods.shape[-1]):
            acc = self.np_add(acc, prods[..., i])
        return acc


@functools.lru_cache(maxsize=None)
def _field_from_spec(spec: FieldSpec) -> GF:
    return GF(spec)


def field(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> GF:
    """GF(p^k), by default with the least irreducible modulus."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    mod = tuple(modulus) if modulus is not None else least_irreducible(p, k)
    return _field_from_spec(FieldSpec(p, k, mod))


def field_of_order(q: int) -> GF:
    p, k = prime_power(q)
    return field(p, k)


@dataclass(frozen=True)
class FieldElement:
    field: GF
    value: int

    def _check(self, other: "FieldElement | int") -> int:
        if isinstance(other, int):
            return self.field.from_int(other)
        if other.field is not self.field:
            raise FieldError(f"mixed-field operands: {self.field} and {other.field}")
        return other.value

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._check(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._check(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._check(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._check(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._check(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return isinstance(other, FieldElement) and other.field is self.field and other.value == self.value

    def __hash__(self) -> int:
        return hash((self.field.spec, self.value))

    def __repr__(self) -> str:
        return f"{self.field!r}({self.value})"


@dataclass(frozen=True, eq=False)
class FieldTower:
    """GF(q) embedded in GF(q^3), with omega generating the extension."""

    base: GF
    ext: GF
    embed_table: tuple[int, ...]
    omega: int
    frob_table: tuple[int, ...]
    _coords: dict

    @property
    def q(self) -> int:
        return self.base.order

    def embed(self, x: int) -> int:
        return self.embed_table[x]

    def frobenius(self, z: int) -> int:
        """z -> z^q on GF(q^3)."""
        return self.frob_table[z]

    def coords(self, z: int) -> tuple[int, int, int]:
        """Coordinates (x0, x1, x2) in GF(q) with z = x0 + x1 w + x2 w^2."""
        return self._coords[z]

    def from_coords(self, x: Sequence[int]) -> int:
        E, e = self.ext, self.embed_table
        w = self.omega
        return E.add(E.add(e[x[0]], E.mul(e[x[1]], w)), E.mul(e[x[2]], E.mul(w, w)))

    def restrict(self, z: int) -> int:
        """Inverse of embed; raises if z is not in the embedded base field."""
        x0, x1, x2 = self.coords(z)
        if x1 or x2:
            raise FieldError(f"{z} is not in the embedded GF({self.q})")
        return x0


def make_tower(q: int) -> FieldTower:
    p, k = prime_power(q)
    if q < MIN_Q:
        raise FieldTooSmallError(f"q = {q} is below the supported minimum {MIN_Q}")
    base = field(p, k)
    ext = field(p, 3 * k)
    # least root of the base modulus in the extension fixes the embedding
    mod = base.spec.modulus
    root = None
    for r in range(ext.order):
        acc = 0
        for c in reversed(mod):
            acc = ext.add(ext.mul(acc, r), ext.from_int(c))
        if acc == 0:
            root = r
            break
    if root is None:  # pragma: no cover
        raise FieldError("base modulus has no root in the extension")
    embed = []
    for x in range(q):
        acc = 0
        for c in reversed(base.coeffs(x)):
            acc = ext.add(ext.mul(acc, root), ext.from_int(c))
        embed.append(acc)
    omega = ext.from_coeffs([0, 1]) if 3 * k > 1 else 0
    frob = tuple(ext.pow(z, q) for z in range(ext.order))
    w2 = ext.mul(omega, omega)
    coords = {}
    for x0 in range(q):
        for x1 in range(q):
            for x2 in range(q):
                z = ext.add(ext.add(embed[x0], ext.mul(embed[x1], omega)), ext.mul(embed[x2], w2))
                coords[z] = (x0, x1, x2)
    if len(coords) != ext.order:
        raise FieldError("{1, w, w^2} is not a basis over GF(q)")  # pragma: no cover
    return FieldTower(base, ext, tuple(embed), omega, frob, coords)
