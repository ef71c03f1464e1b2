"""Exact arithmetic in the prime field F_p for small primes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class FieldError(ValueError):
    pass


class InversionOfZero(FieldError, ZeroDivisionError):
    pass


class ModulusMismatch(FieldError):
    pass


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"modulus {p!r} is not a prime")
    return p


@dataclass(frozen=True)
class FpElement:
    """A residue class ``value mod modulus`` with ``modulus`` prime.

    The value is reduced on construction, so ``FpElement(-1, 5).value == 4``.
    Mixing moduli raises :class:`ModulusMismatch` rather than coercing.
    """

    value: int
    modulus: int

    def __post_init__(self):
        check_prime(self.modulus)
        object.__setattr__(self, "value", int(self.value) % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, FpElement):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"cannot mix F_{self.modulus} and F_{other.modulus}")
            return other.value
        if isinstance(other, int):
            return other % self.modulus
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElement(self.value + v, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElement(self.value - v, self.modulus)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElement(v - self.value, self.modulus)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElement(self.value * v, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.value, self.modulus)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self * fp_inv(FpElement(v, self.modulus))

    def __pow__(self, e: int):
        if e < 0:
            return fp_pow(fp_inv(self), -e)
        return fp_pow(self, e)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


def fp(value: int, p: int) -> FpElement:
    return FpElement(value, p)


def fp_add(x: FpElement, y: FpElement) -> FpElement:
    return x + y


def fp_mul(x: FpElement, y: FpElement) -> FpElement:
    return x * y


def fp_pow(x: FpElement, e: int) -> FpElement:
    if e < 0:
        raise ValueError("negative exponent; invert first")
    return FpElement(pow(x.value, e, x.modulus), x.modulus)


def fp_inv(x: FpElement) -> FpElement:
    """Inverse by Fermat: ``x^(p-2)``."""
    if x.value == 0:
        raise InversionOfZero(f"0 has no inverse in F_{x.modulus}")
    return fp_pow(x, x.modulus - 2)


def inv_mod(r: int, p: int) -> int:
    """Plain-int inverse of ``r`` modulo the prime ``p``."""
    return fp_inv(FpElement(r, p)).value
