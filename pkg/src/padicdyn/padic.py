"""Capped-precision arithmetic in Q_p for odd primes p.

An element is p**valuation * unit with the unit part kept modulo
p**precision, i.e. to a fixed number of significant p-adic digits.
Arithmetic never claims more digits than its inputs support: precision is
the minimum of the operand precisions, shortened further when cancellation
in an addition consumes leading digits.

Zero comes in two flavours.  An exact zero has valuation +infinity.  An
inexact zero O(p**k), the result of complete cancellation, records only
that the value lies in p**k Z_p; its ``valuation`` is that lower bound k
and its ``precision`` is zero.

Only odd primes are accepted: the logarithm's convergence condition
|x| < |p|**(1/(p-1)) then reduces to "u = 1 mod p", which keeps the whole
module free of case analysis at p = 2.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import divisors, int_valuation, is_prime
from .errors import DomainError, PrecisionError

INFINITY = float("inf")


def _check_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")


class PAdic:
    """One element of Q_p at capped precision.  Immutable."""

    __slots__ = ("prime", "valuation", "unit_digits", "precision")

    def __init__(self, prime: int, valuation, unit_digits: int, precision) -> None:
        _check_prime(prime)
        object.__setattr__(self, "prime", prime)
        if unit_digits == 0:
            # exact zero (valuation infinite) or inexact zero O(p**bound)
            if valuation == INFINITY:
                object.__setattr__(self, "valuation", INFINITY)
                object.__setattr__(self, "precision", INFINITY)
            else:
                bound = int(valuation) + max(int(precision), 0)
                object.__setattr__(self, "valuation", bound)
                object.__setattr__(self, "precision", 0)
            object.__setattr__(self, "unit_digits", 0)
            return
        if precision <= 0:
            # nothing known beyond "lies in p**(valuation) Z_p"
            object.__setattr__(self, "valuation", int(valuation + precision))
            object.__setattr__(self, "unit_digits", 0)
            object.__setattr__(self, "precision", 0)
            return
        shift = 0
        u = unit_digits % prime**precision
        if u == 0:
            object.__setattr__(self, "valuation", int(valuation + precision))
            object.__setattr__(self, "unit_digits", 0)
            object.__setattr__(self, "precision", 0)
            return
        while u % prime == 0:
            u //= prime
            shift += 1
        precision = precision - shift
        object.__setattr__(self, "valuation", int(valuation + shift))
        object.__setattr__(self, "unit_digits", u % prime**precision)
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, name, value):
        raise AttributeError("PAdic values are immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, prime: int, precision: int = 1) -> "PAdic":
        del precision
        return cls(prime, INFINITY, 0, 0)

    @classmethod
    def from_rational(cls, value, prime: int, precision: int) -> "PAdic":
        """Image of a rational in Q_p truncated to `precision` digits."""
        _check_prime(prime)
        if precision <= 0:
            raise DomainError("precision must be positive")
        value = Fraction(value)
        if value == 0:
            return cls.zero(prime)
        vnum = int_valuation(value.numerator, prime)
        vden = int_valuation(value.denominator, prime)
        num = value.numerator // prime**vnum
        den = value.denominator // prime**vden
        modulus = prime**precision
        unit = num * pow(den, -1, modulus) % modulus
        return cls(prime, vnum - vden, unit, precision)

    # -- predicates --------------------------------------------------------

    def is_exact_zero(self) -> bool:
        return self.unit_digits == 0 and self.valuation == INFINITY

    def is_zero(self) -> bool:
        """Zero at the working precision (includes exact zero)."""
        return self.unit_digits == 0

    # -- views -------------------------------------------------------------

    def abs_value(self) -> Fraction:
        """|x|_p as an exact rational; for an inexact zero, the upper bound."""
        if self.is_exact_zero():
            return Fraction(0)
        v = self.valuation
        return Fraction(1, self.prime**v) if v >= 0 else Fraction(self.prime ** (-v))

    def digits(self, count: int | None = None) -> list[int]:
        """Base-p digits of the unit part, least significant first."""
        if self.unit_digits == 0:
            return []
        n = count if count is not None else self.precision
        u = self.unit_digits
        out = []
        for _ in range(n):
            u, d = divmod(u, self.prime)
            out.append(d)
        return out

    def digit_string(self) -> str:
        """Canonical text form: unit digits LSD-first, then e<valuation>."""
        if self.is_exact_zero():
            return "0"
        if self.unit_digits == 0:
            return f"0e{self.valuation}"
        body = "-".join(str(d) for d in self.digits())
        return f"{body}e{self.valuation}"

    def residue(self, k: int) -> int:
        """Integer value modulo p**k; requires valuation >= 0 and k digits known."""
        if self.is_exact_zero():
            return 0
        if self.valuation < 0:
            raise DomainError("residue of a non-integral element")
        if self.valuation + self.precision < k:
            raise PrecisionError(f"only {self.valuation + self.precision} digits known")
        if self.valuation >= k:
            return 0
        return self.unit_digits * self.prime**self.valuation % self.prime**k

    def lift(self) -> Fraction:
        """The rational p**v * unit represented by the stored digits."""
        if self.unit_digits == 0:
            return Fraction(0)
        v = self.valuation
        if v >= 0:
            return Fraction(self.unit_digits * self.prime**v)
        return Fraction(self.unit_digits, self.prime ** (-v))

    def __repr__(self) -> str:
        if self.is_exact_zero():
            return f"PAdic(0; p={self.prime})"
        if self.unit_digits == 0:
            return f"PAdic(O({self.prime}^{self.valuation}))"
        return (
            f"PAdic({self.unit_digits}*{self.prime}^{self.valuation}"
            f" + O({self.prime}^{self.valuation + self.precision}))"
        )

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PAdic):
            if other.prime != self.prime:
                raise DomainError("mixed primes in p-adic arithmetic")
            return other
        if isinstance(other, (int, Fraction)):
            prec = 1 if self.precision == INFINITY else max(int(self.precision), 1)
            return PAdic.from_rational(other, self.prime, prec)
        return None

    def _abs_precision(self):
        """Absolute exponent N with the value known modulo p**N."""
        if self.is_exact_zero():
            return INFINITY
        return self.valuation + self.precision

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        cap = min(self._abs_precision(), other._abs_precision())
        lo = min(self.valuation, other.valuation)
        if cap <= lo:
            return PAdic(self.prime, cap, 0, 0)
        modulus = self.prime ** int(cap - lo)
        total = 0
        for x in (self, other):
            if x.unit_digits:
                total += x.unit_digits * self.prime ** int(x.valuation - lo)
        total %= modulus
        return PAdic(self.prime, lo, total, int(cap - lo))

    __radd__ = __add__

    def __neg__(self):
        if self.unit_digits == 0:
            return self
        modulus = self.prime**self.precision
        return PAdic(self.prime, self.valuation, (-self.unit_digits) % modulus, self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_exact_zero() or other.is_exact_zero():
            return PAdic.zero(self.prime)
        if self.unit_digits == 0 or other.unit_digits == 0:
            return PAdic(self.prime, self.valuation + other.valuation, 0, 0)
        prec = min(self.precision, other.precision)
        unit = self.unit_digits * other.unit_digits % self.prime**prec
        return PAdic(self.prime, self.valuation + other.valuation, unit, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.unit_digits == 0:
            raise PrecisionError("division by zero at working precision")
        if self.is_exact_zero():
            return self
        if self.unit_digits == 0:
            return PAdic(self.prime, self.valuation - other.valuation, 0, 0)
        prec = min(self.precision, other.precision)
        modulus = self.prime**prec
        unit = self.unit_digits * pow(other.unit_digits, -1, modulus) % modulus
        return PAdic(self.prime, self.valuation - other.valuation, unit, prec)

    def __rtruediv__(self, other):
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        return coerced / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if self.is_exact_zero():
            if n == 0:
                return PAdic.from_rational(1, self.prime, 1)
            if n < 0:
                raise PrecisionError("division by zero at working precision")
            return self
        prec = max(int(self.precision), 1) if self.precision != INFINITY else 1
        if n < 0:
            base = PAdic.from_rational(1, self.prime, prec) / self
            n = -n
        else:
            base = self
        result = PAdic.from_rational(1, self.prime, prec)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, PAdic):
            return NotImplemented
        if other.prime != self.prime:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("PAdic values compare at precision and are unhashable")


def padic_log(u: PAdic) -> PAdic:
    """Logarithm sum_{k>=1} (-1)**(k+1) (u-1)**k / k, for u = 1 mod p."""
    t = u - 1
    if t.is_exact_zero():
        return PAdic.zero(u.prime)
    if t.unit_digits != 0 and t.valuation < 1:
        raise DomainError("padic_log requires u = 1 mod p")
    if t.unit_digits == 0:
        if t.valuation < 1:
            raise PrecisionError("cannot certify u = 1 mod p at this precision")
        return PAdic(u.prime, t.valuation, 0, 0)
    cap = t.valuation + t.precision
    total = PAdic.zero(u.prime)
    power = t
    k = 1
    while power.unit_digits and k * t.valuation - _log_floor(k, u.prime) < cap:
        term = power / PAdic.from_rational(k, u.prime, t.precision)
        if k % 2 == 0:
            term = -term
        total = total + term
        power = power * t
        k += 1
    return total


def padic_exp(x: PAdic) -> PAdic:
    """Exponential sum_{k>=0} x**k / k!, for x in p Z_p (odd p)."""
    if x.is_exact_zero():
        return PAdic.from_rational(1, x.prime, 10)
    if x.unit_digits != 0 and x.valuation < 1:
        raise DomainError("padic_exp requires valuation >= 1")
    if x.unit_digits == 0:
        return PAdic.from_rational(1, x.prime, max(int(x.valuation), 1))
    cap = x.valuation + x.precision
    total = PAdic.from_rational(1, x.prime, x.precision)
    term = total
    k = 1
    while True:
        term = term * x / PAdic.from_rational(k, x.prime, x.precision)
        if term.unit_digits == 0 or term.valuation >= cap:
            break
        total = total + term
        k += 1
    return total


def stabilizing_exponent(b: PAdic) -> int:
    """Smallest M >= 1 with b**M = 1 mod p; M divides p - 1."""
    if b.is_zero() or b.valuation != 0:
        raise DomainError("stabilizing exponent requires a unit")
    r = b.unit_digits % b.prime
    for m in divisors(b.prime - 1):
        if pow(r, m, b.prime) == 1:
            return m
    raise AssertionError("unreachable: the order divides p - 1")


def _log_floor(k: int, p: int) -> int:
    f = 0
    while k >= p:
        k //= p
        f += 1
    return f
