"""Exact scalar arithmetic for the three coefficient systems.

Real, complex and quaternion coefficients are modelled by their rational
subrings: a scalar is one, two or four arbitrary-precision rationals.  Every
rank and sign decision made elsewhere in the package bottoms out in the exact
operations defined here; no floating point is used anywhere.

Scalars are plain immutable values: a ``Fraction`` over the rationals, a pair
``(re, im)`` over the Gaussian rationals and a 4-tuple ``(a, b, c, d)``
(coefficients of 1, i, j, k) over the rational quaternions.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldSpecError, NotSymmetric, ScalarParseError, ZeroScalar

RATIONAL = "rational"
GAUSSIAN = "gaussian_rational"
QUATERNION = "rational_quaternion"

IDENTITY = "identity"
CONJUGATION = "conjugation"
SEMI_CONJUGATION = "semi_conjugation"

_ZERO = Fraction(0)
_ONE = Fraction(1)


class RationalOps:
    """Arithmetic kernel for Q.  Scalars are ``Fraction`` instances."""

    name = RATIONAL
    ncomp = 1
    commutative = True

    zero = _ZERO
    one = _ONE

    @staticmethod
    def add(x, y):
        return x + y

    @staticmethod
    def sub(x, y):
        return x - y

    @staticmethod
    def mul(x, y):
        return x * y

    @staticmethod
    def neg(x):
        return -x

    @staticmethod
    def inv(x):
        return 1 / x

    @staticmethod
    def is_zero(x):
        return x == 0

    @staticmethod
    def from_int(n):
        return Fraction(n)

    @staticmethod
    def components(x):
        return (x,)

    @staticmethod
    def from_components(comps):
        return comps[0]


class GaussianOps:
    """Arithmetic kernel for Q(i).  Scalars are ``(re, im)`` pairs."""

    name = GAUSSIAN
    ncomp = 2
    commutative = True

    zero = (_ZERO, _ZERO)
    one = (_ONE, _ZERO)
    i = (_ZERO, _ONE)

    @staticmethod
    def add(x, y):
        return (x[0] + y[0], x[1] + y[1])

    @staticmethod
    def sub(x, y):
        return (x[0] - y[0], x[1] - y[1])

    @staticmethod
    def mul(x, y):
        a, b = x
        c, d = y
        return (a * c - b * d, a * d + b * c)

    @staticmethod
    def neg(x):
        return (-x[0], -x[1])

    @staticmethod
    def inv(x):
        a, b = x
        n = a * a + b * b
        return (a / n, -b / n)

    @staticmethod
    def is_zero(x):
        return x[0] == 0 and x[1] == 0

    @staticmethod
    def from_int(n):
        return (Fraction(n), _ZERO)

    @staticmethod
    def components(x):
        return x

    @staticmethod
    def from_components(comps):
        return (comps[0], comps[1])


class QuaternionOps:
    """Arithmetic kernel for rational quaternions, as 4-tuples over basis 1,i,j,k.

    Multiplication follows i^2 = j^2 = k^2 = ijk = -1; the ring is not
    commutative, so callers must never reorder products.
    """

    name = QUATERNION
    ncomp = 4
    commutative = False

    zero = (_ZERO, _ZERO, _ZERO, _ZERO)
    one = (_ONE, _ZERO, _ZERO, _ZERO)

    @staticmethod
    def add(x, y):
        return (x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3])

    @staticmethod
    def sub(x, y):
        return (x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3])

    @staticmethod
    def mul(x, y):
        a, b, c, d = x
        p, q, r, s = y
        return (
            a * p - b * q - c * r - d * s,
            a * q + b * p + c * s - d * r,
            a * r - b * s + c * p + d * q,
            a * s + b * r - c * q + d * p,
        )

    @staticmethod
    def neg(x):
        return (-x[0], -x[1], -x[2], -x[3])

    @staticmethod
    def inv(x):
        a, b, c, d = x
        n = a * a + b * b + c * c + d * d
        return (a / n, -b / n, -c / n, -d / n)

    @staticmethod
    def is_zero(x):
        return x[0] == 0 and x[1] == 0 and x[2] == 0 and x[3] == 0

    @staticmethod
    def from_int(n):
        return (Fraction(n), _ZERO, _ZERO, _ZERO)

    @staticmethod
    def components(x):
        return x

    @staticmethod
    def from_components(comps):
        return (comps[0], comps[1], comps[2], comps[3])


OPS = {RATIONAL: RationalOps, GAUSSIAN: GaussianOps, QUATERNION: QuaternionOps}


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient system: base ring, involution and the two form signs.

    Invariants enforced at construction:

    * the identity involution exists only over the commutative bases;
    * semi-conjugation (a+bi+cj+dk -> a+bi+cj-dk) exists only over quaternions;
    * a nonidentity involution forces epsilon = delta = +1;
    * conjugation over the plain rationals is the identity and is normalized.
    """

    base: str
    involution: str
    epsilon: int = 1
    delta: int = 1

    def __post_init__(self):
        if self.base not in OPS:
            raise FieldSpecError(f"unknown base {self.base!r}")
        if self.involution not in (IDENTITY, CONJUGATION, SEMI_CONJUGATION):
            raise FieldSpecError(f"unknown involution {self.involution!r}")
        if self.epsilon not in (1, -1) or self.delta not in (1, -1):
            raise FieldSpecError("epsilon and delta must be +1 or -1")
        if self.base == RATIONAL and self.involution == CONJUGATION:
            object.__setattr__(self, "involution", IDENTITY)
        if self.involution == IDENTITY and self.base == QUATERNION:
            raise FieldSpecError("identity involution is only available over commutative bases")
        if self.involution == SEMI_CONJUGATION and self.base != QUATERNION:
            raise FieldSpecError("semi-conjugation only exists over quaternions")
        if self.involution != IDENTITY and (self.epsilon != 1 or self.delta != 1):
            raise FieldSpecError("a nonidentity involution forces epsilon = delta = +1")

    @property
    def ops(self):
        return OPS[self.base]

    def conj(self, x):
        """Apply the involution to a scalar."""
        if self.involution == IDENTITY:
            return x
        if self.base == GAUSSIAN:
            return (x[0], -x[1])
        if self.involution == CONJUGATION:
            return (x[0], -x[1], -x[2], -x[3])
        return (x[0], x[1], x[2], -x[3])

    def is_symmetric(self, x):
        return self.conj(x) == x

    @property
    def sign_applicable(self):
        """True when 1x1 Hermitian forms are classified by a sign (law of inertia)."""
        if self.base == RATIONAL:
            return True
        return self.involution == CONJUGATION

    def __str__(self):
        return f"({self.base},{self.involution},{'+' if self.epsilon == 1 else '-'}{'+' if self.delta == 1 else '-'})"


def all_field_specs():
    """The five base/involution combinations, with all legal sign pairs."""
    specs = []
    for eps in (1, -1):
        for dlt in (1, -1):
            specs.append(FieldSpec(RATIONAL, IDENTITY, eps, dlt))
            specs.append(FieldSpec(GAUSSIAN, IDENTITY, eps, dlt))
    specs.append(FieldSpec(GAUSSIAN, CONJUGATION))
    specs.append(FieldSpec(QUATERNION, CONJUGATION))
    specs.append(FieldSpec(QUATERNION, SEMI_CONJUGATION))
    return specs


def involute(x, spec: FieldSpec):
    """Involution on scalars; additive, anti-multiplicative and of order two."""
    return spec.conj(x)


def symmetric_sign(x, spec: FieldSpec):
    """Sign of a nonzero symmetric scalar, or None where signs collapse.

    Over (R, id), (C, conj) and (H, conj) the symmetric elements are the real
    rationals and their sign is returned.  Over (C, id) and (H, semi) the
    canonical parameter is always 1, so the sign is not applicable and None is
    returned.
    """
    ops = spec.ops
    if ops.is_zero(x):
        raise ZeroScalar("symmetric_sign needs a nonzero scalar")
    if spec.conj(x) != x:
        raise NotSymmetric(f"{format_scalar(x, spec.base)} is not fixed by the involution")
    if not spec.sign_applicable:
        return None
    real = ops.components(x)[0]
    return 1 if real > 0 else -1


_TERM = _re.compile(r"([+-]?)(\d+(?:/\d+)?)?([ijk]?)")


def parse_scalar(text: str, base: str):
    """Parse an exact scalar string such as ``-3/2+5i`` or ``1+i+j-k``.

    Grammar: '+'/'-'-separated terms, each a signed rational with an optional
    i/j/k unit suffix; whitespace is insignificant.  Round-trips with
    :func:`format_scalar` bit-exactly.
    """
    ops = OPS[base]
    compact = "".join(text.split())
    if not compact:
        raise ScalarParseError(text, 0, "empty string")
    comps = [Fraction(0)] * 4
    pos = 0
    while pos < len(compact):
        m = _TERM.match(compact, pos)
        if not m or m.end() == pos or (m.group(2) is None and not m.group(3)):
            raise ScalarParseError(text, pos, "expected a term")
        sign = -1 if m.group(1) == "-" else 1
        mag = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        unit = "1ijk".index(m.group(3)) if m.group(3) else 0
        if unit >= ops.ncomp:
            raise ScalarParseError(text, pos, f"unit {m.group(3)!r} not available over {base}")
        comps[unit] += sign * mag
        pos = m.end()
    return ops.from_components(tuple(comps[: ops.ncomp]))


def format_scalar(x, base: str) -> str:
    """Canonical exact string form: reduced fractions, units in 1,i,j,k order."""
    comps = OPS[base].components(x)
    units = ("", "i", "j", "k")
    parts = []
    for c, u in zip(comps, units):
        if c == 0:
            continue
        mag = abs(c)
        body = u if (mag == 1 and u) else f"{mag}{u}"
        parts.append(("-" if c < 0 else ("+" if parts else "")) + body)
    return "".join(parts) if parts else "0"


def scalar_sort_key(x, base: str):
    """Total order on scalars: lexicographic on rational components."""
    return tuple(OPS[base].components(x))
