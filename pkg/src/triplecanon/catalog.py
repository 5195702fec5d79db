"""Constructors for the named canonical blocks and the descriptor algebra.

A summand descriptor is the structural identity of one canonical direct
summand (its kind tag, size r, optional sign a and optional eigenvalue);
a canonical descriptor is the multiset of summands in a fixed total order,
so equality of canonical forms is plain equality of descriptors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldSpecError, IllegalParity, OddSkewSize, SignNotApplicable
from .matrices import Matrix, MatrixTriple, adjoint
from .scalars import (
    GAUSSIAN,
    RATIONAL,
    FieldSpec,
    format_scalar,
    parse_scalar,
    scalar_sort_key,
)

# Tag order fixes the canonical total order on summands.
TAGS = (
    "B1a_first",
    "B1a_second",
    "B2_first",
    "B2_second",
    "B5_left",
    "B5_right",
    "B6_left",
    "B6_mid",
    "B6_jordan",
    "T111_real",
    "T111_pair",
    "RegularResidue",
)

SIGNED_TAGS = {"B1a_first", "B2_first", "T111_real"}
PAIR_TAGS = {"B1a_second", "B2_second"}


def make_Z(r: int, sign: int, ops) -> Matrix:
    """Anti-identity Z_{r,+}, or its skew companion Z_{r,-} (r even only)."""
    if sign == 1:
        out = Matrix.zeros(r, r, ops)
        for i in range(r):
            out.data[i][r - 1 - i] = ops.one
        return out
    if r % 2 != 0:
        raise OddSkewSize(f"Z_({r},-) does not exist: r is even if the sign is -")
    h = r // 2
    out = Matrix.zeros(r, r, ops)
    for i in range(h):
        out.data[i][r - 1 - i] = ops.neg(ops.one)  # top-right block -Z_h
        out.data[h + i][h - 1 - i] = ops.one  # bottom-left block Z_h
    return out


def make_F(r: int, ops) -> Matrix:
    """(r-1) x r matrix with 1s at (i, i); F_1 = 0_{01}."""
    out = Matrix.zeros(r - 1, r, ops)
    for i in range(r - 1):
        out.data[i][i] = ops.one
    return out


def make_G(r: int, ops) -> Matrix:
    """(r-1) x r matrix with 1s at (i, i+1); G_1 = 0_{01}."""
    out = Matrix.zeros(r - 1, r, ops)
    for i in range(r - 1):
        out.data[i][i + 1] = ops.one
    return out


def make_jordan(r: int, lam, ops) -> Matrix:
    """Upper-triangular Jordan block J_r(lambda)."""
    out = Matrix.zeros(r, r, ops)
    for i in range(r):
        out.data[i][i] = lam
        if i + 1 < r:
            out.data[i][i + 1] = ops.one
    return out


def oslash(M: Matrix, spec: FieldSpec, sign: int) -> Matrix:
    """Block form [[0, sign*M*], [M, 0]]; always sign-(skew-)Hermitian."""
    Mstar = adjoint(M, spec)
    if sign == -1:
        Mstar = -Mstar
    ops = M.ops
    n = M.rows + M.cols
    out = Matrix.zeros(n, n, ops)
    for i in range(M.cols):
        out.data[i][M.cols :] = list(Mstar.data[i])
    for i in range(M.rows):
        out.data[M.cols + i][: M.cols] = list(M.data[i])
    return out


@dataclass(frozen=True)
class SummandDescriptor:
    """Identity of one canonical summand.

    ``a`` is a symmetric scalar for the signed tags (canonical descriptors
    carry +-1, synthesis accepts any nonzero symmetric value) and None where
    the sign collapses to 1.  ``lam`` is the real eigenvalue of T111_real,
    ``mu`` the eigenvalue with positive imaginary part of T111_pair and
    ``residue`` the verbatim strictly regular triple of RegularResidue.
    """

    tag: str
    r: int = 0
    a: object = None
    lam: object = None
    mu: object = None
    residue: object = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown summand tag {self.tag!r}")

    def sort_key(self, spec: FieldSpec):
        base = spec.base
        if self.a is None:
            akey = (0,)
        else:
            # +1 sorts before -1; general symmetric values after, by components
            s = _as_scalar(self.a, spec)
            if s == spec.ops.one:
                akey = (1,)
            elif s == spec.ops.neg(spec.ops.one):
                akey = (2,)
            else:
                akey = (3,) + tuple(scalar_sort_key(s, base))
        lkey = tuple(scalar_sort_key(self.lam, base)) if self.lam is not None else ()
        mkey = tuple(scalar_sort_key(self.mu, base)) if self.mu is not None else ()
        return (TAGS.index(self.tag), self.r, akey, lkey, mkey)

    def dims(self):
        """(m, n) of the synthesized block."""
        r = self.r
        return {
            "B1a_first": (r, r - 1),
            "B1a_second": (2 * r, 2 * r - 2),
            "B2_first": (r - 1, r),
            "B2_second": (2 * r - 2, 2 * r),
            "B5_left": (2 * r, 2 * r - 1),
            "B5_right": (2 * r - 1, 2 * r),
            "B6_left": (2 * r - 1, 2 * r - 2),
            "B6_mid": (2 * r - 2, 2 * r - 1),
            "B6_jordan": (2 * r, 2 * r),
            "T111_real": (r, r),
            "T111_pair": (2 * r, 2 * r),
            "RegularResidue": (self.residue.m, self.residue.n),
        }[self.tag]


def _as_scalar(val, spec: FieldSpec):
    """Accept ints, strings or raw scalars for descriptor parameters."""
    if isinstance(val, int):
        return spec.ops.from_int(val)
    if isinstance(val, str):
        return parse_scalar(val, spec.base)
    if isinstance(val, Fraction):
        return val if spec.base == RATIONAL else spec.ops.from_components(
            (val,) + (Fraction(0),) * (spec.ops.ncomp - 1)
        )
    return val


def check_parity(tag: str, r: int, spec: FieldSpec):
    """Raise IllegalParity when (tag, r) cannot exist for the spec's signs."""
    eps, dlt = spec.epsilon, spec.delta
    if r < 1:
        raise IllegalParity(f"{tag} needs r >= 1, got {r}")
    ok = True
    if tag == "B1a_first":
        ok = (eps == 1 or r % 2 == 0) and (dlt == 1 or r % 2 == 1)
    elif tag == "B2_first":
        ok = (eps == 1 or r % 2 == 1) and (dlt == 1 or r % 2 == 0)
    elif tag == "B1a_second":
        ok = (r % 2 == 1 and eps == -1) or (r % 2 == 0 and dlt == -1)
    elif tag == "B2_second":
        ok = (r % 2 == 0 and eps == -1) or (r % 2 == 1 and dlt == -1)
    if not ok:
        raise IllegalParity(
            f"{tag} with r={r} violates its parity annotation for epsilon={eps}, delta={dlt}"
        )


def legal_descriptor(d: SummandDescriptor, spec: FieldSpec) -> bool:
    try:
        check_parity(d.tag, d.r, spec)
    except IllegalParity:
        return False
    return True


def synth_summand(d: SummandDescriptor, spec: FieldSpec) -> MatrixTriple:
    """The literal canonical matrix triple of one summand descriptor."""
    ops = spec.ops
    eps, dlt = spec.epsilon, spec.delta
    tag, r = d.tag, d.r
    if tag == "RegularResidue":
        return d.residue
    check_parity(tag, r, spec)

    if tag in SIGNED_TAGS:
        if spec.sign_applicable:
            a = _as_scalar(d.a if d.a is not None else 1, spec)
        else:
            if d.a is not None and _as_scalar(d.a, spec) != ops.one:
                raise SignNotApplicable(
                    f"{spec} admits no sign parameter; canonical a is 1"
                )
            a = ops.one
        if ops.is_zero(a) or spec.conj(a) != a:
            raise ValueError("sign parameter must be nonzero and symmetric")
    else:
        if d.a is not None:
            raise SignNotApplicable(f"{tag} carries no sign parameter")
        a = None

    if tag == "B1a_first":
        A = make_F(r, ops)
        B = make_Z(r, eps, ops).scale_left(a)
        C = make_Z(r - 1, dlt, ops).scale_left(a)
    elif tag == "B2_first":
        A = make_F(r, ops).transpose()
        B = make_Z(r - 1, eps, ops).scale_left(a)
        C = make_Z(r, dlt, ops).scale_left(a)
    elif tag == "B1a_second":
        A = Matrix.block_diag([make_F(r, ops), make_G(r, ops)])
        B = oslash(Matrix.identity(r, ops), spec, eps)
        C = oslash(Matrix.identity(r - 1, ops), spec, dlt)
    elif tag == "B2_second":
        A = Matrix.block_diag([make_F(r, ops).transpose(), make_G(r, ops).transpose()])
        B = oslash(Matrix.identity(r - 1, ops), spec, eps)
        C = oslash(Matrix.identity(r, ops), spec, dlt)
    elif tag == "B5_left":
        A = Matrix.block_diag([Matrix.identity(r, ops), make_F(r, ops)])
        B = oslash(Matrix.identity(r, ops), spec, eps)
        C = oslash(make_G(r, ops), spec, dlt)
    elif tag == "B5_right":
        A = Matrix.block_diag([Matrix.identity(r, ops), make_F(r, ops).transpose()])
        B = oslash(make_G(r, ops), spec, eps)
        C = oslash(Matrix.identity(r, ops), spec, dlt)
    elif tag == "B6_left":
        A = Matrix.block_diag([Matrix.identity(r - 1, ops), make_F(r, ops)])
        B = oslash(make_G(r, ops).transpose(), spec, eps)
        C = oslash(Matrix.identity(r - 1, ops), spec, dlt)
    elif tag == "B6_mid":
        A = Matrix.block_diag([Matrix.identity(r - 1, ops), make_F(r, ops).transpose()])
        B = oslash(Matrix.identity(r - 1, ops), spec, eps)
        C = oslash(make_G(r, ops).transpose(), spec, dlt)
    elif tag == "B6_jordan":
        A = Matrix.block_diag([Matrix.identity(r, ops), make_jordan(r, ops.zero, ops)])
        B = oslash(Matrix.identity(r, ops), spec, eps)
        C = oslash(Matrix.identity(r, ops), spec, dlt)
    elif tag == "T111_real":
        _check_t111_field(spec, tag)
        lam = _as_scalar(d.lam, spec)
        if ops.is_zero(lam) or spec.conj(lam) != lam:
            raise ValueError("T111_real needs a nonzero real eigenvalue")
        A = Matrix.identity(r, ops)
        Z = make_Z(r, 1, ops)
        B = Z.scale_left(a)
        C = (Z @ make_jordan(r, lam, ops)).scale_left(a)
    elif tag == "T111_pair":
        _check_t111_field(spec, tag)
        if spec.base != GAUSSIAN:
            raise FieldSpecError("T111_pair needs Gaussian rational coefficients")
        mu = _as_scalar(d.mu, spec)
        if mu[1] <= 0:
            raise ValueError("T111_pair stores the eigenvalue with positive imaginary part")
        A = Matrix.block_diag([Matrix.identity(r, ops), make_jordan(r, mu, ops)])
        P = oslash(Matrix.identity(r, ops), spec, 1)
        B = P
        C = P.copy()
    else:  # pragma: no cover
        raise ValueError(tag)
    T = MatrixTriple(A, B, C, spec)
    return T


def _check_t111_field(spec: FieldSpec, tag: str):
    ok = (spec.base == RATIONAL or (spec.base == GAUSSIAN and spec.involution == "conjugation"))
    if not (ok and spec.epsilon == 1 and spec.delta == 1):
        raise FieldSpecError(
            f"{tag} blocks exist only over (rational, id, +, +) or (gaussian, conj, +, +), not {spec}"
        )


@dataclass(frozen=True)
class CanonicalDescriptor:
    """Canonically ordered multiset of summand descriptors."""

    summands: tuple

    def __len__(self):
        return len(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def has_residue(self):
        return any(s.tag == "RegularResidue" for s in self.summands)

    def residue_empty(self):
        return all(s.tag != "RegularResidue" or s.residue.m == 0 for s in self.summands)


def descriptor_normalize(summands, spec: FieldSpec) -> CanonicalDescriptor:
    """Sort into canonical total order; idempotent; multiset equality."""
    items = list(summands)
    items.sort(key=lambda s: s.sort_key(spec))
    return CanonicalDescriptor(tuple(items))


def synth_descriptor(desc: CanonicalDescriptor, spec: FieldSpec) -> MatrixTriple:
    """Direct sum of the catalog blocks in descriptor order."""
    from .matrices import direct_sum_triple, empty_triple

    T = empty_triple(spec)
    for d in desc:
        T = direct_sum_triple(T, synth_summand(d, spec))
    return T


# -- JSON forms ------------------------------------------------------------


def descriptor_to_json(d: SummandDescriptor, spec: FieldSpec):
    out = {"tag": d.tag, "r": d.r, "a": None, "lambda": None, "mu": None}
    if d.a is not None:
        s = _as_scalar(d.a, spec)
        if s == spec.ops.one:
            out["a"] = 1
        elif s == spec.ops.neg(spec.ops.one):
            out["a"] = -1
        else:
            out["a"] = format_scalar(s, spec.base)
    if d.lam is not None:
        out["lambda"] = format_scalar(_as_scalar(d.lam, spec), spec.base)
    if d.mu is not None:
        out["mu"] = format_scalar(_as_scalar(d.mu, spec), spec.base)
    if d.tag == "RegularResidue":
        from .documents import triple_to_json

        out["residue"] = triple_to_json(d.residue)
    return out


def descriptor_from_json(obj, spec: FieldSpec) -> SummandDescriptor:
    tag = obj["tag"]
    a = obj.get("a")
    if isinstance(a, str):
        a = parse_scalar(a, spec.base)
    lam = obj.get("lambda")
    if lam is not None:
        lam = parse_scalar(lam, spec.base)
    mu = obj.get("mu")
    if mu is not None:
        mu = parse_scalar(mu, spec.base)
    residue = None
    if tag == "RegularResidue":
        from .documents import triple_from_json

        residue = triple_from_json(obj["residue"])
    return SummandDescriptor(tag=tag, r=obj.get("r", 0), a=a, lam=lam, mu=mu, residue=residue)
