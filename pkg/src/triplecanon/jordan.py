"""Exact Jordan decomposition over Q, Q(i) and the rational quaternions.

The characteristic polynomial must split over the coefficient system;
otherwise IrrationalSpectrum is raised with the offending irreducible
factor.  Quaternion matrices are handled through their right-complex
structure: nonreal eigenvalue classes are normalized to the representative
with positive imaginary part inside the complex subfield spanned by 1, i.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .errors import IrrationalSpectrum, PairingFailure
from .matrices import Matrix, is_invertible, right_nullspace, rref
from .scalars import (
    GAUSSIAN,
    QUATERNION,
    RATIONAL,
    FieldSpec,
    GaussianOps,
    format_scalar,
    scalar_sort_key,
)


def charpoly(M: Matrix):
    """Monic characteristic polynomial coefficients [c0, ..., c_{n-1}, 1].

    Faddeev-LeVerrier recursion; commutative coefficient systems only.
    """
    ops = M.ops
    if ops.name == QUATERNION:
        raise ValueError("characteristic polynomial needs a commutative base")
    n = M.rows
    coeffs = [ops.zero] * (n + 1)
    coeffs[n] = ops.one
    Bk = Matrix.identity(n, ops)
    for k in range(1, n + 1):
        MB = M @ Bk
        tr = ops.zero
        for i in range(n):
            tr = ops.add(tr, MB.data[i][i])
        # c_{n-k} = -tr(M B_{k-1} ... ) / k
        inv_k = ops.from_int(k)
        ck = ops.neg(ops.mul(tr, ops.inv(inv_k)))
        coeffs[n - k] = ck
        if k < n:
            Bk = MB + Matrix.identity(n, ops).scale_left(ck)
    return coeffs


_X = sympy.symbols("x")


def _to_sympy(c, ops):
    if ops.name == RATIONAL:
        return sympy.Rational(c.numerator, c.denominator)
    re, im = c
    return sympy.Rational(re.numerator, re.denominator) + sympy.I * sympy.Rational(
        im.numerator, im.denominator
    )


def _from_sympy(val, ops):
    re, im = val.as_real_imag()
    re = Fraction(int(re.p), int(re.q)) if re.is_Rational else Fraction(int(re), 1)
    im = Fraction(int(im.p), int(im.q)) if im.is_Rational else Fraction(int(im), 1)
    if ops.name == RATIONAL:
        if im != 0:
            raise ValueError("nonreal value over the rationals")
        return re
    return (re, im)


def split_roots(coeffs, ops):
    """Roots with multiplicities, or IrrationalSpectrum on a nonlinear factor."""
    poly = sum(_to_sympy(c, ops) * _X**k for k, c in enumerate(coeffs))
    domain = "QQ" if ops.name == RATIONAL else "QQ_I"
    P = sympy.Poly(poly, _X, domain=domain)
    _, factors = P.factor_list()
    roots = []
    for fac, mult in factors:
        if fac.degree() > 1:
            fac_coeffs = [format_scalar(_from_sympy(c, ops), ops.name) for c in reversed(fac.all_coeffs())]
            raise IrrationalSpectrum(fac_coeffs)
        if fac.degree() == 1:
            a1, a0 = fac.all_coeffs()
            root = -sympy.Rational(1) * a0 / a1
            roots.append((_from_sympy(sympy.nsimplify(root), ops), int(mult)))
    return roots


def _matrix_power_list(N: Matrix, kmax: int):
    out = [Matrix.identity(N.rows, N.ops)]
    for _ in range(kmax):
        out.append(out[-1] @ N)
    return out


def extend_basis(W: Matrix, V: Matrix):
    """Columns of V extending the span of W's columns (subset of V's columns)."""
    if V.cols == 0:
        return V
    stacked = Matrix.hstack([W, V]) if W.cols else V
    _, pivots = rref(stacked)
    keep = [p - W.cols for p in pivots if p >= W.cols]
    return V.columns(keep)


def eigen_chains(M: Matrix, lam):
    """Jordan chains of M at lam, each bottom-to-top; exact.

    The scalar lam must be central (rational over the quaternions); for the
    Gaussian base any eigenvalue works.
    """
    ops = M.ops
    n = M.rows
    N = M - Matrix.identity(n, ops).scale_left(lam)
    kernels = [Matrix.zeros(n, 0, ops)]
    Npow = Matrix.identity(n, ops)
    while True:
        Npow = Npow @ N
        K = right_nullspace(Npow)
        if K.cols == kernels[-1].cols:
            break
        kernels.append(K)
        if len(kernels) > n + 1:
            raise PairingFailure("kernel ladder failed to stabilize")
    s = len(kernels) - 1
    if s == 0:
        return []
    Npows = _matrix_power_list(N, s)
    tops = []  # (vector, level)
    for j in range(s, 0, -1):
        carried = [Npows[lvl - j] @ t for t, lvl in tops if lvl > j]
        base = kernels[j - 1]
        if carried:
            base = Matrix.hstack([base] + carried)
        ext = extend_basis(base, kernels[j])
        for c in range(ext.cols):
            tops.append((ext.column(c), j))
    chains = []
    for t, lvl in tops:
        chains.append([Npows[lvl - 1 - p] @ t for p in range(lvl)])
    return chains


def _quat_complex_parts(M: Matrix):
    """Split a quaternion matrix as M1 + j M2 with complex parts over Q(i)."""
    ops = GaussianOps
    M1 = Matrix.zeros(M.rows, M.cols, ops)
    M2 = Matrix.zeros(M.rows, M.cols, ops)
    for i in range(M.rows):
        for j in range(M.cols):
            a, b, c, d = M.data[i][j]
            M1.data[i][j] = (a, b)
            M2.data[i][j] = (c, -d)
    return M1, M2


def _conj_gauss(M: Matrix):
    return Matrix(
        M.rows, M.cols, [[(x[0], -x[1]) for x in row] for row in M.data], M.ops
    )


def quat_to_complex(M: Matrix) -> Matrix:
    """Right-complex structure of a quaternion matrix: [[M1, -conj M2], [M2, conj M1]]."""
    M1, M2 = _quat_complex_parts(M)
    top = Matrix.hstack([M1, -_conj_gauss(M2)])
    bot = Matrix.hstack([M2, _conj_gauss(M1)])
    return Matrix.vstack([top, bot])


def complex_col_to_quat(v: Matrix, n: int) -> Matrix:
    """Back-conversion of a 2n x 1 complex column to an n x 1 quaternion column."""
    from .scalars import QuaternionOps

    out = Matrix.zeros(n, 1, QuaternionOps)
    for i in range(n):
        a, b = v.data[i][0]
        yc, yd = v.data[n + i][0]
        out.data[i][0] = (a, b, yc, -yd)
    return out


def jordan_form(M: Matrix, spec: FieldSpec):
    """Blocks [(lam, r), ...] and T with M T = T (+ J_r(lam)), T invertible.

    Eigenvalues are normalized: over the quaternions the class representative
    has nonnegative imaginary part in the 1,i-subfield.  Raises
    IrrationalSpectrum when the spectrum leaves the coefficient system.
    """
    ops = M.ops
    n = M.rows
    if n == 0:
        return [], Matrix.zeros(0, 0, ops)
    if ops.name != QUATERNION:
        roots = split_roots(charpoly(M), ops)
        roots.sort(key=lambda t: scalar_sort_key(t[0], ops.name))
        blocks = []
        cols = []
        for lam, _ in roots:
            chains = eigen_chains(M, lam)
            chains.sort(key=lambda ch: -len(ch))
            for ch in chains:
                blocks.append((lam, len(ch)))
                cols.extend(ch)
        T = Matrix.hstack(cols) if cols else Matrix.zeros(n, 0, ops)
    else:
        Mc = quat_to_complex(M)
        roots = split_roots(charpoly(Mc), GaussianOps)
        # keep one representative per conjugate class, imaginary part >= 0
        reps = []
        for lam, mult in roots:
            if lam[1] < 0:
                continue
            reps.append(lam)
        reps.sort(key=lambda t: scalar_sort_key(t, GAUSSIAN))
        blocks = []
        cols = []
        for lam in reps:
            if lam[1] == 0:
                # central eigenvalue: chain algorithm directly over H
                qlam = ops.from_components((lam[0], Fraction(0), Fraction(0), Fraction(0)))
                chains = eigen_chains(M, qlam)
                chains.sort(key=lambda ch: -len(ch))
                for ch in chains:
                    blocks.append((qlam, len(ch)))
                    cols.extend(ch)
            else:
                chains = eigen_chains(Mc, lam)
                chains.sort(key=lambda ch: -len(ch))
                qlam = ops.from_components((lam[0], lam[1], Fraction(0), Fraction(0)))
                for ch in chains:
                    blocks.append((qlam, len(ch)))
                    cols.extend(complex_col_to_quat(v, n) for v in ch)
        T = Matrix.hstack(cols) if cols else Matrix.zeros(n, 0, ops)
    if T.cols != n or not is_invertible(T):
        raise PairingFailure("Jordan transition matrix is not invertible")
    # exact verification: M T = T J
    from .catalog import make_jordan

    J = Matrix.block_diag([make_jordan(r, lam, ops) for lam, r in blocks], ops)
    if (M @ T) != (T @ J):
        raise PairingFailure("Jordan relation M T = T J fails")
    return blocks, T
