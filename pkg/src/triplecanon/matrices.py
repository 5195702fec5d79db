"""Exact dense linear algebra over the three coefficient systems.

Vector spaces are finite dimensional *right* spaces, so matrices act on
column coordinates from the left and all row operations below are left
multiplications (they are the ones that preserve right-nullspaces over a
skew field).  Zero-dimensional matrices are first class: a p x 0 and a
0 x q matrix are different objects and compose correctly.

Rational matrices get a fraction-free integer elimination path; the other
coefficient systems use the generic kernel, which never reorders products.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import FieldMismatch, SingularTransformation
from .scalars import OPS, QUATERNION, RATIONAL, FieldSpec, RationalOps, format_scalar


class Matrix:
    """Immutable-by-convention dense matrix over one of the scalar kernels."""

    __slots__ = ("rows", "cols", "data", "ops")

    def __init__(self, rows, cols, data, ops):
        self.rows = rows
        self.cols = cols
        self.data = data
        self.ops = ops

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(rows, cols, ops):
        z = ops.zero
        return Matrix(rows, cols, [[z] * cols for _ in range(rows)], ops)

    @staticmethod
    def identity(n, ops):
        z, o = ops.zero, ops.one
        data = [[o if i == j else z for j in range(n)] for i in range(n)]
        return Matrix(n, n, data, ops)

    @staticmethod
    def from_rows(data, ops, cols=None):
        rows = len(data)
        if cols is None:
            if rows == 0:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(data[0])
        for row in data:
            if len(row) != cols:
                raise ValueError("ragged rows")
        return Matrix(rows, cols, [list(r) for r in data], ops)

    @staticmethod
    def from_ints(data, ops, cols=None):
        conv = ops.from_int
        rows = [[conv(x) for x in row] for row in data]
        return Matrix.from_rows(rows, ops, cols=cols)

    # -- basics --------------------------------------------------------

    def copy(self):
        return Matrix(self.rows, self.cols, [list(r) for r in self.data], self.ops)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        if self.rows == 0 or self.cols == 0:
            return f"Matrix({self.rows}x{self.cols})"
        body = "; ".join(
            " ".join(format_scalar(x, self.ops.name) for x in row) for row in self.data
        )
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def is_zero(self):
        iz = self.ops.is_zero
        return all(iz(x) for row in self.data for x in row)

    def is_empty(self):
        return self.rows == 0 or self.cols == 0

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        self._check(other)
        add = self.ops.add
        data = [
            [add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)
        ]
        return Matrix(self.rows, self.cols, data, self.ops)

    def __sub__(self, other):
        self._check(other)
        sub = self.ops.sub
        data = [
            [sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)
        ]
        return Matrix(self.rows, self.cols, data, self.ops)

    def __neg__(self):
        neg = self.ops.neg
        return Matrix(self.rows, self.cols, [[neg(x) for x in r] for r in self.data], self.ops)

    def _check(self, other):
        if self.ops is not other.ops:
            raise FieldMismatch("matrices over different scalar kernels")
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def __matmul__(self, other):
        if self.ops is not other.ops:
            raise FieldMismatch("matrices over different scalar kernels")
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ops = self.ops
        mul, add, zero = ops.mul, ops.add, ops.zero
        izero = ops.is_zero
        out = []
        bdata = other.data
        for arow in self.data:
            row = [zero] * other.cols
            for k, a in enumerate(arow):
                if izero(a):
                    continue
                brow = bdata[k]
                for j, b in enumerate(brow):
                    if izero(b):
                        continue
                    row[j] = add(row[j], mul(a, b))
            out.append(row)
        return Matrix(self.rows, other.cols, out, ops)

    def scale_left(self, c):
        mul = self.ops.mul
        return Matrix(self.rows, self.cols, [[mul(c, x) for x in r] for r in self.data], self.ops)

    def scale_right(self, c):
        mul = self.ops.mul
        return Matrix(self.rows, self.cols, [[mul(x, c) for x in r] for r in self.data], self.ops)

    # -- slicing / stacking ---------------------------------------------

    def submatrix(self, r0, r1, c0, c1):
        data = [row[c0:c1] for row in self.data[r0:r1]]
        return Matrix(r1 - r0, c1 - c0, data, self.ops)

    def column(self, j):
        return Matrix(self.rows, 1, [[row[j]] for row in self.data], self.ops)

    def columns(self, idx):
        data = [[row[j] for j in idx] for row in self.data]
        return Matrix(self.rows, len(idx), data, self.ops)

    @staticmethod
    def hstack(mats):
        mats = [m for m in mats]
        if not mats:
            raise ValueError("hstack of nothing")
        rows, ops = mats[0].rows, mats[0].ops
        for m in mats:
            if m.rows != rows:
                raise ValueError("hstack rows mismatch")
        data = [sum((m.data[i] for m in mats), []) for i in range(rows)]
        return Matrix(rows, sum(m.cols for m in mats), data, ops)

    @staticmethod
    def vstack(mats):
        mats = [m for m in mats]
        if not mats:
            raise ValueError("vstack of nothing")
        cols, ops = mats[0].cols, mats[0].ops
        for m in mats:
            if m.cols != cols:
                raise ValueError("vstack cols mismatch")
        data = []
        for m in mats:
            data.extend([list(r) for r in m.data])
        return Matrix(sum(m.rows for m in mats), cols, data, ops)

    @staticmethod
    def block_diag(mats, ops=None):
        mats = [m for m in mats]
        if not mats:
            if ops is None:
                raise ValueError("block_diag of nothing needs ops")
            return Matrix.zeros(0, 0, ops)
        ops = mats[0].ops
        rows = sum(m.rows for m in mats)
        cols = sum(m.cols for m in mats)
        out = Matrix.zeros(rows, cols, ops)
        r = c = 0
        for m in mats:
            for i in range(m.rows):
                out.data[r + i][c : c + m.cols] = list(m.data[i])
            r += m.rows
            c += m.cols
        return out

    def transpose(self):
        data = [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)]
        return Matrix(self.cols, self.rows, data, self.ops)


def adjoint(M: Matrix, spec: FieldSpec) -> Matrix:
    """Conjugate transpose with respect to the spec's involution."""
    conj = spec.conj
    data = [[conj(M.data[i][j]) for i in range(M.rows)] for j in range(M.cols)]
    return Matrix(M.cols, M.rows, data, M.ops)


def _std_conj(ops):
    """Standard conjugation of the base ring (ignores the FieldSpec involution).

    Any anti-automorphism works for turning column reductions into row
    reductions; over the commutative bases the identity does.
    """
    if ops.name == QUATERNION:
        return lambda x: (x[0], -x[1], -x[2], -x[3])
    return lambda x: x


def _star(M: Matrix) -> Matrix:
    conj = _std_conj(M.ops)
    data = [[conj(M.data[i][j]) for i in range(M.rows)] for j in range(M.cols)]
    return Matrix(M.cols, M.rows, data, M.ops)


# -- elimination core ----------------------------------------------------


def _rref_generic(data, rows, cols, ncols_main, ops):
    """In-place reduced row echelon over a (skew) field; returns pivot columns.

    Only the first ``ncols_main`` columns are eligible as pivots; trailing
    columns ride along (augmented systems).  Row operations are left
    multiplications throughout.
    """
    mul, sub, inv = ops.mul, ops.sub, ops.inv
    izero = ops.is_zero
    pivots = []
    r = 0
    for c in range(ncols_main):
        p = None
        for i in range(r, rows):
            if not izero(data[i][c]):
                p = i
                break
        if p is None:
            continue
        if p != r:
            data[p], data[r] = data[r], data[p]
        piv = data[r][c]
        if piv != ops.one:
            pinv = inv(piv)
            data[r] = [mul(pinv, x) for x in data[r]]
        rowr = data[r]
        for i in range(rows):
            if i == r:
                continue
            f = data[i][c]
            if izero(f):
                continue
            rowi = data[i]
            data[i] = [sub(a, mul(f, b)) for a, b in zip(rowi, rowr)]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def _rref_rational(data, rows, cols, ncols_main):
    """Fraction-free (Montante/Bareiss) full elimination for rational rows.

    Clears denominators row-wise, eliminates with exact integer division and
    normalizes pivots to 1 at the end.  Much faster than Fraction-per-op.
    """
    introws = []
    for row in data:
        den = 1
        for x in row:
            d = x.denominator
            if d != 1:
                den = den * d // _gcd(den, d)
        introws.append([int(x * den) for x in row] if den != 1 else [x.numerator for x in row])
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols_main):
        p = None
        for i in range(r, rows):
            if introws[i][c]:
                p = i
                break
        if p is None:
            continue
        if p != r:
            introws[p], introws[r] = introws[r], introws[p]
        piv = introws[r][c]
        rowr = introws[r]
        for i in range(rows):
            if i == r:
                continue
            f = introws[i][c]
            rowi = introws[i]
            if f:
                introws[i] = [(piv * a - f * b) // prev for a, b in zip(rowi, rowr)]
            elif prev != 1 or piv != 1:
                introws[i] = [(piv * a) // prev for a in rowi]
        prev = piv
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i, c in enumerate(pivots):
        piv = introws[i][c]
        data[i] = [Fraction(x, piv) for x in introws[i]]
    zero = Fraction(0)
    for i in range(len(pivots), rows):
        data[i] = [zero] * cols
    return pivots


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def rref(M: Matrix, ncols_main=None):
    """Reduced row echelon form; returns (R, pivot column list)."""
    if ncols_main is None:
        ncols_main = M.cols
    data = [list(r) for r in M.data]
    if M.ops is RationalOps:
        pivots = _rref_rational(data, M.rows, M.cols, ncols_main)
    else:
        pivots = _rref_generic(data, M.rows, M.cols, ncols_main, M.ops)
    return Matrix(M.rows, M.cols, data, M.ops), pivots


def rank(M: Matrix) -> int:
    if M.is_empty():
        return 0
    _, pivots = rref(M)
    return len(pivots)


def right_nullspace(M: Matrix) -> Matrix:
    """Matrix whose columns are a basis of {x : M x = 0} (a right subspace)."""
    ops = M.ops
    if M.cols == 0:
        return Matrix.zeros(0, 0, ops)
    if M.rows == 0:
        return Matrix.identity(M.cols, ops)
    R, pivots = rref(M)
    free = [j for j in range(M.cols) if j not in pivots]
    out = Matrix.zeros(M.cols, len(free), ops)
    for k, f in enumerate(free):
        out.data[f][k] = ops.one
        for i, p in enumerate(pivots):
            out.data[p][k] = ops.neg(R.data[i][f])
    return out


def rank_kernel(M: Matrix):
    """(rank, kernel basis) computed by one elimination pass."""
    ker = right_nullspace(M)
    return M.cols - ker.cols, ker


def solve_right(A: Matrix, B: Matrix):
    """X with A X = B, or None when inconsistent.  Free variables are set to 0."""
    if A.ops is not B.ops:
        raise FieldMismatch("solve over different kernels")
    if A.rows != B.rows:
        raise ValueError("shape mismatch in solve")
    ops = A.ops
    if B.cols == 0:
        return Matrix.zeros(A.cols, 0, ops)
    if A.cols == 0:
        return Matrix.zeros(0, B.cols, ops) if B.is_zero() else None
    aug = Matrix.hstack([A, B])
    R, pivots = rref(aug, ncols_main=A.cols)
    izero = ops.is_zero
    for i in range(len(pivots), A.rows):
        if any(not izero(x) for x in R.data[i][A.cols :]):
            return None
    X = Matrix.zeros(A.cols, B.cols, ops)
    for i, p in enumerate(pivots):
        X.data[p] = list(R.data[i][A.cols :])
    return X


def inverse(M: Matrix):
    """Exact inverse, or None when the matrix is singular or not square."""
    if M.rows != M.cols:
        return None
    X = solve_right(M, Matrix.identity(M.rows, M.ops))
    if X is None:
        return None
    # a right inverse of a square matrix over a skew field is two-sided
    return X


def is_invertible(M: Matrix) -> bool:
    return M.rows == M.cols and (M.rows == 0 or rank(M) == M.rows)


# -- subspaces (columns-as-basis convention) ------------------------------


def column_space(M: Matrix) -> Matrix:
    """Canonical basis (columns) of the right span of M's columns."""
    if M.cols == 0 or M.rows == 0:
        return Matrix.zeros(M.rows, 0, M.ops)
    R, pivots = rref(_star(M))
    basis = _star(R.submatrix(0, len(pivots), 0, R.cols))
    return basis


def preimage(M: Matrix, W: Matrix) -> Matrix:
    """Basis of {x : M x in span(W)} for W a subspace of the target of M."""
    if W.rows != M.rows:
        raise ValueError("preimage shape mismatch")
    if M.cols == 0:
        return Matrix.zeros(0, 0, M.ops)
    if W.cols == 0:
        return right_nullspace(M)
    ker = right_nullspace(Matrix.hstack([M, -W]))
    xpart = ker.submatrix(0, M.cols, 0, ker.cols)
    return column_space(xpart)


def space_sum(A: Matrix, B: Matrix) -> Matrix:
    return column_space(Matrix.hstack([A, B]))


def space_dim(W: Matrix) -> int:
    return W.cols


# -- triples ---------------------------------------------------------------


@dataclass
class MatrixTriple:
    """Matrices (A: n x m, B: m x m, C: n x n) over a FieldSpec."""

    A: Matrix
    B: Matrix
    C: Matrix
    field: FieldSpec

    @property
    def m(self):
        return self.A.cols

    @property
    def n(self):
        return self.A.rows

    def __eq__(self, other):
        return (
            isinstance(other, MatrixTriple)
            and self.field == other.field
            and self.A == other.A
            and self.B == other.B
            and self.C == other.C
        )


def empty_triple(spec: FieldSpec) -> MatrixTriple:
    z = Matrix.zeros(0, 0, spec.ops)
    return MatrixTriple(z, z, z, spec)


def validate_triple(T: MatrixTriple):
    """Structured violation report; empty list means the triple is legal."""
    spec = T.field
    eps, dlt = spec.epsilon, spec.delta
    violations = []
    m, n = T.m, T.n
    if T.B.rows != m or T.B.cols != m:
        violations.append(f"B must be {m}x{m}, got {T.B.rows}x{T.B.cols}")
    if T.C.rows != n or T.C.cols != n:
        violations.append(f"C must be {n}x{n}, got {T.C.rows}x{T.C.cols}")
    if violations:
        return violations
    Bstar = adjoint(T.B, spec)
    if (Bstar if eps == 1 else -Bstar) != T.B:
        violations.append(f"B is not {'Hermitian' if eps == 1 else 'skew-Hermitian'}")
    Cstar = adjoint(T.C, spec)
    if (Cstar if dlt == 1 else -Cstar) != T.C:
        violations.append(f"C is not {'Hermitian' if dlt == 1 else 'skew-Hermitian'}")
    return violations


def apply_transformation(T: MatrixTriple, R: Matrix, S: Matrix) -> MatrixTriple:
    """Congruence action (A, B, C) -> (S^-1 A R, R* B R, S* C S)."""
    if R.rows != T.m or R.cols != T.m or S.rows != T.n or S.cols != T.n:
        raise ValueError("transformation sizes do not match the triple")
    Sinv = inverse(S)
    if Sinv is None:
        raise SingularTransformation("S is not invertible")
    if not is_invertible(R):
        raise SingularTransformation("R is not invertible")
    spec = T.field
    out = MatrixTriple(
        (Sinv @ T.A) @ R,
        (adjoint(R, spec) @ T.B) @ R,
        (adjoint(S, spec) @ T.C) @ S,
        spec,
    )
    assert not validate_triple(out), "congruence action must preserve form symmetry"
    return out


def direct_sum_triple(T1: MatrixTriple, T2: MatrixTriple) -> MatrixTriple:
    if T1.field != T2.field:
        raise FieldMismatch("direct sum over different field specs")
    ops = T1.A.ops
    return MatrixTriple(
        Matrix.block_diag([T1.A, T2.A], ops),
        Matrix.block_diag([T1.B, T2.B], ops),
        Matrix.block_diag([T1.C, T2.C], ops),
        T1.field,
    )


# -- Hermitian congruence diagonalization ---------------------------------


def congruence_diagonalize(H: Matrix, spec: FieldSpec):
    """Exact (X* H X, X) with the left factor diagonal, H Hermitian w.r.t. spec.

    Standard symmetric elimination: pivot on a nonzero diagonal entry; when the
    whole remaining diagonal vanishes, an off-diagonal entry h is pushed onto
    the diagonal with the column update col_i += col_j * conj(h) (which yields
    2 h conj(h) != 0 in every supported coefficient system, char 0).
    """
    ops = H.ops
    n = H.rows
    D = H.copy()
    X = Matrix.identity(n, ops)
    conj, mul, add, neg, inv = spec.conj, ops.mul, ops.add, ops.neg, ops.inv
    izero = ops.is_zero

    def add_col(dst, src, t):
        # col_dst += col_src * t, congruently (rows updated with conj(t))
        tc = conj(t)
        for M, with_rows in ((D, True), (X, False)):
            for i in range(n):
                M.data[i][dst] = add(M.data[i][dst], mul(M.data[i][src], t))
            if with_rows:
                for j in range(n):
                    M.data[dst][j] = add(M.data[dst][j], mul(tc, M.data[src][j]))

    def swap(i, j):
        for M, with_rows in ((D, True), (X, False)):
            for r in range(n):
                M.data[r][i], M.data[r][j] = M.data[r][j], M.data[r][i]
            if with_rows:
                M.data[i], M.data[j] = M.data[j], M.data[i]

    for k in range(n):
        if izero(D.data[k][k]):
            found = None
            for i in range(k, n):
                if not izero(D.data[i][i]):
                    found = i
                    break
            if found is not None:
                if found != k:
                    swap(k, found)
            else:
                off = None
                for i in range(k, n):
                    for j in range(i + 1, n):
                        if not izero(D.data[i][j]):
                            off = (i, j)
                            break
                    if off:
                        break
                if off is None:
                    continue  # remaining block is zero
                i, j = off
                add_col(i, j, conj(D.data[i][j]))
                assert not izero(D.data[i][i]), "hyperbolic pivot failed"
                if i != k:
                    swap(k, i)
        pk = D.data[k][k]
        pkinv = inv(pk)
        for i in range(k + 1, n):
            h = D.data[k][i]
            if not izero(h):
                add_col(i, k, neg(mul(pkinv, h)))
    diag = [D.data[i][i] for i in range(n)]
    return diag, X
