"""Representations of the four-vertex cycle of linear mappings.

A quadruple holds maps A1: U1 -> V1, B: U1 -> U2, C: V1 -> V2 and
A2: V2 -> U2 as matrices (A1 is n1 x m1, A2 is m2 x n2, B is m2 x m1,
C is n2 x n1) with dimension vector (m1, m2, n2, n1).  The module knows
the complete catalog of indecomposables, splits arbitrary quadruples into
catalog items with exact isomorphism certificates, and isolates the part
on which all four maps are bijective.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DecompositionError, FieldMismatch, PairingFailure
from .matrices import (
    Matrix,
    adjoint,
    inverse,
    is_invertible,
    rank,
    rref,
    right_nullspace,
    solve_right,
)
from .scalars import RATIONAL, FieldSpec

VERTICES = ("phi1", "phi2", "psi1", "psi2")  # U1, U2, V1, V2 components of homs


@dataclass
class Quadruple:
    A1: Matrix  # n1 x m1
    A2: Matrix  # m2 x n2
    B: Matrix  # m2 x m1
    C: Matrix  # n2 x n1
    field: FieldSpec

    def __post_init__(self):
        m1, m2, n2, n1 = self.dims
        if self.B.cols != m1 or self.B.rows != m2 or self.C.rows != n2 or self.C.cols != n1:
            raise ValueError("inconsistent quadruple shapes")

    @property
    def dims(self):
        return (self.A1.cols, self.A2.rows, self.A2.cols, self.A1.rows)

    def vertex_dims(self):
        m1, m2, n2, n1 = self.dims
        return {"phi1": m1, "phi2": m2, "psi1": n1, "psi2": n2}

    def total_dim(self):
        return sum(self.dims)

    def __eq__(self, other):
        return (
            isinstance(other, Quadruple)
            and self.field == other.field
            and self.A1 == other.A1
            and self.A2 == other.A2
            and self.B == other.B
            and self.C == other.C
        )


def zero_quadruple(spec: FieldSpec) -> Quadruple:
    z = Matrix.zeros(0, 0, spec.ops)
    return Quadruple(z, z, z, z, spec)


def direct_sum_quadruple(P: Quadruple, Q: Quadruple) -> Quadruple:
    if P.field != Q.field:
        raise FieldMismatch("direct sum over different field specs")
    ops = P.A1.ops
    return Quadruple(
        Matrix.block_diag([P.A1, Q.A1], ops),
        Matrix.block_diag([P.A2, Q.A2], ops),
        Matrix.block_diag([P.B, Q.B], ops),
        Matrix.block_diag([P.C, Q.C], ops),
        P.field,
    )


def dual_quadruple(P: Quadruple) -> Quadruple:
    """(A2*, A1*, eps B*, delta C*) on the dual spaces; dims become (m2, m1, n1, n2)."""
    spec = P.field
    Bs = adjoint(P.B, spec)
    Cs = adjoint(P.C, spec)
    if spec.epsilon == -1:
        Bs = -Bs
    if spec.delta == -1:
        Cs = -Cs
    return Quadruple(adjoint(P.A2, spec), adjoint(P.A1, spec), Bs, Cs, spec)


@dataclass
class QuadHom:
    """Vertex components of a homomorphism between quadruples."""

    phi1: Matrix
    phi2: Matrix
    psi1: Matrix
    psi2: Matrix

    def component(self, name):
        return getattr(self, name)

    def compose(self, other: "QuadHom") -> "QuadHom":
        """self after other (matrix products target <- middle <- source)."""
        return QuadHom(
            self.phi1 @ other.phi1,
            self.phi2 @ other.phi2,
            self.psi1 @ other.psi1,
            self.psi2 @ other.psi2,
        )

    def dual(self, spec: FieldSpec) -> "QuadHom":
        """Dual homomorphism (Phi2*, Phi1*, Psi2*, Psi1*) between the dual quadruples."""
        return QuadHom(
            adjoint(self.phi2, spec),
            adjoint(self.phi1, spec),
            adjoint(self.psi2, spec),
            adjoint(self.psi1, spec),
        )

    def is_invertible(self):
        return all(
            is_invertible(m) for m in (self.phi1, self.phi2, self.psi1, self.psi2)
        )

    def invert(self) -> "QuadHom":
        mats = []
        for m in (self.phi1, self.phi2, self.psi1, self.psi2):
            mi = inverse(m)
            if mi is None:
                raise ValueError("hom is not invertible")
            mats.append(mi)
        return QuadHom(*mats)

    def add(self, other: "QuadHom") -> "QuadHom":
        return QuadHom(
            self.phi1 + other.phi1,
            self.phi2 + other.phi2,
            self.psi1 + other.psi1,
            self.psi2 + other.psi2,
        )

    def sub(self, other: "QuadHom") -> "QuadHom":
        return QuadHom(
            self.phi1 - other.phi1,
            self.phi2 - other.phi2,
            self.psi1 - other.psi1,
            self.psi2 - other.psi2,
        )

    def scale_right(self, c) -> "QuadHom":
        return QuadHom(
            self.phi1.scale_right(c),
            self.phi2.scale_right(c),
            self.psi1.scale_right(c),
            self.psi2.scale_right(c),
        )

    def scale_left(self, c) -> "QuadHom":
        return QuadHom(
            self.phi1.scale_left(c),
            self.phi2.scale_left(c),
            self.psi1.scale_left(c),
            self.psi2.scale_left(c),
        )

    def is_zero(self):
        return all(m.is_zero() for m in (self.phi1, self.phi2, self.psi1, self.psi2))

    @staticmethod
    def identity(P: Quadruple) -> "QuadHom":
        m1, m2, n2, n1 = P.dims
        ops = P.A1.ops
        return QuadHom(
            Matrix.identity(m1, ops),
            Matrix.identity(m2, ops),
            Matrix.identity(n1, ops),
            Matrix.identity(n2, ops),
        )

    @staticmethod
    def hstack(homs) -> "QuadHom":
        return QuadHom(
            Matrix.hstack([h.phi1 for h in homs]),
            Matrix.hstack([h.phi2 for h in homs]),
            Matrix.hstack([h.psi1 for h in homs]),
            Matrix.hstack([h.psi2 for h in homs]),
        )


def hom_residuals(X: Quadruple, Y: Quadruple, h: QuadHom):
    """The four intertwining residuals of h: X -> Y (all zero for a hom)."""
    return (
        h.psi1 @ X.A1 - Y.A1 @ h.phi1,
        h.phi2 @ X.A2 - Y.A2 @ h.psi2,
        h.phi2 @ X.B - Y.B @ h.phi1,
        h.psi2 @ X.C - Y.C @ h.psi1,
    )


def is_hom(X: Quadruple, Y: Quadruple, h: QuadHom) -> bool:
    return all(r.is_zero() for r in hom_residuals(X, Y, h))


def verify_quad_iso(X: Quadruple, Y: Quadruple, h: QuadHom):
    """Check the four intertwining identities and exact bijectivity.

    Returns (ok, report); the report names the first failure.
    """
    names = ("psi1*A1 = A1'*phi1", "phi2*A2 = A2'*psi2", "phi2*B = B'*phi1", "psi2*C = C'*psi1")
    dx, dy = X.vertex_dims(), Y.vertex_dims()
    for v in VERTICES:
        m = h.component(v)
        if m.rows != dy[v] or m.cols != dx[v]:
            return False, f"component {v} has shape {m.rows}x{m.cols}, expected {dy[v]}x{dx[v]}"
    for name, res in zip(names, hom_residuals(X, Y, h)):
        if not res.is_zero():
            return False, f"intertwining identity {name} fails"
    for v in VERTICES:
        if not is_invertible(h.component(v)):
            return False, f"component {v} is not invertible"
    return True, "ok"


# -- catalog of indecomposables -------------------------------------------

STRING_FAMILIES = (
    "las1_first",
    "las1_second",
    "las2_1",
    "las2_2",
    "las2_3",
    "las2_4",
    "las2_dual_1",
    "las2_dual_2",
    "las2_dual_3",
    "las2_dual_4",
    "nilp_a1",
    "nilp_a2",
    "nilp_b",
    "nilp_c",
)

# families whose dual class is another (or the same) family
DUAL_FAMILY = {
    "las1_first": "las1_first",
    "las1_second": "las1_second",
    "las2_1": "las2_dual_1",
    "las2_2": "las2_dual_2",
    "las2_3": "las2_dual_3",
    "las2_4": "las2_dual_4",
    "las2_dual_1": "las2_1",
    "las2_dual_2": "las2_2",
    "las2_dual_3": "las2_3",
    "las2_dual_4": "las2_4",
    "nilp_a1": "nilp_a2",
    "nilp_a2": "nilp_a1",
    "nilp_b": "nilp_b",
    "nilp_c": "nilp_c",
}


def family_dims(family: str, r: int):
    return {
        "las1_first": (r, r, r - 1, r - 1),
        "las1_second": (r - 1, r - 1, r, r),
        "las2_1": (r, r, r - 1, r),
        "las2_2": (r, r - 1, r, r),
        "las2_3": (r - 1, r, r - 1, r - 1),
        "las2_4": (r - 1, r - 1, r, r - 1),
        "las2_dual_1": (r, r, r, r - 1),
        "las2_dual_2": (r - 1, r, r, r),
        "las2_dual_3": (r, r - 1, r - 1, r - 1),
        "las2_dual_4": (r - 1, r - 1, r - 1, r),
        "nilp_a1": (r, r, r, r),
        "nilp_a2": (r, r, r, r),
        "nilp_b": (r, r, r, r),
        "nilp_c": (r, r, r, r),
        "cycle": (r, r, r, r),
    }[family]


# corner rank deficiencies one copy contributes: (kernel flag, cokernel flag)
FAMILY_FLAGS = {
    "las1_first": ("kA1", "cA2"),
    "las1_second": ("cA1", "kA2"),
    "las2_1": ("cA2", "kC"),
    "las2_2": ("kA2", "kB"),
    "las2_3": ("cA2", "cB"),
    "las2_4": ("kA2", "cC"),
    "las2_dual_1": ("kA1", "cC"),
    "las2_dual_2": ("cA1", "cB"),
    "las2_dual_3": ("kA1", "kB"),
    "las2_dual_4": ("cA1", "kC"),
    "nilp_a1": ("kA1", "cA1"),
    "nilp_a2": ("kA2", "cA2"),
    "nilp_b": ("kB", "cB"),
    "nilp_c": ("kC", "cC"),
}


def synth_quadruple(family: str, r: int, spec: FieldSpec, lam=None) -> Quadruple:
    """Canonical matrices of one catalog indecomposable."""
    from .catalog import make_F, make_G, make_jordan

    ops = spec.ops
    I = lambda k: Matrix.identity(k, ops)
    F = make_F(r, ops)
    G = make_G(r, ops)
    Ft, Gt = F.transpose(), G.transpose()
    if family == "las1_first":
        return Quadruple(F, Gt, I(r), I(r - 1), spec)
    if family == "las1_second":
        return Quadruple(Ft, G, I(r - 1), I(r), spec)
    if family == "las2_1":
        return Quadruple(I(r), Ft, I(r), G, spec)
    if family == "las2_2":
        return Quadruple(I(r), F, G, I(r), spec)
    if family == "las2_3":
        return Quadruple(I(r - 1), Ft, Gt, I(r - 1), spec)
    if family == "las2_4":
        return Quadruple(I(r - 1), F, I(r - 1), Gt, spec)
    if family == "las2_dual_1":
        return Quadruple(F, I(r), I(r), Gt, spec)
    if family == "las2_dual_2":
        return Quadruple(Ft, I(r), Gt, I(r), spec)
    if family == "las2_dual_3":
        return Quadruple(F, I(r - 1), G, I(r - 1), spec)
    if family == "las2_dual_4":
        return Quadruple(Ft, I(r - 1), I(r - 1), G, spec)
    if family == "nilp_a1":
        return Quadruple(make_jordan(r, ops.zero, ops), I(r), I(r), I(r), spec)
    if family == "nilp_a2":
        return Quadruple(I(r), make_jordan(r, ops.zero, ops).transpose(), I(r), I(r), spec)
    if family == "nilp_b":
        return Quadruple(I(r), I(r), make_jordan(r, ops.zero, ops), I(r), spec)
    if family == "nilp_c":
        return Quadruple(I(r), I(r), I(r), make_jordan(r, ops.zero, ops), spec)
    if family == "cycle":
        if lam is None or ops.is_zero(lam):
            raise ValueError("cycle items need a nonzero eigenvalue")
        return Quadruple(I(r), make_jordan(r, lam, ops), I(r), I(r), spec)
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class QuadSummand:
    """Descriptor of one catalog indecomposable (family, size, eigenvalue)."""

    family: str
    r: int
    lam: object = None

    def dims(self):
        return family_dims(self.family, self.r)


def synth_summand_quad(s: QuadSummand, spec: FieldSpec) -> Quadruple:
    return synth_quadruple(s.family, s.r, spec, lam=s.lam)


# -- hom space solver ------------------------------------------------------


def _is_central_matrix(M: Matrix) -> bool:
    if M.ops.name == RATIONAL:
        return True
    ncomp = M.ops.ncomp
    for row in M.data:
        for x in row:
            comps = M.ops.components(x)
            if any(c != 0 for c in comps[1:]):
                return False
    return True


def _solve_hom_system(eqs, shapes, ops):
    """Common core: equations Lvar * S = P * Rvar with S rational-central.

    Substitutes variables through invertible S matrices, assembles the
    residual constraints as one left-linear system and returns a right basis
    of solutions as dicts  var name -> Matrix.
    """
    exprs = {}
    used = set()

    def propagate():
        changed = True
        while changed:
            changed = False
            for idx, (lv, S, Pm, rv) in enumerate(eqs):
                if idx in used or lv in exprs or rv not in exprs:
                    continue
                if S.rows != S.cols or not is_invertible(S):
                    continue
                Si = inverse(S)
                L0, b, R0 = exprs[rv]
                L1 = Pm if L0 is None else Pm @ L0
                R1 = Si if R0 is None else R0 @ Si
                exprs[lv] = (L1, b, R1)
                used.add(idx)
                changed = True

    bases = []
    for v in ("phi1", "psi1", "phi2", "psi2"):
        if v not in exprs:
            exprs[v] = (None, v, None)
            bases.append(v)
            propagate()

    offsets = {}
    total = 0
    for b in bases:
        offsets[b] = total
        total += shapes[b][0] * shapes[b][1]

    rows = []
    izero = ops.is_zero
    mul = ops.mul
    add = ops.add
    zero = ops.zero

    def emit(constraint_terms):
        # constraint_terms: list of (sign, L or None, base, R or None); sum == 0
        # output shape comes from the first term
        sgn0, L0, b0, R0 = constraint_terms[0]
        p = L0.rows if L0 is not None else shapes[b0][0]
        q = R0.cols if R0 is not None else shapes[b0][1]
        if p == 0 or q == 0:
            return
        for i in range(p):
            for j in range(q):
                row = [zero] * total
                touched = False
                for sgn, L, b, R in constraint_terms:
                    brows, bcols = shapes[b]
                    off = offsets[b]
                    for a in range(brows):
                        la = L.data[i][a] if L is not None else (ops.one if i == a else zero)
                        if izero(la):
                            continue
                        for c in range(bcols):
                            rc = R.data[c][j] if R is not None else (ops.one if c == j else zero)
                            if izero(rc):
                                continue
                            coeff = mul(la, rc)
                            if sgn < 0:
                                coeff = ops.neg(coeff)
                            row[off + a * bcols + c] = add(row[off + a * bcols + c], coeff)
                            touched = True
                if touched:
                    rows.append(row)

    for idx, (lv, S, Pm, rv) in enumerate(eqs):
        if idx in used:
            continue
        Ll, bl, Rl = exprs[lv]
        Lr, br, Rr = exprs[rv]
        RlS = S if Rl is None else Rl @ S
        PLr = Pm if Lr is None else Pm @ Lr
        emit([(1, Ll, bl, RlS), (-1, PLr, br, Rr)])

    if total == 0:
        # no unknowns: only the zero hom
        return [], bases, exprs
    if not rows:
        ker = Matrix.identity(total, ops)
    else:
        ker = right_nullspace(Matrix.from_rows(rows, ops, cols=total))

    out = []
    for k in range(ker.cols):
        assign = {}
        for b in bases:
            brows, bcols = shapes[b]
            off = offsets[b]
            Mb = Matrix.zeros(brows, bcols, ops)
            for a in range(brows):
                for c in range(bcols):
                    Mb.data[a][c] = ker.data[off + a * bcols + c][k]
            assign[b] = Mb
        full = {}
        for v in VERTICES:
            L, b, R = exprs[v]
            Mv = assign[b]
            if L is not None:
                Mv = L @ Mv
            if R is not None:
                Mv = Mv @ R
            full[v] = Mv
        out.append(full)
    return out, bases, exprs


def hom_space(S: Quadruple, P: Quadruple):
    """Right basis of Hom(S, P) as QuadHom list.  S must have central entries."""
    for M in (S.A1, S.A2, S.B, S.C):
        if not _is_central_matrix(M):
            raise ValueError("hom_space needs a source with central (rational) entries")
    m1, m2, n2, n1 = S.dims
    pm1, pm2, pn2, pn1 = P.dims
    shapes = {"phi1": (pm1, m1), "phi2": (pm2, m2), "psi1": (pn1, n1), "psi2": (pn2, n2)}
    eqs = [
        ("psi1", S.A1, P.A1, "phi1"),
        ("phi2", S.A2, P.A2, "psi2"),
        ("phi2", S.B, P.B, "phi1"),
        ("psi2", S.C, P.C, "psi1"),
    ]
    sols, _, _ = _solve_hom_system(eqs, shapes, P.A1.ops)
    return [QuadHom(s["phi1"], s["phi2"], s["psi1"], s["psi2"]) for s in sols]


def hom_space_into(P: Quadruple, S: Quadruple):
    """Left basis of Hom(P, S) (S with central entries), via the starred system."""
    from .matrices import _star

    for M in (S.A1, S.A2, S.B, S.C):
        if not _is_central_matrix(M):
            raise ValueError("hom_space_into needs a target with central (rational) entries")
    m1, m2, n2, n1 = S.dims
    pm1, pm2, pn2, pn1 = P.dims
    # unknowns are the starred components: shape of phi1^dag is pm1 x m1 etc.
    shapes = {"phi1": (pm1, m1), "phi2": (pm2, m2), "psi1": (pn1, n1), "psi2": (pn2, n2)}
    eqs = [
        ("phi1", S.A1.transpose(), _star(P.A1), "psi1"),
        ("psi2", S.A2.transpose(), _star(P.A2), "phi2"),
        ("phi1", S.B.transpose(), _star(P.B), "phi2"),
        ("psi1", S.C.transpose(), _star(P.C), "psi2"),
    ]
    sols, _, _ = _solve_hom_system(eqs, shapes, P.A1.ops)
    return [
        QuadHom(_star(s["phi1"]), _star(s["phi2"]), _star(s["psi1"]), _star(s["psi2"]))
        for s in sols
    ]


def _unit_scalars(ops):
    """Q-basis units of the coefficient system (1; 1,i; 1,i,j,k)."""
    units = [ops.one]
    if ops.ncomp >= 2:
        zero = ops.zero
        comps = list(ops.components(zero))
        for k in range(1, ops.ncomp):
            c = list(comps)
            c[k] = ops.components(ops.one)[0]
            units.append(ops.from_components(tuple(c)))
    return units


def find_split_pair(S: Quadruple, P: Quadruple, fbasis=None, gbasis=None):
    """Split pair (u, p) with p . u = id_S, or None when S is not a summand.

    Scans a Q-basis of Hom(P,S) x Hom(S,P) for an invertible composite; by
    Krull-Schmidt and locality of End(S) one exists exactly when S | P.
    """
    if fbasis is None:
        fbasis = hom_space(S, P)
    if not fbasis:
        return None
    if gbasis is None:
        gbasis = hom_space_into(P, S)
    if not gbasis:
        return None
    ops = P.A1.ops
    units = _unit_scalars(ops)
    for g in gbasis:
        for f in fbasis:
            core = g.compose(f)
            for eb in units:
                for eg in units:
                    h = core
                    if not (eb == ops.one and eg == ops.one):
                        h = g.scale_left(eb).compose(f.scale_right(eg))
                    if h.is_invertible():
                        u = f.scale_right(eg) if eg != ops.one else f
                        gg = g.scale_left(eb) if eb != ops.one else g
                        p = h.invert().compose(gg)
                        return u, p
    return None


def split_complement(P: Quadruple, p: QuadHom):
    """Complement data for a split retraction p: P -> S (p has a section).

    Returns (K, Pres): per-vertex kernel bases K (a QuadHom-shaped embedding
    of the complement) and the restricted quadruple.
    """
    ks = {v: right_nullspace(p.component(v)) for v in VERTICES}
    emb = QuadHom(ks["phi1"], ks["phi2"], ks["psi1"], ks["psi2"])
    return emb, restrict_through(P, emb)


def restrict_through(P: Quadruple, emb: QuadHom) -> Quadruple:
    """Quadruple induced on a subrepresentation given by per-vertex bases."""
    A1r = solve_right(emb.psi1, P.A1 @ emb.phi1)
    A2r = solve_right(emb.phi2, P.A2 @ emb.psi2)
    Br = solve_right(emb.phi2, P.B @ emb.phi1)
    Cr = solve_right(emb.psi2, P.C @ emb.psi1)
    if A1r is None or A2r is None or Br is None or Cr is None:
        raise PairingFailure("complement is not a subrepresentation")
    return Quadruple(A1r, A2r, Br, Cr, P.field)


# -- fingerprint detection --------------------------------------------------


def _image(M: Matrix, W: Matrix) -> Matrix:
    from .matrices import column_space

    return column_space(M @ W)


def _preimage(M: Matrix, W: Matrix) -> Matrix:
    from .matrices import preimage

    return preimage(M, W)


def _theta_sequence(P: Quadruple, start: int, forward: bool, from_full: bool, max_steps: int):
    """Dims of the iterated cycle relation applied to the zero (or full) subspace.

    The cycle is walked as U1 -B-> U2 <-A2- V2 <-C- V1 <-A1- U1; ``forward``
    walks with B as the only forward map, the reverse orientation swaps the
    roles.  ``start`` rotates the starting vertex (0=U1, 1=U2, 2=V2, 3=V1).
    Iterations from the zero subspace see kernel-type string ends, iterations
    from the full space see cokernel-type ends; both are additive over direct
    sums and eventually 4-periodic.
    """
    ops = P.A1.ops
    m1, m2, n2, n1 = P.dims
    sizes = [m1, m2, n2, n1]
    # U1 -> U2 : image under B;  U2 -> V2 : preimage under A2;
    # V2 -> V1 : preimage under C;  V1 -> U1 : preimage under A1.
    def step_fwd(v, W):
        if v == 0:
            return 1, _image(P.B, W)
        if v == 1:
            return 2, _preimage(P.A2, W)
        if v == 2:
            return 3, _preimage(P.C, W)
        return 0, _preimage(P.A1, W)

    def step_bwd(v, W):
        if v == 0:
            return 3, _image(P.A1, W)
        if v == 3:
            return 2, _image(P.C, W)
        if v == 2:
            return 1, _image(P.A2, W)
        return 0, _preimage(P.B, W)

    step = step_fwd if forward else step_bwd
    v = start
    if from_full:
        W = Matrix.identity(sizes[v], ops)
    else:
        W = Matrix.zeros(sizes[v], 0, ops)
    seq = []
    for _ in range(max_steps):
        nv, nW = step(v, W)
        v, W = nv, nW
        seq.append(W.cols)
        if len(seq) >= 8 and seq[-1] == seq[-5]:
            # one full lap without change: 4-periodic from here on
            break
    while len(seq) < max_steps:
        seq.append(seq[-4] if len(seq) >= 4 else 0)
    return seq


def quad_fingerprint(P: Quadruple, max_steps: int):
    """Stacked relation-iteration dims; additive over direct sums."""
    seqs = []
    for start in range(4):
        for forward in (True, False):
            for from_full in (False, True):
                seqs.extend(_theta_sequence(P, start, forward, from_full, max_steps))
    return seqs


_PROFILE_CACHE = {}


def _family_profile(family: str, r: int, max_steps: int):
    key = (family, r, max_steps)
    if key not in _PROFILE_CACHE:
        from .scalars import IDENTITY

        spec = FieldSpec(RATIONAL, IDENTITY)
        S = synth_quadruple(family, r, spec)
        _PROFILE_CACHE[key] = quad_fingerprint(S, max_steps) + list(S.dims)
    return _PROFILE_CACHE[key]


def detect_string_multiset(P: Quadruple):
    """Multiplicities of the string (non-bijective) summands from rank data.

    Returns (dict[(family, r)] -> mult, regular_dim) or None when the
    fingerprint system is not uniquely solvable (callers then fall back to
    exhaustive peeling).
    """
    from fractions import Fraction

    m1, m2, n2, n1 = P.dims
    dmax = max(P.dims)
    if dmax == 0:
        return {}, 0
    max_steps = 4 * (dmax + 2)
    meas = quad_fingerprint(P, max_steps) + list(P.dims)

    cands = []
    for family in STRING_FAMILIES:
        for r in range(1, dmax + 2):
            d = family_dims(family, r)
            if d[0] <= m1 and d[1] <= m2 and d[2] <= n2 and d[3] <= n1:
                cands.append((family, r))
    cols = [_family_profile(f, r, max_steps) for f, r in cands]
    # the all-bijective part contributes nothing to the sequences, one to dims
    reg_col = [0] * (len(meas) - 4) + [1, 1, 1, 1]
    cols.append(reg_col)

    nrows = len(meas)
    ncols = len(cols)
    data = [[Fraction(cols[j][i]) for j in range(ncols)] + [Fraction(meas[i])] for i in range(nrows)]
    from .scalars import RationalOps

    Msys = Matrix.from_rows(data, RationalOps, cols=ncols + 1)
    R, pivots = rref(Msys, ncols_main=ncols)
    if len(pivots) < ncols:
        return None  # underdetermined
    for i in range(len(pivots), nrows):
        if R.data[i][ncols] != 0:
            return None  # inconsistent measurement (should not happen)
    mults = {}
    reg_dim = 0
    for i, c in enumerate(pivots):
        val = R.data[i][ncols]
        if val.denominator != 1 or val < 0:
            return None
        if c == len(cands):
            reg_dim = int(val)
        elif val:
            mults[cands[c]] = int(val)
    return mults, reg_dim


# -- full decomposition -----------------------------------------------------


@dataclass
class QuadDecomposition:
    """items[k] is (QuadSummand, inclusion QuadHom into the input quadruple)."""

    items: list
    iso: QuadHom  # direct sum of the items -> input quadruple

    def summands(self):
        return [s for s, _ in self.items]


def _plan_from_mults(mults):
    """Peeling order for a known multiset: largest items first."""
    order = sorted(
        mults.keys(),
        key=lambda fr: (-sum(family_dims(*fr)), STRING_FAMILIES.index(fr[0]), -fr[1]),
    )
    out = []
    for fam_r in order:
        out.extend([fam_r] * mults[fam_r])
    return out


def peel_strings(P: Quadruple):
    """Split off every non-bijective catalog summand.

    Returns (items, embed, Preg): items are (QuadSummand, inclusion into P),
    embed is the accumulated embedding of the remaining part into P and Preg
    the remaining quadruple (all four maps bijective).
    """
    spec = P.field
    detected = detect_string_multiset(P)
    if detected is None:
        return _peel_strings_fallback(P)
    current = P
    embed = QuadHom.identity(P)
    items = []
    queue = _plan_from_mults(detected[0])
    for family, r in queue:
        S = synth_quadruple(family, r, spec)
        pair = find_split_pair(S, current)
        if pair is None:
            # fingerprint lied; rebuild exhaustively
            return _peel_strings_fallback(P)
        u, p = pair
        items.append((QuadSummand(family, r), embed.compose(u)))
        emb, current = split_complement(current, p)
        embed = embed.compose(emb)
    # sanity: the remainder must be all-bijective
    for M in (current.A1, current.A2, current.B, current.C):
        if not is_invertible(M):
            return _peel_strings_fallback(P)
    return items, embed, current


def _all_candidates(dims):
    m1, m2, n2, n1 = dims
    cands = []
    for family in STRING_FAMILIES:
        for r in range(max(dims) + 1, 0, -1):
            d = family_dims(family, r)
            if d[0] <= m1 and d[1] <= m2 and d[2] <= n2 and d[3] <= n1:
                cands.append((family, r))
    cands.sort(key=lambda fr: (-sum(family_dims(*fr)), STRING_FAMILIES.index(fr[0])))
    return cands


def _peel_strings_fallback(P: Quadruple):
    spec = P.field
    current = P
    embed = QuadHom.identity(P)
    items = []
    while current.total_dim() > 0:
        hit = None
        for family, r in _all_candidates(current.dims):
            S = synth_quadruple(family, r, spec)
            pair = find_split_pair(S, current)
            if pair is not None:
                hit = (family, r, pair)
                break
        if hit is None:
            break
        family, r, (u, p) = hit
        items.append((QuadSummand(family, r), embed.compose(u)))
        emb, current = split_complement(current, p)
        embed = embed.compose(emb)
    for M in (current.A1, current.A2, current.B, current.C):
        if not is_invertible(M):
            raise DecompositionError("exhaustive string peeling left a non-bijective remainder")
    return items, embed, current


def regularize_cycle(P: Quadruple):
    """(regular, singular, (iso, iso_inv)): P = regular (+) singular, certified.

    The regular part has all four maps bijective; the singular part is the
    direct sum of the peeled canonical string items and contains no
    all-bijective summand.
    """
    items, embed, Preg = peel_strings(P)
    spec = P.field
    sing = zero_quadruple(spec)
    for s, _ in items:
        sing = direct_sum_quadruple(sing, synth_summand_quad(s, spec))
    blocks = [embed] + [u for _, u in items]
    if Preg.total_dim() + sing.total_dim() == 0:
        iso = QuadHom.identity(P)
    else:
        iso = QuadHom.hstack(blocks)
    ok, msg = verify_quad_iso(direct_sum_quadruple(Preg, sing), P, iso)
    if not ok:
        raise PairingFailure(f"regularization certificate failed: {msg}")
    return Preg, sing, (iso, iso.invert())


def cycle_transport(P: Quadruple) -> Matrix:
    """The around-the-cycle operator B^{-1} A2 C A1 of an all-bijective quadruple."""
    Binv = inverse(P.B)
    return Binv @ (P.A2 @ (P.C @ P.A1))


def regular_items(Preg: Quadruple):
    """Jordan split of the all-bijective part into cycle items with inclusions."""
    from .jordan import jordan_form

    if Preg.total_dim() == 0:
        return []
    omega = cycle_transport(Preg)
    blocks, T = jordan_form(omega, Preg.field)  # omega T = T (+ J_r(lam))
    items = []
    col = 0
    for lam, r in blocks:
        Tb = T.submatrix(0, T.rows, col, col + r)
        col += r
        phi1 = Tb
        psi1 = Preg.A1 @ phi1
        phi2 = Preg.B @ phi1
        psi2 = Preg.C @ psi1
        items.append((QuadSummand("cycle", r, lam=lam), QuadHom(phi1, phi2, psi1, psi2)))
    return items


def decompose_quadruple(P: Quadruple) -> QuadDecomposition:
    """Full Krull-Schmidt decomposition into catalog items with certificates."""
    items, embed, Preg = peel_strings(P)
    reg = regular_items(Preg)
    all_items = [(s, embed.compose(u)) for s, u in reg] + items
    spec = P.field
    if not all_items:
        iso = QuadHom.identity(P)
        dec = QuadDecomposition([], iso)
        return dec
    total = zero_quadruple(spec)
    for s, _ in all_items:
        total = direct_sum_quadruple(total, synth_summand_quad(s, spec))
    iso = QuadHom.hstack([u for _, u in all_items])
    ok, msg = verify_quad_iso(total, P, iso)
    if not ok:
        raise PairingFailure(f"decomposition certificate failed: {msg}")
    return QuadDecomposition(all_items, iso)
