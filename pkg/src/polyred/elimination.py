"""Partial elimination of variables.

A square system S on N = n1 + n2 variables is split as z = (z1, z2); the
trailing block R(z2; z1) := S_2(z1, z2) is a system in z2 whose coefficients
are polynomials in z1.  When R is invertible for every z1, the block inverse
R^{-1}(y2; z1) is itself polynomial and the eliminated system
H(z1; y2) = S_1(z1, R^{-1}(y2; z1)) carries all remaining information:

* determinants factor exactly on the elimination variety,
  det J_S(z1, R^{-1}(y2; z1)) = det J_R * det J_H (a Schur-complement fact);
* S has a polynomial inverse on the y2 = 0 slice exactly when H(.; 0) does,
  and then (S^{-1})_1 = H^{-1}, (S^{-1})_2 = R^{-1}(y2; H^{-1}).

Variable bookkeeping: everything stays in one ambient ring of N variables.
In inputs the trailing block means z2; in block inverses and in H the
trailing block means y2.  Identities are checked as exact polynomial
identities in (z1, y2), never pointwise.

Deciding "R invertible for all z1" follows a three-step procedure: a
non-constant det J_R (with respect to the block) is an immediate exact
non-membership witness; an affine block with the gate passed has a closed
form inverse; otherwise a degree-capped block-adic fixed point produces a
candidate that is certified by exact two-sided composition.  A certification
failure at a cap at least d2^(n2-1) (d2 the block degree) is conclusive,
below the cap the outcome is reported undetermined, never guessed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .jacobian import (
    MEMBER,
    NON_MEMBER,
    UNDETERMINED,
    LinearPartError,
    MembershipVerdict,
    PolyMatrix,
    certify_polynomial_inverse,
    classical_degree_cap,
    det_poly,
    jacobian_matrix,
    _det_cofactor,
)
from .poly import Polynomial, PolySystem


class BlockNotInvertibleError(ValueError):
    """The block system is provably not invertible for all parameter values."""

    def __init__(self, message: str, witness: Polynomial):
        super().__init__(message)
        self.witness = witness


class AssemblyError(ValueError):
    def __init__(self, message: str, residual: PolySystem):
        super().__init__(message)
        self.residual = residual


@dataclass
class SplitSystem:
    """A square system with a designated leading parameter block of size n1."""

    S: PolySystem
    n1: int

    def __post_init__(self):
        if not self.S.is_square():
            raise ValueError("splitting needs a square system")
        if not 0 <= self.n1 <= self.S.nvars:
            raise ValueError(f"n1 = {self.n1} out of range 0..{self.S.nvars}")

    @property
    def N(self) -> int:
        return self.S.nvars

    @property
    def n2(self) -> int:
        return self.N - self.n1

    @property
    def r_components(self) -> tuple[Polynomial, ...]:
        return self.S.components[self.n1:]

    @property
    def s1_components(self) -> tuple[Polynomial, ...]:
        return self.S.components[: self.n1]


@dataclass
class PartialInverse:
    """Candidate block inverse; `certified` is set only on exact verification."""

    components: tuple[Polynomial, ...]
    certified: bool
    status: str  # "certified" | "cap_too_low"
    detail: str = ""
    witness: Polynomial | None = None


def split(S: PolySystem, n1: int) -> SplitSystem:
    return SplitSystem(S, n1)


def _block_linear_decomposition(comps, nvars: int, start: int):
    """Split each component into block-constant, block-linear and higher parts."""
    nb = nvars - start
    b0, higher = [], []
    A = [[None] * nb for _ in range(len(comps))]
    for j, p in enumerate(comps):
        b0_terms, hi_terms = {}, {}
        cols = [dict() for _ in range(nb)]
        for exps, c in p.terms.items():
            bd = sum(exps[start:])
            if bd == 0:
                b0_terms[exps] = c
            elif bd == 1:
                i = next(idx for idx in range(start, nvars) if exps[idx])
                cols[i - start][exps[:start] + (0,) * nb] = c
            else:
                hi_terms[exps] = c
        b0.append(Polynomial(nvars, b0_terms))
        higher.append(Polynomial(nvars, hi_terms))
        for i in range(nb):
            A[j][i] = Polynomial(nvars, cols[i])
    return b0, A, higher


def _adjugate(A: list[list[Polynomial]]) -> list[list[Polynomial]]:
    n = len(A)
    if n == 1:
        return [[Polynomial.one(A[0][0].nvars)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[A[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            m = _det_cofactor(minor)
            adj[i][j] = m if (i + j) % 2 == 0 else -m
    return adj


def invert_trailing_block(comps, nvars: int, start: int, cap: int | None = None) -> PartialInverse:
    """Invert a system of nvars-start polynomials in the trailing variables.

    The leading ``start`` variables are parameters.  In the returned
    components the trailing variables are the target coordinates y.
    Raises :class:`BlockNotInvertibleError` on an exact non-invertibility
    witness (non-constant or vanishing block Jacobian determinant).
    """
    nb = nvars - start
    if len(comps) != nb:
        raise ValueError("component count must match the block size")
    if nb == 0:
        return PartialInverse((), True, "certified", "empty block")

    # Gate: the block Jacobian determinant must be a nonzero constant.
    JR = PolyMatrix([[comps[j].partial(start + i) for j in range(nb)] for i in range(nb)])
    detJR = JR.det()
    if not detJR.is_constant() or detJR.constant_term().is_zero():
        raise BlockNotInvertibleError(
            "block Jacobian determinant is not a nonzero constant "
            "(the block is singular for some parameter value)", detJR)

    b0, A, higher = _block_linear_decomposition(comps, nvars, start)
    detA = _det_cofactor(A) if nb > 1 else A[0][0]
    c = detA.constant_term()
    if not detA.is_constant() or c.is_zero():
        # cannot happen once the determinant gate passed; kept as a hard check
        raise BlockNotInvertibleError("block linear part is singular", detA)
    adj = _adjugate(A)
    cinv = c.inverse()
    Ainv = [[adj[i][j].scale(cinv) for j in range(nb)] for i in range(nb)]

    y = [Polynomial.variable(start + i, nvars) for i in range(nb)]
    params_id = [Polynomial.variable(i, nvars) for i in range(start)]

    def a_inv_applied(targets):
        return [sum((Ainv[i][m] * targets[m] for m in range(nb)),
                    Polynomial.zero(nvars)) for i in range(nb)]

    is_affine = all(h.is_zero() for h in higher)
    block_deg = max(p.block_degree(start, nvars) for p in comps)
    bound = classical_degree_cap(block_deg, nb)
    used_cap = bound if cap is None else cap

    if is_affine:
        rinv = a_inv_applied([y[i] - b0[i] for i in range(nb)])
    else:
        # Normalize: Rhat = Ainv . (R - b0) = z_block - W with W of block order >= 2.
        rhat = a_inv_applied([comps[i] - b0[i] for i in range(nb)])
        W = [y[j] - rhat[j] for j in range(nb)]
        for wj in W:
            if any(sum(e[start:]) <= 1 for e in wj.terms):
                raise ArithmeticError("block normalization failed")
        Q = list(y)
        for _ in range(used_cap):
            targets = params_id + Q
            Q = [(y[j] + W[j].compose(targets)).truncate_block(start, nvars, used_cap)
                 for j in range(nb)]
        rinv = [q.compose(params_id + a_inv_applied([y[i] - b0[i] for i in range(nb)]))
                for q in Q]

    # Exact two-sided certification, identically in (parameters, y).
    forward = [p.compose(params_id + rinv) for p in comps]
    backward = [q.compose(params_id + list(comps)) for q in rinv]
    if forward == y and backward == y:
        return PartialInverse(tuple(rinv), True, "certified",
                              f"exact block inverse (cap {used_cap})")
    if used_cap >= bound:
        raise BlockNotInvertibleError(
            f"no polynomial block inverse exists: certification fails at cap {used_cap} "
            f">= d2^(n2-1) = {bound} (imported classical degree bound)",
            detJR)
    return PartialInverse(tuple(rinv), False, "cap_too_low",
                          f"certification failed at cap {used_cap} < bound {bound}; undetermined")


def invert_R(sp: SplitSystem, cap: int | None = None) -> PartialInverse:
    """Block inverse of R(z2; z1); trailing variables of the result mean y2."""
    return invert_trailing_block(list(sp.r_components), sp.N, sp.n1, cap)


def invert_leading_block(comps, nvars: int, n_block: int, cap: int | None = None) -> PartialInverse:
    """Like :func:`invert_trailing_block` but the block is the leading n_block variables."""
    start = nvars - n_block
    perm = [start + i for i in range(n_block)] + [j for j in range(nvars - n_block)]
    # perm maps old block var i -> slot start+i, old param var n_block+j -> slot j.
    permuted = [p.permute_vars(perm) for p in comps]
    out = invert_trailing_block(permuted, nvars, start, cap)
    inv_perm = [0] * nvars
    for old, new in enumerate(perm):
        inv_perm[new] = old
    return PartialInverse(tuple(q.permute_vars(inv_perm) for q in out.components),
                          out.certified, out.status, out.detail, out.witness)


def build_H(sp: SplitSystem, rinv: PartialInverse) -> PolySystem:
    """H(z1; y2) = S_1(z1, R^{-1}(y2; z1)), exactly; needs a certified inverse."""
    if not rinv.certified:
        raise ValueError("build_H needs a certified block inverse")
    targets = [Polynomial.variable(i, sp.N) for i in range(sp.n1)] + list(rinv.components)
    comps = [p.compose(targets) for p in sp.s1_components]
    return PolySystem(comps, nvars=sp.N) if comps else PolySystem([], nvars=sp.N)


def restrict_to_leading(system: PolySystem, n1: int) -> PolySystem:
    """Set the trailing variables to zero and drop them from the ring."""
    targets = [Polynomial.variable(i, n1) for i in range(n1)] + \
              [Polynomial.zero(n1)] * (system.nvars - n1)
    comps = [p.compose(targets) for p in system.components]
    return PolySystem(comps, nvars=n1) if comps else PolySystem([], nvars=n1)


def schur_identity_check(sp: SplitSystem, rinv: PartialInverse):
    """Verify det J_S(z1, R^{-1}(y2; z1)) = det J_R * det J_H in (z1, y2).

    Returns (ok, difference); the difference polynomial is the witness when
    the identity fails.
    """
    if not rinv.certified:
        raise ValueError("the Schur identity check needs a certified block inverse")
    N, n1, n2 = sp.N, sp.n1, sp.n2
    variety = [Polynomial.variable(i, N) for i in range(n1)] + list(rinv.components)

    lhs = jacobian_matrix(sp.S).substitute(variety).det()

    if n2 > 0:
        JR = PolyMatrix([[sp.r_components[j].partial(n1 + i) for j in range(n2)]
                         for i in range(n2)])
        det_r = JR.substitute(variety).det()
    else:
        det_r = Polynomial.one(N)

    if n1 > 0:
        H = build_H(sp, rinv)
        JH = PolyMatrix([[H.components[j].partial(i) for j in range(n1)] for i in range(n1)])
        det_h = JH.det()
    else:
        det_h = Polynomial.one(N)

    diff = lhs - det_r * det_h
    return diff.is_zero(), diff


def _r_failure_verdict(err: BlockNotInvertibleError) -> MembershipVerdict:
    return MembershipVerdict(NON_MEMBER, witness=err.witness,
                             detail=f"trailing block not invertible for all parameters: {err}")


def is_jlin_partial(F: PolySystem, n1: int, cap: int | None = None) -> MembershipVerdict:
    """Constant-determinant test on the elimination variety (z1, R^{-1}(0; z1))."""
    sp = split(F, n1)
    try:
        rinv = invert_R(sp, cap)
    except BlockNotInvertibleError as err:
        return _r_failure_verdict(err)
    if not rinv.certified:
        return MembershipVerdict(UNDETERMINED, detail=rinv.detail)

    variety0 = [Polynomial.variable(i, n1) for i in range(n1)] + \
               [_at_zero_params(q, n1) for q in rinv.components]
    if n1 == 0:
        # The variety is a single exact point; evaluate the determinant there.
        point = [q.constant_term() for q in variety0]
        val = det_poly(jacobian_matrix(F)).evaluate(point)
        if val.is_zero():
            return MembershipVerdict(NON_MEMBER, witness=val,
                                     detail="Jacobian determinant vanishes at R^{-1}(0)")
        return MembershipVerdict(MEMBER, witness=val,
                                 detail=f"Jacobian determinant at R^{-1}(0) is {val}")
    restricted = jacobian_matrix(F).substitute(variety0).det()
    if restricted.is_constant():
        c = restricted.constant_term()
        if c.is_zero():
            return MembershipVerdict(NON_MEMBER, witness=restricted,
                                     detail="determinant vanishes on the elimination variety")
        return MembershipVerdict(MEMBER, witness=c,
                                 detail=f"determinant on the elimination variety is {c}")
    return MembershipVerdict(NON_MEMBER, witness=restricted,
                             detail="determinant is non-constant on the elimination variety")


def _at_zero_params(q: Polynomial, n1: int) -> Polynomial:
    """Evaluate a (z1 | y2)-ring polynomial at y2 = 0, living on n1 variables."""
    targets = [Polynomial.variable(i, n1) for i in range(n1)] + \
              [Polynomial.zero(n1)] * (q.nvars - n1)
    return q.compose(targets)


def is_j_partial(F: PolySystem, n1: int, cap: int | None = None,
                 h_cap: int | None = None) -> MembershipVerdict:
    """Restricted-inverse test: R invertible for all z1 and H(.; 0) invertible.

    On membership the witness is the restricted inverse of F: an n1-variable
    system P with F(P(y1)) = (y1, 0) exactly; its leading block is the
    restriction of F^{-1} to the y2 = 0 slice.
    """
    sp = split(F, n1)
    try:
        rinv = invert_R(sp, cap)
    except BlockNotInvertibleError as err:
        return _r_failure_verdict(err)
    if not rinv.certified:
        return MembershipVerdict(UNDETERMINED, detail=rinv.detail)

    rinv0 = [_at_zero_params(q, n1) for q in rinv.components]
    if n1 == 0:
        P = PolySystem(list(rinv0), nvars=0)
        return MembershipVerdict(MEMBER, witness=P,
                                 detail="empty leading block; the block inverse certifies")

    H0 = restrict_to_leading(build_H(sp, rinv), n1)
    try:
        cert = certify_polynomial_inverse(H0, h_cap)
    except LinearPartError:
        return MembershipVerdict(
            NON_MEMBER, witness=None,
            detail="eliminated system has a singular linear part, hence no inverse")
    if cert.verdict != MEMBER:
        return MembershipVerdict(cert.verdict, witness=cert.witness,
                                 detail=f"eliminated system: {cert.detail}")

    Hinv0: PolySystem = cert.witness
    P = PolySystem(list(Hinv0.components) +
                   [q.compose(list(Hinv0.components)) for q in rinv0], nvars=n1)
    # Exact slice certification: F(P(y1)) = (y1, 0) and H^{-1}(H(z1)) = z1.
    image = F.substitute(list(P.components))
    expected = [Polynomial.variable(i, n1) for i in range(n1)] + \
               [Polynomial.zero(n1)] * sp.n2
    if list(image.components) != expected:
        return MembershipVerdict(
            NON_MEMBER, witness=image,
            detail="restricted inverse failed exact slice composition")
    if Hinv0.after(H0) != PolySystem.identity(n1):
        return MembershipVerdict(
            NON_MEMBER, witness=Hinv0,
            detail="eliminated-system inverse failed exact composition")
    return MembershipVerdict(MEMBER, witness=P,
                             detail="restricted inverse certified by exact composition")


def assemble_inverse(sp: SplitSystem, Hinv: PolySystem, rinv: PartialInverse) -> PolySystem:
    """Full inverse from the pieces: (S^{-1})_1 = H^{-1}, (S^{-1})_2 = R^{-1}(y2; H^{-1}).

    ``Hinv`` must be the parameter-aware inverse of H: n1 components in the
    (y1 | y2) ring.  The assembled system is certified by exact two-sided
    composition; failure raises :class:`AssemblyError` with the residual.
    """
    if not rinv.certified:
        raise ValueError("assemble_inverse needs a certified block inverse")
    N, n1 = sp.N, sp.n1
    if len(Hinv.components) != n1 or Hinv.nvars != N:
        raise ValueError("Hinv must have n1 components in the ambient ring")
    targets = list(Hinv.components) + [Polynomial.variable(n1 + j, N) for j in range(sp.n2)]
    tail = [q.compose(targets) for q in rinv.components]
    Sinv = PolySystem(list(Hinv.components) + tail, nvars=N)
    ident = PolySystem.identity(N)
    fwd = sp.S.after(Sinv)
    bwd = Sinv.after(sp.S)
    if fwd != ident or bwd != ident:
        residual = fwd if fwd != ident else bwd
        raise AssemblyError("assembled inverse failed exact composition", residual)
    return Sinv


def invert_H_parametrized(sp: SplitSystem, rinv: PartialInverse,
                          cap: int | None = None) -> PartialInverse:
    """Parameter-aware inverse of H in its leading block (y2 stays a parameter)."""
    H = build_H(sp, rinv)
    return invert_leading_block(list(H.components), sp.N, sp.n1, cap)
