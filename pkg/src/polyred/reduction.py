"""Degree reduction of polynomial systems by one, at the price of dimension.

A square system F of degree d >= 3 on n variables maps injectively to a
system on N = n(n+1) variables of degree d - 1.  The ambient variables split
into the original block z1 (indices 0..n-1) and an auxiliary n x n block; the
auxiliary slot (i, j) sits at flat index (i+1)*n + j (0-based internally; the
file format reports 1-based pairs, matching the flat rule i*n + j there).

Two variants are implemented, because they genuinely differ:

* ``algebraic``: the image's first block is the fixed bilinear form
  sum_j z2[i][j] * z1[j], and the auxiliary block stores the Euler-weighted
  derivative sums psi[i][j] = sum_c (1/c) d(F_c)_i/dz_j of all homogeneous
  parts F_c.  It accepts any quadratic part.
* ``qft``: couplings of degree 3..d-1 are kept in place, the degree-d
  coupling is relocated onto the auxiliary block (one derivative slice per
  j), and unit bilinear couplings z_j * z_aux(i,j) are added.  Its quadratic
  couplings must vanish; accepting them would silently conflate the two
  published transform rules, so the precondition is checked and errors.

For both variants the auxiliary block of the image is affine in z2 with
identity linear part, so the elimination block inverse is trivially
certified, and H(.; 0) recovers F exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .couplings import CouplingTensor, _exps_of_tuple, _tuple_of_exps
from .gaussian import Gaussian, ONE
from .jacobian import (
    NON_MEMBER,
    LinearPartError,
    MembershipVerdict,
    certify_polynomial_inverse,
    is_jlin,
    jacobian_matrix,
)
from .elimination import (
    build_H,
    invert_R,
    is_j_partial,
    is_jlin_partial,
    restrict_to_leading,
    split,
)
from .poly import Polynomial, PolySystem
from .series import compose_poly, formal_inverse_fixed_point

ALGEBRAIC = "algebraic"
QFT = "qft"


def aux_index(n: int, i: int, j: int) -> int:
    """Flat ambient index of auxiliary slot (i, j), all 0-based."""
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError("auxiliary slot out of range")
    return (i + 1) * n + j


@dataclass
class ReducedSystem:
    system: PolySystem
    source_dim: int
    variant: str

    def index_map(self) -> list[list[int]]:
        """[i, j, flat] triples, 1-based as used in the file format."""
        n = self.source_dim
        return [[i + 1, j + 1, aux_index(n, i, j) + 1]
                for i in range(n) for j in range(n)]

    def provenance(self) -> dict:
        return {"source_dim": self.source_dim, "variant": self.variant,
                "index_map": self.index_map()}


@dataclass
class ImageCheck:
    in_image: bool
    preimage: PolySystem | None = None
    couplings: CouplingTensor | None = None
    detail: str = ""


def euler_weighted_gradient(F: PolySystem) -> list[list[Polynomial]]:
    """psi[i][j] = sum_c (1/c) d(F_c)_i / dz_j over the homogeneous parts F_c.

    Contracting with z recovers F: sum_j z_j psi[i][j] = F_i (the classical
    homogeneous-function identity applied degree by degree).
    """
    n = F.nvars
    psi = [[Polynomial.zero(n) for _ in range(n)] for _ in range(n)]
    for i, p in enumerate(F.components):
        for c in range(1, max(p.degree(), 0) + 1):
            part = p.homogeneous_part(c)
            if part.is_zero():
                continue
            w = Gaussian(Fraction(1, c))
            for j in range(n):
                dp = part.partial(j)
                if not dp.is_zero():
                    psi[i][j] = psi[i][j] + dp.scale(w)
    return psi


def phi_algebraic(F: PolySystem) -> ReducedSystem:
    """Dimension-raising, degree-lowering embedding; the derivative-sum variant."""
    if not F.is_square():
        raise ValueError("reduction needs a square system")
    if F.degree_bound < 3:
        raise ValueError("reduction needs degree bound at least 3")
    if any(not c.is_zero() for c in F.constant_part()):
        raise ValueError("drop the constant part before reducing")
    n = F.nvars
    N = n * (n + 1)
    psi = euler_weighted_gradient(F)
    comps: list[Polynomial] = []
    for i in range(n):
        acc = Polynomial.zero(N)
        for j in range(n):
            acc = acc + Polynomial.variable(aux_index(n, i, j), N) * Polynomial.variable(j, N)
        comps.append(acc)
    for i in range(n):
        for j in range(n):
            comps.append(Polynomial.variable(aux_index(n, i, j), N) - psi[i][j].lift(N))
    return ReducedSystem(PolySystem(comps, nvars=N, degree_bound=F.degree_bound - 1),
                         n, ALGEBRAIC)


def phi_qft(w: CouplingTensor) -> CouplingTensor:
    """Coupling transform onto n(n+1) slots; needs vanishing quadratic couplings."""
    n, d = w.dims, w.max_degree
    if d < 3:
        raise ValueError("reduction needs degree at least 3")
    if w.has_quadratic():
        raise ValueError("the coupling transform requires vanishing quadratic couplings")
    N = n * (n + 1)
    entries: dict[tuple[int, int, tuple[int, ...]], Gaussian] = {}
    for (k, i, t), c in w.entries.items():
        if 3 <= k <= d - 1:
            entries[(k, i, t)] = c
    for i in range(n):
        for j in range(n):
            t = tuple(sorted((j, aux_index(n, i, j))))
            entries[(2, i, t)] = ONE
    inv_d = Gaussian(Fraction(1, d))
    for i in range(n):
        Wd = w.coupling_poly(i, d)
        if Wd.is_zero():
            continue
        for j in range(n):
            slice_ij = Wd.partial(j).scale(inv_d)
            for exps, c in slice_ij.terms.items():
                entries[(d - 1, aux_index(n, i, j), _tuple_of_exps(exps))] = c
    return CouplingTensor(N, d - 1, entries)


def phi_qft_system(F: PolySystem) -> ReducedSystem:
    wt = phi_qft(CouplingTensor.from_system(F))
    return ReducedSystem(wt.to_system(), F.nvars, QFT)


def _fail(detail: str) -> ImageCheck:
    return ImageCheck(False, detail=detail)


def _extract_aux_residue(Ft: PolySystem, n: int):
    """Check the auxiliary block is var - (z1-only polynomial); return those polynomials."""
    N = n * (n + 1)
    res = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            a = aux_index(n, i, j)
            p = Polynomial.variable(a, N) - Ft.components[a]
            if any(any(e[n:]) for e in p.terms):
                return None, (i, j)
            res[i][j] = p.restrict(n)
    return res, None


def is_in_image_of_phi(Ft: PolySystem, n: int, variant: str) -> ImageCheck:
    """Structural membership test; on success the unique preimage is returned."""
    N = n * (n + 1)
    if Ft.nvars != N or len(Ft.components) != N:
        raise ValueError(f"image candidates must be square of dimension n(n+1) = {N}")
    if variant == ALGEBRAIC:
        return _image_check_algebraic(Ft, n)
    if variant == QFT:
        return _image_check_qft(Ft, n)
    raise ValueError(f"unknown variant {variant!r}")


def _image_check_algebraic(Ft: PolySystem, n: int) -> ImageCheck:
    N = n * (n + 1)
    for i in range(n):
        expect = Polynomial.zero(N)
        for j in range(n):
            expect = expect + Polynomial.variable(aux_index(n, i, j), N) * \
                Polynomial.variable(j, N)
        if Ft.components[i] != expect:
            return _fail(f"component {i} is not the required bilinear form")
    psi, bad = _extract_aux_residue(Ft, n)
    if psi is None:
        return _fail(f"auxiliary component {bad} involves auxiliary variables")
    # Degree-c slice of psi must be the weighted gradient of the recovered F_c.
    comps = [Polynomial.zero(n) for _ in range(n)]
    max_e = max((psi[i][j].degree() for i in range(n) for j in range(n)), default=-1)
    for e in range(0, max_e + 1):
        c = e + 1
        for i in range(n):
            Fc = Polynomial.zero(n)
            for j in range(n):
                Fc = Fc + Polynomial.variable(j, n) * psi[i][j].homogeneous_part(e)
            for j in range(n):
                if Fc.partial(j).scale(Gaussian(Fraction(1, c))) != psi[i][j].homogeneous_part(e):
                    return _fail(
                        f"auxiliary data at ({i}, {j}) is not a weighted gradient slice")
            comps[i] = comps[i] + Fc
    F = PolySystem(comps, nvars=n, degree_bound=max(3, max(c.degree() for c in comps) if comps else 3))
    return ImageCheck(True, preimage=F, detail="recovered by Euler contraction")


def _image_check_qft(Ft: PolySystem, n: int) -> ImageCheck:
    N = n * (n + 1)
    residues, bad = _extract_aux_residue(Ft, n)
    if residues is None:
        return _fail(f"auxiliary component {bad} involves auxiliary variables")
    deg_aux = -1
    for i in range(n):
        for j in range(n):
            p = residues[i][j]
            if p.is_zero():
                continue
            dd = p.degree()
            if p.homogeneous_part(dd) != p:
                return _fail(f"auxiliary residue at ({i}, {j}) is not homogeneous")
            if deg_aux in (-1, dd):
                deg_aux = dd
            else:
                return _fail("auxiliary residues have mixed degrees")
    first_residues = []
    for i in range(n):
        p = Polynomial.variable(i, N) - Ft.components[i]
        for j in range(n):
            p = p - Polynomial.variable(j, N) * Polynomial.variable(aux_index(n, i, j), N)
        if any(any(e[n:]) for e in p.terms):
            return _fail(f"component {i} deviates from the unit bilinear template")
        first_residues.append(p.restrict(n))
    deg_first = max((p.degree() for p in first_residues), default=-1)
    if any(not p.homogeneous_part(2).is_zero() or not p.homogeneous_part(1).is_zero()
           or not p.constant_term().is_zero() for p in first_residues):
        return _fail("first-block couplings must have degree at least 3")
    if deg_aux >= 0:
        d = deg_aux + 1
    else:
        d = max(3, deg_first + 1)
    if deg_first > d - 1:
        return _fail("first-block couplings exceed the implied degree budget")
    # Integrability: the auxiliary residues must be the derivative slices of one tensor.
    entries: dict[tuple[int, int, tuple[int, ...]], Gaussian] = {}
    inv_d = Gaussian(Fraction(1, d))
    for i in range(n):
        Wd = Polynomial.zero(n)
        for j in range(n):
            Wd = Wd + Polynomial.variable(j, n) * residues[i][j]
        for j in range(n):
            if Wd.partial(j).scale(inv_d) != residues[i][j]:
                return _fail(f"auxiliary residues at row {i} are not slices of one tensor")
        for exps, c in Wd.terms.items():
            entries[(d, i, _tuple_of_exps(exps))] = c
        for k in range(3, d):
            part = first_residues[i].homogeneous_part(k)
            for exps, c in part.terms.items():
                entries[(k, i, _tuple_of_exps(exps))] = c
    w = CouplingTensor(n, d, entries)
    return ImageCheck(True, preimage=w.to_system(), couplings=w,
                      detail="recovered couplings from slices")


def h_recovery_check(F: PolySystem, variant: str) -> bool:
    """The eliminated system of the image, restricted to y2 = 0, equals F."""
    rs = phi_algebraic(F) if variant == ALGEBRAIC else phi_qft_system(F)
    sp = split(rs.system, F.nvars)
    rinv = invert_R(sp)
    H0 = restrict_to_leading(build_H(sp, rinv), F.nvars)
    return list(H0.components) == list(F.components)


def transport_determinant_check(F: PolySystem, variant: str) -> dict:
    """det J of the image on the elimination variety vs det J_F; factor recorded."""
    n = F.nvars
    rs = phi_algebraic(F) if variant == ALGEBRAIC else phi_qft_system(F)
    sp = split(rs.system, n)
    rinv = invert_R(sp)
    variety0 = [Polynomial.variable(i, n) for i in range(n)] + \
               [_project_at_zero(q, n) for q in rinv.components]
    det_img = jacobian_matrix(rs.system).substitute(variety0).det()
    det_src = jacobian_matrix(F).det()
    return {"equal": det_img == det_src, "constant_factor": "1",
            "variant": variant}


def _project_at_zero(q: Polynomial, n1: int) -> Polynomial:
    targets = [Polynomial.variable(i, n1) for i in range(n1)] + \
              [Polynomial.zero(n1)] * (q.nvars - n1)
    return q.compose(targets)


def verify_theorem_main(F: PolySystem, variant: str,
                        inv_cap: int | None = None) -> dict:
    """Membership transport across the reduction, on one instance.

    Compares the constant-determinant test on F with the partial test on the
    image, and the invertibility certificate on F with the restricted-inverse
    test on the image; any verdict disagreement marks the report failed.
    """
    n = F.nvars
    rs = phi_algebraic(F) if variant == ALGEBRAIC else phi_qft_system(F)
    lin_src = is_jlin(F)
    lin_img = is_jlin_partial(rs.system, n)
    try:
        inv_src = certify_polynomial_inverse(F, inv_cap)
    except LinearPartError:
        inv_src = MembershipVerdict(NON_MEMBER, detail="singular linear part, no inverse")
    inv_img = is_j_partial(rs.system, n, h_cap=inv_cap)
    report = {
        "variant": variant,
        "lin_source": lin_src.verdict,
        "lin_image": lin_img.verdict,
        "invertible_source": inv_src.verdict,
        "invertible_image": inv_img.verdict,
        "lin_agrees": lin_src.verdict == lin_img.verdict,
        "invertible_agrees": inv_src.verdict == inv_img.verdict,
    }
    report["passed"] = report["lin_agrees"] and report["invertible_agrees"]
    return report


def reduced_inverse_check(w: CouplingTensor, order: int) -> dict:
    """Compare the reduced system's formal inverse against the source's.

    With the auxiliary source coordinates pinned to zero, the first n
    components of the reduced inverse must equal the source inverse grade by
    grade, and auxiliary component (i, j) must equal the (d-2)-shifted
    derivative slice of the degree-d coupling evaluated on G.
    """
    n, d = w.dims, w.max_degree
    wt = phi_qft(w)
    G = formal_inverse_fixed_point(w, order)
    source = [Polynomial.variable(i, n) for i in range(n)] + \
             [Polynomial.zero(n)] * (n * n)
    Gt = formal_inverse_fixed_point(wt, order, source)
    first_ok = all(Gt[i] == G[i] for i in range(n))
    inv_d = Gaussian(Fraction(1, d))
    aux_ok = True
    for i in range(n):
        Wd = w.coupling_poly(i, d)
        for j in range(n):
            expected = compose_poly(Wd.partial(j).scale(inv_d), G.components, order).shift(d - 2)
            if Gt[aux_index(n, i, j)] != expected:
                aux_ok = False
    return {"first_block_equal": first_ok, "aux_closed_form": aux_ok,
            "passed": first_ok and aux_ok, "order": order}


def reduce_to_quadratic(F: PolySystem) -> list[ReducedSystem]:
    """Convenience driver: iterate the reduction until the degree bound is 2."""
    from .jacobian import drop_degree_zero

    stages: list[ReducedSystem] = []
    current = F
    while current.degree_bound > 2:
        rs = phi_algebraic(drop_degree_zero(current))
        stages.append(rs)
        current = rs.system
    return stages
