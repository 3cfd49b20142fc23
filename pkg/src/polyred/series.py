"""Graded truncated series and the combinatorial formal inverse.

The grading weight of a degree-k coupling is k - 1, so a product of couplings
carries the sum of their weights.  A :class:`GradedPoly` is a scalar series
truncated at a fixed weight: one polynomial per grade.  The formal inverse G
of a normalized system F(z) = z - sum W_k(z) is computed two independent
ways:

* :func:`formal_inverse_fixed_point` solves G = u + sum_k W_k(G) grade by
  grade (each W_k application shifts grades up by k - 1, so the recursion is
  well founded);
* :func:`tree_oracle_inverse` sums amplitudes of rooted plane trees whose
  vertices have in-degrees in {2..d}.  With plane (ordered-children) trees
  and per-ordering tensor values, no symmetry factors appear; agreement with
  the fixed point is itself a library-level test.

The scalar log-partition series ln Z = sum_{r>=1} (1/r) tr((1 - J_F(G))^r)
and the identity Z * det J_F(G) = 1 are provided on the same grading.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .couplings import CouplingTensor, distinct_orderings
from .gaussian import Gaussian
from .poly import Polynomial


class GradedPoly:
    """Scalar series truncated at grade ``order``: parts[r] is the grade-r polynomial."""

    __slots__ = ("order", "nvars", "parts")

    def __init__(self, order: int, nvars: int, parts: Sequence[Polynomial] | None = None):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        self.order = order
        self.nvars = nvars
        if parts is None:
            ps = [Polynomial.zero(nvars) for _ in range(order + 1)]
        else:
            ps = list(parts)[: order + 1]
            while len(ps) < order + 1:
                ps.append(Polynomial.zero(nvars))
            for p in ps:
                if p.nvars != nvars:
                    raise ValueError("grade parts live in different rings")
        self.parts = ps

    @staticmethod
    def zero(order: int, nvars: int) -> "GradedPoly":
        return GradedPoly(order, nvars)

    @staticmethod
    def of_poly(p: Polynomial, order: int, grade: int = 0) -> "GradedPoly":
        g = GradedPoly(order, p.nvars)
        if grade <= order:
            g.parts[grade] = p
        return g

    @staticmethod
    def one(order: int, nvars: int) -> "GradedPoly":
        return GradedPoly.of_poly(Polynomial.one(nvars), order)

    def grade(self, r: int) -> Polynomial:
        return self.parts[r] if r <= self.order else Polynomial.zero(self.nvars)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def min_grade(self) -> int | None:
        for r, p in enumerate(self.parts):
            if not p.is_zero():
                return r
        return None

    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        self._check(other)
        return GradedPoly(self.order, self.nvars,
                          [a + b for a, b in zip(self.parts, other.parts)])

    def __sub__(self, other: "GradedPoly") -> "GradedPoly":
        self._check(other)
        return GradedPoly(self.order, self.nvars,
                          [a - b for a, b in zip(self.parts, other.parts)])

    def __neg__(self) -> "GradedPoly":
        return GradedPoly(self.order, self.nvars, [-p for p in self.parts])

    def scale(self, c) -> "GradedPoly":
        return GradedPoly(self.order, self.nvars, [p.scale(c) for p in self.parts])

    def __mul__(self, other: "GradedPoly") -> "GradedPoly":
        self._check(other)
        out = [Polynomial.zero(self.nvars) for _ in range(self.order + 1)]
        for r1, p1 in enumerate(self.parts):
            if p1.is_zero():
                continue
            for r2 in range(0, self.order - r1 + 1):
                p2 = other.parts[r2]
                if p2.is_zero():
                    continue
                out[r1 + r2] = out[r1 + r2] + p1 * p2
        return GradedPoly(self.order, self.nvars, out)

    def shift(self, k: int) -> "GradedPoly":
        """Multiply by the grading indeterminate to the k-th power."""
        out = [Polynomial.zero(self.nvars) for _ in range(self.order + 1)]
        for r, p in enumerate(self.parts):
            if r + k <= self.order:
                out[r + k] = p
        return GradedPoly(self.order, self.nvars, out)

    def exp(self) -> "GradedPoly":
        """exp of a series with vanishing grade-0 part (finite sum after truncation)."""
        if not self.parts[0].is_zero():
            raise ValueError("exp needs a series with zero grade-0 part")
        out = GradedPoly.one(self.order, self.nvars)
        power = GradedPoly.one(self.order, self.nvars)
        fact = 1
        for m in range(1, self.order + 1):
            power = power * self
            fact *= m
            out = out + power.scale(Gaussian(Fraction(1, fact)))
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return (self.order, self.nvars, self.parts) == (other.order, other.nvars, other.parts)

    def _check(self, other: "GradedPoly"):
        if self.order != other.order or self.nvars != other.nvars:
            raise ValueError("graded series mismatch (order or ring)")

    def __repr__(self):
        inner = "; ".join(f"[{r}] {p}" for r, p in enumerate(self.parts) if not p.is_zero())
        return f"<GradedPoly order {self.order}: {inner or '0'}>"


def compose_poly(p: Polynomial, args: Sequence[GradedPoly], order: int) -> GradedPoly:
    """Evaluate a polynomial on graded-series arguments, truncating at ``order``."""
    if len(args) != p.nvars:
        raise ValueError("composition arity mismatch")
    if p.nvars == 0:
        return GradedPoly.of_poly(Polynomial.constant(p.constant_term(), 0), order)
    nv = args[0].nvars
    pow_cache: list[dict[int, GradedPoly]] = [dict() for _ in args]

    def power(i: int, e: int) -> GradedPoly:
        cache = pow_cache[i]
        got = cache.get(e)
        if got is not None:
            return got
        if e == 0:
            val = GradedPoly.one(order, nv)
        elif e == 1:
            val = args[i]
        else:
            val = power(i, e - 1) * args[i]
        cache[e] = val
        return val

    out = GradedPoly.zero(order, nv)
    for exps, c in p.terms.items():
        term = GradedPoly.of_poly(Polynomial.constant(c, nv), order)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        out = out + term
    return out


class GradedSeriesVector:
    """A vector of graded scalar series sharing one truncation order and ring."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[GradedPoly]):
        comps = tuple(components)
        if not comps:
            raise ValueError("empty series vector")
        for c in comps:
            if (c.order, c.nvars) != (comps[0].order, comps[0].nvars):
                raise ValueError("series vector components disagree on order or ring")
        self.components = comps

    @property
    def order(self) -> int:
        return self.components[0].order

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i) -> GradedPoly:
        return self.components[i]

    def grade(self, r: int) -> list[Polynomial]:
        return [c.grade(r) for c in self.components]

    def __eq__(self, other):
        if not isinstance(other, GradedSeriesVector):
            return NotImplemented
        return self.components == other.components

    def __sub__(self, other: "GradedSeriesVector") -> "GradedSeriesVector":
        return GradedSeriesVector([a - b for a, b in zip(self.components, other.components)])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __repr__(self):
        return f"<GradedSeriesVector len {len(self.components)} order {self.order}>"


def formal_inverse_fixed_point(w: CouplingTensor, order: int,
                               source: Sequence[Polynomial] | None = None) -> GradedSeriesVector:
    """Unique graded solution of G = source + sum_k W_k(G), default source u.

    Grade 0 equals the source; the solution satisfies F(G(u)) = u through the
    truncation order.  A non-default source (for instance with some zero
    coordinates) yields the inverse series with those source slots pinned.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    n = w.dims
    if source is None:
        source = [Polynomial.variable(i, n) for i in range(n)]
    if len(source) != n:
        raise ValueError(f"source must have {n} coordinates")
    nv = source[0].nvars
    src = GradedSeriesVector([GradedPoly.of_poly(p, order) for p in source])
    coupling_polys = [
        [(k, w.coupling_poly(i, k)) for k in w.degrees() if not w.coupling_poly(i, k).is_zero()]
        for i in range(n)
    ]
    G = src
    for _ in range(order):
        new = []
        for i in range(n):
            acc = src.components[i]
            for k, wp in coupling_polys[i]:
                acc = acc + compose_poly(wp, G.components, order).shift(k - 1)
            new.append(acc)
        G = GradedSeriesVector(new)
    return G


def inversion_defect(w: CouplingTensor, G: GradedSeriesVector,
                     source: Sequence[Polynomial] | None = None) -> GradedSeriesVector:
    """F(G) - source as a graded vector; zero when G inverts F through the order."""
    order = G.order
    n = w.dims
    if source is None:
        if G.nvars != n:
            raise ValueError("the default source needs G expressed in the u-ring")
        source = [Polynomial.variable(i, n) for i in range(n)]
    out = []
    for i in range(n):
        acc = G.components[i] - GradedPoly.of_poly(source[i], order)
        for k in w.degrees():
            wp = w.coupling_poly(i, k)
            if not wp.is_zero():
                acc = acc - compose_poly(wp, G.components, order).shift(k - 1)
        out.append(acc)
    return GradedSeriesVector(out)


# -- rooted plane trees -------------------------------------------------------


@dataclass(frozen=True)
class PlaneTree:
    """Rooted plane tree; children are ordered, leaves are source slots."""

    children: tuple["PlaneTree", ...] = ()

    def is_leaf(self) -> bool:
        return not self.children

    @property
    def size(self) -> int:
        """Number of internal vertices."""
        if self.is_leaf():
            return 0
        return 1 + sum(c.size for c in self.children)

    @property
    def theta_weight(self) -> int:
        """Sum of (in-degree - 1) over internal vertices."""
        if self.is_leaf():
            return 0
        return (len(self.children) - 1) + sum(c.theta_weight for c in self.children)

    def __repr__(self):
        if self.is_leaf():
            return "*"
        return "(" + "".join(repr(c) for c in self.children) + ")"


LEAF = PlaneTree()


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _trees_of_weight(r: int, d: int, memo: dict[int, list[PlaneTree]]) -> list[PlaneTree]:
    got = memo.get(r)
    if got is not None:
        return got
    if r == 0:
        out = [LEAF]
    else:
        out = []
        for k in range(2, d + 1):
            if k - 1 > r:
                break
            for weights in _compositions(r - (k - 1), k):
                pools = [_trees_of_weight(wt, d, memo) for wt in weights]
                stack: list[tuple[PlaneTree, ...]] = [()]
                for pool in pools:
                    stack = [pre + (t,) for pre in stack for t in pool]
                out.extend(PlaneTree(ch) for ch in stack)
    memo[r] = out
    return out


def enumerate_trees(d: int, max_weight: int) -> Iterator[PlaneTree]:
    """All plane trees with in-degrees in {2..d} and 1 <= theta_weight <= max_weight."""
    if d < 2:
        raise ValueError("maximal in-degree must be at least 2")
    if max_weight < 1:
        raise ValueError("max_weight must be at least 1")
    memo: dict[int, list[PlaneTree]] = {}
    for r in range(1, max_weight + 1):
        yield from _trees_of_weight(r, d, memo)


def tree_amplitude(tree: PlaneTree, w: CouplingTensor,
                   source: Sequence[Polynomial] | None = None) -> list[Polynomial]:
    """Amplitude vector of one tree: entry i is the root-index-i contraction.

    Internal indices are contracted over all components with per-ordering
    tensor values; a leaf in slot a contributes the source polynomial of its
    index.  The plain sum of amplitudes over all plane trees of weight r is
    the grade-r part of the formal inverse.
    """
    n = w.dims
    if source is None:
        source = [Polynomial.variable(i, n) for i in range(n)]
    nv = source[0].nvars

    def amp(t: PlaneTree) -> list[Polynomial]:
        if t.is_leaf():
            return list(source)
        child_amps = [amp(c) for c in t.children]
        k = len(t.children)
        out = [Polynomial.zero(nv) for _ in range(n)]
        for (kk, i, idx), _c in w.entries.items():
            if kk != k:
                continue
            val = w.symmetric_value(k, i, idx)
            contribution = Polynomial.zero(nv)
            for ordered in distinct_orderings(idx):
                prod = Polynomial.one(nv)
                for slot, j in enumerate(ordered):
                    prod = prod * child_amps[slot][j]
                contribution = contribution + prod
            out[i] = out[i] + contribution.scale(val)
        return out

    return amp(tree)


def tree_oracle_inverse(w: CouplingTensor, order: int,
                        source: Sequence[Polynomial] | None = None) -> GradedSeriesVector:
    """Formal inverse by explicit plane-tree enumeration (oracle-scale orders)."""
    n = w.dims
    if source is None:
        source = [Polynomial.variable(i, n) for i in range(n)]
    nv = source[0].nvars
    acc = [GradedPoly.of_poly(p, order) for p in source]
    if order >= 1:
        for tree in enumerate_trees(w.max_degree, order):
            r = tree.theta_weight
            for i, p in enumerate(tree_amplitude(tree, w, source)):
                if not p.is_zero():
                    acc[i] = acc[i] + GradedPoly.of_poly(p, order, grade=r)
    return GradedSeriesVector(acc)


# -- partition function --------------------------------------------------------


def _curvature_matrix(w: CouplingTensor, G: GradedSeriesVector) -> list[list[GradedPoly]]:
    """M = 1 - J_F evaluated on G: entry (i, j) = sum_k shift(k-1, dW_k,i/dz_j (G))."""
    n = w.dims
    order = G.order
    nv = G.nvars
    M = [[GradedPoly.zero(order, nv) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for k in w.degrees():
            wp = w.coupling_poly(i, k)
            if wp.is_zero():
                continue
            for j in range(n):
                dp = wp.partial(j)
                if not dp.is_zero():
                    M[i][j] = M[i][j] + compose_poly(dp, G.components, order).shift(k - 1)
    return M


def _mat_mul(A: list[list[GradedPoly]], B: list[list[GradedPoly]]) -> list[list[GradedPoly]]:
    n = len(A)
    order, nv = A[0][0].order, A[0][0].nvars
    out = [[GradedPoly.zero(order, nv) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = GradedPoly.zero(order, nv)
            for m in range(n):
                acc = acc + A[i][m] * B[m][j]
            out[i][j] = acc
    return out


def _trace(A: list[list[GradedPoly]]) -> GradedPoly:
    acc = GradedPoly.zero(A[0][0].order, A[0][0].nvars)
    for i in range(len(A)):
        acc = acc + A[i][i]
    return acc


def _det_graded(A: list[list[GradedPoly]]) -> GradedPoly:
    n = len(A)
    if n == 1:
        return A[0][0]
    acc = GradedPoly.zero(A[0][0].order, A[0][0].nvars)
    sign = 1
    for j in range(n):
        minor = [[A[i][m] for m in range(n) if m != j] for i in range(1, n)]
        term = A[0][j] * _det_graded(minor)
        acc = acc + term if sign > 0 else acc - term
        sign = -sign
    return acc


def log_partition_function(w: CouplingTensor, order: int,
                           G: GradedSeriesVector | None = None) -> GradedPoly:
    """ln Z(0, u) = sum_{r=1..order} (1/r) tr(M^r) with M = 1 - J_F(G(u)).

    Every entry of M has grade >= 1, so the sum is finite at any truncation.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if G is None:
        G = formal_inverse_fixed_point(w, order)
    M = _curvature_matrix(w, G)
    acc = GradedPoly.zero(order, G.nvars)
    power = M
    for r in range(1, order + 1):
        acc = acc + _trace(power).scale(Gaussian(Fraction(1, r)))
        if r < order:
            power = _mat_mul(power, M)
    return acc


def det_jacobian_on_inverse(w: CouplingTensor, order: int,
                            G: GradedSeriesVector | None = None) -> GradedPoly:
    """det J_F(G(u)) as a graded series (cofactor expansion of 1 - M)."""
    if G is None:
        G = formal_inverse_fixed_point(w, order)
    M = _curvature_matrix(w, G)
    n = w.dims
    one = GradedPoly.one(order, G.nvars)
    J = [[(one - M[i][j]) if i == j else -M[i][j] for j in range(n)] for i in range(n)]
    return _det_graded(J)


def z_det_identity_check(w: CouplingTensor, order: int) -> tuple[bool, GradedPoly]:
    """Verify exp(ln Z) * det J_F(G(u)) = 1 through the truncation order."""
    G = formal_inverse_fixed_point(w, order)
    Z = log_partition_function(w, order, G).exp()
    D = det_jacobian_on_inverse(w, order, G)
    residual = Z * D - GradedPoly.one(order, G.nvars)
    return residual.is_zero(), residual


def theta_homogeneity_check(w: CouplingTensor, order: int, lam) -> bool:
    """Check the grading/rescaling identity of the formal inverse.

    Grade r of G is homogeneous of degree r + 1 in the source variables, so
    G(u) = lam^(-1) * G(lam*u) with the grading indeterminate rescaled by
    lam^(-1); this is what is verified, grade by grade.
    """
    lam = Gaussian.coerce(lam)
    if lam.is_zero():
        raise ValueError("scaling factor must be nonzero")
    G = formal_inverse_fixed_point(w, order)
    n = G.nvars
    inv = lam.inverse()
    for comp in G.components:
        for r, p in enumerate(comp.parts):
            # lam^{-r} rescales the grade, lam^{-1} is the overall prefactor.
            scaled = p.scale_vars([lam] * n).scale(inv ** (r + 1))
            if scaled != p:
                return False
    return True
