"""Sparse multivariate polynomials over the Gaussian rationals.

A monomial is an exponent tuple of fixed length ``nvars``; a polynomial is a
map from monomials to nonzero coefficients (canonical sparse form, zero
coefficients are never stored).  The global monomial order is graded
lexicographic: total degree first, ties broken lexicographically on the
exponent tuple.  Printing and serialization list terms in descending
graded-lex order, which makes output deterministic.

All values are treated as immutable after construction; operations are pure
functions and safe to share across threads.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .gaussian import Gaussian, Q, ZERO, ONE


def grlex_key(exps: tuple) -> tuple:
    return (sum(exps), exps)


def total_degree(exps: tuple) -> int:
    return sum(exps)


class Polynomial:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, Gaussian] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = nvars
        clean: dict[tuple, Gaussian] = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise ValueError(f"exponent vector {exps} has wrong length, expected {nvars}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = Gaussian.coerce(c)
                if not c.is_zero():
                    clean[exps] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "Polynomial":
        return Polynomial(nvars)

    @staticmethod
    def constant(c, nvars: int) -> "Polynomial":
        return Polynomial(nvars, {(0,) * nvars: Gaussian.coerce(c)})

    @staticmethod
    def one(nvars: int) -> "Polynomial":
        return Polynomial.constant(1, nvars)

    @staticmethod
    def variable(i: int, nvars: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return Polynomial(nvars, {exps: ONE})

    @staticmethod
    def monomial(exps: Sequence[int], c, nvars: int | None = None) -> "Polynomial":
        exps = tuple(exps)
        return Polynomial(len(exps) if nvars is None else nvars, {exps: Gaussian.coerce(c)})

    # -- predicates / accessors -------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(total_degree(e) == 0 for e in self.terms)

    def constant_term(self) -> Gaussian:
        return self.terms.get((0,) * self.nvars, ZERO)

    def coefficient(self, exps: Sequence[int]) -> Gaussian:
        return self.terms.get(tuple(exps), ZERO)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(total_degree(e) for e in self.terms)

    def block_degree(self, start: int, end: int) -> int:
        if not self.terms:
            return -1
        return max(sum(e[start:end]) for e in self.terms)

    def uses_var(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def sorted_terms(self) -> list[tuple[tuple, Gaussian]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    # -- ring operations ---------------------------------------------------

    def _check_same_ring(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if isinstance(other, (int, Gaussian)):
            other = Polynomial.constant(other, self.nvars)
        self._check_same_ring(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, ZERO) + c
            if s.is_zero():
                out.pop(exps, None)
            else:
                out[exps] = s
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if isinstance(other, (int, Gaussian)):
            other = Polynomial.constant(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = Gaussian.coerce(c)
        if c.is_zero():
            return Polynomial.zero(self.nvars)
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = {e: v * c for e, v in self.terms.items()}
        return p

    def __mul__(self, other):
        if isinstance(other, (int, Gaussian)):
            return self.scale(other)
        return self.mul(other)

    __rmul__ = __mul__

    def mul(self, other: "Polynomial", max_degree: int | None = None) -> "Polynomial":
        """Exact product; with ``max_degree`` set, drops higher-degree terms."""
        self._check_same_ring(other)
        out: dict[tuple, Gaussian] = {}
        for e1, c1 in self.terms.items():
            d1 = total_degree(e1)
            for e2, c2 in other.terms.items():
                if max_degree is not None and d1 + total_degree(e2) > max_degree:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                s = out.get(e)
                if s is None:
                    out[e] = prod
                else:
                    s = s + prod
                    if s.is_zero():
                        del out[e]
                    else:
                        out[e] = s
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = out
        return p

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Polynomial.one(self.nvars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Gaussian)):
            other = Polynomial.constant(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- calculus-style operations -----------------------------------------

    def partial(self, var_index: int) -> "Polynomial":
        """Exact formal derivative with respect to one variable."""
        if not 0 <= var_index < self.nvars:
            raise IndexError(f"variable index {var_index} out of range for {self.nvars} variables")
        out: dict[tuple, Gaussian] = {}
        for exps, c in self.terms.items():
            e = exps[var_index]
            if e == 0:
                continue
            new = list(exps)
            new[var_index] = e - 1
            out[tuple(new)] = c * e
        return Polynomial(self.nvars, out)

    def homogeneous_part(self, c: int) -> "Polynomial":
        """Sum of the terms of total degree exactly ``c``."""
        if c < 0:
            raise ValueError("degree must be non-negative")
        return Polynomial(self.nvars, {e: v for e, v in self.terms.items() if total_degree(e) == c})

    def compose(self, subs: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``subs[i]`` for variable i.  All subs share one ring."""
        if len(subs) != self.nvars:
            raise ValueError(f"expected {self.nvars} substitutions, got {len(subs)}")
        if self.nvars == 0:
            return Polynomial(0, dict(self.terms))
        nv = subs[0].nvars
        for s in subs:
            if s.nvars != nv:
                raise ValueError("substitution polynomials live in different rings")
        pow_cache: list[dict[int, Polynomial]] = [dict() for _ in subs]

        def power(i: int, e: int) -> Polynomial:
            cache = pow_cache[i]
            got = cache.get(e)
            if got is not None:
                return got
            if e == 0:
                val = Polynomial.one(nv)
            elif e == 1:
                val = subs[i]
            else:
                val = power(i, e - 1) * subs[i]
            cache[e] = val
            return val

        out = Polynomial.zero(nv)
        for exps, c in self.terms.items():
            term = Polynomial.constant(c, nv)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def evaluate(self, point: Sequence) -> Gaussian:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        point = [Gaussian.coerce(x) for x in point]
        acc = ZERO
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(point, exps):
                if e:
                    v = v * (x ** e)
            acc = acc + v
        return acc

    def scale_vars(self, factors: Sequence) -> "Polynomial":
        """p(f0*z0, f1*z1, ...) for scalar factors."""
        factors = [Gaussian.coerce(f) for f in factors]
        out: dict[tuple, Gaussian] = {}
        for exps, c in self.terms.items():
            v = c
            for f, e in zip(factors, exps):
                if e:
                    v = v * (f ** e)
            if not v.is_zero():
                out[exps] = out.get(exps, ZERO) + v
        return Polynomial(self.nvars, out)

    # -- ring embedding / restriction ----------------------------------------

    def lift(self, new_nvars: int, offset: int = 0) -> "Polynomial":
        """Embed into a larger ring; old variable i becomes variable offset+i."""
        if offset < 0 or offset + self.nvars > new_nvars:
            raise ValueError("lift target does not contain the source ring")
        pad_l = (0,) * offset
        pad_r = (0,) * (new_nvars - offset - self.nvars)
        return Polynomial(new_nvars, {pad_l + e + pad_r: c for e, c in self.terms.items()})

    def restrict(self, n_keep: int) -> "Polynomial":
        """Drop trailing variables; they must not occur in any term."""
        for e in self.terms:
            if any(e[n_keep:]):
                raise ValueError("polynomial uses a variable being dropped")
        return Polynomial(n_keep, {e[:n_keep]: c for e, c in self.terms.items()})

    def permute_vars(self, perm: Sequence[int]) -> "Polynomial":
        """Rename variables: old variable i becomes new variable perm[i]."""
        if sorted(perm) != list(range(self.nvars)):
            raise ValueError("not a permutation")
        out: dict[tuple, Gaussian] = {}
        for exps, c in self.terms.items():
            new = [0] * self.nvars
            for i, e in enumerate(exps):
                new[perm[i]] = e
            out[tuple(new)] = c
        return Polynomial(self.nvars, out)

    def truncate_block(self, start: int, end: int, cap: int) -> "Polynomial":
        """Keep only terms whose degree in variables [start, end) is <= cap."""
        return Polynomial(
            self.nvars, {e: c for e, c in self.terms.items() if sum(e[start:end]) <= cap}
        )

    # -- rendering -------------------------------------------------------------

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if self.is_zero():
            return "0"
        if names is None:
            names = [f"z{i + 1}" for i in range(self.nvars)]
        chunks = []
        for exps, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            mono = "*".join(factors)
            if not mono:
                chunks.append(str(c))
            elif c == ONE:
                chunks.append(mono)
            elif c == -ONE:
                chunks.append(f"-{mono}")
            else:
                ctxt = str(c)
                if ("+" in ctxt[1:]) or ("-" in ctxt[1:]):
                    ctxt = f"({ctxt})"
                chunks.append(f"{ctxt}*{mono}")
        out = chunks[0]
        for ch in chunks[1:]:
            out += f" - {ch[1:]}" if ch.startswith("-") else f" + {ch}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"<Polynomial {self.to_str()}>"


def exact_div(num: Polynomial, den: Polynomial) -> Polynomial:
    """Exact division in the polynomial ring; raises if ``den`` does not divide.

    Used by fraction-free elimination, where divisibility is guaranteed.
    """
    num._check_same_ring(den)
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    quot: dict[tuple, Gaussian] = {}
    rem = num
    den_lead_e, den_lead_c = max(den.terms.items(), key=lambda kv: grlex_key(kv[0]))
    while not rem.is_zero():
        lead_e, lead_c = max(rem.terms.items(), key=lambda kv: grlex_key(kv[0]))
        q_e = tuple(a - b for a, b in zip(lead_e, den_lead_e))
        if any(e < 0 for e in q_e):
            raise ArithmeticError("inexact polynomial division")
        q_c = lead_c / den_lead_c
        quot[q_e] = q_c
        rem = rem - den.mul(Polynomial.monomial(q_e, q_c))
    return Polynomial(num.nvars, quot)


class PolySystem:
    """A tuple of polynomials sharing one ring: a map K^nvars -> K^len."""

    __slots__ = ("components", "nvars", "degree_bound")

    def __init__(self, components: Iterable[Polynomial], nvars: int | None = None,
                 degree_bound: int | None = None):
        comps = tuple(components)
        if nvars is None:
            if not comps:
                raise ValueError("empty system needs an explicit nvars")
            nvars = comps[0].nvars
        for p in comps:
            if p.nvars != nvars:
                raise ValueError("system components live in different rings")
        self.components = comps
        self.nvars = nvars
        actual = max((p.degree() for p in comps), default=0)
        if degree_bound is None:
            degree_bound = max(actual, 0)
        elif degree_bound < actual:
            raise ValueError(f"declared degree bound {degree_bound} below actual degree {actual}")
        self.degree_bound = degree_bound

    @staticmethod
    def identity(n: int) -> "PolySystem":
        return PolySystem([Polynomial.variable(i, n) for i in range(n)], nvars=n, degree_bound=1)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def is_square(self) -> bool:
        return len(self.components) == self.nvars

    def degree(self) -> int:
        return max((p.degree() for p in self.components), default=-1)

    def substitute(self, targets: Sequence[Polynomial]) -> "PolySystem":
        """Componentwise substitution: returns self o targets."""
        return PolySystem([p.compose(targets) for p in self.components],
                          nvars=targets[0].nvars if targets else 0)

    def after(self, inner: "PolySystem") -> "PolySystem":
        """Composition self(inner(z)); inner must produce self.nvars coordinates."""
        if len(inner.components) != self.nvars:
            raise ValueError("composition arity mismatch")
        return self.substitute(inner.components)

    def evaluate(self, point: Sequence) -> list[Gaussian]:
        return [p.evaluate(point) for p in self.components]

    def constant_part(self) -> list[Gaussian]:
        return [p.constant_term() for p in self.components]

    def __eq__(self, other):
        if not isinstance(other, PolySystem):
            return NotImplemented
        return self.nvars == other.nvars and self.components == other.components

    def to_str(self, names: Sequence[str] | None = None) -> str:
        return "(" + ", ".join(p.to_str(names) for p in self.components) + ")"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"<PolySystem dim {len(self.components)} on {self.nvars} vars>"
