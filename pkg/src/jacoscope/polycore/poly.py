"""Exact sparse multivariate polynomials over the rationals.

A :class:`Poly` maps exponent tuples to :class:`fractions.Fraction`
coefficients.  Zero coefficients are never stored, and terms are always
iterated in descending graded-lexicographic order, so equality, hashing and
printing are deterministic.

    >>> x, y = Poly.variables(2)
    >>> (x + y) * (x - y)
    Poly(x^2 - y^2)

Floating evaluation is a separate path (:meth:`Poly.eval_float`,
:meth:`Poly.compile`); nothing in the symbolic layer rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

Monomial = tuple[int, ...]
Scalar = int | Fraction

NEG_INF = float("-inf")


def _grlex_key(m: Monomial) -> tuple[int, Monomial]:
    return (sum(m), m)


def default_names(nvars: int) -> tuple[str, ...]:
    if nvars == 2:
        return ("x", "y")
    if nvars == 1:
        return ("x",)
    return tuple(f"x{i + 1}" for i in range(nvars))


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms", "_order", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Scalar] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if len(mono) != nvars:
                    raise ValueError(f"monomial {mono} does not have {nvars} exponents")
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                c = Fraction(coeff)
                if c:
                    clean[tuple(int(e) for e in mono)] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_order", None)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Monomial, Fraction]) -> "Poly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        object.__setattr__(p, "nvars", nvars)
        object.__setattr__(p, "_terms", terms)
        object.__setattr__(p, "_order", None)
        object.__setattr__(p, "_hash", None)
        return p

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, c: Scalar, nvars: int) -> "Poly":
        c = Fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, index: int, nvars: int) -> "Poly":
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return cls._raw(nvars, {mono: Fraction(1)})

    @classmethod
    def variables(cls, nvars: int) -> tuple["Poly", ...]:
        return tuple(cls.variable(i, nvars) for i in range(nvars))

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: Scalar = 1) -> "Poly":
        return cls(len(exponents), {tuple(exponents): coeff})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[Monomial, Fraction], ...]:
        """Terms in descending graded-lex order."""
        if self._order is None:
            keys = sorted(self._terms, key=_grlex_key, reverse=True)
            object.__setattr__(self, "_order", tuple((k, self._terms[k]) for k in keys))
        return self._order

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    @property
    def degree(self) -> int | float:
        """Total degree; ``-inf`` for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(sum(m) for m in self._terms)

    def degree_in(self, var: int) -> int | float:
        if not self._terms:
            return NEG_INF
        return max(m[var] for m in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def variables_used(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.nvars) if any(m[i] for m in self._terms))

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"dimension mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __pos__(self) -> "Poly":
        return self

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Poly.zero(self.nvars)
            return Poly._raw(self.nvars, {m: v * c for m, v in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        # scalar division only; see exact_div for polynomial divisors
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                raise ZeroDivisionError("division of Poly by zero")
            return self * (1 / c)
        return NotImplemented

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.constant(other, self.nvars)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.nvars, frozenset(self._terms.items()))))
        return self._hash

    def __repr__(self) -> str:
        from ..parser import print_poly

        return f"Poly({print_poly(self)})"

    def exact_div(self, divisor: "Poly") -> "Poly":
        """Quotient of an exact division; raises ``ValueError`` on a remainder.

        Uses the graded-lex division algorithm with a single divisor, which
        terminates with zero remainder precisely when ``divisor`` divides
        ``self``.
        """
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("exact_div by zero polynomial")
        lead_m, lead_c = divisor.terms[0]
        rest = self
        quotient: dict[Monomial, Fraction] = {}
        while rest:
            m, c = rest.terms[0]
            if any(a < b for a, b in zip(m, lead_m)):
                raise ValueError("polynomial division is not exact")
            qm = tuple(a - b for a, b in zip(m, lead_m))
            qc = c / lead_c
            quotient[qm] = quotient.get(qm, 0) + qc
            rest = rest - Poly._raw(self.nvars, {qm: qc}) * divisor
        return Poly(self.nvars, quotient)

    # -- calculus and evaluation ------------------------------------------

    def partial(self, var: int) -> "Poly":
        if not 0 <= var < self.nvars:
            raise IndexError(f"variable index {var} out of range for {self.nvars} variables")
        out: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            e = m[var]
            if e:
                nm = m[:var] + (e - 1,) + m[var + 1:]
                out[nm] = c * e
        return Poly._raw(self.nvars, out)

    def eval_exact(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for m, c in self.terms:
            term = c
            for v, e in zip(pt, m):
                if e:
                    term *= v**e
            total += term
        return total

    def eval_float(self, point: Sequence[float]) -> float:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        return float(self.compile()(*(float(v) for v in point)))

    def compile(self) -> Callable:
        """Return a Horner-scheme float evaluator ``f(*coords)``.

        Works on Python floats and on numpy arrays (elementwise).  The nesting
        order is fixed (first variable outermost), so results are
        deterministic.
        """
        return _compile(self)

    def substitute(self, values: Sequence["Poly"]) -> "Poly":
        """Compose: replace variable ``i`` by ``values[i]`` (all in a common ring)."""
        if len(values) != self.nvars:
            raise ValueError("need one substitution per variable")
        target = values[0].nvars
        powers: list[dict[int, Poly]] = [{0: Poly.constant(1, target)} for _ in values]

        def power(i: int, e: int) -> Poly:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * values[i]
            return cache[e]

        out = Poly.zero(target)
        for m, c in self.terms:
            term = Poly.constant(c, target)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def restrict(self, var: int, value: Scalar) -> "Poly":
        """Fix ``var`` to a rational ``value``, keeping the ambient dimension."""
        value = Fraction(value)
        out: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            nm = m[:var] + (0,) + m[var + 1:]
            out[nm] = out.get(nm, 0) + c * value ** m[var]
        return Poly(self.nvars, out)

    def to_univariate(self, var: int) -> list[Fraction]:
        """Dense coefficient list (low to high) of a polynomial in ``var`` only."""
        if self.is_zero():
            return []
        coeffs = [Fraction(0)] * (int(self.degree_in(var)) + 1)
        for m, c in self._terms.items():
            if any(e for i, e in enumerate(m) if i != var):
                raise ValueError(f"polynomial depends on variables other than {var}")
            coeffs[m[var]] += c
        return coeffs

    @classmethod
    def from_univariate(cls, coeffs: Sequence[Scalar], var: int, nvars: int) -> "Poly":
        terms = {}
        for e, c in enumerate(coeffs):
            if c:
                terms[tuple(e if i == var else 0 for i in range(nvars))] = c
        return cls(nvars, terms)

    # -- decompositions ---------------------------------------------------

    def homogeneous_components(self) -> dict[int, "Poly"]:
        return self.quasi_components(Weights((1,) * self.nvars))

    def quasi_components(self, w: "Weights") -> dict[int, "Poly"]:
        """Split into quasi-homogeneous parts keyed by weighted degree."""
        if len(w) != self.nvars:
            raise ValueError("weight vector length differs from nvars")
        parts: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            l = sum(s * e for s, e in zip(w.s, m))
            parts.setdefault(l, {})[m] = c
        return {l: Poly._raw(self.nvars, parts[l]) for l in sorted(parts)}

    def leading_quasi(self, w: "Weights") -> "Poly":
        parts = self.quasi_components(w)
        if not parts:
            return Poly.zero(self.nvars)
        return parts[max(parts)]

    def top_form(self) -> "Poly":
        """Highest-degree homogeneous component (zero for the zero polynomial)."""
        return self.leading_quasi(Weights((1,) * self.nvars))


@dataclass(frozen=True)
class Weights:
    """Positive integer weight exponents for quasi-homogeneous grading."""

    s: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(int(v) for v in self.s))
        if not self.s:
            raise ValueError("empty weight vector")
        if any(v < 1 for v in self.s):
            raise ValueError(f"weights must be >= 1, got {self.s}")

    def __len__(self) -> int:
        return len(self.s)

    def __iter__(self):
        return iter(self.s)

    def weighted_degree(self, mono: Monomial) -> int:
        return sum(a * b for a, b in zip(self.s, mono))

    def normalized(self) -> "Weights":
        g = math.gcd(*self.s)
        return Weights(tuple(v // g for v in self.s))


@dataclass(frozen=True)
class PolyMap:
    """A polynomial map ``R^n -> R^n`` given by ``n`` components in ``n`` variables."""

    components: tuple[Poly, ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("PolyMap needs at least one component")
        n = len(comps)
        for p in comps:
            if p.nvars != n:
                raise ValueError(f"component in {p.nvars} variables; map needs {n} (square map)")
        if self.names is not None and len(self.names) != n:
            raise ValueError("names length differs from component count")

    @property
    def n(self) -> int:
        return len(self.components)

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i: int) -> Poly:
        return self.components[i]

    @property
    def degree(self) -> int | float:
        return max(p.degree for p in self.components)

    def eval_exact(self, point: Sequence[Scalar]) -> tuple[Fraction, ...]:
        return tuple(p.eval_exact(point) for p in self.components)

    def compile(self) -> Callable:
        """Float evaluator returning a tuple of component values."""
        fns = [p.compile() for p in self.components]
        return lambda *xs: tuple(f(*xs) for f in fns)

    def value_at_origin(self) -> tuple[Fraction, ...]:
        return tuple(p.constant_term() for p in self.components)

    def translated_to_origin(self) -> tuple["PolyMap", tuple[Fraction, ...]]:
        """Return ``F - F(0)`` and the subtracted translation."""
        shift = self.value_at_origin()
        comps = tuple(p - c for p, c in zip(self.components, shift))
        return PolyMap(comps, self.names), shift

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)


# -- float compilation ------------------------------------------------------

_COMPILED: dict[tuple, Callable] = {}


def _horner_source(terms: list[tuple[Monomial, float]], var: int, nvars: int) -> str:
    if var == nvars:
        return repr(sum(c for _, c in terms))
    groups: dict[int, list[tuple[Monomial, float]]] = {}
    for m, c in terms:
        groups.setdefault(m[var], []).append((m, c))
    exps = sorted(groups, reverse=True)
    name = f"_v{var}"
    src = None
    prev = None
    for e in exps:
        inner = _horner_source(groups[e], var + 1, nvars)
        if src is None:
            src = f"({inner})"
        else:
            gap = prev - e
            factor = name if gap == 1 else f"{name}**{gap}"
            src = f"({src}*{factor} + {inner})"
        prev = e
    if prev:
        factor = name if prev == 1 else f"{name}**{prev}"
        src = f"({src}*{factor})"
    return src


def _compile(p: Poly) -> Callable:
    key = (p.nvars, tuple(p.terms))
    fn = _COMPILED.get(key)
    if fn is not None:
        return fn
    args = ", ".join(f"_v{i}" for i in range(p.nvars))
    if p.is_zero():
        body = f"0.0 * ({' + '.join(f'_v{i}' for i in range(p.nvars))})"
    else:
        body = _horner_source([(m, float(c)) for m, c in p.terms], 0, p.nvars)
    fn = eval(f"lambda {args}: {body}", {})  # noqa: S307 - source generated from numeric terms
    if len(_COMPILED) < 4096:
        _COMPILED[key] = fn
    return fn
