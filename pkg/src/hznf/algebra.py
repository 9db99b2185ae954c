"""Sparse exact-rational model of the quasi-Eulerian Lie algebra.

A field ``a*Theta + sum c * E^l_k * mu^m`` is stored as a rotation
coefficient ``a`` and a dictionary ``{(l, k, m): c}``.  Here
``E^l_k = x^l R^(k-l) E`` with ``R = y^2 + z^2`` and the weighted Euler
field ``E = x d/dx + 1/2 y d/dy + 1/2 z d/dz``; ``m`` is a tuple of
parameter exponents of fixed length ``q``.  ``R`` is never expanded
into ``y, z`` here (see :mod:`hznf.verify` for that).

Scalar functions ``Z^a_b * mu^m = x^a R^(b-a) mu^m`` act on fields by
multiplication and are stored the same way in :class:`ScalarSeries`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "DimensionError",
    "ContractError",
    "Grading",
    "AlgebraElement",
    "ScalarSeries",
    "ParamChange",
    "E",
    "Z",
    "THETA",
    "zero",
    "bracket",
    "scalar_action",
    "mu_derivative_action",
    "grade",
    "apply_state_transform",
    "apply_time_rescaling",
    "apply_param_subst",
    "apply_generator",
    "truncate",
]

Key = tuple  # (l, k, m)


class DimensionError(ValueError):
    """Operands live over different numbers of parameters."""


class ContractError(ValueError):
    """An operation was called outside its documented domain."""


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not accepted")
    return Fraction(c)


def _add_mono(m1: tuple, m2: tuple) -> tuple:
    return tuple(a + b for a, b in zip(m1, m2))


def _clean(terms: Mapping) -> dict:
    return {key: c for key, c in terms.items() if c != 0}


@dataclass(frozen=True)
class Grading:
    """Integer grading ``2k - l + alpha.m``.

    ``alpha`` holds the parameter weights.  Zero weights are accepted here;
    it is up to the caller to pair them with a parameter-degree bound.
    """

    alpha: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        if any(a < 0 for a in self.alpha):
            raise ValueError("parameter weights must be nonnegative")

    @classmethod
    def uniform(cls, q: int, weight: int = 1) -> "Grading":
        return cls((weight,) * q)

    @property
    def q(self) -> int:
        return len(self.alpha)

    def mu(self, m: tuple) -> int:
        return sum(a * e for a, e in zip(self.alpha, m))

    def state(self, l: int, k: int, m: tuple) -> int:
        return 2 * k - l + self.mu(m)

    def param_generator(self, i: int, m: tuple) -> int:
        """Grade of ``mu^m d/dmu_i``."""
        return self.mu(m) - self.alpha[i]


class AlgebraElement:
    """Immutable element ``rotation*Theta + sum c E^l_k mu^m``."""

    __slots__ = ("q", "rotation", "_terms", "_hash")

    def __init__(self, terms: Mapping | None = None, rotation=0, q: int = 0):
        self.q = int(q)
        self.rotation = _frac(rotation)
        clean = {}
        for key, c in (terms or {}).items():
            l, k, m = key
            m = tuple(m)
            if len(m) != self.q:
                raise DimensionError(f"parameter exponent {m} does not have length {self.q}")
            if not 0 <= l <= k:
                raise ValueError(f"E^{l}_{k} requires 0 <= l <= k")
            if any(e < 0 for e in m):
                raise ValueError("parameter exponents must be nonnegative")
            c = _frac(c)
            if c == 0:
                continue
            if l == 0 and k == 0 and not any(m):
                raise ContractError("the constant field E^0_0 is not part of the algebra")
            clean[(l, k, m)] = clean.get((l, k, m), 0) + c
        self._terms = _clean(clean)
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, rotation: Fraction, q: int) -> "AlgebraElement":
        obj = object.__new__(cls)
        obj.q = q
        obj.rotation = rotation
        obj._terms = terms
        obj._hash = None
        return obj

    @property
    def terms(self) -> Mapping:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def coeff(self, l: int, k: int, m: Iterable[int] | None = None) -> Fraction:
        m = tuple(m) if m is not None else (0,) * self.q
        return self._terms.get((l, k, m), Fraction(0))

    def is_zero(self) -> bool:
        return self.rotation == 0 and not self._terms

    def without_rotation(self) -> "AlgebraElement":
        return AlgebraElement._raw(self._terms, Fraction(0), self.q)

    def with_rotation(self, rotation) -> "AlgebraElement":
        return AlgebraElement._raw(self._terms, _frac(rotation), self.q)

    def mu_free(self) -> "AlgebraElement":
        """Restriction to ``mu = 0`` as a nonparametric element."""
        terms = {(l, k, ()): c for (l, k, m), c in self._terms.items() if not any(m)}
        return AlgebraElement._raw(terms, self.rotation, 0)

    def support(self) -> set:
        return set(self._terms)

    def _check(self, other: "AlgebraElement"):
        if self.q != other.q:
            raise DimensionError(f"q mismatch: {self.q} vs {other.q}")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        terms = dict(self._terms)
        for key, c in other._terms.items():
            s = terms.get(key, 0) + c
            if s:
                terms[key] = s
            else:
                terms.pop(key, None)
        return AlgebraElement._raw(terms, self.rotation + other.rotation, self.q)

    def __neg__(self):
        return AlgebraElement._raw({k: -c for k, c in self._terms.items()}, -self.rotation, self.q)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, (AlgebraElement, ScalarSeries)):
            return NotImplemented
        c = _frac(c)
        if c == 0:
            return zero(self.q)
        return AlgebraElement._raw({k: c * v for k, v in self._terms.items()}, c * self.rotation, self.q)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / _frac(c))

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.q == other.q and self.rotation == other.rotation and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.q, self.rotation, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"AlgebraElement({format_element(self)})"


def format_element(v: AlgebraElement) -> str:
    parts = []
    if v.rotation:
        parts.append(f"{v.rotation}*Theta")
    for (l, k, m) in sorted(v.keys()):
        c = v._terms[(l, k, m)]
        mono = f"E^{l}_{k}"
        if any(m):
            mono += "*" + "*".join(
                f"mu{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(m) if e
            )
        parts.append(f"{c}*{mono}")
    return " + ".join(parts) if parts else "0"


def zero(q: int = 0) -> AlgebraElement:
    return AlgebraElement._raw({}, Fraction(0), q)


def E(l: int, k: int, coeff=1, m: Iterable[int] = (), q: int | None = None) -> AlgebraElement:
    """Monomial ``coeff * E^l_k * mu^m``."""
    m = tuple(m)
    if q is None:
        q = len(m)
    if not m:
        m = (0,) * q
    return AlgebraElement({(l, k, m): coeff}, q=q)


def THETA(q: int = 0, coeff=1) -> AlgebraElement:
    return AlgebraElement(rotation=coeff, q=q)


class ScalarSeries:
    """Finite sum of ``c * Z^a_b * mu^m`` (``Z^a_b = x^a R^(b-a)``).

    Elements used as time rescalings may not carry a constant term;
    ``allow_constant=True`` lifts that for the one-off normalizing
    rescaling.
    """

    __slots__ = ("q", "_terms")

    def __init__(self, terms: Mapping | None = None, q: int = 0, allow_constant: bool = False):
        self.q = int(q)
        clean = {}
        for (a, b, m), c in (terms or {}).items():
            m = tuple(m)
            if len(m) != self.q:
                raise DimensionError(f"parameter exponent {m} does not have length {self.q}")
            if not 0 <= a <= b or any(e < 0 for e in m):
                raise ValueError(f"Z^{a}_{b} requires 0 <= a <= b")
            c = _frac(c)
            if c == 0:
                continue
            if b == 0 and not any(m) and not allow_constant:
                raise ContractError("time rescaling generators have no constant term")
            clean[(a, b, m)] = clean.get((a, b, m), 0) + c
        self._terms = _clean(clean)

    @classmethod
    def _raw(cls, terms: dict, q: int) -> "ScalarSeries":
        obj = object.__new__(cls)
        obj.q = q
        obj._terms = terms
        return obj

    @property
    def terms(self) -> Mapping:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def constant(self) -> Fraction:
        return self._terms.get((0, 0, (0,) * self.q), Fraction(0))

    def __add__(self, other):
        if not isinstance(other, ScalarSeries):
            return NotImplemented
        if self.q != other.q:
            raise DimensionError("q mismatch")
        terms = dict(self._terms)
        for key, c in other._terms.items():
            terms[key] = terms.get(key, 0) + c
        return ScalarSeries._raw(_clean(terms), self.q)

    def __neg__(self):
        return ScalarSeries._raw({k: -c for k, c in self._terms.items()}, self.q)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ScalarSeries):
            if self.q != other.q:
                raise DimensionError("q mismatch")
            out: dict = {}
            for (a1, b1, m1), c1 in self._terms.items():
                for (a2, b2, m2), c2 in other._terms.items():
                    key = (a1 + a2, b1 + b2, _add_mono(m1, m2))
                    out[key] = out.get(key, 0) + c1 * c2
            return ScalarSeries._raw(_clean(out), self.q)
        if isinstance(other, AlgebraElement):
            return NotImplemented
        c = _frac(other)
        return ScalarSeries._raw(_clean({k: c * v for k, v in self._terms.items()}), self.q)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ScalarSeries):
            return NotImplemented
        return self.q == other.q and self._terms == other._terms

    def __repr__(self):
        body = " + ".join(f"{c}*Z^{a}_{b}*mu{m}" for (a, b, m), c in sorted(self._terms.items()))
        return f"ScalarSeries({body or '0'})"


def Z(a: int, b: int, coeff=1, m: Iterable[int] = (), q: int | None = None) -> ScalarSeries:
    m = tuple(m)
    if q is None:
        q = len(m)
    if not m:
        m = (0,) * q
    return ScalarSeries({(a, b, m): coeff}, q=q)


class ParamChange:
    """Near-identity parameter substitution ``mu_j <- mu_j + P_j(mu)``.

    Each component is a dictionary ``{m: c}`` of parameter monomials with no
    constant term.
    """

    __slots__ = ("q", "components")

    def __init__(self, components: Iterable[Mapping] | None = None, q: int | None = None):
        comps = [dict(c) for c in (components or [])]
        if q is None:
            q = len(comps)
        if not comps:
            comps = [{} for _ in range(q)]
        if len(comps) != q:
            raise DimensionError(f"expected {q} components, got {len(comps)}")
        clean = []
        for comp in comps:
            entry = {}
            for m, c in comp.items():
                m = tuple(m)
                if len(m) != q:
                    raise DimensionError(f"parameter exponent {m} does not have length {q}")
                if not any(m):
                    raise ContractError("parameter changes have no constant term")
                c = _frac(c)
                if c:
                    entry[m] = entry.get(m, 0) + c
            clean.append(_clean(entry))
        self.q = q
        self.components = tuple(clean)

    def is_zero(self):
        return not any(self.components)

    def __add__(self, other):
        if not isinstance(other, ParamChange):
            return NotImplemented
        if self.q != other.q:
            raise DimensionError("q mismatch")
        comps = []
        for a, b in zip(self.components, other.components):
            d = dict(a)
            for m, c in b.items():
                d[m] = d.get(m, 0) + c
            comps.append(d)
        return ParamChange(comps, self.q)

    def __mul__(self, c):
        c = _frac(c)
        return ParamChange([{m: c * v for m, v in comp.items()} for comp in self.components], self.q)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ParamChange):
            return NotImplemented
        return self.q == other.q and self.components == other.components

    def __repr__(self):
        return f"ParamChange({list(self.components)})"


# ---------------------------------------------------------------------------
# Products and actions
# ---------------------------------------------------------------------------


def bracket(v: AlgebraElement, w: AlgebraElement) -> AlgebraElement:
    """Lie bracket; ``[E^l_k mu^a, E^m_n mu^b] = (n - k) E^{l+m}_{k+n} mu^{a+b}``."""
    if v.q != w.q:
        raise DimensionError(f"q mismatch: {v.q} vs {w.q}")
    out: dict = {}
    for (l1, k1, m1), c1 in v._terms.items():
        for (l2, k2, m2), c2 in w._terms.items():
            s = k2 - k1
            if s == 0:
                continue
            key = (l1 + l2, k1 + k2, _add_mono(m1, m2))
            out[key] = out.get(key, 0) + s * c1 * c2
    return AlgebraElement._raw(_clean(out), Fraction(0), v.q)


def scalar_action(T: ScalarSeries, v: AlgebraElement) -> AlgebraElement:
    """Multiplication ``Z^a_b mu^p . E^l_k mu^m = E^{a+l}_{b+k} mu^{p+m}``."""
    if T.q != v.q:
        raise DimensionError(f"q mismatch: {T.q} vs {v.q}")
    if v.rotation != 0:
        raise ContractError("scalar action is defined on the Euler part only; strip the rotation first")
    out: dict = {}
    for (a, b, p), c1 in T._terms.items():
        for (l, k, m), c2 in v._terms.items():
            key = (a + l, b + k, _add_mono(p, m))
            out[key] = out.get(key, 0) + c1 * c2
    return AlgebraElement._raw(_clean(out), Fraction(0), v.q)


def mu_derivative_action(P: ParamChange, v: AlgebraElement) -> AlgebraElement:
    """``sum_j (dv/dmu_j) * P_j``."""
    if P.q != v.q:
        raise DimensionError(f"q mismatch: {P.q} vs {v.q}")
    out: dict = {}
    for j, comp in enumerate(P.components):
        if not comp:
            continue
        for (l, k, m), c in v._terms.items():
            e = m[j]
            if e == 0:
                continue
            lowered = m[:j] + (e - 1,) + m[j + 1:]
            for p, cp in comp.items():
                key = (l, k, _add_mono(lowered, p))
                out[key] = out.get(key, 0) + e * c * cp
    return AlgebraElement._raw(_clean(out), Fraction(0), v.q)


def grade(x, g: Grading | None = None) -> int:
    """Grade of a monomial.

    ``x`` may be ``(l, k)`` or ``(l, k, m)`` for ``E^l_k mu^m`` (also used
    for ``Z^l_k mu^m``), a bare parameter exponent tuple, the string
    ``"theta"``, or a single-term :class:`AlgebraElement`.
    """
    if isinstance(x, str):
        if x.lower() in ("theta", "rotation"):
            return 0
        raise ValueError(f"unknown monomial {x!r}")
    if isinstance(x, AlgebraElement):
        if len(x) == 0:
            return 0
        if len(x) != 1 or x.rotation:
            raise ValueError("grade of a non-monomial element is undefined")
        x = next(iter(x.keys()))
    x = tuple(x)
    if len(x) == 2:
        l, k = x
        m = (0,) * (g.q if g else 0)
    elif len(x) == 3 and isinstance(x[2], tuple):
        l, k, m = x
    else:
        # a parameter exponent
        g = g or Grading.uniform(len(x))
        return g.mu(x)
    g = g or Grading.uniform(len(m))
    return g.state(l, k, m)


# ---------------------------------------------------------------------------
# Truncation and group elements
# ---------------------------------------------------------------------------


def truncate(v: AlgebraElement, max_grade: int, grading: Grading | None = None,
             max_param_deg: int | None = None) -> AlgebraElement:
    g = grading or Grading.uniform(v.q)
    terms = {
        key: c for key, c in v._terms.items()
        if g.state(*key) <= max_grade and (max_param_deg is None or sum(key[2]) <= max_param_deg)
    }
    return AlgebraElement._raw(terms, v.rotation, v.q)


def _min_state_grade(S: AlgebraElement, g: Grading) -> int:
    return min((g.state(*key) for key in S.keys()), default=None)


def apply_state_transform(S: AlgebraElement, v: AlgebraElement, max_grade: int,
                          grading: Grading | None = None,
                          max_param_deg: int | None = None) -> AlgebraElement:
    """``exp(ad_S) v`` truncated at ``max_grade``."""
    if S.q != v.q:
        raise DimensionError("q mismatch")
    if S.rotation:
        raise ContractError("state generator must not contain the rotation")
    if max_grade < 1:
        raise ContractError("max_grade must be positive")
    g = grading or Grading.uniform(v.q)
    low = _min_state_grade(S, g)
    if low is None:
        return truncate(v, max_grade, g, max_param_deg)
    if low < 1:
        raise ContractError("state generator must have all terms of grade >= 1")
    return _exp_series(lambda w: bracket(S, w), v, max_grade, g, max_param_deg)


def apply_time_rescaling(T: ScalarSeries, v: AlgebraElement, max_grade: int,
                         grading: Grading | None = None,
                         max_param_deg: int | None = None) -> AlgebraElement:
    """``(1 + T) v`` truncated at ``max_grade``."""
    if T.constant() != 0:
        raise ContractError("time rescaling must not have a constant term")
    g = grading or Grading.uniform(v.q)
    return truncate(v + scalar_action(T, v), max_grade, g, max_param_deg)


def rescale(v: AlgebraElement, c) -> AlgebraElement:
    """Constant time rescaling of the Euler part; the rotation is kept."""
    c = _frac(c)
    if c == 0:
        raise ContractError("rescaling constant must be nonzero")
    return (v.without_rotation() * c).with_rotation(v.rotation)


def apply_param_subst(P: ParamChange, v: AlgebraElement, max_grade: int | None = None,
                      max_param_deg: int | None = None,
                      grading: Grading | None = None) -> AlgebraElement:
    """Substitute ``mu_j <- mu_j + P_j(mu)`` and expand.

    The result is truncated by grade and by total parameter degree.  With
    both bounds ``None`` the substitution must terminate on its own, which
    holds for polynomial ``P`` and ``v``.
    """
    if P.q != v.q:
        raise DimensionError("q mismatch")
    g = grading or Grading.uniform(v.q)
    q = v.q

    def keep(m):
        return max_param_deg is None or sum(m) <= max_param_deg

    # images of each mu_j as polynomials {m: c}
    images = []
    for j in range(q):
        e = tuple(1 if i == j else 0 for i in range(q))
        poly = {e: Fraction(1)}
        for m, c in P.components[j].items():
            poly[m] = poly.get(m, 0) + c
        images.append(_clean(poly))

    power_cache: dict = {}

    def power(j, e):
        if (j, e) in power_cache:
            return power_cache[(j, e)]
        if e == 0:
            res = {(0,) * q: Fraction(1)}
        else:
            res = _poly_mul(power(j, e - 1), images[j], keep)
        power_cache[(j, e)] = res
        return res

    out: dict = {}
    for (l, k, m), c in v._terms.items():
        base = 2 * k - l
        if max_grade is not None and base > max_grade:
            continue
        poly = {(0,) * q: c}
        for j, e in enumerate(m):
            if e:
                poly = _poly_mul(poly, power(j, e), keep)
        for mm, cc in poly.items():
            if max_grade is not None and base + g.mu(mm) > max_grade:
                continue
            if l == 0 and k == 0 and not any(mm):
                raise ContractError("substitution produced a constant E^0_0 term")
            key = (l, k, mm)
            out[key] = out.get(key, 0) + cc
    return AlgebraElement._raw(_clean(out), v.rotation, q)


def _poly_mul(p1: dict, p2: dict, keep) -> dict:
    out: dict = {}
    for m1, c1 in p1.items():
        for m2, c2 in p2.items():
            m = _add_mono(m1, m2)
            if keep(m):
                out[m] = out.get(m, 0) + c1 * c2
    return _clean(out)


def _exp_series(op, v: AlgebraElement, max_grade: int, g: Grading,
                max_param_deg: int | None) -> AlgebraElement:
    rot = v.rotation
    term = truncate(v.without_rotation(), max_grade, g, max_param_deg)
    acc = dict(term._terms)
    # rotation commutes with everything in the algebra
    i = 0
    while term._terms:
        i += 1
        term = truncate(op(term), max_grade, g, max_param_deg) * Fraction(1, i)
        for key, c in term._terms.items():
            s = acc.get(key, 0) + c
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
        if i > 10_000:  # pragma: no cover - guards a non-positive grading
            raise ContractError("exponential series did not terminate; check generator grades")
    return AlgebraElement._raw(acc, rot, v.q)


def generator_operator(S: AlgebraElement | None, T: ScalarSeries | None, P: ParamChange | None):
    """Linear operator ``w -> [S, w] + T w + D_mu(w) P`` on Euler parts."""

    def op(w: AlgebraElement) -> AlgebraElement:
        out = zero(w.q)
        if S is not None and len(S):
            out = out + bracket(S, w)
        if T is not None and len(T):
            out = out + scalar_action(T, w)
        if P is not None and not P.is_zero():
            out = out + mu_derivative_action(P, w)
        return out

    return op


def apply_generator(v: AlgebraElement, max_grade: int, grading: Grading | None = None,
                    S: AlgebraElement | None = None, T: ScalarSeries | None = None,
                    P: ParamChange | None = None,
                    max_param_deg: int | None = None) -> AlgebraElement:
    """Exponential of the combined action of ``(S, P, T)`` applied to ``v``.

    All generator terms must have positive grade so the series is finite
    under truncation.  The rotation of ``v`` must be zero when ``T`` is
    nonzero.
    """
    g = grading or Grading.uniform(v.q)
    if T is not None and len(T) and v.rotation:
        raise ContractError("strip the rotation before time rescaling")
    _check_positive(g, S, T, P)
    return _exp_series(generator_operator(S, T, P), v, max_grade, g, max_param_deg)


def _check_positive(g: Grading, S, T, P):
    if S is not None:
        if S.rotation:
            raise ContractError("state generator must not contain the rotation")
        if any(g.state(*key) < 1 for key in S.keys()):
            raise ContractError("state generator terms must have positive grade")
    if T is not None:
        if any(g.state(*key) < 1 for key, _ in T.items()):
            raise ContractError("time generator terms must have positive grade")
    if P is not None:
        for i, comp in enumerate(P.components):
            if any(g.param_generator(i, m) < 1 for m in comp):
                raise ContractError("parameter generator terms must have positive grade")


def monomials(grade_value: int, g: Grading, max_param_deg: int | None = None,
              allow_constant: bool = False):
    """All keys ``(l, k, m)`` of a given grade (``E^l_k mu^m`` or ``Z^l_k mu^m``)."""
    out = []
    for m, wm in _param_monomials(g, grade_value, max_param_deg):
        rest = grade_value - wm
        # 2k - l = rest with 0 <= l <= k  ->  k in [ceil(rest/2), rest]
        for k in range((rest + 1) // 2, rest + 1):
            l = 2 * k - rest
            if 0 <= l <= k:
                if l == 0 and k == 0 and not any(m) and not allow_constant:
                    continue
                out.append((l, k, m))
    return out


def _param_monomials(g: Grading, max_weight: int, max_param_deg: int | None):
    """Pairs ``(m, alpha.m)`` with ``alpha.m <= max_weight``.

    Zero weights require ``max_param_deg`` to keep the list finite.
    """
    q = g.q
    if q == 0:
        return [((), 0)]
    if any(a == 0 for a in g.alpha) and max_param_deg is None:
        raise ContractError("zero parameter weights need a parameter-degree bound")
    out = []

    def rec(i, prefix, weight, deg):
        if i == q:
            out.append((tuple(prefix), weight))
            return
        a = g.alpha[i]
        e = 0
        while weight + a * e <= max_weight and (max_param_deg is None or deg + e <= max_param_deg):
            prefix.append(e)
            rec(i + 1, prefix, weight + a * e, deg + e)
            prefix.pop()
            e += 1
            if a == 0 and max_param_deg is None:  # pragma: no cover
                break

    rec(0, [], 0, 0)
    return out


def param_monomials(g: Grading, max_weight: int, max_param_deg: int | None = None):
    return _param_monomials(g, max_weight, max_param_deg)


def all_keys_upto(max_grade: int, g: Grading, max_param_deg: int | None = None):
    """Every ``(l, k, m)`` of grade ``<= max_grade`` (no constant)."""
    keys = []
    for n in range(0, max_grade + 1):
        keys.extend(monomials(n, g, max_param_deg))
    return keys


def element_from_items(items: Iterable, q: int, rotation=0) -> AlgebraElement:
    terms: dict = {}
    for key, c in items:
        terms[key] = terms.get(key, 0) + _frac(c)
    return AlgebraElement(terms, rotation=rotation, q=q)


def apply_linear_param_change(v: AlgebraElement, matrix) -> AlgebraElement:
    """Rewrite ``v`` through the linear substitution ``mu = matrix * nu``.

    Row ``j`` of ``matrix`` expresses ``mu_j`` in the new parameters.
    """
    q = v.q
    images = []
    for j in range(q):
        images.append(_clean({
            tuple(1 if t == i else 0 for t in range(q)): _frac(matrix[j][i]) for i in range(q)
        }))
    cache: dict = {}

    def power(j, e):
        if (j, e) not in cache:
            cache[(j, e)] = ({(0,) * q: Fraction(1)} if e == 0
                             else _poly_mul(power(j, e - 1), images[j], lambda m: True))
        return cache[(j, e)]

    out: dict = {}
    for (l, k, m), c in v._terms.items():
        poly = {(0,) * q: c}
        for j, e in enumerate(m):
            if e:
                poly = _poly_mul(poly, power(j, e), lambda mm: True)
        for mm, cc in poly.items():
            key = (l, k, mm)
            out[key] = out.get(key, 0) + cc
    return AlgebraElement._raw(_clean(out), v.rotation, q)
