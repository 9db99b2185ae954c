"""Independent checks that work in Cartesian coordinates.

Fields are expanded into ``(x, y, z)`` component form

    xdot = x f,   ydot = y f / 2 + a z,   zdot = z f / 2 - a y

where ``f = sum c x^l R^(k-l) mu^m`` and ``a`` is the rotation
coefficient.  Nothing here calls the normal-form machinery except
:func:`reproduce_paper_example`, which is a harness around it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Optional

from .algebra import AlgebraElement, ContractError
from .engine import DegenerateError, normalize_parametric
from .linalg import Echelon

__all__ = [
    "XyzPoly",
    "scalar_part",
    "components",
    "first_integral_obstruction",
    "cone_identity",
    "cone_invariance_check",
    "zero_curve_coefficients",
    "example_field",
    "ExampleReport",
    "reproduce_paper_example",
]


class XyzPoly:
    """Sparse polynomial in ``x, y, z`` and parameters.

    Keys are ``(i, j, k, m)`` for ``x^i y^j z^k mu^m``.
    """

    __slots__ = ("q", "terms")

    def __init__(self, terms: Mapping | None = None, q: int = 0):
        self.q = q
        self.terms = {key: Fraction(c) for key, c in (terms or {}).items() if c != 0}

    @classmethod
    def monomial(cls, i: int, j: int, k: int, m: tuple = (), c=1, q: int = 0) -> "XyzPoly":
        return cls({(i, j, k, tuple(m) or (0,) * q): c}, q)

    def __add__(self, other: "XyzPoly") -> "XyzPoly":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return XyzPoly(out, self.q)

    def __neg__(self) -> "XyzPoly":
        return XyzPoly({key: -c for key, c in self.terms.items()}, self.q)

    def __sub__(self, other: "XyzPoly") -> "XyzPoly":
        return self + (-other)

    def __mul__(self, other) -> "XyzPoly":
        if not isinstance(other, XyzPoly):
            c = Fraction(other)
            return XyzPoly({key: c * v for key, v in self.terms.items()}, self.q)
        out: dict = {}
        for (i1, j1, k1, m1), c1 in self.terms.items():
            for (i2, j2, k2, m2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2, k1 + k2, tuple(a + b for a, b in zip(m1, m2)))
                out[key] = out.get(key, 0) + c1 * c2
        return XyzPoly(out, self.q)

    __rmul__ = __mul__

    def diff(self, var: int) -> "XyzPoly":
        """Partial derivative in ``x`` (0), ``y`` (1) or ``z`` (2)."""
        out = {}
        for key, c in self.terms.items():
            e = key[var]
            if e:
                new = list(key)
                new[var] = e - 1
                out[tuple(new)] = c * e
        return XyzPoly(out, self.q)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, XyzPoly) and self.terms == other.terms

    def __repr__(self):
        return f"XyzPoly({len(self.terms)} terms)"


def _r_power(n: int, m: tuple, q: int) -> XyzPoly:
    # (y^2 + z^2)^n
    return XyzPoly({(0, 2 * i, 2 * (n - i), m): comb(n, i) for i in range(n + 1)}, q)


def scalar_part(v: AlgebraElement) -> XyzPoly:
    """``f`` with ``v = a Theta + f E``."""
    out = XyzPoly(q=v.q)
    for (l, k, m), c in v.items():
        term = _r_power(k - l, m, v.q) * XyzPoly.monomial(l, 0, 0, m=(0,) * v.q, q=v.q)
        out = out + term * c
    return out


def components(v: AlgebraElement) -> tuple[XyzPoly, XyzPoly, XyzPoly]:
    """``(xdot, ydot, zdot)`` of ``v``."""
    q = v.q
    f = scalar_part(v)
    one = (0,) * q
    x = XyzPoly({(1, 0, 0, one): 1}, q)
    y = XyzPoly({(0, 1, 0, one): 1}, q)
    z = XyzPoly({(0, 0, 1, one): 1}, q)
    a = v.rotation
    half = Fraction(1, 2)
    return x * f, y * f * half + z * a, z * f * half - y * a


def first_integral_obstruction(v: AlgebraElement, max_deg: int) -> int:
    """Dimension of the space of polynomial first integrals of degree ``<= max_deg``.

    Unknowns are the coefficients of every nonconstant monomial
    ``x^i y^j z^k`` with ``i + j + k <= max_deg``; the equations are the
    coefficients of ``F_x xdot + F_y ydot + F_z zdot``.
    """
    if v.q != 0:
        raise ContractError("first integrals are searched for nonparametric fields")
    if v.rotation:
        raise ContractError("the field must not contain the rotation")
    if not v.keys():
        raise ContractError("the zero field has every function as a first integral")
    xd, yd, zd = components(v)
    unknowns = [(i, j, d - i - j) for d in range(1, max_deg + 1)
                for i in range(d + 1) for j in range(d - i + 1)]
    # rank of the (sparse) system, one column per unknown
    ech = Echelon()
    for (i, j, k) in unknowns:
        F = XyzPoly({(i, j, k, ()): 1})
        ech.insert((F.diff(0) * xd + F.diff(1) * yd + F.diff(2) * zd).terms)
    return len(unknowns) - len(ech)


def cone_identity(xdot: XyzPoly, ydot: XyzPoly, zdot: XyzPoly) -> bool:
    """``R xdot - 2 x (y ydot + z zdot) == 0`` identically."""
    q = xdot.q
    one = (0,) * q
    x = XyzPoly({(1, 0, 0, one): 1}, q)
    y = XyzPoly({(0, 1, 0, one): 1}, q)
    z = XyzPoly({(0, 0, 1, one): 1}, q)
    R = y * y + z * z
    return (R * xdot - x * (y * ydot + z * zdot) * 2).is_zero()


def cone_invariance_check(v: AlgebraElement) -> bool:
    """Whether the cones ``R^2 = c |x|`` are invariant for ``v``."""
    return cone_identity(*components(v))


def zero_curve_coefficients(v: AlgebraElement, order: int) -> list[Fraction]:
    """Taylor coefficients of the slope ``x / R`` along ``f(x, R) = 0``.

    ``v`` must be parameter free with a nonzero ``E^1_1`` coefficient.  The
    returned list starts at ``R^0``.  The curve is a union of equilibria, and
    near-identity state changes move points along rays, so the slope as a
    function of ``R`` is invariant up to reparametrizations
    ``R -> R + O(R^2)``; its first two coefficients are orbital invariants.
    """
    if v.q != 0:
        raise ContractError("zero curves are computed for nonparametric fields")
    a = v.without_rotation().coeff(1, 1)
    if a == 0:
        raise DegenerateError("degenerate: zero quadratic part")
    # f(sigma R, R) / R = sum c sigma^l R^(k-1); solve for sigma(R) by iteration
    terms = [(l, k, c) for (l, k, _), c in v.without_rotation().items()]
    sigma = [Fraction(0)] * (order + 1)

    def series_pow(s, n):
        out = [Fraction(1)] + [Fraction(0)] * order
        for _ in range(n):
            out = [sum(out[i] * s[d - i] for i in range(d + 1)) for d in range(order + 1)]
        return out

    for _ in range(order + 1):
        rest = [Fraction(0)] * (order + 1)
        for l, k, c in terms:
            if (l, k) == (1, 1):
                continue
            shift = k - 1
            if shift > order:
                continue
            p = series_pow(sigma, l)
            for d in range(order + 1 - shift):
                rest[d + shift] += c * p[d]
        sigma = [-x / a for x in rest]
    return sigma


def example_field(a, b, c, d, e, x_line: bool = True) -> AlgebraElement:
    """The three-parameter worked example as a field in the algebra.

    ``xdot = 2 x g``, ``ydot = z + y g``, ``zdot = -y + z g`` with
    ``g = mu1 + x (a + mu1 + mu2) + R (b + mu2) + x^2 (c + mu1^2 + mu2^2)
    + R^2 mu3 + e x^3 + x R (d + mu1^2)``.  In terms of the Euler field
    used here the scalar part is ``2 g``.  Only the ``xdot`` line carries
    the ``mu1^2`` part of the ``x^2`` coefficient; ``x_line=False`` drops it
    (the ``ydot``/``zdot`` reading).
    """
    a, b, c, d, e = (Fraction(t) for t in (a, b, c, d, e))
    m0, m1, m2, m3 = (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)
    g = {
        (0, 0, m1): 1,
        (1, 1, m0): a, (1, 1, m1): 1, (1, 1, m2): 1,
        (0, 1, m0): b, (0, 1, m2): 1,
        (2, 2, m0): c, (2, 2, (0, 2, 0)): 1,
        (0, 2, m3): 1,
        (3, 3, m0): e,
        (1, 2, m0): d, (1, 2, (2, 0, 0)): 1,
    }
    if x_line:
        g[(2, 2, (2, 0, 0))] = 1
    return AlgebraElement({key: 2 * c for key, c in g.items()}, rotation=1, q=3)


@dataclass
class ExampleReport:
    params: tuple
    beta1: Optional[Fraction] = None
    beta2: Optional[Fraction] = None
    expected_beta1: Optional[Fraction] = None
    expected_beta2: Optional[Fraction] = None
    unit_quadratic: bool = False
    unit_unfolding: bool = False
    r: Optional[int] = None
    error: Optional[str] = None
    normalized: Optional[AlgebraElement] = field(default=None, repr=False)

    @property
    def beta1_ok(self) -> bool:
        return self.beta1 is not None and self.beta1 == self.expected_beta1

    @property
    def beta2_ok(self) -> bool:
        return self.beta2 is not None and self.beta2 == self.expected_beta2

    @property
    def passed(self) -> bool:
        return (self.error is None and self.unit_quadratic and self.unit_unfolding
                and self.beta1_ok and self.beta2_ok)

    def as_dict(self) -> dict:
        def s(x):
            return None if x is None else str(x)

        return {
            "params": [str(p) for p in self.params],
            "r": self.r,
            "beta1": s(self.beta1),
            "beta2": s(self.beta2),
            "expected_beta1": s(self.expected_beta1),
            "expected_beta2": s(self.expected_beta2),
            "unit_quadratic": self.unit_quadratic,
            "unit_unfolding": self.unit_unfolding,
            "beta1_ok": self.beta1_ok,
            "beta2_ok": self.beta2_ok,
            "passed": self.passed,
            "error": self.error,
        }


def reproduce_paper_example(a, b, c, d, e, max_grade: int = 12,
                            max_param_deg: int = 3) -> ExampleReport:
    """Normalize the worked example and compare with the closed forms
    ``beta1 = b/a`` and ``beta2 = b(da - cb)/a^3``.

    Raises :class:`ContractError` when ``ab(da - cb) = 0``.  A tuple with
    ``a = b`` satisfies that condition but makes the unfolding matrix
    singular; the report then carries the error instead of values.
    """
    a, b, c, d, e = (Fraction(t) for t in (a, b, c, d, e))
    if a * b * (d * a - c * b) == 0:
        raise ContractError("the example needs ab(da - cb) != 0")
    rep = ExampleReport(params=(a, b, c, d, e), expected_beta1=b / a,
                        expected_beta2=b * (d * a - c * b) / a ** 3)
    try:
        res = normalize_parametric(example_field(a, b, c, d, e), max_grade, max_param_deg)
    except DegenerateError as exc:
        rep.error = str(exc)
        return rep
    n = res.normalized
    rep.normalized = n
    rep.r = res.r
    rep.beta1 = n.coeff(0, 1)
    rep.beta2 = n.coeff(0, 2)
    rep.unit_quadratic = n.coeff(1, 1) == 1
    rep.unit_unfolding = all(n.coeff(0, k, tuple(int(i == k) for i in range(3))) == 1
                             for k in range(3))
    return rep
