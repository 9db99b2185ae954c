"""State, orbital and parametric normal forms.

All three pipelines share one grade-by-grade sweep.  At grade ``n`` and
level ``k`` the admissible generators are sums ``Y = Y_{n-k+1} + ... +
Y_{n-1}`` whose first-order effect on the current field vanishes below
grade ``n``; their grade-``n`` effects span the removable space.  The
style keeps monomials with small ``l`` (then small ``k``, then small
parameter exponent) and removes the rest.  Because the first-order effect
of an admissible ``Y`` starts at grade ``n``, its exponential changes
nothing below ``n``, so one pass per level is exact.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import algebra as alg
from .algebra import (
    AlgebraElement,
    ContractError,
    Grading,
    ParamChange,
    ScalarSeries,
)
from .linalg import Echelon, inverse, keep_priority, rank

__all__ = [
    "DegenerateError",
    "Truncation",
    "LogEntry",
    "TransformLog",
    "LevelState",
    "NormalFormResult",
    "strip_rotation",
    "level_sweep",
    "normalize_state",
    "normalize_orbital",
    "normalize_parametric",
    "nondegeneracy_matrix",
    "linearize_parameters",
    "solve_symmetry",
    "parametric_weights",
    "unshifted_alpha_grade",
]

log = logging.getLogger(__name__)

PIPELINES = ("state", "orbital", "parametric")


class DegenerateError(ValueError):
    """The input violates a nondegeneracy hypothesis of the normal form."""


@dataclass(frozen=True)
class Truncation:
    grading: Grading
    max_grade: int
    max_param_deg: Optional[int] = None

    def cut(self, v: AlgebraElement) -> AlgebraElement:
        return alg.truncate(v, self.max_grade, self.grading, self.max_param_deg)

    def grade(self, key) -> int:
        return self.grading.state(*key)


@dataclass(frozen=True)
class LogEntry:
    """One applied group element acting on the Euler part of a field.

    ``kind`` is ``"generator"`` (exponential of ``(S, P, T)``), ``"rescale"``
    (multiplication by the constant ``scale``) or ``"linear-params"``
    (substitution ``mu = matrix * nu``).
    """

    stage: str
    kind: str
    truncation: Truncation
    grade: int = 0
    level: int = 0
    S: Optional[AlgebraElement] = None
    T: Optional[ScalarSeries] = None
    P: Optional[ParamChange] = None
    scale: Optional[Fraction] = None
    matrix: Optional[tuple] = None

    def apply(self, w: AlgebraElement) -> AlgebraElement:
        tr = self.truncation
        if self.kind == "generator":
            return alg.apply_generator(w, tr.max_grade, tr.grading, S=self.S, T=self.T, P=self.P,
                                       max_param_deg=tr.max_param_deg)
        if self.kind == "rescale":
            return tr.cut(w * self.scale)
        if self.kind == "linear-params":
            return tr.cut(alg.apply_linear_param_change(w, self.matrix))
        raise ValueError(f"unknown log entry kind {self.kind!r}")


@dataclass
class TransformLog:
    entries: list = field(default_factory=list)

    def append(self, entry: LogEntry):
        self.entries.append(entry)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def replay(self, v: AlgebraElement) -> AlgebraElement:
        """Apply every entry to ``v``; the rotation is carried through."""
        rot = v.rotation
        w = v.without_rotation()
        for e in self.entries:
            w = e.apply(w)
        return w.with_rotation(rot)


@dataclass
class GradeRecord:
    grade: int
    level: int
    generator_dim: int
    kernel_dim: int  # admissible tuples with no effect up to and including grade n
    image_dim: int
    kept: list


@dataclass
class LevelState:
    level: int
    records: dict = field(default_factory=dict)  # grade -> GradeRecord

    def kernel_dims(self) -> dict:
        return {n: r.kernel_dim for n, r in sorted(self.records.items())}

    def image_dims(self) -> dict:
        return {n: r.image_dim for n, r in sorted(self.records.items())}

    def kept(self, n: int) -> list:
        return self.records[n].kept


@dataclass
class NormalFormResult:
    normalized: AlgebraElement
    r: Optional[int]
    case_tag: str
    log: TransformLog
    truncation: Truncation
    level2: Optional[AlgebraElement] = None
    states: list = field(default_factory=list)
    A: Optional[list] = None
    grading: Optional[Grading] = None

    @property
    def r_detected(self) -> bool:
        return self.r is not None


# ---------------------------------------------------------------------------
# generator spaces
# ---------------------------------------------------------------------------


def _generator_basis(pipeline: str, j: int, tr: Truncation, exclude=frozenset()) -> list:
    g = tr.grading
    M = tr.max_param_deg
    gens = [("S", key) for key in alg.monomials(j, g, M)]
    if pipeline in ("orbital", "parametric"):
        gens += [("T", key) for key in alg.monomials(j, g, M)]
    if pipeline == "parametric":
        for i in range(g.q):
            for m, w in alg.param_monomials(g, j + g.alpha[i], M):
                if w - g.alpha[i] == j and sum(m) >= 1 and m != _unit(i, g.q):
                    gens.append(("P", (i, m)))
    if exclude:
        gens = [gen for gen in gens if gen not in exclude]
    return gens


def _unit(i: int, q: int) -> tuple:
    return tuple(1 if t == i else 0 for t in range(q))


def _gen_grade(gen, g: Grading) -> int:
    kind, key = gen
    if kind == "P":
        i, m = key
        return g.param_generator(i, m)
    return g.state(*key)


def _effect(gen, v: AlgebraElement) -> AlgebraElement:
    kind, key = gen
    q = v.q
    if kind == "S":
        return alg.bracket(AlgebraElement._raw({key: Fraction(1)}, Fraction(0), q), v)
    if kind == "T":
        return alg.scalar_action(ScalarSeries._raw({key: Fraction(1)}, q), v)
    i, m = key
    comps = [{} for _ in range(q)]
    comps[i] = {m: Fraction(1)}
    return alg.mu_derivative_action(ParamChange(comps, q), v)


def _assemble(combo: dict, q: int):
    s, t, p = {}, {}, [{} for _ in range(q)]
    for (kind, key), c in combo.items():
        if c == 0:
            continue
        if kind == "S":
            s[key] = c
        elif kind == "T":
            t[key] = c
        else:
            i, m = key
            p[i][m] = c
    S = AlgebraElement._raw(s, Fraction(0), q) if s else None
    T = ScalarSeries._raw(t, q) if t else None
    P = ParamChange(p, q) if any(p) else None
    return S, T, P


# ---------------------------------------------------------------------------
# the sweep
# ---------------------------------------------------------------------------


def strip_rotation(v: AlgebraElement) -> tuple[AlgebraElement, Fraction]:
    """Drop the rotation; return the Euler part and the removed coefficient."""
    return v.without_rotation(), v.rotation


def _slices(v: AlgebraElement, tr: Truncation) -> dict:
    out: dict = {}
    for key, c in v.items():
        out.setdefault(tr.grade(key), {})[key] = c
    return out


def _normalize_grade(v: AlgebraElement, pipeline: str, n: int, k: Optional[int],
                     tr: Truncation, stage: str, tlog: TransformLog,
                     state: LevelState, exclude=frozenset()) -> AlgebraElement:
    g = tr.grading
    level = n if k is None else min(k, n)
    lo = max(1, n - level + 1)
    slices = _slices(v, tr)
    gens = []
    for j in range(lo, n):
        gens.extend(_generator_basis(pipeline, j, tr, exclude))

    low_ech = Echelon()
    images = []
    symmetric = 0
    for gen in gens:
        gj = _gen_grade(gen, g)
        part = {}
        for t in range(1, n - gj + 1):
            part.update(slices.get(t, {}))
        if not part:
            low, high = {}, {}
        else:
            eff = _effect(gen, AlgebraElement._raw(part, Fraction(0), v.q))
            low, high = {}, {}
            for key, c in eff.items():
                if tr.max_param_deg is not None and sum(key[2]) > tr.max_param_deg:
                    continue
                gk = tr.grade(key)
                if gk < n:
                    low[key] = c
                elif gk == n:
                    high[key] = c
        dep = low_ech.insert(low, {gen: Fraction(1)}, high)
        if dep is not None:
            tag, extra = dep
            if extra:
                images.append((extra, tag))
            else:
                symmetric += 1

    img_ech = Echelon(order=keep_priority)
    for high, tag in images:
        img_ech.insert(high, tag)
    vn = slices.get(n, {})
    rem, combo = img_ech.reduce_full(vn)
    removed = img_ech.pivots()
    kept = sorted((key for key in alg.monomials(n, g, tr.max_param_deg) if key not in removed),
                  key=keep_priority)
    state.records[n] = GradeRecord(n, level, len(gens), symmetric + len(images) - len(img_ech),
                                   len(img_ech), kept)
    if not combo:
        return v
    S, T, P = _assemble(combo, v.q)
    entry = LogEntry(stage, "generator", tr, grade=n, level=level, S=S, T=T, P=P)
    out = entry.apply(v)
    tlog.append(entry)
    return out


def level_sweep(v: AlgebraElement, pipeline: str, k: Optional[int], tr: Truncation,
                stage: str = "sweep", tlog: TransformLog | None = None,
                start: int = 2, exclude=frozenset()) -> tuple[AlgebraElement, LevelState, TransformLog]:
    """Bring ``v`` (rotation already removed) to its ``k``-th level form.

    ``k=None`` means the infinite level (``k = n`` at every grade).
    ``exclude`` removes basis generators (``("S", key)``, ``("T", key)`` or
    ``("P", (i, m))``) from the admissible space.
    """
    if pipeline not in PIPELINES:
        raise ValueError(f"unknown pipeline {pipeline!r}")
    if v.rotation:
        raise ContractError("level_sweep works on the Euler part; strip the rotation first")
    if k is not None and k < 2:
        raise ValueError("levels start at 2")
    if pipeline == "state" and v.coeff(1, 1) == 0:
        raise DegenerateError("degenerate: zero quadratic part")
    tlog = tlog if tlog is not None else TransformLog()
    state = LevelState(level=k if k is not None else -1)
    v = tr.cut(v)
    for n in range(start, tr.max_grade + 1):
        v = _normalize_grade(v, pipeline, n, k, tr, stage, tlog, state, exclude)
    return v, state, tlog


# ---------------------------------------------------------------------------
# state pipeline
# ---------------------------------------------------------------------------


def _quadratic(v: AlgebraElement) -> Fraction:
    c = v.coeff(1, 1)
    if c == 0:
        raise DegenerateError("degenerate: zero quadratic part")
    return c


def _state_case(u2: AlgebraElement, max_grade: int):
    b01, b22, b12, b02 = (u2.coeff(0, 1), u2.coeff(2, 2), u2.coeff(1, 2), u2.coeff(0, 2))
    mixed = b01 * (b12 - b01 * b22)
    if b02 - mixed != 0:
        return 2, "form-11"
    r = next((k for k in range(3, max_grade // 2 + 1) if u2.coeff(0, k) != 0), None)
    return r, ("form-12" if mixed != 0 else "form-11")


def normalize_state(v: AlgebraElement, max_grade: int = 12) -> NormalFormResult:
    """Simplest normal form under near-identity changes of state variables."""
    if v.q != 0:
        raise ContractError("the state pipeline is nonparametric (q = 0)")
    _quadratic(v)
    tr = Truncation(Grading(()), max_grade)
    u, rot = strip_rotation(tr.cut(v))
    tlog = TransformLog()
    u2, st2, _ = level_sweep(u, "state", 2, tr, "state-level-2", tlog)
    r, tag = _state_case(u2, max_grade)
    uinf, stinf, _ = level_sweep(u2, "state", None, tr, "state-infinite", tlog)
    out = uinf.with_rotation(rot)
    if out == tr.cut(v):
        tag = "already-normal"
    return NormalFormResult(out, r, tag, tlog, tr, level2=u2.with_rotation(rot),
                            states=[st2, stinf], grading=tr.grading)


# ---------------------------------------------------------------------------
# orbital pipeline
# ---------------------------------------------------------------------------


def _first_r(u: AlgebraElement, max_grade: int) -> Optional[int]:
    return next((k for k in range(2, max_grade // 2 + 1) if u.coeff(0, k) != 0), None)


def normalize_orbital(v: AlgebraElement, max_grade: int = 12) -> NormalFormResult:
    """Simplest orbital normal form (state changes plus time rescaling)."""
    if v.q != 0:
        raise ContractError("the orbital pipeline is nonparametric (q = 0)")
    b11 = _quadratic(v)
    tr = Truncation(Grading(()), max_grade)
    u, rot = strip_rotation(tr.cut(v))
    tlog = TransformLog()
    if b11 != 1:
        entry = LogEntry("orbital-rescale", "rescale", tr, scale=1 / b11)
        u = entry.apply(u)
        tlog.append(entry)
    u2, st2, _ = level_sweep(u, "orbital", 2, tr, "orbital-level-2", tlog)
    r = _first_r(u2, max_grade)
    uinf, stinf, _ = level_sweep(u2, "orbital", None, tr, "orbital-infinite", tlog)
    out = uinf.with_rotation(rot)
    tag = "already-normal" if out == tr.cut(v) else "orbital"
    return NormalFormResult(out, r, tag, tlog, tr, level2=u2.with_rotation(rot),
                            states=[st2, stinf], grading=tr.grading)


# ---------------------------------------------------------------------------
# parametric pipeline
# ---------------------------------------------------------------------------


def parametric_weights(r: int, q: int) -> Grading:
    """Positive weights used for the final parametric sweep.

    ``alpha_i = 2(r - i + 1) + c`` with ``c = 2r + 1`` for ``i <= r + 1``, so
    every unfolding monomial ``E^0_k mu_{k+1}`` shares one grade and every
    parameter change of degree >= 2 has positive grade.  Surplus parameters
    weigh more than ``mu_1``.
    """
    c = 2 * r + 1
    alpha = []
    for i in range(1, q + 1):
        if i <= r + 1:
            alpha.append(2 * (r - i + 1) + c)
        else:
            alpha.append(2 * r + c + 1)
    return Grading(tuple(alpha))


def unshifted_alpha_grade(key, r: int) -> int:
    """Grade with weights ``2(r - i + 1)`` (and 1 for surplus parameters)."""
    l, k, m = key
    w = [2 * (r - i) if i < r + 1 else 1 for i in range(len(m))]
    return 2 * k - l + sum(a * e for a, e in zip(w, m))


def nondegeneracy_matrix(v2: AlgebraElement, max_grade: Optional[int] = None) -> tuple[int, list]:
    """``r`` and the ``(r+1) x q`` matrix of coefficients of ``E^0_k mu_j``."""
    q = v2.q
    base = v2.mu_free()
    kmax = (max_grade // 2) if max_grade is not None else max((k for (_, k, _) in v2.keys()), default=0)
    r = next((k for k in range(2, kmax + 1) if base.coeff(0, k) != 0), None)
    if r is None:
        raise DegenerateError("flat: no E^0_k (k>1) term")
    A = [[v2.coeff(0, k, _unit(j, q)) for j in range(q)] for k in range(r + 1)]
    if q < r + 1:
        raise DegenerateError("degenerate perturbation (too few parameters)")
    if rank(A) < r + 1:
        raise DegenerateError("degenerate perturbation")
    return r, A


def _completion(A: list, q: int) -> list:
    rows = [list(row) for row in A]
    for j in range(q):
        if len(rows) == q:
            break
        e = [Fraction(int(i == j)) for i in range(q)]
        if rank(rows + [e]) == len(rows) + 1:
            rows.append(e)
    return rows


def linearize_parameters(v2: AlgebraElement, r: int, A: list,
                         tr: Truncation | None = None) -> tuple[AlgebraElement, tuple]:
    """Invertible linear parameter change making the unfolding rows of ``A``
    the identity.

    New parameters are ``nu = M mu`` with ``M`` the rows of ``A`` completed by
    standard basis rows; the field is rewritten through ``mu = M^{-1} nu``.
    Returns the new field and ``M^{-1}`` (as nested tuples).
    """
    q = v2.q
    if rank(A) < r + 1 or q < r + 1:
        raise DegenerateError("degenerate perturbation")
    M = _completion(A, q)
    Minv = tuple(tuple(row) for row in inverse(M))
    w = alg.apply_linear_param_change(v2, Minv)
    if tr is not None:
        w = tr.cut(w)
    return w, Minv


def normalize_parametric(w: AlgebraElement, max_grade: int = 12,
                         max_param_deg: Optional[int] = 4) -> NormalFormResult:
    """Simplest parametric normal form of a nondegenerate unfolding.

    Truncation is two-dimensional: grade ``<= max_grade`` under the weights
    in use and total parameter degree ``<= max_param_deg``.  Before ``r`` is
    known all parameters weigh ``2r + 1``; afterwards
    :func:`parametric_weights` applies.  Both are bounded below by the
    uniform weights, so the first truncation contains everything the second
    one needs.
    """
    q = w.q
    if q < 1:
        raise ContractError("the parametric pipeline needs q >= 1")
    b11 = w.coeff(1, 1)
    if b11 == 0:
        raise DegenerateError("degenerate: zero quadratic part")
    u, rot = strip_rotation(w)
    tlog = TransformLog()

    # r is read off the parameter-free part at level 2
    base_tr = Truncation(Grading(()), max_grade)
    base = base_tr.cut(u.mu_free() * (1 / b11))
    base2, _, _ = level_sweep(base, "orbital", 2, base_tr, "parametric-probe")
    r = _first_r(base2, max_grade)
    if r is None:
        raise DegenerateError("flat: no E^0_k (k>1) term")
    if q < r + 1:
        raise DegenerateError("degenerate perturbation (too few parameters)")
    if max_grade < 4 * r + 1:
        # E^0_r mu_j sits at grade 2r + (2r + 1) before linearization
        raise ContractError(f"max_grade must be at least {4 * r + 1} to read the unfolding terms (r = {r})")

    tr0 = Truncation(Grading.uniform(q, 2 * r + 1), max_grade, max_param_deg)
    u = tr0.cut(u)
    entry = LogEntry("parametric-rescale", "rescale", tr0, scale=1 / b11)
    u = entry.apply(u)
    tlog.append(entry)
    # E^1_1 mu_j is removed by the time generator mu_j, never by the Euler
    # scaling E^0_0 mu_j
    euler = frozenset(("S", (0, 0, _unit(j, q))) for j in range(q))
    u2, st2, _ = level_sweep(u, "parametric", 2, tr0, "parametric-level-2", tlog, exclude=euler)
    r2, A = nondegeneracy_matrix(u2, max_grade)
    assert r2 == r

    g1 = parametric_weights(r, q)
    tr1 = Truncation(g1, max_grade, max_param_deg)
    M = _completion(A, q)
    Minv = tuple(tuple(row) for row in inverse(M))
    entry = LogEntry("parametric-linearize", "linear-params", tr1, matrix=Minv)
    u3 = entry.apply(u2)
    tlog.append(entry)
    # the scaling along the last unfolding parameter has grade zero in the
    # unfolding weights and is not a permissible generator
    frozen = frozenset({("S", (0, 0, _unit(r, q)))})
    u4, st4, _ = level_sweep(u3, "parametric", 2, tr1, "parametric-level-2b", tlog, exclude=frozen)
    uinf, stinf, _ = level_sweep(u4, "parametric", None, tr1, "parametric-infinite", tlog,
                                 exclude=frozen)
    out = uinf.with_rotation(rot)
    tag = "already-normal" if out == tr1.cut(w) else "parametric"
    return NormalFormResult(out, r, tag, tlog, tr1, level2=u2.with_rotation(rot),
                            states=[st2, st4, stinf], A=A, grading=g1)


# ---------------------------------------------------------------------------
# symmetries of orbital normal forms
# ---------------------------------------------------------------------------


def solve_symmetry(u: AlgebraElement, l: int, k: int, max_grade: int = 12):
    """Solve ``[S, u] + T u = -Z^l_k u`` up to ``max_grade``.

    The pure-time solution ``T = -Z^l_k`` is excluded from the unknowns, so
    a returned solution always has a nonzero state part.  Returns
    ``(S, T)`` or ``None`` when the truncated system is inconsistent.
    """
    if not (l >= 1 and k >= 2 and l <= k):
        raise ContractError("need 1 <= l <= k and k >= 2")
    if u.q != 0:
        raise ContractError("symmetries are computed for nonparametric fields")
    u = u.without_rotation()  # the rotation commutes with everything
    extra = {key for key in u.keys() if key not in ((1, 1, ()), (0, 1, ()))}
    if any(key[0] != 0 for key in extra) or len(extra) > 1:
        raise ContractError("u must be an orbital normal form E^1_1 + b E^0_1 + c E^0_r")
    tr = Truncation(Grading(()), max_grade)
    target = alg.scalar_action(alg.Z(l, k), u) * -1
    gens = []
    for j in range(1, max_grade):
        gens += [g for g in _generator_basis("orbital", j, tr) if g != ("T", (l, k, ()))]
    ech = Echelon()
    for gen in gens:
        eff = tr.cut(_effect(gen, u))
        ech.insert(dict(eff.items()), {gen: Fraction(1)})
    rem, combo = ech.reduce_full(dict(tr.cut(target).items()))
    if rem:
        return None
    S, T, _ = _assemble({key: -c for key, c in combo.items()}, 0)
    if S is None:
        return None
    return S, T
