"""Signed intersection count h_2 = <Delta, Gamma> for closures of 2-strand braids."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import quat
from .braid import BraidWord, artin_action, linking_number, parse_braid
from .errors import DegenerateFrame, TangencyUnresolved, UnsupportedEpsilon
from .orientation import (
    HOPF_BASE,
    change_of_basis,
    combine,
    complement_frame,
    df,
    orbit_frame,
    oriented_pillowcase_basis,
    pillowcase_coordinates,
    pillowcase_frame,
    product_orientation_basis,
)
from .pillowcase import (
    DEFAULT_RESOLUTION,
    PILLOWCASE_TOL,
    PillowcasePoint,
    TorusLift,
    delta_velocity,
    find_intersections,
    gamma_velocity,
    param_g,
)
from .quat import I, J, K, ZERO, Quaternion, mul
from .repspace import HOPF_EPSILON, RepTuple, SignTuple, eps_sigma, fixed_point_residual

TRANSVERSE_TOL = 1e-6


@dataclass(frozen=True)
class IntersectionDatum:
    point: PillowcasePoint
    theta_delta: float
    theta_gamma: float
    velocity_delta: tuple[Quaternion, ...]
    velocity_gamma: tuple[Quaternion, ...]
    coords_delta: tuple[float, float]  # on (u1, u2)
    coords_gamma: tuple[float, float]
    sign: int
    residual: float


@dataclass
class CassonLinResult:
    braid: BraidWord
    epsilon: tuple[int, ...]
    intersections: list[IntersectionDatum]
    h2: int
    lk: int
    complete: bool = True

    @property
    def agrees(self) -> bool:
        return self.complete and self.h2 == -self.lk


def intersection_sign(
    lift: TorusLift,
    velocity_delta: Sequence[Quaternion],
    velocity_gamma: Sequence[Quaternion],
    complement=None,
) -> tuple[int, np.ndarray, np.ndarray]:
    """Sign of a transverse crossing of the two curves at ``g(lift)``.

    Returns the sign together with the pillowcase coordinates of both
    velocities on ``(u1, u2)``.
    """
    cd = pillowcase_coordinates(lift, tuple(velocity_delta))
    cg = pillowcase_coordinates(lift, tuple(velocity_gamma))
    u1, u2 = pillowcase_frame(lift)
    positive = oriented_pillowcase_basis(lift, complement)
    pd, pg = combine(cd, (u1, u2)), combine(cg, (u1, u2))
    det = float(np.linalg.det(change_of_basis((pd, pg), positive)))
    if abs(det) <= TRANSVERSE_TOL:
        raise TangencyUnresolved(f"curves are tangent (determinant {det:.3g})")
    return (1 if det > 0 else -1), cd, cg


def _check_epsilon(eps: Sequence[int]) -> SignTuple:
    if tuple(eps) != HOPF_EPSILON:
        raise UnsupportedEpsilon(
            "for 2-strand braids only eps = (-1, -1) gives projective representations with w2 != 0"
        )
    return SignTuple(tuple(eps))


def casson_lin_h2(
    b: BraidWord | str,
    eps: Sequence[int] = HOPF_EPSILON,
    resolution: int = DEFAULT_RESOLUTION,
    tol: float = PILLOWCASE_TOL,
) -> CassonLinResult:
    """h_2 of the closure of a 2-strand braid, with its linking number for comparison."""
    if isinstance(b, str):
        b = parse_braid(b, 2)
    if b.strand_count != 2:
        raise ValueError("only 2-strand braids are supported")
    lk = linking_number(b)  # raises NotTwoComponents
    sign_tuple = _check_epsilon(eps)
    auto = artin_action(b)
    points = find_intersections(sign_tuple, auto, resolution=resolution, tol=tol, strict=False)
    data = []
    complete = True
    for p in points:
        if abs(p.slope) <= TRANSVERSE_TOL:
            complete = False
            continue
        vd = delta_velocity(p.theta)
        vg = gamma_velocity(sign_tuple, auto, p.theta)
        try:
            sign, cd, cg = intersection_sign(p.lift, vd, vg)
        except TangencyUnresolved:
            complete = False
            continue
        data.append(
            IntersectionDatum(
                point=p.point,
                theta_delta=p.theta,
                theta_gamma=p.theta,
                velocity_delta=vd,
                velocity_gamma=vg,
                coords_delta=(float(cd[0]), float(cd[1])),
                coords_gamma=(float(cg[0]), float(cg[1])),
                sign=sign,
                residual=p.residual,
            )
        )
    return CassonLinResult(b, tuple(eps), data, sum(d.sign for d in data), lk, complete)


def exact_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-exact elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] / m[col][col]
            for c in range(col, n):
                m[r][c] -= factor * m[col][c]
    assert det.denominator == 1
    return int(det)


# Values displayed for the right-handed Hopf link.
HOPF_M = [
    [0, 0, 1, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, -1, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, -1, 0, 0, 0, -1],
    [0, 0, 0, -1, 1, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, -1, 0, 0, -1],
]


@dataclass
class TraceEntry:
    name: str
    value: Any
    expected: Any
    passed: bool
    error: float | None = None


@dataclass
class HopfTrace:
    entries: list[TraceEntry] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def add(self, name, value, expected, passed, error=None):
        self.entries.append(TraceEntry(name, value, expected, bool(passed), error))


def _tv_error(got: Sequence[Quaternion], want: Sequence[Quaternion]) -> float:
    return max(quat.distance(p, q) for p, q in zip(got, want))


def _fmt_tv(v: Sequence[Quaternion]) -> str:
    names = ("1", "i", "j", "k")

    def one(q: Quaternion) -> str:
        terms = []
        for c, nm in zip(q, names):
            c = round(c, 9) + 0.0
            if c == 0:
                continue
            mag = "" if abs(c) == 1 and nm != "1" else f"{abs(c):g}"
            terms.append(("-" if c < 0 else "+") + mag + (nm if nm != "1" else ""))
        if not terms:
            return "0"
        s = "".join(terms)
        return s[1:] if s[0] == "+" else s

    return "(" + ",".join(one(q) for q in v) + ")"


def verify_hopf(seed: int = 0, trials: int = 100) -> HopfTrace:
    """Replay the sign computation for the closure of s1^2, checking every displayed value."""
    start = time.perf_counter()
    trace = HopfTrace()
    tol = 1e-9
    b = parse_braid("s1^2", 2)
    auto = artin_action(b)
    eps = SignTuple(HOPF_EPSILON)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x, y = (quat.traceless(quat.pure(*(v / np.linalg.norm(v)))) for v in rng.normal(size=(2, 3)))
        got = eps_sigma(eps, auto, RepTuple((x, y)))
        yi, xi = y.inverse(), x.inverse()
        want = (-mul(mul(yi, x), y), -mul(mul(mul(mul(yi, xi), y), x), y))
        worst = max(worst, _tv_error(got.entries, want))
    trace.add("eps sigma(X,Y) = (-Y^-1 X Y, -Y^-1 X^-1 Y X Y)", f"max residual {worst:.2e}", "< 1e-10",
              worst < 1e-10, worst)

    res = fixed_point_residual(eps, auto, RepTuple((I, J)))
    trace.add("fixed point (i,j)", f"residual {res:.2e}", "< 1e-12", res < 1e-12, res)

    hopf = TorusLift(np.pi / 2, np.pi / 2)
    base = param_g(hopf.theta1, hopf.theta2)
    err = _tv_error(base, HOPF_BASE)
    trace.add("g(pi/2,pi/2)", _fmt_tv(base), "(i,j,i,j)", err < 1e-12, err)

    u1, u2 = pillowcase_frame(hopf)
    v1, v2, v3 = orbit_frame(base)
    w1, w2, w3 = complement_frame(base)
    expected_vectors = [
        ("u1", u1, (ZERO, -I, -J, ZERO)),
        ("u2", u2, (ZERO, ZERO, J, -I)),
        ("v1", v1, (ZERO, K, ZERO, K)),
        ("v2", v2, (-K, ZERO, -K, ZERO)),
        ("v3", v3, (J, -I, J, -I)),
        ("w1", w1, (K, ZERO, ZERO, ZERO)),
        ("w2", w2, (ZERO, K, ZERO, ZERO)),
        ("w3", w3, (J, ZERO, ZERO, ZERO)),
    ]
    for name, got, want in expected_vectors:
        err = _tv_error(got, want)
        trace.add(name, _fmt_tv(got), _fmt_tv(want), err < tol, err)

    for name, w, want in (("df(w1)", w1, -J), ("df(w2)", w2, I), ("df(w3)", w3, K)):
        got = df(base, w)
        err = quat.distance(got, want)
        trace.add(name, _fmt_tv((got,))[1:-1], _fmt_tv((want,))[1:-1], err < tol, err)

    s_frame = [w1, w2, w3, u1, u2, v1, v2, v3]
    beta = product_orientation_basis(base)
    m = change_of_basis(s_frame, beta)
    m_int = np.rint(m).astype(int)
    integral = float(np.max(np.abs(m - m_int))) < tol
    trace.add("M = S in basis beta", m_int.tolist(), HOPF_M,
              integral and m_int.tolist() == HOPF_M, float(np.max(np.abs(m - np.array(HOPF_M)))))
    det_m = exact_det(m_int.tolist())
    trace.add("det M", det_m, -1, integral and det_m == -1)

    positive = oriented_pillowcase_basis(hopf)
    label = "(u2, u1)" if positive == (u2, u1) else "(u1, u2)"
    trace.add("oriented basis", label, "(u2, u1)", label == "(u2, u1)")

    vd = delta_velocity(hopf.theta1)
    vg = gamma_velocity(eps, auto, hopf.theta1)
    for name, got, want in (
        ("Delta velocity", vd, (ZERO, -I, ZERO, -I)),
        ("Gamma velocity", vg, (ZERO, -I, 2 * J, -3 * I)),
    ):
        err = _tv_error(got, want)
        trace.add(name, _fmt_tv(got), _fmt_tv(want), err < tol, err)

    try:
        cob = change_of_basis((vd, vg), positive)
        cob_err = float(np.max(np.abs(cob - np.array([[1, 3], [1, 1]]))))
        cob_det = float(np.linalg.det(cob))
    except DegenerateFrame:
        cob, cob_err, cob_det = np.full((2, 2), np.nan), float("inf"), float("nan")
    trace.add("change of basis", np.round(cob, 12).tolist(), [[1, 3], [1, 1]], cob_err < 1e-8, cob_err)
    trace.add("det change of basis", round(cob_det, 12), -2, abs(cob_det + 2) < 1e-8 and cob_det < 0)

    result = casson_lin_h2(b)
    trace.add("h2", result.h2, -1, result.complete and result.h2 == -1 and len(result.intersections) == 1)
    trace.seconds = time.perf_counter() - start
    return trace
