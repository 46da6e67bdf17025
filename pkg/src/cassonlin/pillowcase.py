"""The pillowcase {(a, b, c, d) in C_i^4 : ab = cd} / conjugation.

Every class away from the four corners has exactly two representatives of
the form

    g(t1, t2) = (i, e^{k t1} i, e^{k (t2 - t1)} i, e^{k t2} i),

related by the involution (t1, t2) -> (-t1, -t2), which is realized by
conjugation with ``i``.  Points are stored as torus lifts; the canonical
lift has t1 in [0, pi], and t2 in [0, pi] when t1 is 0 or pi.

For a 2-strand braid the diagonal and the graph of the twisted action are
traced by the curves

    theta -> (alpha(theta), alpha(theta)),
    theta -> (alpha(theta), eps sigma(alpha(theta))),

with ``alpha(theta) = (i, e^{k theta} i)``.  Both share the first torus
coordinate ``theta``, so they meet exactly where the second coordinates
agree, i.e. at the fixed points of ``eps sigma`` along ``alpha``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import quat
from .braid import BraidAutomorphism
from .errors import NotOnPillowcase, SingularPoint, TangencyUnresolved
from .quat import I, J, K, Quaternion, mul
from .repspace import (
    RepTuple,
    SignTuple,
    eps_sigma,
    eps_sigma_array,
    eps_sigma_derivative,
    fixed_point_residual,
)

TWO_PI = 2 * math.pi
ANGLE_TOL = 1e-12
EDGE_TOL = 1e-9
PILLOWCASE_TOL = 1e-8
DEFAULT_RESOLUTION = 4096
TRANSVERSE_TOL = 1e-6

Quadruple = tuple[Quaternion, Quaternion, Quaternion, Quaternion]


def _reduce_angle(t: float) -> float:
    t = math.fmod(t, TWO_PI)
    if t < 0:
        t += TWO_PI
    if TWO_PI - t < ANGLE_TOL or t < ANGLE_TOL:
        return 0.0
    return t


def angle_distance(s: float, t: float) -> float:
    d = abs(_reduce_angle(s - t))
    return min(d, TWO_PI - d)


def _on_boundary(t: float) -> bool:
    return angle_distance(t, 0.0) < EDGE_TOL or angle_distance(t, math.pi) < EDGE_TOL


@dataclass(frozen=True)
class TorusLift:
    theta1: float
    theta2: float

    def __post_init__(self):
        object.__setattr__(self, "theta1", _reduce_angle(self.theta1))
        object.__setattr__(self, "theta2", _reduce_angle(self.theta2))

    def involution(self) -> TorusLift:
        return TorusLift(-self.theta1, -self.theta2)

    def is_corner(self) -> bool:
        return _on_boundary(self.theta1) and _on_boundary(self.theta2)

    def isclose(self, other: TorusLift, tol: float = 1e-9) -> bool:
        return (
            angle_distance(self.theta1, other.theta1) <= tol
            and angle_distance(self.theta2, other.theta2) <= tol
        )


@dataclass(frozen=True)
class PillowcasePoint:
    """A point of the pillowcase, stored as its canonical torus lift."""

    theta1: float
    theta2: float

    @property
    def lift(self) -> TorusLift:
        return TorusLift(self.theta1, self.theta2)

    def isclose(self, other: PillowcasePoint, tol: float = 1e-9) -> bool:
        return self.lift.isclose(other.lift, tol) or self.lift.isclose(other.lift.involution(), tol)


def canonicalize(t: TorusLift) -> PillowcasePoint:
    t1, t2 = t.theta1, t.theta2
    if angle_distance(t1, 0.0) < ANGLE_TOL:
        t1 = 0.0
    elif angle_distance(t1, math.pi) < ANGLE_TOL:
        t1 = math.pi
    if t1 > math.pi:
        t1, t2 = _reduce_angle(-t1), _reduce_angle(-t2)
    elif t1 in (0.0, math.pi) and t2 > math.pi:
        t2 = _reduce_angle(-t2)
    return PillowcasePoint(t1, t2)


def _circle(t: float) -> Quaternion:
    """``e^{k t} i = cos t i + sin t j``."""
    return Quaternion(0.0, math.cos(t), math.sin(t), 0.0)


def param_g(theta1: float, theta2: float) -> Quadruple:
    return (I, _circle(theta1), _circle(theta2 - theta1), _circle(theta2))


def _check_relation(q: Sequence[Quaternion], tol: float) -> None:
    a, b, c, d = q
    gap = quat.distance(mul(a, b), mul(c, d))
    if gap > tol:
        raise NotOnPillowcase(f"ab and cd differ by {gap:.3g}")


def normalize_with_gauge(q: Sequence[Quaternion], tol: float = PILLOWCASE_TOL) -> tuple[TorusLift, Quaternion]:
    """Canonical lift of the class of ``q`` and a unit ``h`` with ``h q h^-1 = g(lift)``."""
    _check_relation(q, tol)
    a, b, c, d = (quat.traceless(x, 1e-6) for x in q)
    h = quat.rotation_to(a, I)
    b1, d1 = quat.conj_by(h, b), quat.conj_by(h, d)

    def spin(x: Quaternion) -> Quaternion:
        # rotation about the i axis bringing x into the (i, j) half-plane with j >= 0
        return quat.exp_pure(quat.pure(-math.atan2(x.w, x.z) / 2, 0.0, 0.0))

    if math.hypot(b1.z, b1.w) > EDGE_TOL:
        r = spin(b1)
    elif math.hypot(d1.z, d1.w) > EDGE_TOL:
        r = spin(d1)
    else:
        raise SingularPoint("quadruple is reducible (pillowcase corner)")
    h = mul(r, h)
    b2, d2 = quat.conj_by(h, b), quat.conj_by(h, d)
    if abs(b2.w) > tol or abs(d2.w) > tol:
        raise NotOnPillowcase("normalized d does not lie on the (i, j)-circle")
    lift = TorusLift(math.atan2(b2.z, b2.y), math.atan2(d2.z, d2.y))
    c2 = quat.conj_by(h, c)
    if quat.distance(c2, param_g(lift.theta1, lift.theta2)[2]) > 10 * tol:
        raise NotOnPillowcase("normalized c is inconsistent with a, b, d")
    canon = canonicalize(lift).lift
    if not canon.isclose(lift, 1e-12):
        # only reachable through rounding at an edge; flip to the canonical side
        h = mul(I, h)
        lift = canon
    return lift, h


def normalize_quadruple(q: Sequence[Quaternion], tol: float = PILLOWCASE_TOL) -> TorusLift:
    return normalize_with_gauge(q, tol)[0]


@dataclass(frozen=True)
class CurveSample:
    theta: float
    lift: TorusLift
    quadruple: Quadruple


def alpha(theta: float) -> tuple[Quaternion, Quaternion]:
    return (I, _circle(theta))


def alpha_velocity(theta: float) -> tuple[Quaternion, Quaternion]:
    return (quat.ZERO, mul(quat.exp_pure(quat.pure(0, 0, theta)), J))


def _lift_with_theta1(lift: TorusLift, theta: float) -> TorusLift:
    if angle_distance(lift.theta1, theta) <= 1e-6:
        return lift
    return lift.involution()


def delta_curve(theta: float) -> CurveSample:
    x, y = alpha(theta)
    return CurveSample(_reduce_angle(theta), TorusLift(theta, theta), (x, y, x, y))


def gamma_quadruple(eps: SignTuple, a: BraidAutomorphism, theta: float) -> Quadruple:
    x, y = alpha(theta)
    image = eps_sigma(eps, a, RepTuple((x, y)))
    return (x, y, image[0], image[1])


def gamma_curve(eps: SignTuple, a: BraidAutomorphism, theta: float) -> CurveSample:
    """Sample of the graph curve, lifted so that its first coordinate is ``theta``."""
    if a.n != 2:
        raise ValueError("the pillowcase curves are defined for 2-strand braids only")
    q = gamma_quadruple(eps, a, theta)
    lift = _lift_with_theta1(normalize_quadruple(q), theta)
    return CurveSample(_reduce_angle(theta), lift, q)


def delta_velocity(theta: float) -> Quadruple:
    _, dy = alpha_velocity(theta)
    return (quat.ZERO, dy, quat.ZERO, dy)


def gamma_velocity(eps: SignTuple, a: BraidAutomorphism, theta: float) -> Quadruple:
    x, y = alpha(theta)
    dx, dy = alpha_velocity(theta)
    dc, dd = eps_sigma_derivative(eps, a, (x, y), (dx, dy))
    return (dx, dy, dc, dd)


def _wrap(t: float) -> float:
    """Representative of ``t`` mod 2 pi in (-pi, pi]."""
    r = math.remainder(t, TWO_PI)
    return math.pi if r == -math.pi else r


def displacement(eps: SignTuple, a: BraidAutomorphism, theta: float) -> float:
    """Signed second-coordinate gap between the graph and diagonal curves at ``theta``."""
    return _wrap(gamma_curve(eps, a, theta).lift.theta2 - theta)


@dataclass(frozen=True)
class IntersectionPoint:
    theta: float
    point: PillowcasePoint
    lift: TorusLift
    residual: float
    slope: float  # d(displacement)/d(theta): the transversality witness


def sample_thetas(resolution: int, offset: float = 0.0) -> np.ndarray:
    return (np.arange(resolution) + offset) * (TWO_PI / resolution)


def _bisect(fn, lo: float, hi: float, flo: float, tol: float = 1e-13, max_iter: int = 200) -> float:
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_intersections(
    eps: SignTuple,
    a: BraidAutomorphism,
    resolution: int = DEFAULT_RESOLUTION,
    tol: float = PILLOWCASE_TOL,
    strict: bool = True,
) -> list[IntersectionPoint]:
    """All pillowcase points where the diagonal and graph curves meet, sorted by theta.

    The scan samples at half-step offsets so that it never lands on
    theta = 0 or pi, where the graph curve may pass through a corner.
    A non-transverse point raises TangencyUnresolved unless ``strict`` is
    false, in which case it is returned and its slope tells the caller.
    """
    if a.n != 2:
        raise ValueError("intersection search is implemented for 2-strand braids only")

    def disp(t: float) -> float | None:
        try:
            return displacement(eps, a, t)
        except SingularPoint:
            return None

    thetas = sample_thetas(resolution, 0.5)
    values = [disp(float(t)) for t in thetas]
    step = TWO_PI / resolution
    roots: list[float] = []
    for idx in range(resolution):
        f0, f1 = values[idx], values[(idx + 1) % resolution]
        if f0 is None or f1 is None:
            continue
        if f0 == 0.0:
            roots.append(float(thetas[idx]))
            continue
        if (f0 < 0) == (f1 < 0) or f1 == 0.0:
            continue
        # a jump across the +-pi branch cut is not a crossing
        if abs(f1 - f0) > math.pi:
            continue
        lo = float(thetas[idx])
        roots.append(_bisect(disp, lo, lo + step, f0))

    found: list[IntersectionPoint] = []
    for t in sorted(_reduce_angle(r) for r in roots):
        x, y = alpha(t)
        res = fixed_point_residual(eps, a, RepTuple((x, y)))
        if res >= tol:
            continue
        point = canonicalize(TorusLift(t, t))
        if any(p.point.isclose(point, 1e-6) for p in found):
            continue
        h = 1e-6
        slope = (_wrap(displacement(eps, a, t + h) - displacement(eps, a, t - h))) / (2 * h)
        if strict and abs(slope) <= TRANSVERSE_TOL:
            raise TangencyUnresolved(f"non-transverse intersection at theta = {t:.12g}")
        found.append(IntersectionPoint(t, point, TorusLift(t, t), res, slope))
    return found


def sample_curves(eps: SignTuple, a: BraidAutomorphism, resolution: int) -> tuple[list[CurveSample], list[CurveSample]]:
    """Both curves at ``theta = 2 pi j / resolution``; corner samples of the graph curve are dropped."""
    deltas, gammas = [], []
    for t in sample_thetas(resolution):
        deltas.append(delta_curve(float(t)))
        try:
            gammas.append(gamma_curve(eps, a, float(t)))
        except SingularPoint:
            pass
    return deltas, gammas


def fmt_angle(t: float) -> str:
    return f"{t:.12g}"


def write_curve_csv(samples: Iterable[CurveSample], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["theta", "theta1", "theta2"])
        for s in samples:
            writer.writerow([fmt_angle(s.theta), fmt_angle(s.lift.theta1), fmt_angle(s.lift.theta2)])


def grid_residual(eps: SignTuple, a: BraidAutomorphism, resolution: int = 2048, chunk: int = 256) -> np.ndarray:
    """Residual of membership in both the diagonal and the graph over a grid of torus lifts.

    Entry ``[p, q]`` is evaluated at ``g(t_p, t_q)`` with ``t_j = (j + 1/2) 2 pi / resolution``
    and vanishes exactly at the intersection points.  Used as an oracle independent of the
    curve scan.
    """
    t = sample_thetas(resolution, 0.5)
    zeros = np.zeros_like(t)
    ones = np.ones_like(t)
    a_arr = np.stack([zeros, ones, zeros, zeros], axis=-1)
    b_arr = np.stack([zeros, np.cos(t), np.sin(t), zeros], axis=-1)
    img_c, img_d = eps_sigma_array(eps, a, [a_arr, b_arr])  # depend on t1 only
    out = np.empty((resolution, resolution))
    for start in range(0, resolution, chunk):
        t1 = t[start:start + chunk, None]
        t2 = t[None, :]
        c_y, c_z = np.cos(t2 - t1), np.sin(t2 - t1)
        d_y, d_z = np.cos(t2) + 0 * t1, np.sin(t2) + 0 * t1
        bc = b_arr[start:start + chunk, None, :]
        ic = img_c[start:start + chunk, None, :]
        idd = img_d[start:start + chunk, None, :]
        diag = np.maximum(
            np.hypot(c_y - 1.0, c_z),
            np.sqrt((d_y - bc[..., 1]) ** 2 + (d_z - bc[..., 2]) ** 2),
        )
        graph = np.maximum(
            np.sqrt(ic[..., 0] ** 2 + (c_y - ic[..., 1]) ** 2 + (c_z - ic[..., 2]) ** 2 + ic[..., 3] ** 2),
            np.sqrt(idd[..., 0] ** 2 + (d_y - idd[..., 1]) ** 2 + (d_z - idd[..., 2]) ** 2 + idd[..., 3] ** 2),
        )
        out[start:start + chunk] = np.maximum(diag, graph)
    return out


def grid_intersection_clusters(
    residual: np.ndarray, mark: float | None = None, accept: float | None = None
) -> list[tuple[int, int]]:
    """Cluster near-zero cells of a grid residual on the pillowcase.

    Cells below ``mark`` are grouped into 8-connected components on the
    torus, components exchanged by the involution are merged, and a
    component counts when its minimum falls below ``accept``.  Returns
    the grid index of each accepted component's minimum.

    The defaults scale with the grid step: at a true zero the sampled
    minimum is about one step.
    """
    n = residual.shape[0]
    step = TWO_PI / n
    mark = max(0.2, 4 * step) if mark is None else mark
    accept = max(0.05, 2 * step) if accept is None else accept
    cells = list(zip(*np.nonzero(residual < mark)))
    parent = {c: c for c in cells}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def union(p, q):
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[rq] = rp

    for p, q in cells:
        for dp in (-1, 0, 1):
            for dq in (-1, 0, 1):
                nb = ((p + dp) % n, (q + dq) % n)
                if nb in parent:
                    union((p, q), nb)
        # offset grid: t -> 2 pi - t maps index j to n - 1 - j
        mirror = (n - 1 - p, n - 1 - q)
        if mirror in parent:
            union((p, q), mirror)

    best: dict = {}
    for c in cells:
        r = find(c)
        if r not in best or residual[c] < residual[best[r]]:
            best[r] = c
    return sorted(
        (int(c[0]), int(c[1])) for c in best.values() if residual[c] < accept
    )
