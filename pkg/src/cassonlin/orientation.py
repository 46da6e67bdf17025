"""Orientation bookkeeping on C_i^4 and the pillowcase.

Tangent vectors to C_i^n are tuples of purely imaginary quaternions, one
per entry, with each entry orthogonal to the corresponding base point.
For linear algebra they are flattened to vectors in R^{4n}.

The pillowcase is oriented by the base-fiber rule applied twice:
``ker df`` gets the orientation for which (complement) + (ker df) is the
product orientation, where the complement maps to a positive basis of
su(2) under ``df``; then (pillowcase) + (conjugation orbit) must be the
orientation of ``ker df``.  Both steps collapse into one determinant:
``[w1, w2, w3, p1, p2, v1, v2, v3]`` against the product basis.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from . import quat
from .errors import DegenerateComplement, DegenerateFrame, ReduciblePoint, SingularPoint
from .pillowcase import TorusLift, param_g
from .quat import I, J, K, ZERO, Quaternion, mul

FRAME_TOL = 1e-6
SPAN_TOL = 1e-8

TangentVector4 = tuple[Quaternion, ...]

HOPF_BASE = (I, J, I, J)
HOPF_COMPLEMENT = ((K, ZERO, ZERO, ZERO), (ZERO, K, ZERO, ZERO), (J, ZERO, ZERO, ZERO))


def flatten(v) -> np.ndarray:
    """A tangent vector, pure quaternion or plain array as a flat float vector."""
    if isinstance(v, Quaternion):
        return v.imag
    if isinstance(v, np.ndarray):
        return v.astype(float).ravel()
    parts = list(v)
    if parts and isinstance(parts[0], Quaternion):
        return np.concatenate([p.as_array() for p in parts])
    return np.asarray(parts, dtype=float).ravel()


def combine(coeffs: Sequence[float], vectors: Sequence[TangentVector4]) -> TangentVector4:
    out = [ZERO] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        out = [o + c * x for o, x in zip(out, v)]
    return tuple(out)


def _product_and_variation(qs: Sequence[Quaternion], dqs: Sequence[Quaternion]) -> tuple[Quaternion, Quaternion]:
    val, der = quat.ONE, ZERO
    for q, dq in zip(qs, dqs):
        der = mul(der, q) + mul(val, dq)
        val = mul(val, q)
    return val, der


def f_map(base: Sequence[Quaternion]) -> Quaternion:
    n = len(base) // 2
    x, _ = _product_and_variation(base[:n], [ZERO] * n)
    y, _ = _product_and_variation(base[n:], [ZERO] * n)
    return mul(x, y.inverse())


def df(base: Sequence[Quaternion], v: Sequence[Quaternion]) -> Quaternion:
    """Differential of ``(X_1...X_n)(Y_1...Y_n)^-1`` at ``base`` applied to ``v``.

    On ``f^-1(1)`` the result is purely imaginary, i.e. lies in su(2).
    """
    n = len(base) // 2
    x, dx = _product_and_variation(base[:n], v[:n])
    y, dy = _product_and_variation(base[n:], v[n:])
    yi = y.inverse()
    # d(x y^-1) = dx y^-1 - x y^-1 dy y^-1
    return mul(dx, yi) - mul(mul(mul(x, yi), dy), yi)


def pillowcase_frame(t: TorusLift) -> tuple[TangentVector4, TangentVector4]:
    """Partial derivatives of ``param_g`` in its two angles."""
    if t.is_corner():
        raise SingularPoint(f"({t.theta1:.6g}, {t.theta2:.6g}) is a pillowcase corner")
    e1 = quat.exp_pure(quat.pure(0, 0, t.theta1))
    e21 = quat.exp_pure(quat.pure(0, 0, t.theta2 - t.theta1))
    e2 = quat.exp_pure(quat.pure(0, 0, t.theta2))
    u1 = (ZERO, mul(e1, J), -mul(e21, J), ZERO)
    u2 = (ZERO, ZERO, mul(e21, J), mul(e2, J))
    return u1, u2


def orbit_frame(base: Sequence[Quaternion]) -> tuple[TangentVector4, ...]:
    frame = tuple(tuple(quat.half_commutator(e, x) for x in base) for e in (I, J, K))
    s = np.linalg.svd(np.array([flatten(v) for v in frame]), compute_uv=False)
    if s[-1] < FRAME_TOL:
        raise ReduciblePoint("conjugation orbit is not 3-dimensional")
    return frame


def _tangent_pair(x: Quaternion) -> tuple[Quaternion, Quaternion]:
    """Positively oriented basis of T_x C_i (outward normal first)."""
    v = x.imag
    m = int(np.argmax(np.abs(v)))
    cand = np.zeros(3)
    cand[(m + 1) % 3] = 1.0
    e1 = cand - np.dot(cand, v) * v
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(v, e1)
    return quat.pure(*e1), quat.pure(*e2)


def product_orientation_basis(base: Sequence[Quaternion]) -> list[TangentVector4]:
    n = len(base)
    out = []
    for slot, x in enumerate(base):
        for e in _tangent_pair(x):
            out.append(tuple(e if s == slot else ZERO for s in range(n)))
    return out


def _is_hopf_base(base: Sequence[Quaternion]) -> bool:
    return len(base) == 4 and all(p.isclose(q, 1e-12) for p, q in zip(base, HOPF_BASE))


def su2_sign(vectors: Sequence[Quaternion]) -> int:
    """Orientation of three elements of su(2) relative to (i, j, k)."""
    det = float(np.linalg.det(np.column_stack([q.imag for q in vectors])))
    if abs(det) <= FRAME_TOL:
        raise DegenerateFrame("vectors do not span su(2)")
    return 1 if det > 0 else -1


def complement_frame(base: Sequence[Quaternion]) -> tuple[TangentVector4, ...]:
    """Three tangent vectors whose ``df``-images are a positive basis of su(2)."""
    if _is_hopf_base(base):
        return HOPF_COMPLEMENT
    cands = product_orientation_basis(base)
    images = [df(base, v).imag for v in cands]
    best, best_det = None, 0.0
    for combo in itertools.combinations(range(len(cands)), 3):
        det = float(np.linalg.det(np.column_stack([images[c] for c in combo])))
        if abs(det) > abs(best_det) + 1e-12:
            best, best_det = combo, det
    if best is None or abs(best_det) <= FRAME_TOL:
        raise DegenerateComplement("df has rank < 3 at this point")
    w = [cands[c] for c in best]
    if best_det < 0:
        w[2] = tuple(-x for x in w[2])
    return tuple(w)


def change_of_basis(test: Sequence, reference: Sequence) -> np.ndarray:
    """Matrix whose columns are the coordinates of ``test`` in the basis ``reference``."""
    a = np.column_stack([flatten(v) for v in reference])
    t = np.column_stack([flatten(v) for v in test])
    if a.shape[1] != t.shape[1]:
        raise DegenerateFrame("frames have different sizes")
    if np.linalg.matrix_rank(a, tol=FRAME_TOL) < a.shape[1]:
        raise DegenerateFrame("reference frame is linearly dependent")
    m, *_ = np.linalg.lstsq(a, t, rcond=None)
    gap = float(np.max(np.abs(a @ m - t))) if t.size else 0.0
    if gap > SPAN_TOL * max(1.0, float(np.max(np.abs(t)))):
        raise DegenerateFrame(f"test frame leaves the reference span (gap {gap:.3g})")
    return m


def orientation_sign(test: Sequence, reference: Sequence, tol: float = FRAME_TOL) -> int:
    det = float(np.linalg.det(change_of_basis(test, reference)))
    if abs(det) <= tol:
        raise DegenerateFrame(f"change-of-basis determinant {det:.3g} is degenerate")
    return 1 if det > 0 else -1


def base_fiber_frame(
    t: TorusLift,
    pair: Sequence[TangentVector4],
    complement: Sequence[TangentVector4] | None = None,
) -> list[TangentVector4]:
    """``[w1, w2, w3, pair..., v1, v2, v3]`` at ``g(t)``."""
    base = param_g(t.theta1, t.theta2)
    w = complement_frame(base) if complement is None else complement
    return [*w, *pair, *orbit_frame(base)]


def base_fiber_sign(
    t: TorusLift,
    pair: Sequence[TangentVector4],
    complement: Sequence[TangentVector4] | None = None,
) -> int:
    base = param_g(t.theta1, t.theta2)
    if complement is not None and su2_sign([df(base, w) for w in complement]) < 0:
        raise DegenerateComplement("complement does not map to a positive basis of su(2)")
    return orientation_sign(base_fiber_frame(t, pair, complement), product_orientation_basis(base))


def oriented_pillowcase_basis(
    t: TorusLift, complement: Sequence[TangentVector4] | None = None
) -> tuple[TangentVector4, TangentVector4]:
    """The ordering of the two coordinate tangent vectors that is positive on the pillowcase."""
    u1, u2 = pillowcase_frame(t)
    if base_fiber_sign(t, (u1, u2), complement) > 0:
        return u1, u2
    return u2, u1


def pillowcase_coordinates(t: TorusLift, v: TangentVector4, tol: float = SPAN_TOL) -> np.ndarray:
    """Coefficients of ``v`` on ``(u1, u2)`` modulo the conjugation orbit.

    ``v`` must be tangent to ``f^-1(1)`` at ``g(t)``.
    """
    base = param_g(t.theta1, t.theta2)
    u1, u2 = pillowcase_frame(t)
    cols = [flatten(x) for x in (u1, u2, *orbit_frame(base))]
    a = np.column_stack(cols)
    target = flatten(v)
    coef, *_ = np.linalg.lstsq(a, target, rcond=None)
    gap = float(np.max(np.abs(a @ coef - target)))
    if gap > tol * max(1.0, float(np.max(np.abs(target)))):
        raise DegenerateFrame(f"vector is not tangent to f^-1(1) (gap {gap:.3g})")
    return coef[:2]


def geodesic(x: Quaternion, v: Quaternion, s: float) -> Quaternion:
    """Great-circle path on C_i through ``x`` with initial velocity ``v`` (v orthogonal to x)."""
    speed = v.norm()
    if speed == 0.0:
        return x
    return math.cos(speed * s) * x + (math.sin(speed * s) / speed) * v
