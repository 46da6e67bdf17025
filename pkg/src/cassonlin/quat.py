"""Quaternion algebra for SU(2) and the traceless class C_i.

A quaternion ``x + y i + z j + w k`` is stored as the four floats
``(x, y, z, w)``.  Unit quaternions model SU(2); purely imaginary unit
quaternions model the conjugacy class of trace-zero elements.  Tangent
data (elements of su(2)) are purely imaginary quaternions without a norm
constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotUnitError

UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Quaternion:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    w: float = 0.0

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        return Quaternion(self.x * other, self.y * other, self.z * other, self.w * other)

    def __rmul__(self, other):
        return Quaternion(self.x * other, self.y * other, self.z * other, self.w * other)

    def __truediv__(self, s):
        return Quaternion(self.x / s, self.y / s, self.z / s, self.w / s)

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.x + other.x, self.y + other.y, self.z + other.z, self.w + other.w)

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.x - other.x, self.y - other.y, self.z - other.z, self.w - other.w)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.x, -self.y, -self.z, -self.w)

    def __iter__(self):
        return iter((self.x, self.y, self.z, self.w))

    def __repr__(self) -> str:
        return f"Quaternion({self.x:.6g}, {self.y:.6g}, {self.z:.6g}, {self.w:.6g})"

    @property
    def real(self) -> float:
        return self.x

    @property
    def imag(self) -> np.ndarray:
        return np.array([self.y, self.z, self.w])

    def conjugate(self) -> Quaternion:
        return Quaternion(self.x, -self.y, -self.z, -self.w)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z + self.w * self.w)

    def inverse(self) -> Quaternion:
        n2 = self.x * self.x + self.y * self.y + self.z * self.z + self.w * self.w
        return Quaternion(self.x / n2, -self.y / n2, -self.z / n2, -self.w / n2)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.w])

    def isclose(self, other: Quaternion, tol: float = 1e-12) -> bool:
        return distance(self, other) <= tol


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
ZERO = Quaternion(0.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    return Quaternion(
        p.x * q.x - p.y * q.y - p.z * q.z - p.w * q.w,
        p.x * q.y + p.y * q.x + p.z * q.w - p.w * q.z,
        p.x * q.z - p.y * q.w + p.z * q.x + p.w * q.y,
        p.x * q.w + p.y * q.z - p.z * q.y + p.w * q.x,
    )


def distance(p: Quaternion, q: Quaternion) -> float:
    """Euclidean distance of ``p`` and ``q`` as vectors in R^4."""
    return (p - q).norm()


def pure(y: float, z: float, w: float) -> Quaternion:
    """Purely imaginary quaternion ``y i + z j + w k`` (a vector of su(2))."""
    return Quaternion(0.0, float(y), float(z), float(w))


def from_array(a) -> Quaternion:
    return Quaternion(float(a[0]), float(a[1]), float(a[2]), float(a[3]))


def unit(q: Quaternion, tol: float = UNIT_TOL) -> Quaternion:
    """Validate that ``q`` lies on SU(2) and renormalize it.

    Raises NotUnitError when the norm is off by more than ``tol``.
    """
    n = q.norm()
    if abs(n - 1.0) >= tol:
        raise NotUnitError(f"norm {n!r} is not 1 within {tol}")
    return q / n


def traceless(q: Quaternion, tol: float = UNIT_TOL) -> Quaternion:
    """Validate that ``q`` lies in C_i, zero its real part and renormalize."""
    if abs(q.x) >= tol:
        raise NotUnitError(f"real part {q.x!r} is not 0 within {tol}")
    return unit(Quaternion(0.0, q.y, q.z, q.w), tol)


def is_traceless(q: Quaternion, tol: float = UNIT_TOL) -> bool:
    return abs(q.x) < tol and abs(q.norm() - 1.0) < tol


def exp_pure(v: Quaternion) -> Quaternion:
    """Exponential of a purely imaginary quaternion: ``cos|v| + v/|v| sin|v|``."""
    theta = math.sqrt(v.y * v.y + v.z * v.z + v.w * v.w)
    if theta == 0.0:
        return ONE
    s = math.sin(theta) / theta
    return Quaternion(math.cos(theta), v.y * s, v.z * s, v.w * s)


def conj_by(g: Quaternion, x: Quaternion) -> Quaternion:
    """Conjugation action ``g x g^-1`` for unit ``g``."""
    return mul(mul(g, x), g.conjugate())


def half_commutator(q: Quaternion, x: Quaternion) -> Quaternion:
    """``(q x - x q) / 2``, the velocity of ``x`` under conjugation by ``exp(t q)`` rescaled by 1/2."""
    qx = mul(q, x)
    xq = mul(x, q)
    return Quaternion(0.0, (qx.y - xq.y) / 2, (qx.z - xq.z) / 2, (qx.w - xq.w) / 2)


def rotation_to(src: Quaternion, dst: Quaternion) -> Quaternion:
    """A unit quaternion ``g`` with ``g src g^-1 = dst`` for traceless ``src``, ``dst``."""
    ay, az, aw = src.y, src.z, src.w
    by, bz, bw = dst.y, dst.z, dst.w
    c = ay * by + az * bz + aw * bw
    cy, cz, cw = az * bw - aw * bz, aw * by - ay * bw, ay * bz - az * by
    s = math.sqrt(cy * cy + cz * cz + cw * cw)
    if s < 1e-14:
        if c > 0:
            return ONE
        # antipodal: a half turn about any axis orthogonal to src
        ty, tz, tw = (1.0, 0.0, 0.0) if abs(ay) < 0.9 else (0.0, 1.0, 0.0)
        d = ty * ay + tz * az + tw * aw
        py, pz, pw = ty - d * ay, tz - d * az, tw - d * aw
        n = math.sqrt(py * py + pz * pz + pw * pw)
        return Quaternion(0.0, py / n, pz / n, pw / n)
    h = math.atan2(s, c) / 2
    f = math.sin(h) / s
    return Quaternion(math.cos(h), cy * f, cz * f, cw * f)
