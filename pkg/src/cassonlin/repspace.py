"""Traceless representations of F_n and the sign-twisted braid action on them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quat
from .braid import BraidAutomorphism, FreeWord
from .quat import ONE, ZERO, Quaternion, mul

COMMUTE_TOL = 1e-8

# For closures of 2-strand braids the only sign tuple whose SO(3) bundle
# has non-vanishing w_2.
HOPF_EPSILON = (-1, -1)


@dataclass(frozen=True)
class RepTuple:
    """An n-tuple of traceless unit quaternions (X_1, ..., X_n)."""

    entries: tuple[Quaternion, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(quat.traceless(q) for q in self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Quaternion:
        return self.entries[i]

    def conjugated(self, g: Quaternion) -> RepTuple:
        return RepTuple(tuple(quat.conj_by(g, q) for q in self.entries))


@dataclass(frozen=True)
class SignTuple:
    signs: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"signs must be +-1: {self.signs}")
        if math.prod(self.signs) != 1:
            raise ValueError(f"product of signs must be +1: {self.signs}")

    def __len__(self) -> int:
        return len(self.signs)

    def __getitem__(self, i: int) -> int:
        return self.signs[i]


def _check_index(g: int, n: int) -> None:
    if not 1 <= g <= n:
        raise IndexError(f"generator x{g} out of range for a {n}-tuple")


def evaluate_word(w: FreeWord, rho) -> Quaternion:
    """Image of ``w`` under the homomorphism ``x_g -> rho[g-1]``."""
    entries = rho.entries if isinstance(rho, RepTuple) else tuple(rho)
    out = ONE
    for g, e in w.letters:
        _check_index(g, len(entries))
        q = entries[g - 1]
        out = mul(out, q if e == 1 else q.inverse())
    return out


def evaluate_word_derivative(w: FreeWord, rho, rho_dot) -> tuple[Quaternion, Quaternion]:
    """Value and first-order variation of ``evaluate_word`` along ``rho + t rho_dot``.

    Entries of ``rho`` must be unit, so ``d(X^-1) = -X^-1 dX X^-1``.
    """
    entries = tuple(rho.entries if isinstance(rho, RepTuple) else rho)
    dots = tuple(rho_dot)
    val, der = ONE, ZERO
    for g, e in w.letters:
        _check_index(g, len(entries))
        q, dq = entries[g - 1], dots[g - 1]
        if e == -1:
            qi = q.conjugate()
            q, dq = qi, -mul(mul(qi, dq), qi)
        der = mul(der, q) + mul(val, dq)
        val = mul(val, q)
    return val, der


def eps_sigma(eps: SignTuple, a: BraidAutomorphism, rho: RepTuple) -> RepTuple:
    if len(eps) != a.n or len(rho) != a.n:
        raise IndexError("sign tuple, automorphism and representation sizes differ")
    return RepTuple(tuple(s * evaluate_word(w, rho) for s, w in zip(eps.signs, a.images)))


def eps_sigma_derivative(eps: SignTuple, a: BraidAutomorphism, rho, rho_dot) -> tuple[Quaternion, ...]:
    """Differential of ``eps_sigma`` at ``rho`` applied to ``rho_dot``."""
    if len(eps) != a.n or len(rho) != a.n:
        raise IndexError("sign tuple, automorphism and representation sizes differ")
    return tuple(s * evaluate_word_derivative(w, rho, rho_dot)[1] for s, w in zip(eps.signs, a.images))


def fixed_point_residual(eps: SignTuple, a: BraidAutomorphism, rho: RepTuple) -> float:
    image = eps_sigma(eps, a, rho)
    return max(quat.distance(p, q) for p, q in zip(image.entries, rho.entries))


def is_irreducible(rho: RepTuple, tol: float = COMMUTE_TOL) -> bool:
    """True unless all entries share an axis (equivalently, pairwise commute)."""
    axes = [q.imag for q in rho.entries]
    for idx in range(len(axes)):
        for jdx in range(idx + 1, len(axes)):
            # |[X, Y]| = 2 |X x Y| for pure quaternions
            if 2 * np.linalg.norm(np.cross(axes[idx], axes[jdx])) > tol:
                return True
    return False


def product_holonomy(rho) -> Quaternion:
    entries = rho.entries if isinstance(rho, RepTuple) else tuple(rho)
    out = ONE
    for q in entries:
        out = mul(out, q)
    return out


# Vectorized evaluation, used by grid scans.  Arrays have shape (..., 4).

def qmul_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    x1, y1, z1, w1 = np.moveaxis(p, -1, 0)
    x2, y2, z2, w2 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            x1 * x2 - y1 * y2 - z1 * z2 - w1 * w2,
            x1 * y2 + y1 * x2 + z1 * w2 - w1 * z2,
            x1 * z2 - y1 * w2 + z1 * x2 + w1 * y2,
            x1 * w2 + y1 * z2 - z1 * y2 + w1 * x2,
        ],
        axis=-1,
    )


def evaluate_word_array(w: FreeWord, entries: list[np.ndarray]) -> np.ndarray:
    shape = np.broadcast_shapes(*(e.shape for e in entries))
    out = np.zeros(shape)
    out[..., 0] = 1.0
    conj = np.array([1.0, -1.0, -1.0, -1.0])
    for g, e in w.letters:
        _check_index(g, len(entries))
        q = entries[g - 1]
        out = qmul_array(out, q if e == 1 else q * conj)
    return out


def eps_sigma_array(eps: SignTuple, a: BraidAutomorphism, entries: list[np.ndarray]) -> list[np.ndarray]:
    return [s * evaluate_word_array(w, entries) for s, w in zip(eps.signs, a.images)]
