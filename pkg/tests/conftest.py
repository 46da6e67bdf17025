import math

import numpy as np
import pytest
from hypothesis import strategies as st

from cassonlin import quat
from cassonlin.braid import BraidWord
from cassonlin.orientation import combine, orbit_frame, pillowcase_frame
from cassonlin.pillowcase import TorusLift, normalize_with_gauge, param_g
from cassonlin.quat import Quaternion


def _normalized(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


coords = st.floats(-1.0, 1.0, allow_nan=False)

nonzero_vec3 = st.tuples(coords, coords, coords).filter(lambda v: np.linalg.norm(v) > 1e-3)
nonzero_vec4 = st.tuples(coords, coords, coords, coords).filter(lambda v: np.linalg.norm(v) > 1e-3)

unit_quaternions = nonzero_vec4.map(lambda v: Quaternion(*_normalized(v)))
traceless_elements = nonzero_vec3.map(lambda v: quat.pure(*_normalized(v)))

angles = st.floats(0.0, 2 * math.pi, allow_nan=False, exclude_max=True)


def away_from_edges(pair, margin=1e-3):
    return all(abs(math.remainder(t, math.pi)) > margin for t in pair)


# angle pairs with neither coordinate in {0, pi}
generic_angle_pairs = st.tuples(angles, angles).filter(away_from_edges)


@st.composite
def braid_words(draw, max_strands=5, max_length=12, min_strands=2):
    n = draw(st.integers(min_strands, max_strands))
    letters = draw(
        st.lists(st.tuples(st.integers(1, n - 1), st.sampled_from([1, -1])), max_size=max_length)
    )
    return BraidWord(n, tuple(letters))


@st.composite
def pillowcase_configs(draw):
    """A point of f^-1(1) as a conjugate of g(t1, t2), away from corners and edges."""
    pair = draw(generic_angle_pairs)
    g = draw(unit_quaternions)
    return pair, tuple(quat.conj_by(g, x) for x in param_g(*pair))


@st.composite
def crossing_data(draw):
    """A generic point with two transverse velocities padded by random orbit directions."""
    pair = draw(generic_angle_pairs)
    t = TorusLift(*pair)
    coeffs = draw(st.lists(st.floats(-3, 3), min_size=4, max_size=4))
    if abs(coeffs[0] * coeffs[3] - coeffs[1] * coeffs[2]) < 0.1:
        coeffs = [1.0, 0.0, 0.0, 1.0]
    noise = draw(st.lists(st.floats(-2, 2), min_size=6, max_size=6))
    frame = (*pillowcase_frame(t), *orbit_frame(param_g(*pair)))
    vd = combine([coeffs[0], coeffs[1], *noise[:3]], frame)
    vg = combine([coeffs[2], coeffs[3], *noise[3:]], frame)
    return t, vd, vg


def random_tangent(rng, base):
    out = []
    for x in base:
        v = rng.normal(size=3)
        v -= np.dot(v, x.imag) * x.imag
        out.append(quat.pure(*v))
    return tuple(out)


def conjugate_configuration(lift, velocities, g):
    """Conjugate point and velocities by g, then return them renormalized onto the pillowcase."""
    base = tuple(quat.conj_by(g, x) for x in param_g(lift.theta1, lift.theta2))
    moved = [tuple(quat.conj_by(g, x) for x in v) for v in velocities]
    new_lift, h = normalize_with_gauge(base)
    return new_lift, [tuple(quat.conj_by(h, x) for x in v) for v in moved]


def det3(a, b, c):
    """Rule of Sarrus on the imaginary parts; independent of numpy."""
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = ((q.y, q.z, q.w) for q in (a, b, c))
    return a1 * (b2 * c3 - b3 * c2) - b1 * (a2 * c3 - a3 * c2) + c1 * (a2 * b3 - a3 * b2)


def tv_close(u, v, tol):
    return max(quat.distance(p, q) for p, q in zip(u, v)) < tol


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
