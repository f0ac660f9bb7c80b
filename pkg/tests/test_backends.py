"""Kernel-lane parity: the numba and numpy implementations must emit
identical results in identical order."""

import numpy as np
import pytest

from polychrome import kernels_numba, kernels_numpy
from polychrome.backend import int64_arrays, integer_coordinates
from polychrome.delaunay import condition
from polychrome.geom import ConvexShape, unit_square

from helpers import clustered_points, random_points

SCALENE = ConvexShape([(0, 0), (7, 1), (2, 5)])


def _square_arrays(n, seed):
    cond = condition(clustered_points(n, seed), unit_square(), seed)
    xs_i, ys_i, _ = integer_coordinates(cond.all_points)
    xs, ys = int64_arrays(xs_i, ys_i)
    ox = np.argsort(xs).astype(np.int64)
    oy = np.argsort(ys).astype(np.int64)
    user = np.asarray([1] * cond.n_user + [0] * len(cond.hull_augment), dtype=np.uint8)
    return xs, ys, ox, oy, user


@pytest.mark.parametrize("seed,n", [(0, 30), (1, 48)])
def test_square_kernels_agree(seed, n):
    xs, ys, ox, oy, user = _square_arrays(n, seed)
    cat = np.asarray([i % 2 for i in range(len(xs))], dtype=np.uint8)
    labels = np.asarray([i % 3 for i in range(len(xs))], dtype=np.int64)

    a = kernels_numba.sq_pairs(xs, ys, ox, oy)
    b = kernels_numpy.sq_pairs(xs, ys, ox, oy)
    assert np.array_equal(a, b)

    ma, oa = kernels_numba.sq_collect(xs, ys, ox, oy)
    mb, ob = kernels_numpy.sq_collect(xs, ys, ox, oy)
    assert np.array_equal(ma, mb) and np.array_equal(oa, ob)

    ha = kernels_numba.sq_sized_mono(xs, ys, ox, oy, cat, 5)
    hb = kernels_numpy.sq_sized_mono(xs, ys, ox, oy, cat, 5)
    assert np.array_equal(ha[0], hb[0]) and np.array_equal(ha[1], hb[1])

    va = kernels_numba.sq_verify(xs, ys, ox, oy, user, cat, 8)
    vb = kernels_numpy.sq_verify(xs, ys, ox, oy, user, cat, 8)
    assert va[0] == vb[0] and va[1] == vb[1]
    assert np.array_equal(va[2], vb[2]) and np.array_equal(va[3], vb[3])

    ka = kernels_numba.sq_verify_k(xs, ys, ox, oy, user, labels, 3, 6)
    kb = kernels_numpy.sq_verify_k(xs, ys, ox, oy, user, labels, 3, 6)
    assert ka[0] == kb[0] and ka[1] == kb[1]
    assert np.array_equal(ka[2], kb[2]) and np.array_equal(ka[3], kb[3])


@pytest.mark.parametrize("seed", [3])
def test_triangle_kernels_agree(seed):
    cond = condition(random_points(24, seed), SCALENE, seed)
    xs_i, ys_i, _ = integer_coordinates(cond.all_points)
    xs, ys = int64_arrays(xs_i, ys_i)
    d1, d2, d3 = -2 * xs + ys, 2 * xs + ys, -2 * ys
    cat = np.asarray([i % 2 for i in range(len(xs))], dtype=np.uint8)
    user = np.asarray([1] * cond.n_user + [0] * len(cond.hull_augment), dtype=np.uint8)

    assert np.array_equal(kernels_numba.tri_pairs(d1, d2, d3), kernels_numpy.tri_pairs(d1, d2, d3))
    ma, oa = kernels_numba.tri_collect(d1, d2, d3)
    mb, ob = kernels_numpy.tri_collect(d1, d2, d3)
    assert np.array_equal(ma, mb) and np.array_equal(oa, ob)
    ha = kernels_numba.tri_sized_mono(d1, d2, d3, cat, 4)
    hb = kernels_numpy.tri_sized_mono(d1, d2, d3, cat, 4)
    assert np.array_equal(ha[0], hb[0]) and np.array_equal(ha[1], hb[1])
    va = kernels_numba.tri_verify(d1, d2, d3, user, cat, 6)
    vb = kernels_numpy.tri_verify(d1, d2, d3, user, cat, 6)
    assert va[0] == vb[0] and va[1] == vb[1]
    assert np.array_equal(va[2], vb[2]) and np.array_equal(va[3], vb[3])


def test_backend_env_selection(monkeypatch):
    from polychrome import backend

    monkeypatch.setenv("POLYCHROME_BACKEND", "numpy")
    assert backend.backend_name() == "numpy"
    assert backend.get_kernels() is kernels_numpy
    monkeypatch.setenv("POLYCHROME_BACKEND", "numba")
    assert backend.get_kernels() is kernels_numba
    monkeypatch.setenv("POLYCHROME_BACKEND", "nonsense")
    from polychrome.errors import EnumerationError

    with pytest.raises(EnumerationError):
        backend.backend_name()


def test_open_shape_same_family():
    # open shapes share the closed shape's realized subset family; openness
    # is carried as metadata and the verifier's boundary-exclusion rule
    from polychrome.geom import Openness, unit_square
    from polychrome.ranges import enumerate_ranges

    pts = random_points(7, 9)
    closed = {r.point_indices for r in enumerate_ranges(pts, unit_square()).ranges}
    opened = {r.point_indices for r in enumerate_ranges(pts, unit_square(Openness.OPEN)).ranges}
    assert closed == opened
