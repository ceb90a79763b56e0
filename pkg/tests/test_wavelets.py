import math

import numpy as np
import pytest

from sievelab import wavelets
from sievelab.errors import ConfigError

SQ2 = math.sqrt(2.0)


def cascade_oracle(order, depth):
    """Piecewise-constant cascade iteration started from the unit box.

    Independent of the package's eigenvector-plus-refinement route; the
    value on [k 2^-depth, (k+1) 2^-depth) approximates phi(k 2^-depth).
    """
    h = wavelets.daubechies_filter(order)
    width = len(h) - 1
    c = np.array([1.0])
    for m in range(depth):
        cur_len = width * 2 ** (m + 1)
        nxt = np.zeros(cur_len)
        for j, hj in enumerate(h):
            shift = j * 2**m
            lo, hi = shift, min(shift + c.size, cur_len)
            if lo < cur_len:
                nxt[lo:hi] += hj * c[: hi - lo]
        c = SQ2 * nxt
    return c


def oracle_periodized(order, level, shift, tval, depth=12):
    tab = cascade_oracle(order, depth)
    width = 2 * order - 1
    u = (2.0**level) * tval - shift
    total = 0.0
    for l in range(int(np.floor((0 - u) / 2**level)) - 1, int(np.ceil((width - u) / 2**level)) + 2):
        idx = int(round((u + l * 2**level) * 2**depth))
        if 0 <= idx < tab.size:
            total += tab[idx]
    return 2.0 ** (level / 2) * total


def test_filter_identities():
    for order in range(2, 11):
        h = wavelets.daubechies_filter(order)
        assert len(h) == 2 * order
        assert h.sum() == pytest.approx(SQ2, abs=1e-14)
        assert np.dot(h, h) == pytest.approx(1.0, abs=1e-14)
        for l in range(1, order):
            assert abs(np.dot(h[2 * l :], h[: -2 * l])) < 1e-14


def test_db2_closed_form():
    s3 = math.sqrt(3.0)
    expected = np.array([1 + s3, 3 + s3, 3 - s3, 1 - s3]) / (4 * SQ2)
    assert np.max(np.abs(wavelets.daubechies_filter(2) - expected)) < 1e-15


def test_invalid_order():
    with pytest.raises(ConfigError):
        wavelets.daubechies_filter(1)
    with pytest.raises(ConfigError):
        wavelets.daubechies_filter(11)


@pytest.mark.parametrize("order,tol", [(2, 2.5e-2), (4, 1.5e-3), (9, 1.5e-3)])
def test_scaling_table_matches_cascade_oracle(order, tol):
    depth = 12
    oracle = cascade_oracle(order, depth)
    tab = wavelets.scaling_table(order, depth)
    assert tab.size == oracle.size + 1
    assert np.max(np.abs(oracle - tab[:-1])) < tol


def test_scaling_function_normalisation():
    # integral of phi over its support is 1; Riemann sum on the dyadic grid
    for order in (2, 5, 9):
        tab = wavelets.scaling_table(order)
        step = 2.0**-12
        assert np.sum(tab) * step == pytest.approx(1.0, abs=1e-9)


def test_periodized_values_match_oracle_frozen():
    # frozen from the depth-12 cascade oracle for order 9, level 2, shift 0
    frozen = [
        -0.3124870578950251,
        0.20130166343825015,
        0.21640491676966303,
        2.0433872125664414,
        -0.4610937927743521,
    ]
    t = np.array([0.0, 1 / 16, 5 / 16, 9 / 16, 13 / 16])
    main = wavelets.periodized_scaling(9, 2, 0, t)
    assert np.max(np.abs(main - np.array(frozen))) < 2.5e-3
    live = [oracle_periodized(9, 2, 0, tv) for tv in t]
    assert np.max(np.abs(np.array(live) - np.array(frozen))) < 1e-12


def test_periodized_partition_of_unity():
    # sum_k phi_{J,k}(t) = 2^{J/2} for every t
    t = np.linspace(0.0, 1.0, 257)
    for order, level in [(2, 1), (4, 2), (9, 3)]:
        total = sum(
            wavelets.periodized_scaling(order, level, k, t) for k in range(2**level)
        )
        assert np.max(np.abs(total - 2.0 ** (level / 2))) < 1e-6


def test_periodized_integral_partition():
    # sum over all 2^J0 scaling slots of the integrals equals 2^{-J0/2} 2^{J0}
    order, level = 5, 2
    grid = (np.arange(2**14) + 0.5) / 2**14
    total = 0.0
    for k in range(2**level):
        vals = wavelets.periodized_scaling(order, level, k, grid)
        total += vals.mean()
    assert total == pytest.approx(2.0 ** (-level / 2) * 2**level, abs=1e-4)


def test_periodized_orthonormality():
    order, level = 9, 2
    grid = (np.arange(2**14) + 0.5) / 2**14
    mat = np.column_stack(
        [wavelets.periodized_scaling(order, level, k, grid) for k in range(4)]
    )
    gram = mat.T @ mat / grid.size
    assert np.max(np.abs(gram - np.eye(4))) < 1e-3


def test_shift_validation():
    with pytest.raises(ConfigError):
        wavelets.periodized_scaling(4, 2, 4, np.array([0.5]))
