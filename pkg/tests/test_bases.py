import math

import numpy as np
import pytest

from sievelab import bases
from sievelab.errors import ConfigError, DomainError
from sievelab.quadrature import gauss_legendre_01

SQ2 = math.sqrt(2.0)


def test_fourier_values():
    f = bases.fourier()
    assert bases.eval_time_basis(f, 1, 0.37) == 1.0
    assert abs(bases.eval_time_basis(f, 2, 0.25)) < 1e-15
    assert bases.eval_time_basis(f, 3, 0.25) == pytest.approx(SQ2)
    assert bases.eval_time_basis(f, 4, 0.5) == pytest.approx(SQ2 * math.cos(2 * math.pi))


def test_legendre_values():
    leg = bases.legendre()
    assert bases.eval_time_basis(leg, 1, 0.42) == pytest.approx(1.0)
    assert bases.eval_time_basis(leg, 2, 1.0) == pytest.approx(math.sqrt(3.0))
    assert bases.eval_time_basis(leg, 2, 0.5) == pytest.approx(0.0, abs=1e-15)


def test_domain_and_index_errors():
    f = bases.fourier()
    with pytest.raises(DomainError):
        bases.eval_time_basis(f, 1, 1.2)
    with pytest.raises(ConfigError):
        bases.eval_time_basis(f, 0, 0.5)
    wave = bases.daubechies(4, jn=2)
    with pytest.raises(ConfigError):
        bases.eval_time_basis(wave, 5, 0.5)  # capacity 2^2 = 4


@pytest.mark.parametrize(
    "family",
    [
        bases.fourier(),
        bases.legendre(),
        bases.jacobi(1.0, 1.0),
        bases.jacobi(0.5, 2.0),
    ],
)
def test_orthonormality_lebesgue(family):
    # Gram matrix under 2048-node Gauss-Legendre quadrature
    nodes, weights = gauss_legendre_01(2048)
    mat = bases.unit_basis_matrix(family, 16, nodes)
    gram = mat.T @ (weights[:, None] * mat)
    assert np.max(np.abs(gram - np.eye(16))) < 1e-8


def test_chebyshev_normalisation_and_weighted_orthogonality():
    cheb = bases.chebyshev1()
    nodes, weights = gauss_legendre_01(2048)
    mat = bases.unit_basis_matrix(cheb, 12, nodes)
    # unit Lebesgue norm on the diagonal
    diag = np.einsum("q,qi,qi->i", weights, mat, mat)
    assert np.max(np.abs(diag - 1.0)) < 1e-8
    # orthogonal under the Chebyshev weight; use Gauss-Chebyshev nodes
    k = np.arange(1, 4001)
    y_cheb = np.cos((2 * k - 1) * math.pi / (2 * 4000))  # nodes on (-1, 1)
    t_cheb = 0.5 * (y_cheb + 1.0)
    mat_c = bases.unit_basis_matrix(cheb, 12, t_cheb)
    gram_w = mat_c.T @ mat_c * (math.pi / 4000)
    off = gram_w - np.diag(np.diag(gram_w))
    assert np.max(np.abs(off)) < 1e-8


@pytest.mark.parametrize(
    "kind", ["algebraic_r", "logarithmic_r", "algebraic_rplus", "logarithmic_rplus"]
)
def test_mapping_round_trip_and_monotonicity(kind):
    rng = np.random.default_rng(7)
    x = rng.uniform(-1e6, 1e6, size=10_000)
    if kind.endswith("rplus"):
        x = np.abs(x) + 1e-12
    # scale follows the package default: the sample standard deviation
    mapping = bases.Mapping(kind).resolved(x)
    y = bases.map_to_unit(mapping, x)
    assert np.all((y > 0.0) & (y < 1.0))
    back = bases.map_from_unit(mapping, y)
    assert np.max(np.abs(back - x) / (1.0 + np.abs(x))) < 1e-6
    order = np.argsort(x)
    assert np.all(np.diff(y[order]) > 0)


def test_mapping_closed_forms():
    alg = bases.Mapping("algebraic_r", 1.0)
    assert bases.map_to_unit(alg, 0.0) == pytest.approx(0.5)
    assert bases.map_to_unit(alg, 1.0) == pytest.approx((1.0 / SQ2 + 1.0) / 2.0)
    assert bases.map_from_unit(alg, 0.5) == pytest.approx(0.0)
    assert bases.map_from_unit(alg, 0.8535534) == pytest.approx(1.0, abs=1e-6)
    log = bases.Mapping("logarithmic_r", 1.0)
    assert bases.map_to_unit(log, 0.0) == pytest.approx(0.5)
    assert bases.map_from_unit(bases.Mapping("logarithmic_r", 2.0), 0.5) == 0.0


def test_mapping_domain_errors():
    alg_plus = bases.Mapping("algebraic_rplus", 1.0)
    with pytest.raises(DomainError):
        bases.map_to_unit(alg_plus, -1.0)
    log = bases.Mapping("logarithmic_r", 1.0)
    with pytest.raises(DomainError):
        bases.map_to_unit(log, 1e9)  # tanh saturates onto the boundary
    alg = bases.Mapping("algebraic_r", 1.0)
    with pytest.raises(DomainError):
        bases.map_from_unit(alg, 1.0)
    with pytest.raises(DomainError):
        bases.map_from_unit(alg, -0.1)
    with pytest.raises(DomainError):
        bases.map_to_unit(alg, np.inf)


def test_rplus_maps_increasing_and_inverse():
    # the logarithmic map saturates in double precision once x >> s, so
    # keep the probe range a modest multiple of the scale
    for kind, hi in (("algebraic_rplus", 1e5), ("logarithmic_rplus", 20.0)):
        mapping = bases.Mapping(kind, 2.5)
        x = np.geomspace(1e-6, hi, 200)
        y = bases.map_to_unit(mapping, x)
        assert np.all(np.diff(y) > 0)
        assert np.max(np.abs(bases.map_from_unit(mapping, y) - x) / (1 + x)) < 1e-9
    with pytest.raises(DomainError):
        bases.map_to_unit(bases.Mapping("logarithmic_rplus", 2.5), 1e5)


def test_space_basis_composition():
    f = bases.fourier()
    alg = bases.Mapping("algebraic_r", 1.0)
    spec = bases.SieveSpec(f, f, alg, c=2, d=2)
    assert bases.eval_space_basis(spec, 1, 12.3) == pytest.approx(1.0)
    # at x = 0 the unit coordinate is 0.5, so sqrt(2) cos(pi) = -sqrt(2)
    assert bases.eval_space_basis(spec, 2, 0.0) == pytest.approx(-SQ2)
    leg_spec = bases.SieveSpec(
        f, bases.legendre(), bases.Mapping("logarithmic_r", 1.0), c=2, d=2
    )
    assert bases.eval_space_basis(leg_spec, 2, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_tensor_basis_layout_and_consistency():
    f = bases.fourier()
    alg = bases.Mapping("algebraic_r", 1.0)
    spec = bases.SieveSpec(f, f, alg, c=2, d=2)
    vec = bases.eval_tensor_basis(spec, 0.0, 0.0)
    assert vec == pytest.approx([1.0, -SQ2, SQ2, -2.0])
    # entries are exactly the product of the 1-D evaluations
    rng = np.random.default_rng(3)
    spec_big = bases.SieveSpec(f, bases.legendre(), alg, c=3, d=4)
    for _ in range(20):
        t = rng.uniform()
        x = rng.normal() * 3
        vec = bases.eval_tensor_basis(spec_big, t, x)
        for l1 in range(1, 4):
            for l2 in range(1, 5):
                prod = bases.eval_time_basis(spec_big.time_family, l1, t) * (
                    bases.eval_space_basis(spec_big, l2, x)
                )
                assert vec[(l1 - 1) * 4 + (l2 - 1)] == prod


def test_weighted_space_variant():
    f = bases.fourier()
    alg = bases.Mapping("algebraic_r", 2.0)
    plain = bases.SieveSpec(f, f, alg, c=1, d=3)
    weighted = bases.SieveSpec(f, f, alg, c=1, d=3, weighted_space=True)
    x = np.array([-1.0, 0.3, 4.0])
    ratio = bases.space_basis_matrix(weighted, x) / bases.space_basis_matrix(plain, x)
    expected = bases.mapping_weight(alg, x)
    assert np.allclose(ratio, expected[:, None])
    # the weighted family is orthonormal in L2(R): check numerically
    grid = np.linspace(-600, 600, 400_001)
    mat = bases.space_basis_matrix(weighted, grid)
    gram = mat.T @ mat * (grid[1] - grid[0])
    assert np.max(np.abs(gram - np.eye(3))) < 1e-3


def test_sievespec_validation():
    f = bases.fourier()
    alg = bases.Mapping("algebraic_r", 1.0)
    with pytest.raises(ConfigError):
        bases.SieveSpec(f, f, alg, c=0, d=2)
    with pytest.raises(ConfigError):
        bases.SieveSpec(bases.daubechies(4, jn=1), f, alg, c=3, d=2)  # capacity 2
    with pytest.raises(ConfigError):
        bases.jacobi(-1.5, 0.0)
    with pytest.raises(ConfigError):
        bases.Mapping("algebraic_r", -1.0)
    spec = bases.SieveSpec(f, f, alg, c=2, d=3, r=2)
    assert spec.p == 12


def test_unresolved_scale_raises():
    mapping = bases.Mapping("algebraic_r")
    with pytest.raises(ConfigError):
        bases.map_to_unit(mapping, 1.0)
    resolved = mapping.resolved([1.0, 2.0, 3.0])
    assert resolved.s == pytest.approx(np.std([1.0, 2.0, 3.0]))
