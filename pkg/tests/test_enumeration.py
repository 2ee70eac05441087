import math
from fractions import Fraction

import numpy as np
import pytest

from arctic6v.enumeration import (
    KNOWN_COUNTS,
    Configuration,
    SizeLimitError,
    boundary_correlation,
    config_weight,
    efp_brute,
    efp_table,
    enumerate_dwbc,
    generating_coeffs,
    partition_function,
    resolve_n_max,
)
from arctic6v.model import VertexWeights, weights_from_tau

TAUS = (0.5, 1.0, 2.0)


def closed_form_coeffs(n, tau):
    """Independent binomial expansion of ((1 + tau z)/(1 + tau))^(n-1)."""
    t = Fraction(tau)
    return [float(math.comb(n - 1, k) * t**k / (1 + t) ** (n - 1)) for k in range(n)]


def test_configuration_counts_match_asm_numbers():
    for n in range(1, 7):
        assert sum(1 for _ in enumerate_dwbc(n)) == KNOWN_COUNTS[n - 1]


def test_n1_is_the_single_type6_vertex():
    (cfg,) = list(enumerate_dwbc(1))
    assert cfg.grid == ((6,),)
    cfg.check()


def test_configurations_are_distinct():
    seen = set(cfg.grid for cfg in enumerate_dwbc(4))
    assert len(seen) == 42


def test_all_small_configurations_pass_invariants():
    for n in range(1, 5):
        for cfg in enumerate_dwbc(n):
            cfg.check()


def test_cut_counts_on_sampled_n5_configurations():
    for k, cfg in enumerate(enumerate_dwbc(5)):
        if k % 37 == 0:
            cfg.check()


def test_size_limit_errors():
    with pytest.raises(SizeLimitError):
        list(enumerate_dwbc(0))
    with pytest.raises(SizeLimitError):
        list(enumerate_dwbc(9))
    with pytest.raises(SizeLimitError):
        partition_function(100, VertexWeights(1, 1, 1))
    # explicit override wins
    assert resolve_n_max(3) == 3


def test_n_max_env_override(monkeypatch):
    monkeypatch.setenv("ARCTIC_NMAX", "2")
    with pytest.raises(SizeLimitError):
        list(enumerate_dwbc(3))
    assert sum(1 for _ in enumerate_dwbc(2)) == 2


def test_config_weight_examples():
    w = VertexWeights(2.0, 3.0, 5.0)
    (cfg,) = list(enumerate_dwbc(1))
    assert config_weight(cfg, w) == 5.0  # single type-6 vertex carries c

    # the two N=2 configurations weigh a^2 c^2 and b^2 c^2
    weights = sorted(config_weight(cfg, w) for cfg in enumerate_dwbc(2))
    assert weights == pytest.approx(sorted([4.0 * 25.0, 9.0 * 25.0]))


def test_config_weight_scaling():
    w = VertexWeights(1.1, 0.7, 2.2)
    kappa = 1.9
    for n in (2, 3):
        for cfg in enumerate_dwbc(n):
            assert config_weight(cfg, w.scaled(kappa)) == pytest.approx(
                kappa ** (n * n) * config_weight(cfg, w), rel=1e-12
            )


def test_partition_function_examples():
    w = VertexWeights(2.0, 3.0, 5.0)
    assert partition_function(1, w) == pytest.approx(5.0)
    # Z_2 = c^2 (a^2 + b^2)
    assert partition_function(2, w) == pytest.approx(25.0 * 13.0, rel=1e-13)
    # uniform weights count configurations
    assert partition_function(3, VertexWeights(1, 1, 1)) == pytest.approx(7.0)
    assert partition_function(4, VertexWeights(1, 1, 1)) == pytest.approx(42.0)


def test_efp_boundary_conventions():
    w = weights_from_tau(1.0)
    for n in (2, 3, 4):
        for s in range(1, n + 1):
            assert efp_brute(n, n, s, w) == 1.0
            assert efp_brute(n, 0, s, w) == 0.0


def test_efp_examples():
    w = weights_from_tau(1.0)
    # only one line crosses cut r=1, so two thick edges are impossible
    assert efp_brute(2, 1, 2, w) == 0.0
    # the a^2 c^2 configuration is the only one with a thick edge at (r=1, row 1)
    assert efp_brute(2, 1, 1, w) == pytest.approx(0.5, abs=1e-14)
    # frozen value pinned by the closed-form binomial profile
    assert efp_brute(3, 2, 1, w) == pytest.approx(0.75, abs=1e-13)


def test_efp_index_validation():
    w = weights_from_tau(1.0)
    with pytest.raises(ValueError):
        efp_brute(3, -1, 1, w)
    with pytest.raises(ValueError):
        efp_brute(3, 4, 1, w)
    with pytest.raises(ValueError):
        efp_brute(3, 1, 0, w)


def test_efp_scale_invariance():
    w = VertexWeights(1.0, 1.3, 1.9)
    for kappa in (0.25, 7.0):
        scaled = w.scaled(kappa)
        for r in (1, 2):
            for s in (1, 2):
                assert efp_brute(3, r, s, scaled) == pytest.approx(
                    efp_brute(3, r, s, w), abs=1e-12
                )


def test_efp_table_matches_pointwise_brute():
    w = weights_from_tau(2.0)
    for n in (2, 3, 4):
        table = efp_table(n, w)
        for r in range(n + 1):
            for s in range(1, n + 1):
                assert table[r, s] == pytest.approx(efp_brute(n, r, s, w), abs=1e-13)


def test_event_inclusion_and_vanishing():
    for tau in TAUS:
        w = weights_from_tau(tau)
        for n in (2, 3, 4, 5):
            table = efp_table(n, w)
            for r in range(n + 1):
                for s in range(1, n):
                    assert table[r, s + 1] <= table[r, s] + 1e-14
                for s in range(r + 1, n + 1):
                    assert table[r, s] == 0.0


def test_column_monotonicity_empirical():
    for tau in TAUS:
        w = weights_from_tau(tau)
        for n in range(2, 7):
            table = efp_table(n, w)
            for s in range(1, n + 1):
                for r in range(n):
                    assert table[r, s] <= table[r + 1, s] + 1e-12


def test_boundary_correlation_examples():
    w = weights_from_tau(1.0)
    assert boundary_correlation(1, 1, VertexWeights(1, 2, 3)) == 1.0
    assert boundary_correlation(2, 1, w) == pytest.approx(0.5, abs=1e-14)
    assert boundary_correlation(2, 2, w) == pytest.approx(0.5, abs=1e-14)
    with pytest.raises(ValueError):
        boundary_correlation(2, 0, w)
    with pytest.raises(ValueError):
        boundary_correlation(2, 3, w)


def test_boundary_correlation_telescopes_to_one():
    for weights in (weights_from_tau(0.5), VertexWeights(1, 1, 1), VertexWeights(1.2, 0.4, 0.9)):
        for n in (2, 3, 4):
            assert sum(generating_coeffs(n, weights)) == pytest.approx(1.0, abs=1e-12)


def test_generating_coeffs_nonnegative_and_normalized():
    for weights in (weights_from_tau(2.0), VertexWeights(1, 1, 1)):
        for n in (2, 3, 5):
            coeffs = generating_coeffs(n, weights)
            assert all(c >= -1e-15 for c in coeffs)
            assert sum(coeffs) == pytest.approx(1.0, abs=1e-12)


def test_generating_coeffs_closed_form_on_free_fermion_line():
    for tau in TAUS:
        w = weights_from_tau(tau)
        for n in range(1, 7):
            brute = generating_coeffs(n, w)
            closed = closed_form_coeffs(n, tau)
            assert brute == pytest.approx(closed, abs=1e-12)


def test_generating_coeffs_n4_tau2_binomial_values():
    assert generating_coeffs(4, weights_from_tau(2.0)) == pytest.approx(
        [1 / 27, 6 / 27, 12 / 27, 8 / 27], abs=1e-12
    )


def test_alternating_sign_matrix_bijection_n4():
    """Mapping type 6 -> +1, type 5 -> -1, others -> 0 must give 42 distinct
    valid alternating sign matrices (row/column sums 1, signs alternating)."""

    def is_asm(m):
        for lines in (m, m.T):
            for line in lines:
                nonzero = [x for x in line if x != 0]
                if not nonzero or nonzero[0] != 1 or nonzero[-1] != 1:
                    return False
                if any(nonzero[i] * nonzero[i + 1] != -1 for i in range(len(nonzero) - 1)):
                    return False
                if sum(line) != 1:
                    return False
        return True

    images = set()
    for cfg in enumerate_dwbc(4):
        m = np.zeros((4, 4), dtype=int)
        for i in range(4):
            for j in range(4):
                if cfg.grid[i][j] == 6:
                    m[i, j] = 1
                elif cfg.grid[i][j] == 5:
                    m[i, j] = -1
        assert is_asm(m)
        images.add(m.tobytes())
    assert len(images) == 42


def test_dump_round_trip():
    for cfg in enumerate_dwbc(3):
        text = cfg.dump()
        rows = tuple(tuple(int(ch) for ch in line) for line in text.splitlines())
        assert Configuration(3, rows) == cfg


def test_check_rejects_corrupted_grid():
    cfg = next(iter(enumerate_dwbc(3)))
    rows = [list(row) for row in cfg.grid]
    rows[1][1] = 1 if rows[1][1] != 1 else 2
    broken = Configuration(3, tuple(tuple(r) for r in rows))
    with pytest.raises(ValueError):
        broken.check()
