import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import binom

from cvrecon.errors import DomainError, ParameterMismatchError, ResourceCapError
from cvrecon.montecarlo import (
    CHUNK_TRIALS,
    GENERATOR_ID,
    WORK_CAP_ENV,
    beta_gaussian,
    chunk_generator,
    empty_report,
    error_threshold,
    merge_reports,
    simulate_error_counts,
)

# Φ(100 / sqrt(10^4 * 0.29 * 0.71)), 40-digit mpmath
BETA_GAUSS_1E4 = 0.98623073086175464635


def test_gaussian_at_mean():
    for m in (1, 10, 12345):
        assert beta_gaussian(m, 0.3, 0.3) == 0.5


def test_gaussian_oracle():
    assert beta_gaussian(10_000, 0.29, 0.30) == pytest.approx(BETA_GAUSS_1E4, rel=1e-12)


def test_gaussian_concentrates():
    values = [beta_gaussian(m, 0.29, 0.30) for m in (10, 100, 1000, 10_000, 100_000)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] > 1 - 1e-9


@pytest.mark.parametrize("args", [(0, 0.1, 0.2), (10, 0.0, 0.2), (10, 1.0, 0.2), (10, 0.1, -0.1)])
def test_gaussian_domain(args):
    with pytest.raises(DomainError):
        beta_gaussian(*args)


def test_threshold_floor_is_robust():
    assert error_threshold(100, 0.29) == 29
    assert error_threshold(10_000, 0.3) == 3000
    assert error_threshold(10, 1.7) == 10


def test_reference_stream():
    # pinned reference vector for the documented stream layout
    assert chunk_generator(42, 0).binomial(1000, 0.1, size=8).tolist() == [83, 116, 127, 98, 87, 92, 112, 98]
    assert chunk_generator(42, 1).binomial(1000, 0.1, size=8).tolist() == [113, 88, 121, 112, 91, 108, 97, 86]


def test_simulation_matches_exact_oracle():
    r = simulate_error_counts(1000, 0.1, 0.13, 100_000, 42)
    assert r.beta_exact == pytest.approx(binom.cdf(130, 1000, 0.1), rel=1e-12)
    assert 0.998 < r.beta_exact < 1.0
    assert abs(r.beta_hat - r.beta_exact) <= 4 * r.std_error
    assert r.generator_id == GENERATOR_ID
    assert r.seed == 42


def test_certain_success():
    r = simulate_error_counts(500, 0.4, 1.0, 1000, 1)
    assert r.beta_hat == 1.0
    assert r.successes == r.trials


def test_certain_failure():
    r = simulate_error_counts(10_000, 0.2, 0.0, 1000, 1)
    assert r.beta_hat == 0.0


def test_report_invariants():
    r = simulate_error_counts(200, 0.3, 0.32, 5000, 3)
    assert r.successes <= r.trials
    assert r.beta_hat == r.successes / r.trials
    assert r.std_error == math.sqrt(r.beta_hat * (1 - r.beta_hat) / r.trials)


def test_deterministic():
    a = simulate_error_counts(300, 0.2, 0.21, 150_000, 99)
    b = simulate_error_counts(300, 0.2, 0.21, 150_000, 99)
    assert a == b


def test_worker_count_does_not_change_result():
    trials = 3 * CHUNK_TRIALS + 17
    one = simulate_error_counts(400, 0.25, 0.26, trials, 2**64 - 1, workers=1)
    four = simulate_error_counts(400, 0.25, 0.26, trials, 2**64 - 1, workers=4)
    assert one == four


def test_seed_changes_result():
    a = simulate_error_counts(300, 0.2, 0.21, 10_000, 1)
    b = simulate_error_counts(300, 0.2, 0.21, 10_000, 2)
    assert a.successes != b.successes


@pytest.mark.parametrize("seed", [-1, 2**64, 1.5])
def test_seed_domain(seed):
    with pytest.raises(DomainError):
        simulate_error_counts(10, 0.1, 0.2, 10, seed)


def test_work_cap(monkeypatch):
    monkeypatch.setenv(WORK_CAP_ENV, "1000")
    with pytest.raises(ResourceCapError):
        simulate_error_counts(1000, 0.1, 0.2, 1000, 0)


def _report(seed, trials, m=100, e=0.2, t=0.22):
    return simulate_error_counts(m, e, t, trials, seed)


def test_merge_identity():
    r = _report(5, 1000)
    e = empty_report(100, 0.2, 0.22, seed=123)
    assert merge_reports(r, e) == r
    assert merge_reports(e, r) == r


def test_merge_pools_counts():
    a, b = _report(1, 1000), _report(2, 3000)
    m = merge_reports(a, b)
    assert m.trials == 4000
    assert m.beta_hat == (a.successes + b.successes) / 4000
    assert m.beta_exact == a.beta_exact
    assert m.seed == 1


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2**64 - 1), st.integers(1, 500)), min_size=3, max_size=3))
def test_merge_associative_commutative(specs):
    a, b, c = (_report(s, n) for s, n in specs)
    assert merge_reports(merge_reports(a, b), c) == merge_reports(a, merge_reports(b, c))
    assert merge_reports(a, b) == merge_reports(b, a)


def test_merge_mismatch():
    with pytest.raises(ParameterMismatchError):
        merge_reports(_report(1, 10), _report(1, 10, m=101))


def test_gaussian_error_shrinks_with_block_size():
    gaps = []
    for m in (100, 1000, 10_000):
        r = empty_report(m, 0.29, 0.30)
        gaps.append(abs(r.beta_gaussian - r.beta_exact))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] <= 5e-3
