import numpy as np
import pytest

from reelab.criteria import (
    loewner_matrix_psd_check,
    operator_monotone_search,
    ppt_criterion,
    reduction_criterion,
)
from reelab.errors import InputError
from reelab.hermitian import (
    IDENTITY_FN,
    LOG,
    SQRT,
    SQUARE,
    ScalarFunction,
    loewner_geq,
    matrix_function,
)
from reelab.states import (
    DensityMatrix,
    maximally_mixed,
    random_density,
    random_separable,
    singlet,
    werner,
)


def test_reduction_criterion_verdicts():
    assert reduction_criterion(maximally_mixed((2, 2))).holds
    verdict = reduction_criterion(singlet())
    assert not verdict.holds
    assert verdict.witness_eigenvalue == pytest.approx(-0.5, abs=1e-12)
    # the witness is the singlet vector itself
    overlap = abs(np.vdot(verdict.witness_vector, singlet().mat @ verdict.witness_vector))
    assert overlap == pytest.approx(1.0, abs=1e-10)


def test_reduction_werner_threshold():
    # scan the family: the verdict flips exactly past F = 1/2
    for f in np.arange(0.0, 1.0001, 1e-3):
        expected = f <= 0.5 + 1e-12
        assert reduction_criterion(werner(float(f)), 1e-9).holds == expected


def test_ppt_criterion_verdicts():
    ra = random_density(2, 2, 1).mat
    rb = random_density(2, 2, 2).mat
    prod = DensityMatrix(np.kron(ra, rb), (2, 2))
    assert ppt_criterion(prod).holds
    verdict = ppt_criterion(singlet())
    assert not verdict.holds
    assert verdict.witness_eigenvalue == pytest.approx(-0.5, abs=1e-12)


def test_criteria_agree_two_qubits():
    # reduction and PPT are equivalent for 2x2; check verdict agreement
    for seed in range(300):
        rho = random_density(4, 4, seed).tagged(2, 2)
        assert ppt_criterion(rho).holds == reduction_criterion(rho).holds


def test_criteria_no_false_alarms_on_separables():
    for seed in range(10):
        rho = random_separable((2, 2), seed, k=32)
        assert ppt_criterion(rho, 1e-9).holds
        assert reduction_criterion(rho, 1e-9).holds


def test_monotone_search_identity_and_log_find_nothing():
    assert operator_monotone_search(IDENTITY_FN, 2, 200, seed=0) is None
    assert operator_monotone_search(SQRT, 3, 200, seed=1) is None
    for dim in (2, 3, 4):
        assert operator_monotone_search(LOG, dim, 500, seed=dim) is None


def test_monotone_search_square_finds_injected_pair():
    found = operator_monotone_search(SQUARE, 2, 1000, seed=7)
    assert found is not None
    assert found.trials_used == 1
    assert np.allclose(found.a.mat, [[2, 1], [1, 1]])
    assert np.allclose(found.b.mat, np.diag([1.0, 0.0]))
    assert found.violation == pytest.approx(3.0 - np.sqrt(10.0), abs=1e-12)


def test_monotone_search_square_padded_dims():
    for dim in (3, 4):
        found = operator_monotone_search(SQUARE, dim, 1000, seed=11)
        assert found is not None and found.trials_used == 1


def test_monotone_counterexample_reverifies():
    found = operator_monotone_search(SQUARE, 2, 1000, seed=3)
    assert loewner_geq(found.a, found.b, 1e-10)
    fa = matrix_function(found.a, SQUARE)
    fb = matrix_function(found.b, SQUARE)
    wmin = float(np.linalg.eigvalsh(fa.mat - fb.mat)[0])
    assert wmin == pytest.approx(found.violation, abs=1e-12)
    assert wmin < -1e-8


def test_monotone_search_deterministic():
    a = operator_monotone_search(SQUARE, 3, 50, seed=21)
    b = operator_monotone_search(SQUARE, 3, 50, seed=21)
    assert np.array_equal(a.a.mat, b.a.mat)
    assert np.array_equal(a.b.mat, b.b.mat)
    assert a.violation == b.violation and a.trials_used == b.trials_used


def test_monotone_search_input_validation():
    with pytest.raises(InputError):
        operator_monotone_search(LOG, 1, 10, seed=0)
    with pytest.raises(InputError):
        operator_monotone_search(LOG, 2, 0, seed=0)


def test_loewner_matrix_log_psd():
    ok, wmin = loewner_matrix_psd_check(LOG, [0.5, 1.0, 2.0, 4.0])
    assert ok and wmin >= -1e-9
    rng = np.random.default_rng(5)
    for _ in range(20):
        pts = np.sort(rng.uniform(0.05, 10.0, size=rng.integers(2, 7)))
        if len(np.unique(pts)) != len(pts):
            continue
        ok, _ = loewner_matrix_psd_check(LOG, pts)
        assert ok


def test_loewner_matrix_square_not_psd():
    ok, wmin = loewner_matrix_psd_check(SQUARE, [1.0, 2.0])
    assert not ok
    assert wmin == pytest.approx(3.0 - np.sqrt(10.0), abs=1e-6)


def test_loewner_matrix_identity_all_ones():
    ok, wmin = loewner_matrix_psd_check(IDENTITY_FN, [0.3, 1.0, 5.0])
    assert ok and wmin == pytest.approx(0.0, abs=1e-9)


def test_loewner_matrix_duplicate_points():
    with pytest.raises(InputError):
        loewner_matrix_psd_check(LOG, [1.0, 1.0, 2.0])


def test_loewner_matrix_domain():
    from reelab.errors import DomainError

    with pytest.raises(DomainError):
        loewner_matrix_psd_check(LOG, [-1.0, 2.0])
    shifted = ScalarFunction("log-above-one", lambda x: np.log(x - 1.0), 1.0)
    ok, _ = loewner_matrix_psd_check(shifted, [1.5, 2.0, 3.0])
    assert ok
