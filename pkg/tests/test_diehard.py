import numpy as np
import pytest

from gauntlet.diehard import (ALL_TESTS, IMPLEMENTED_TESTS, PIECE_BYTES, DiehardTestId,
                              intel_pass, run_diehard, total_pvalues, worst_case)
from gauntlet.diehard import suite
from gauntlet.errors import InvalidParameterError
from gauntlet.gf2 import gf2_rank, rank_probabilities


@pytest.fixture(scope="module")
def piece():
    return np.random.default_rng(2024).bytes(PIECE_BYTES)


def test_roster():
    assert len(ALL_TESTS) == 18
    assert total_pvalues() == 220
    assert len(IMPLEMENTED_TESTS) == 11
    assert DiehardTestId.parse("3d") is DiehardTestId.SPHERES3D
    assert DiehardTestId.BDAY.expected_pvalue_count == 10
    assert not DiehardTestId.OPSO.implemented
    with pytest.raises(InvalidParameterError):
        DiehardTestId.parse("NOPE")


def test_intel_rule():
    assert intel_pass(0.5)
    assert not intel_pass(1.0)
    assert not intel_pass(0.9999)
    assert not intel_pass(0.0001)
    assert not intel_pass(0.00005)
    assert intel_pass(0.00011)


def test_worst_case():
    assert worst_case([0.5, 0.97, 0.03]) == 0.97
    assert worst_case([0.2, 1.0, 0.6]) == 1.0
    assert worst_case([0.3]) == 0.3
    with pytest.raises(InvalidParameterError):
        worst_case([])


def test_unimplemented_and_short_piece(piece):
    with pytest.raises(NotImplementedError):
        run_diehard("OPERM5", piece)
    with pytest.raises(InvalidParameterError):
        run_diehard("CRAPS", piece[:-4])


def test_squeeze_probabilities_match_published_cells():
    p = suite.squeeze_probabilities()
    assert p[:7].sum() == pytest.approx(0.00002103, abs=5e-9)
    assert p[7] == pytest.approx(0.00005779, abs=5e-9)
    assert p[8] == pytest.approx(0.00017554, abs=5e-9)
    assert p.sum() == pytest.approx(1.0, abs=1e-8)
    low, high, cells = suite.squeeze_cells()
    assert cells.sum() == pytest.approx(1.0)
    assert cells.min() * suite.SQUEEZE_RUNS >= 5.0


def test_squeeze_probabilities_small_chain():
    # exact distribution for k = 4 by enumeration of the chain
    from fractions import Fraction

    dist = {4: Fraction(1)}
    steps = [Fraction(0)] * 30
    for j in range(1, 30):
        nxt = {}
        for k, pr in dist.items():
            for v in range(1, k + 1):
                nxt[v] = nxt.get(v, 0) + pr / k
        steps[j] = nxt.pop(1, Fraction(0))
        dist = nxt
    got = suite.squeeze_probabilities(4, 29)
    assert [float(s) for s in steps] == pytest.approx(list(got), abs=1e-12)


def test_craps_probabilities():
    p = suite.craps_throw_probabilities()
    assert p[0] == pytest.approx(1 / 3)
    assert p.sum() == pytest.approx(1.0)
    assert p[-1] > 0
    assert suite.CRAPS_WIN_PROB == pytest.approx(0.492929, abs=1e-6)


def test_rank_probabilities():
    p32 = rank_probabilities(32, 32)
    assert p32[:30].sum() == pytest.approx(0.005285, abs=1e-6)
    assert p32[30] == pytest.approx(0.128350, abs=1e-6)
    assert p32[31] == pytest.approx(0.577576, abs=1e-6)
    assert p32[32] == pytest.approx(0.288788, abs=1e-6)
    p68 = rank_probabilities(6, 8)
    assert p68[:5].sum() == pytest.approx(0.009443, abs=1e-6)
    assert p68[6] == pytest.approx(0.773118, abs=1e-6)


def test_gf2_rank_small():
    rows = np.array([[0b100, 0b010, 0b001], [0b110, 0b011, 0b101], [0, 0, 0]], dtype=np.uint64)
    assert list(gf2_rank(rows, 3)) == [3, 2, 0]


def test_run_length_counts():
    x = np.array([1, 2, 3, 2, 5, 1, 1, 2, 3, 4, 5, 6, 7, 0])
    # ascending runs: 1 2 3 | 2 5 | 1 | 1 2 3 4 5 6 7 | 0
    assert list(suite.run_length_counts(x)) == [2, 1, 1, 0, 0, 1]


def test_runs_statistic_is_chi2_6_on_average():
    rng = np.random.default_rng(4)
    stats = [suite.runs_statistic(rng.random(10_000)) for _ in range(400)]
    assert np.mean(stats) == pytest.approx(6.0, abs=0.5)
    assert np.var(stats) == pytest.approx(12.0, rel=0.3)


@pytest.mark.parametrize("test", IMPLEMENTED_TESTS, ids=lambda t: t.value)
def test_counts_and_ranges_on_random_piece(piece, test):
    out = run_diehard(test, piece)
    assert len(out.pvalues) == test.expected_pvalue_count
    assert all(0.0 <= p <= 1.0 for p in out.pvalues)
    assert out.test == test.value


def test_deterministic(piece):
    assert run_diehard("BDAY", piece) == run_diehard("BDAY", piece)


@pytest.mark.parametrize("test", ["BDAY", "CRAPS", "RUNS", "C1STREAM", "SQUEEZE"])
def test_structured_piece_fails(test):
    ramp = (np.arange(PIECE_BYTES // 4, dtype=np.uint32) * np.uint32(2654435761)) >> np.uint32(8)
    data = ramp.astype("<u4").tobytes()
    out = run_diehard(test, data)
    assert not all(out.passes)
