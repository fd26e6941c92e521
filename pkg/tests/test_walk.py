from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import GAUSSIAN, UNIFORM, three_point_probability
from walkpatterns import (
    LengthMismatch,
    Permutation,
    SizeTooLarge,
    StepDistribution,
    class_report,
    cross_distribution_discrimination,
    enumerate_classes,
    estimate_frequencies,
    reverse_complement,
    sample_pattern,
)
from walkpatterns.walk import FrequencyTable, _draw_codes, decode, encode, homogeneity

P = Permutation.parse
D = StepDistribution.parse


class TestDistributions:
    @pytest.mark.parametrize(
        "text, label",
        [
            ("uniform:-1,1", "uniform:-1,1"),
            ("gaussian:0,1", "gaussian:0,1"),
            ("exponential:2", "exponential:2,0"),
            ("exponential:1,-1", "exponential:1,-1"),
            ("cauchy:0,0.5", "cauchy:0,0.5"),
            ("lognormal:0,1", "lognormal:0,1"),
            ("shifted-uniform:1,2", "shifted-uniform:1,2"),
        ],
    )
    def test_parse_and_label(self, text, label):
        d = D(text)
        assert d.label == label and D(d.label) == d

    @pytest.mark.parametrize(
        "bad",
        [
            "poisson:1",
            "gaussian:0",
            "gaussian:0,0",
            "gaussian:0,-1",
            "uniform:1,1",
            "shifted-uniform:0,1",
            "exponential:0",
            "exponential:1,2,3",
            "cauchy:0,x",
            "lognormal:0,nan",
            "gaussian",
        ],
    )
    def test_invalid_specs(self, bad):
        with pytest.raises(ValueError):
            D(bad)

    def test_exponential_shift(self):
        rng = np.random.default_rng(0)
        x = D("exponential:1,-1").sample(rng, 10000)
        assert x.min() > -1 and abs(x.mean()) < 0.05


class TestSampling:
    def test_positive_steps_always_ascend(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            pi, rej = sample_pattern(D("shifted-uniform:1,2"), 6, rng)
            assert pi.is_identity() and rej == 0

    def test_length_one(self):
        assert sample_pattern(D("gaussian:0,1"), 1, np.random.default_rng(0))[0] == P("1")

    def test_golden_sequence(self):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([7, 0])))
        got = [str(sample_pattern(D("gaussian:0,1"), 3, rng)[0]) for _ in range(5)]
        assert got == ["312", "132", "123", "123", "312"]

    def test_ties_are_redrawn_and_counted(self):
        class Lattice:
            def sample(self, rng, size):
                return rng.integers(-1, 2, size).astype(float)

        codes, rejected = _draw_codes(Lattice(), 4, 5000, np.random.default_rng(3))
        assert rejected > 0
        for code in np.unique(codes):
            decode(int(code), 4)  # every code is a genuine permutation

    @given(st.integers(1, 9).flatmap(lambda n: st.permutations(range(1, n + 1))))
    def test_code_round_trip(self, entries):
        pi = Permutation(entries)
        assert decode(encode(pi), len(pi)) == pi


class TestEstimation:
    def test_golden_counts(self):
        t = estimate_frequencies(D("gaussian:0,1"), 3, 1000, 7)
        assert {str(k): v for k, v in t.counts.items()} == {
            "123": 262, "132": 119, "213": 113, "231": 123, "312": 139, "321": 244
        }

    def test_single_trial(self):
        t = estimate_frequencies(D("cauchy:0,1"), 5, 1, 0)
        assert sum(t.counts.values()) == 1 and len(t.counts) == 1

    def test_normalisation_and_worker_invariance(self):
        d = D("lognormal:0,1")
        trials = 3 * (1 << 16) + 17
        one = estimate_frequencies(d, 4, trials, 5, workers=1)
        four = estimate_frequencies(d, 4, trials, 5, workers=4)
        assert sum(one.counts.values()) == trials
        assert one.to_csv() == four.to_csv()

    def test_different_seeds_differ(self):
        d = D("gaussian:0,1")
        assert estimate_frequencies(d, 4, 5000, 1).counts != estimate_frequencies(d, 4, 5000, 2).counts

    @pytest.mark.parametrize("law, spec", [(UNIFORM, "uniform:-1,1"), (GAUSSIAN, "gaussian:0,1")])
    def test_three_point_frequencies_match_quadrature(self, law, spec):
        trials = 10**6
        t = estimate_frequencies(D(spec), 3, trials, 99)
        for pi in Permutation.all(3):
            p = three_point_probability(pi.entries, law)
            assert abs(t.frequency(pi) - p) < 4 * math.sqrt(p * (1 - p) / trials)

    @pytest.mark.parametrize("spec", ["uniform:-1,1", "gaussian:0,1", "cauchy:0,1"])
    def test_symmetric_laws_are_rc_symmetric(self, spec):
        trials = 400_000
        t = estimate_frequencies(D(spec), 4, trials, 21)
        for pi in Permutation.all(4):
            a, b = t.count(pi), t.count(reverse_complement(pi))
            assert abs(a - b) <= 5 * math.sqrt(a + b + 1)

    def test_argument_checks(self):
        d = D("gaussian:0,1")
        with pytest.raises(ValueError):
            estimate_frequencies(d, 3, 0, 1)
        with pytest.raises(ValueError):
            estimate_frequencies(d, 3, 10, -1)
        with pytest.raises(SizeTooLarge):
            estimate_frequencies(d, 16, 10, 1)


class TestClassReport:
    def test_symmetric_n3_passes(self):
        t = estimate_frequencies(D("uniform:-1,1"), 3, 200_000, 4)
        r = class_report(t, enumerate_classes(3))
        assert r.homogeneous and r.missing_patterns == []
        assert {str(row.representative): row.df for row in r.rows} == {"123": 0, "132": 1, "231": 1, "321": 0}

    def test_positive_steps_leave_everything_else_missing(self):
        t = estimate_frequencies(D("shifted-uniform:1,2"), 4, 2000, 0)
        r = class_report(t, enumerate_classes(4))
        assert set(r.missing_patterns) == set(Permutation.all(4)) - {P("1234")}
        assert r.homogeneous

    def test_unequal_counts_are_flagged(self):
        counts = {P("132"): 1000, P("213"): 800, P("123"): 5, P("321"): 5, P("231"): 5, P("312"): 5}
        t = FrequencyTable(3, 1820, 0, D("gaussian:0,1"), counts)
        r = class_report(t, enumerate_classes(3))
        assert [str(row.representative) for row in r.rejected_rows] == ["132"]
        assert not r.homogeneous

    def test_homogeneity_statistic(self):
        stat, df, p = homogeneity([60, 40])
        assert (stat, df) == (4.0, 1) and abs(p - 0.0455) < 1e-3
        assert homogeneity([7]) == (0.0, 0, 1.0)
        assert homogeneity([0, 0]) == (0.0, 1, 1.0)

    def test_length_mismatch_and_partition_check(self):
        t = estimate_frequencies(D("gaussian:0,1"), 3, 100, 0)
        with pytest.raises(LengthMismatch):
            class_report(t, enumerate_classes(4))
        with pytest.raises(ValueError):
            class_report(t, enumerate_classes(3)[:2])

    def test_serialisation(self):
        t = estimate_frequencies(D("gaussian:0,1"), 3, 1000, 7)
        classes = enumerate_classes(3)
        lines = t.to_csv(classes).splitlines()
        assert lines[0].startswith("# walkpatterns frequency-table v1; n=3; trials=1000; seed=7; dist=gaussian:0,1")
        assert lines[1] == "pattern,count,frequency,class_representative"
        assert lines[2:4] == ["123,262,0.26200000,123", "132,119,0.11900000,132"]
        assert lines[4] == "213,113,0.11300000,132"
        assert len(lines) == 8
        doc = json.loads(json.dumps(class_report(t, classes).to_dict()))
        assert doc["classes"][1]["members"] == {"132": 119, "213": 113}
        assert "workers" not in t.to_csv(classes)


class TestDiscrimination:
    def test_vacuous_for_length_one(self):
        r = cross_distribution_discrimination(1, [D("gaussian:0,1")], 100, 0, enumerate_classes(1))
        assert r.unseparated_cross_pairs() == [] and r.separated_within_class() == []

    def test_drift_separates_ascent_from_descent(self):
        classes = enumerate_classes(3)
        dists = [D("gaussian:0,1"), D("exponential:1")]
        r = cross_distribution_discrimination(3, dists, 100_000, 8, classes)
        z, best = r.pair(P("123"), P("321"))
        assert z > r.z_threshold and best == D("exponential:1")
        assert r.separated_within_class() == []

    def test_size_limit(self):
        with pytest.raises(SizeTooLarge):
            cross_distribution_discrimination(7, [], 10, 0, [])
