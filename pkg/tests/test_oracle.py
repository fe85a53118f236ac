"""Oracles and certification: exact optima, worst-case profiles, impartiality."""

from fractions import Fraction
from itertools import product

import pytest

from impartial import (
    BudgetExceededError,
    ExhaustiveSpace,
    InstanceTuple,
    ParameterError,
    RandomSpace,
    WeightMatrix,
    assign,
    build_partition_system,
    check_impartial,
    default_space,
    generate,
    load_partition_file,
    opt_assignment,
    opt_selection,
    ratio_report,
    select,
    tightness_instance,
    top_score_selection,
)

MUTUAL_SUPPORT = ((1, 2), (2, 1))


class TestOptSelection:
    def test_worked_example(self, example_matrix):
        chosen, score = opt_selection(example_matrix, 6)
        assert chosen == (1, 2, 3, 5, 6, 8)
        assert score == 27

    def test_degenerate_sizes(self, example_matrix):
        assert opt_selection(example_matrix, 0) == ((), 0)
        chosen, score = opt_selection(example_matrix, 9)
        assert chosen == tuple(range(1, 10))
        assert score == 31

    def test_ties_go_to_smaller_indices(self):
        A = WeightMatrix.from_votes(5, [(2, 1, 1), (1, 2, 1), (4, 3, 1)])
        assert opt_selection(A, 2)[0] == (1, 2)

    def test_k_out_of_range(self, example_matrix):
        with pytest.raises(ParameterError, match="\\[0, 9\\]"):
            opt_selection(example_matrix, 10)

    def test_baseline_returns_the_same_set(self, example_matrix):
        assert top_score_selection(example_matrix, 6) == (1, 2, 3, 5, 6, 8)


class TestOptAssignment:
    def test_matches_exhaustive_enumeration(self):
        # independent oracle: walk all job-or-none labelings directly
        n, m, k = 6, 2, 2
        for seed in range(15):
            instance = generate("uniform-int", n=n, seed=seed, m=m, max_weight=5)
            best = 0
            for labeling in product(range(m + 1), repeat=n):
                if any(labeling.count(ell) > k for ell in range(1, m + 1)):
                    continue
                score = sum(
                    instance.matrices[ell - 1].column_score(j + 1)
                    for j, ell in enumerate(labeling)
                    if ell
                )
                best = max(best, score)
            jobs, total = opt_assignment(instance, k)
            assert total == best
            # the returned assignment is feasible and earns the reported score
            seen = set()
            recount = 0
            for ell, job in enumerate(jobs):
                assert len(job) <= k
                assert not (set(job) & seen)
                seen |= set(job)
                recount += sum(instance.matrices[ell].column_score(j) for j in job)
            assert recount == total

    def test_single_job_equals_selection_oracle(self):
        for seed in range(40):
            A = generate("uniform-int", n=8, seed=seed)
            jobs, total = opt_assignment(InstanceTuple((A,)), 3)
            chosen, opt = opt_selection(A, 3)
            assert total == opt
            assert jobs == (chosen,)

    def test_node_budget_is_enforced(self, monkeypatch):
        instance = generate("uniform-int", n=10, seed=0, m=2)
        with pytest.raises(BudgetExceededError, match="exceeded 5 nodes"):
            opt_assignment(instance, 3, node_budget=5)
        monkeypatch.setenv("IMPARTIAL_OPT_BUDGET", "7")
        with pytest.raises(BudgetExceededError, match="exceeded 7 nodes"):
            opt_assignment(instance, 3)
        # an explicit budget wins over the environment
        jobs, total = opt_assignment(instance, 3, node_budget=10_000_000)
        assert total > 0

    def test_k_out_of_range(self):
        with pytest.raises(ParameterError):
            opt_assignment(InstanceTuple.zeros(4, 2), 5)


class TestTightnessInstance:
    def test_9_6_profile(self):
        A = tightness_instance(9, 6)
        assert A.nonzero_votes() == ((4, 2, 1), (5, 3, 1), (6, 1, 1))
        assert select(A, 6).score == 1
        assert opt_selection(A, 6)[1] == 3

    def test_8_8_profile(self):
        A = tightness_instance(8, 8)
        assert A.nonzero_votes() == ((3, 2, 1), (8, 1, 1))
        assert select(A, 8).score == 1
        assert opt_selection(A, 8)[1] == 2

    def test_64_16_profile(self):
        A = tightness_instance(64, 16)
        assert select(A, 16).score == 1
        assert opt_selection(A, 16)[1] == 8

    def test_rejects_nonconforming_parameters(self):
        with pytest.raises(ParameterError, match="must not exceed k/2"):
            tightness_instance(32, 8)

    def test_needs_the_normalized_system(self, data_dir):
        system = load_partition_file(data_dir / "partition_9x6_alt.json")
        with pytest.raises(ParameterError, match="normalized"):
            tightness_instance(9, 6, system)

    def test_system_must_match_parameters(self):
        system = build_partition_system(9, 6)
        with pytest.raises(ParameterError, match="does not match"):
            tightness_instance(16, 8, system)


class TestRatioReport:
    def test_zero_optimum_passes_trivially(self):
        report = ratio_report("select", 0, 0, Fraction(1, 3))
        assert report.passed and report.ratio is None

    def test_exact_rational_comparison(self):
        report = ratio_report("select", 25, 27, Fraction(1, 3))
        assert report.ratio == Fraction(25, 27)
        assert report.passed
        report = ratio_report("select", 1, 4, Fraction(1, 3))
        assert not report.passed

    def test_float_scores_fall_back_to_float_ratio(self):
        report = ratio_report("select", 1.5, 4, Fraction(1, 3))
        assert report.passed and isinstance(report.ratio, float)

    def test_serialization(self):
        doc = ratio_report("select", 25, 27, Fraction(1, 3)).to_json_dict()
        assert doc == {
            "mechanism": "select",
            "mechanism_score": 25,
            "opt_score": 27,
            "ratio": "25/27",
            "alpha": "1/3",
            "passed": True,
        }


class TestCheckImpartial:
    def test_selection_is_certified_on_the_mutual_support(self):
        space = ExhaustiveSpace(n=9, support=MUTUAL_SUPPORT)
        report = check_impartial(lambda A: select(A, 6), space, name="select")
        assert report.certified
        assert not report.violations
        assert report.trials == 36
        assert not report.exhausted

    def test_baseline_violates_on_the_mutual_support(self):
        space = ExhaustiveSpace(n=9, support=MUTUAL_SUPPORT)
        report = check_impartial(lambda A: top_score_selection(A, 1), space)
        assert report.violations
        assert not report.certified
        breach = report.violations[0]
        assert breach.before != breach.after
        assert breach.agent in (1, 2)

    def test_budget_exhaustion_is_reported(self):
        space = ExhaustiveSpace(n=9, support=MUTUAL_SUPPORT)
        report = check_impartial(lambda A: select(A, 6), space, budget=10)
        assert report.exhausted
        assert not report.certified
        assert report.trials == 10

    def test_assignment_membership_footprints(self):
        space = RandomSpace(n=16, m=2, pair_target=64, seed=1)
        report = check_impartial(lambda T: assign(T, 8), space, name="assign")
        assert not report.violations
        assert report.certified

    def test_violation_serialization(self):
        space = ExhaustiveSpace(n=9, support=MUTUAL_SUPPORT)
        report = check_impartial(lambda A: top_score_selection(A, 1), space)
        doc = report.to_json_dict()
        assert doc["mechanism"] == "top_score_selection" or doc["mechanism"]
        assert doc["violations"]
        first = doc["violations"][0]
        assert set(first) == {
            "agent", "base_votes", "deviation_votes", "before", "after",
        }


class TestSpaces:
    def test_exhaustive_space_rejects_bad_cells(self):
        with pytest.raises(ParameterError, match="diagonal"):
            list(ExhaustiveSpace(n=4, support=((1, 1),)).instances())
        with pytest.raises(ParameterError, match="out of range"):
            list(ExhaustiveSpace(n=4, support=((1, 5),)).instances())

    def test_exhaustive_space_sizes(self):
        space = ExhaustiveSpace(n=4, support=((1, 2), (3, 4)))
        instances = list(space.instances())
        assert len(instances) == 9
        assert all(isinstance(A, WeightMatrix) for A in instances)
        assert len(list(space.deviations(1))) == 3
        assert len(list(space.deviations(2))) == 1

    def test_exhaustive_space_with_jobs_yields_tuples(self):
        space = ExhaustiveSpace(n=4, m=2, support=((1, 1, 2), (2, 2, 1)))
        instances = list(space.instances())
        assert len(instances) == 9
        assert all(isinstance(T, InstanceTuple) for T in instances)
        rows = next(iter(space.deviations(1)))
        assert len(rows) == 2

    def test_random_space_is_deterministic(self):
        one = RandomSpace(n=12, pair_target=36, seed=5)
        two = RandomSpace(n=12, pair_target=36, seed=5)
        assert list(one.instances()) == list(two.instances())
        assert list(one.deviations(3)) == list(two.deviations(3))
        assert len(list(one.instances())) == 3

    def test_default_space_switches_on_size(self):
        small = default_space(9)
        assert isinstance(small, ExhaustiveSpace)
        assert (1, 2) in small.support and (2, 1) in small.support
        assert len(small.support) == 6
        large = default_space(16)
        assert isinstance(large, RandomSpace)
