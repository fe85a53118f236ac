"""Selection mechanism: modified scores, direct and padded variants, guarantees."""

from fractions import Fraction

import pytest

from impartial import (
    ApplicabilityError,
    ParameterError,
    WeightMatrix,
    build_partition_system,
    generate,
    modified_scores,
    opt_selection,
    reduction_params,
    select,
    select_general,
    selection_guarantee,
    total_score,
)


class TestTotalScore:
    def test_examples(self, example_matrix):
        A = example_matrix
        assert total_score(A, (7,), (2, 3, 8)) == 7
        assert total_score(A, (8,), range(1, 8)) == 0
        assert total_score(A, range(1, 10), (1, 2, 3, 5, 6, 8)) == 27

    def test_rejects_out_of_range_labels(self, example_matrix):
        with pytest.raises(ParameterError, match="label range"):
            total_score(example_matrix, (0,), (1,))
        with pytest.raises(ParameterError, match="label range"):
            total_score(example_matrix, (1,), (10,))


class TestModifiedScores:
    def test_single_vote_lands_in_one_slot(self):
        system = build_partition_system(9, 6)
        # agent 4 is a voter of partition 1, so its vote for agent 1 counts
        # in agent 1's left slot and nowhere else
        A = WeightMatrix.from_votes(9, [(4, 1, 5)])
        table = modified_scores(A, system)
        assert table.score(1, 1) == 5
        assert table.score(1, 4) == 0

    def test_co_candidate_vote_lands_in_the_right_slot(self):
        system = build_partition_system(9, 6)
        # agent 2 shares candidate set 1 with agent 1, so its vote is unseen
        # there but resurfaces in agent 1's second candidacy
        A = WeightMatrix.from_votes(9, [(2, 1, 4)])
        table = modified_scores(A, system)
        assert table.score(1, 1) == 0
        assert table.score(1, 4) == 4

    def test_slots_sum_to_the_full_score(self):
        for n, k in [(9, 6), (16, 8)]:
            system = build_partition_system(n, k)
            for seed in range(20):
                A = generate("uniform-int", n=n, seed=seed)
                table = modified_scores(A, system)
                for j in range(1, n + 1):
                    left, right = system.slots(j)
                    assert table.score(j, left) + table.score(j, right) == (
                        A.column_score(j)
                    )

    def test_score_of_non_candidacy_raises(self):
        system = build_partition_system(9, 6)
        table = modified_scores(WeightMatrix.zeros(9), system)
        with pytest.raises(ParameterError, match="not a candidate"):
            table.score(1, 2)

    def test_profile_size_must_match_system(self):
        system = build_partition_system(9, 6)
        with pytest.raises(ParameterError, match="expects 9"):
            modified_scores(WeightMatrix.zeros(8), system)


class TestSelect:
    def test_golden_worked_example(self, example_matrix):
        result = select(example_matrix, 6)
        assert result.score == 25
        assert result.selected == (2, 3, 5, 6, 8)
        assert result.winners == (3, 6, 8, 8, 2, 5)
        assert result.alpha == Fraction(1, 3)
        assert result.params is None

    def test_zero_profile_breaks_ties_to_larger_index(self):
        result = select(WeightMatrix.zeros(9), 6)
        assert result.winners == (3, 6, 9, 8, 9, 7)
        assert result.selected == (3, 6, 7, 8, 9)
        assert result.score == 0

    def test_scaling_weights_preserves_the_choice(self, example_matrix):
        scaled = WeightMatrix(
            tuple(tuple(3 * w for w in row) for row in example_matrix.rows)
        )
        base = select(example_matrix, 6)
        result = select(scaled, 6)
        assert result.selected == base.selected
        assert result.winners == base.winners
        assert result.score == 3 * base.score

    def test_winners_dominate_their_partitions(self):
        system = build_partition_system(12, 8)
        for seed in range(30):
            A = generate("uniform-int", n=12, seed=seed)
            result = select(A, 8, system)
            table = modified_scores(A, system)
            for p, w in enumerate(result.winners, start=1):
                best = max((table.score(j, p), j) for j in system.candidates(p))
                assert (table.score(w, p), w) == best
            assert result.selected == tuple(sorted(set(result.winners)))
            assert result.score == sum(A.column_score(j) for j in result.selected)
            assert len(result.selected) <= 8

    def test_explicit_system_must_match_profile_and_k(self, example_matrix):
        system = build_partition_system(16, 8)
        with pytest.raises(ParameterError, match="covers 16"):
            select(example_matrix, 8, system)
        system = build_partition_system(9, 6)
        with pytest.raises(ParameterError, match="k=6"):
            select(example_matrix, 4, system)

    def test_configured_layout_fixture_scores_17(self, example_matrix, data_dir):
        from impartial import load_partition_file

        system = load_partition_file(data_dir / "partition_9x6_alt.json")
        result = select(example_matrix, 6, system)
        assert result.score == 17
        assert result.selected == (1, 3, 4, 8, 9)


class TestReductionParams:
    def test_examples(self):
        params = reduction_params(9, 6)
        assert (params.k_even, params.n_padded, params.b) == (6, 9, 3)
        assert params.alpha == Fraction(1, 3)
        params = reduction_params(100, 21)
        assert (params.k_even, params.n_padded, params.b) == (20, 100, 10)
        assert params.alpha == Fraction(2, 21)
        params = reduction_params(13, 8)
        assert (params.k_even, params.n_padded, params.b) == (8, 16, 4)
        assert params.alpha == Fraction(1, 4)

    @pytest.mark.parametrize(
        "n,k,fragment",
        [
            (10, 6, "2\\*sqrt"),
            (15, 7, "2\\*sqrt"),
            (9, 9, "smaller than n"),
            (9, 1, "exceed 1"),
        ],
    )
    def test_out_of_range_pairs_are_named(self, n, k, fragment):
        with pytest.raises(ApplicabilityError, match=fragment):
            reduction_params(n, k)

    def test_guarantee_values(self):
        assert selection_guarantee(9, 6) == Fraction(1, 3)
        assert selection_guarantee(16, 8) == Fraction(1, 4)
        assert selection_guarantee(25, 10) == Fraction(1, 5)
        assert selection_guarantee(13, 9) == Fraction(2, 9)
        # boundary family: k*k = 4n gives exactly 2/k
        for k in (6, 8, 10, 12):
            assert selection_guarantee(k * k // 4, k) == Fraction(2, k)
        # upper band: even k in [2n/3, n-1] gives exactly 1/3
        for n, k in [(12, 8), (12, 10), (15, 10), (15, 14), (18, 12), (18, 16)]:
            assert selection_guarantee(n, k) == Fraction(1, 3)


class TestSelectGeneral:
    def test_matches_direct_mechanism_on_conforming_pairs(self, example_matrix):
        direct = select(example_matrix, 6)
        general = select_general(example_matrix, 6)
        assert general.selected == direct.selected
        assert general.score == direct.score
        assert general.alpha == Fraction(1, 3)
        assert general.params is not None
        assert general.params.n_padded == 9

    def test_padding_agents_are_stripped(self):
        result = select_general(WeightMatrix.zeros(13), 8)
        assert all(1 <= j <= 13 for j in result.selected)
        assert result.score == 0
        assert len(result.selected) <= 8
        # the padded run picked some agents beyond 13 before stripping
        assert any(j > 13 for j in result.winners)

    def test_bound_holds_on_random_nonconforming_instances(self):
        for n, k in [(13, 8), (11, 8), (15, 9)]:
            alpha = selection_guarantee(n, k)
            for seed in range(200):
                A = generate("uniform-int", n=n, seed=seed)
                result = select_general(A, k)
                _, opt = opt_selection(A, k)
                assert result.score >= alpha * opt

    def test_out_of_range_parameters_propagate(self):
        with pytest.raises(ApplicabilityError):
            select_general(WeightMatrix.zeros(10), 6)

    def test_result_serialization(self, example_matrix):
        doc = select_general(example_matrix, 6).to_json_dict()
        assert doc["score"] == 25
        assert doc["alpha"] == "1/3"
        assert doc["params"]["k_even"] == 6
