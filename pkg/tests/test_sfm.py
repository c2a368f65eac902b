import numpy as np
import pytest

from gencast import (
    Generation,
    Partition,
    StateFeedbackMatrix,
    apdd_upper_bound,
    is_irreducible,
    parse_sfm,
    partition_from_json,
    partition_to_json,
    popularity,
    rank,
    total_rank,
    validate_partition,
)
from gencast.sfm import SfmParseError, format_sfm

from conftest import random_sfm


def gens(*groups):
    return tuple(Generation(tuple(g)) for g in groups)


class TestConstruction:
    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            StateFeedbackMatrix([[0, 2]])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            StateFeedbackMatrix(np.zeros((0, 3)))

    def test_immutable(self):
        sfm = StateFeedbackMatrix([[1, 0]])
        with pytest.raises(ValueError):
            sfm.wants[0, 0] = 0

    def test_generation_rejects_duplicates(self):
        with pytest.raises(ValueError):
            Generation((1, 1))


class TestRank:
    def test_empty_generation_is_zero(self):
        sfm = StateFeedbackMatrix([[1, 1], [1, 0]])
        assert rank(sfm, Generation(())) == 0

    def test_all_zero_sfm(self):
        sfm = StateFeedbackMatrix(np.zeros((3, 4), dtype=int))
        assert rank(sfm, Generation((0, 1, 2, 3))) == 0

    def test_hand_computed(self):
        sfm = StateFeedbackMatrix([[1, 1, 0], [0, 1, 1]])
        assert rank(sfm, Generation((1, 2))) == 2

    def test_out_of_range_id(self):
        sfm = StateFeedbackMatrix([[1, 0]])
        with pytest.raises(ValueError):
            rank(sfm, Generation((5,)))

    def test_monotone_under_insertion(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            sfm = random_sfm(rng, 4, 8, 0.4)
            ids = list(rng.permutation(8))
            cut = int(rng.integers(0, 8))
            base = rank(sfm, Generation(tuple(ids[:cut])))
            grown = rank(sfm, Generation(tuple(ids[: cut + 1])))
            assert base <= grown <= base + 1

    def test_whole_block_is_max_row_sum(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            sfm = random_sfm(rng, 5, 9, 0.3)
            whole = Generation(tuple(range(9)))
            assert rank(sfm, whole) == int(sfm.wants.sum(axis=1).max())


class TestPopularity:
    def test_zero_column(self):
        assert popularity(StateFeedbackMatrix([[0, 1], [0, 0]]), 0) == 0

    def test_column_sum(self):
        assert popularity(StateFeedbackMatrix([[1], [1], [0]]), 0) == 2

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            popularity(StateFeedbackMatrix([[1]]), 3)


class TestValidatePartition:
    def test_single_generation_whole_block(self):
        sfm = StateFeedbackMatrix([[1, 1, 0], [0, 1, 1]])
        p = Partition(gens(range(3)))
        assert validate_partition(sfm, p, gamma=2).valid

    def test_shared_packet_is_cover_violation(self):
        sfm = StateFeedbackMatrix([[1, 1]])
        p = Partition(gens([0, 1], [1]))
        report = validate_partition(sfm, p, gamma=2)
        assert report.duplicated == (1,)
        assert not report.valid

    def test_rank_violation_reported(self):
        sfm = StateFeedbackMatrix([[1, 1]])
        p = Partition(gens([0, 1]))
        report = validate_partition(sfm, p, gamma=1)
        assert report.cover_ok
        assert report.rank_violations == ((0, 2),)
        assert not report.valid

    def test_missing_packet(self):
        sfm = StateFeedbackMatrix([[1, 1, 1]])
        report = validate_partition(sfm, Partition(gens([0, 2])), gamma=3)
        assert report.missing == (1,)

    def test_accepts_exactly_rank_capped_covers(self):
        rng = np.random.default_rng(9)
        for _ in range(40):
            sfm = random_sfm(rng, 4, 6, 0.5)
            # random disjoint cover
            perm = list(rng.permutation(6))
            cuts = sorted(set(rng.integers(1, 6, size=2).tolist()))
            parts = [perm[i:j] for i, j in zip([0] + cuts, cuts + [6]) if perm[i:j]]
            p = Partition(gens(*parts))
            for gamma in (1, 2, 3):
                expect = all(rank(sfm, g) <= gamma for g in p.generations)
                assert validate_partition(sfm, p, gamma).valid == expect


class TestTotalRank:
    def test_all_zero(self):
        sfm = StateFeedbackMatrix(np.zeros((2, 3), dtype=int))
        assert total_rank(sfm, Partition(gens(range(3)))) == 0

    def test_hand_computed(self):
        sfm = StateFeedbackMatrix([[1, 1, 0], [0, 1, 1]])
        assert total_rank(sfm, Partition(gens([0, 1], [2]))) == 3

    def test_invalid_partition_raises(self):
        sfm = StateFeedbackMatrix([[1, 1]])
        with pytest.raises(ValueError):
            total_rank(sfm, Partition(gens([0])))

    def test_bounded_by_m_gamma_and_reorder_invariant(self):
        rng = np.random.default_rng(10)
        for _ in range(30):
            sfm = random_sfm(rng, 4, 7, 0.4)
            from gencast import PartitionerConfig, heuristic_partition

            gamma = int(rng.integers(1, 4))
            p = heuristic_partition(sfm, PartitionerConfig(gamma_cap=gamma))
            assert total_rank(sfm, p) <= p.n_generations * gamma
            shuffled = Partition(tuple(rng.permutation(p.generations)), gamma_cap=gamma)
            assert total_rank(sfm, shuffled) == total_rank(sfm, p)
            assert apdd_upper_bound(sfm, shuffled) == apdd_upper_bound(sfm, p)


class TestApddUpperBound:
    def test_zero_ranks(self):
        sfm = StateFeedbackMatrix(np.zeros((2, 2), dtype=int))
        assert apdd_upper_bound(sfm, Partition(gens([0], [1]))) == 0

    def test_single_rank_one(self):
        sfm = StateFeedbackMatrix([[1]])
        assert apdd_upper_bound(sfm, Partition(gens([0]))) == 1

    def test_ranks_two_one(self):
        sfm = StateFeedbackMatrix([[1, 1, 0], [0, 1, 1]])
        # ranks 2 and 1 -> 3 + 1
        assert apdd_upper_bound(sfm, Partition(gens([0, 1], [2]))) == 4


class TestIrreducibility:
    def test_single_generation(self):
        sfm = StateFeedbackMatrix([[1, 0], [0, 1]])
        assert is_irreducible(sfm, Partition(gens([0, 1])))

    def test_movable_packet_detected(self):
        sfm = StateFeedbackMatrix([[1, 0], [0, 1]])
        assert not is_irreducible(sfm, Partition(gens([0], [1])))

    def test_forced_split_is_irreducible(self):
        sfm = StateFeedbackMatrix([[1, 1]])
        assert is_irreducible(sfm, Partition(gens([0], [1])))


class TestTextFormats:
    def test_round_trip(self, conflict_sfm):
        assert parse_sfm(format_sfm(conflict_sfm)) == conflict_sfm

    def test_header_errors(self):
        with pytest.raises(SfmParseError):
            parse_sfm("")
        with pytest.raises(SfmParseError):
            parse_sfm("2\n1 0\n0 1\n")

    def test_bad_entry_position(self):
        with pytest.raises(SfmParseError) as err:
            parse_sfm("1 3\n0 x 1\n")
        assert err.value.line == 2
        assert err.value.column == 2

    def test_row_count_mismatch(self):
        with pytest.raises(SfmParseError):
            parse_sfm("2 2\n1 0\n")

    def test_partition_json_round_trip(self):
        p = Partition(gens([0, 2], [1]), gamma_cap=2)
        q = partition_from_json(partition_to_json(p))
        assert q == p

    def test_partition_json_schema(self):
        import json

        doc = json.loads(partition_to_json(Partition(gens([1, 0]), gamma_cap=3)))
        assert doc == {"gamma": 3, "generations": [[1, 0]]}
