import pytest
import rothpy as rp
from rothpy import partition
from rothpy import sets


class TestWitness:
    @pytest.mark.parametrize("lo,hi,expected", [
        (0.3, 0.6, 0.5),
        (0.5, 1.0, 1.0),
        (0.0, 0.1, 0.0625),
        (0.3, 0.4, None),
        (0.5, 0.5, None),
    ])
    def test_dyadic_witness(self, lo, hi, expected):
        assert partition.dyadic_witness(lo, hi) == expected


class TestValidate:
    def test_dyadic(self):
        assert partition.validate_partition(partition.dyadic_partition(3)) == []

    def test_no_witness(self):
        violations = partition.validate_partition([(0.3, 0.4), (0.4, 1.0)])
        assert violations == ["(0.3, 0.4]: no dyadic rational 2^-k inside"]

    def test_top(self):
        violations = partition.validate_partition([(0.25, 0.6)])
        assert violations == ["does not cover up to 1, top endpoint 0.6"]

    def test_gap(self):
        violations = partition.validate_partition([(0.5, 1.0), (0.2, 0.4)])
        assert violations == ["gap (0.4, 0.5] not covered"]

    def test_overlap(self):
        violations = partition.validate_partition([(0.4, 1.0), (0.3, 0.5)])
        assert violations == ["(0.4, 1.0] and (0.3, 0.5] not disjoint"]

    def test_empty(self):
        assert partition.validate_partition([]) == ["empty partition"]

    def test_malformed(self):
        assert partition.validate_partition([(1.0,)]) == ["malformed interval (1.0,)"]

    def test_admissible_raises(self):
        with pytest.raises(rp.errors.ValidationError) as e:
            partition.AdmissiblePartition([(0.3, 0.4), (0.4, 1.0)])
        assert len(e.value.offenders) == 1


class TestAdmissiblePartition:
    def test_dyadic(self):
        P = partition.dyadic_partition(4)
        assert len(P) == 4
        assert P.r_min == 2**-4
        assert P.witnesses == (1.0, 0.5, 0.25, 0.125)

    def test_sorted(self):
        P = partition.AdmissiblePartition([(0.1, 0.3), (0.3, 1.0)])
        assert P.intervals == ((0.3, 1.0), (0.1, 0.3))
        assert [w for _, w in P] == [1.0, 0.25]

    def test_bad_depth(self):
        with pytest.raises(rp.errors.ValidationError):
            partition.dyadic_partition(0)


class TestScaleSample:
    def test_sample(self):
        sample = partition.scale_sample(0.25, 0.5, 0.5, 4)
        assert len(sample) == 4
        assert sample[0] == 0.5
        assert sample[-1] == 0.25
        assert sample == sorted(sample, reverse=True)

    def test_minimum(self):
        assert partition.scale_sample(0.25, 0.5, 0.5, 2) == [0.5, 0.25]


def test_exceptional_bound():
    assert partition.exceptional_bound(0.5) == 32.0
    assert partition.exceptional_bound(0.5, big_c_p=2.0) == 64.0
    assert partition.exceptional_bound(0.0) is None


class TestReport:
    def test_full_set(self, medium, t2):
        report = partition.partition_report(sets.full(medium), t2, partition.dyadic_partition(4))
        assert report.exceptional_count == 0
        assert report.good_count == 4
        assert report.within_bound
        assert list(report.rows.columns) == ["lo", "hi", "witness", "samples", "v", "good"]

    def test_empty_set(self, medium, t2):
        report = partition.partition_report(sets.empty(medium), t2, partition.dyadic_partition(4))
        assert report.exceptional_count == 4
        assert report.bound is None
        assert report.within_bound

    def test_dropped(self, medium, t2):
        # 4h = 2^-6 at N = 2^10
        report = partition.partition_report(sets.full(medium), t2, partition.dyadic_partition(10))
        assert len(report.rows) == 7
        assert len(report.dropped) == 3
        assert report.notes

    def test_threshold(self, medium, t2):
        A = sets.random_set(0.3, 8, seed=1, config=medium)
        report = partition.partition_report(A, t2, partition.dyadic_partition(5), c_p=1e9)
        assert report.threshold == pytest.approx(1e9 * A.density**3)
        assert report.good_count == 0

    def test_to_dict(self, medium, t2):
        doc = partition.partition_report(sets.full(medium), t2, partition.dyadic_partition(3)).to_dict()
        assert set(doc["rows"][0]) == {"lo", "hi", "witness", "v", "good"}
        assert doc["good_count"] == 3

    def test_workers(self, medium, t2):
        A = sets.random_set(0.3, 8, seed=1, config=medium)
        inline = partition.partition_report(A, t2, partition.dyadic_partition(5))
        parallel = partition.partition_report(A, t2, partition.dyadic_partition(5), worker_count=2)
        assert inline.to_dict() == parallel.to_dict()

    def test_samples_per_j(self, medium, t2):
        with pytest.raises(rp.errors.ValidationError):
            partition.partition_report(sets.full(medium), t2, partition.dyadic_partition(2), samples_per_j=1)


def test_global_inf(medium, t2):
    A = sets.random_set(0.3, 8, seed=1, config=medium)
    scales = [2**-2, 2**-4]
    expected = min(rp.averages.pairing(A, t2, r) for r in scales)
    assert partition.global_inf(A, t2, scales) == pytest.approx(expected)


class TestRefinement:
    # With one extra sample a merged pair (2^-(j+2), 2^-j] scores the scales
    # 2^-j, 2^-(j+1), 2^-(j+2), which contain the samples of both halves.
    def reports(self, A, t2):
        coarse = partition.partition_report(A, t2, [(0.25, 1.0), (2**-4, 0.25)], samples_per_j=3)
        fine = partition.partition_report(A, t2, partition.dyadic_partition(4), samples_per_j=2)
        return coarse, fine

    @pytest.mark.parametrize("seed", range(3))
    def test_children_score_at_least_parent(self, medium, t2, seed):
        A = sets.random_set(0.3, 8, seed=seed, config=medium)
        coarse, fine = self.reports(A, t2)
        parents = list(coarse.rows["v"])
        for i, v in enumerate(fine.rows["v"]):
            assert v >= parents[i // 2] - 1e-12
        assert fine.rows["v"].min() >= coarse.rows["v"].min() - 1e-12

    @pytest.mark.parametrize("seed", range(3))
    def test_good_parent_good_children(self, medium, t2, seed):
        A = sets.random_set(0.3, 8, seed=seed, config=medium)
        coarse, fine = self.reports(A, t2)
        parents = list(coarse.rows["good"])
        for i, good in enumerate(fine.rows["good"]):
            if parents[i // 2]:
                assert good
        assert fine.exceptional_count <= 2 * coarse.exceptional_count


@pytest.mark.parametrize("seed", range(4))
def test_global_inf_exceeds_paired_inf(medium, t2, seed):
    A = sets.random_set(0.4, 8, seed=seed, config=medium)
    scales = rp.averages.ScaleGrid.dyadic(1, 6)
    paired = rp.averages.paired_extremal(A, t2, scales, mode=rp.averages.INF)
    assert partition.global_inf(A, t2, scales) >= paired - 1e-10
