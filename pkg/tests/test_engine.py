"""
同時埋め込みの実行（engine）のテスト

小さな入力で embed / chains / partition を通しで動かし、検証に合格することを確かめる。
"""

from fractions import Fraction

import pytest

from simulembed.bookembed import ColoredGraphSet
from simulembed.engine import (
    UPHILL_FACTOR,
    chains_graphs,
    effective_exponent,
    embed_graphs,
    parallel_map,
    partition_values,
)
from simulembed.errors import CompatibilityError, ParameterError, PlanarityError
from simulembed.experiment import vertical_shift_replay
from simulembed.generate import random_graph_set
from simulembed.logging import RunLogger
from tests.conftest import make_graph


class TestEffectiveExponent:
    """effective_exponent のテスト"""

    @pytest.mark.parametrize(
        "k, axis_split, expected",
        [
            (1, True, Fraction(1, 2)),
            (2, True, Fraction(1, 2)),
            (3, True, Fraction(1, 4)),
            (2, False, Fraction(1, 4)),
            (4, True, Fraction(1, 4)),
        ],
    )
    def test_exponent(self, k, axis_split, expected):
        assert effective_exponent(k, axis_split) == expected


class TestParallelMap:
    """parallel_map のテスト"""

    @pytest.mark.parametrize("threads", [1, 4])
    def test_order_is_kept(self, threads):
        assert parallel_map(threads, lambda x: x * x, list(range(20))) == [
            x * x for x in range(20)
        ]


class TestEmbedGraphs:
    """embed_graphs のテスト"""

    def test_two_paths(self, two_paths):
        """道 2 本は split 配置で描かれ、すべての検証に合格する"""
        # Act
        result = embed_graphs(two_paths, cross_check=True)

        # Assert
        assert result.report.is_valid, result.report.failures
        assert result.layout.case == "split"
        assert result.candidates["case1"] == 3
        assert len(result.drawings) == 2
        names = {check.name for check in result.report.checks}
        assert {"planarity", "uphill", "color-consistency", "expansion"} <= names
        assert {"bend-bound:uphill", "bend-bound:graph"} <= names

    def test_without_axis_split(self, two_paths):
        result = embed_graphs(two_paths, axis_split=False)

        assert result.report.is_valid
        assert result.layout.case == "case2"
        assert result.gamma == 4

    def test_monochromatic_tree_uses_color_blocks(self):
        """単色の木はブロック 1 つの色ブロック配置で描かれる"""
        graph = make_graph({v: 1 for v in range(1, 6)}, [(1, 2), (1, 3), (3, 4), (3, 5)])
        result = embed_graphs(ColoredGraphSet(graphs=(graph,), palette=1))

        assert result.report.is_valid
        assert result.layout.case == "case1"
        assert result.candidates["case1"] == 1

    def test_mixed_set(self, mixed_set):
        result = embed_graphs(mixed_set, threads=2)

        assert result.report.is_valid, result.report.failures
        assert all(d.max_bends <= 4 * d.uphill_bends + 9 for d in result.drawings)

    @pytest.mark.parametrize("k, c", [(2, 4), (3, 20)])
    def test_random_sets(self, k, c):
        graph_set = random_graph_set(n=20, k=k, c=c, seed=k)

        result = embed_graphs(graph_set)

        assert result.report.is_valid, result.report.failures
        uphill_audit = next(a for a in result.audits if a.name == "bend-bound:uphill")
        assert uphill_audit.within
        assert uphill_audit.budget >= UPHILL_FACTOR

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [2, 4])
    def test_larger_random_sets(self, k):
        """n = 120 でも検証に合格し、スレッド数によらず同じ描画になる"""
        # Arrange
        graph_set = random_graph_set(n=120, k=k, c=12, seed=7)

        # Act
        first = embed_graphs(graph_set, threads=1)
        second = embed_graphs(graph_set, threads=4, verify=False)

        # Assert
        assert first.report.is_valid, first.report.failures
        assert all(a.within for a in first.audits if a.name.startswith("bend-bound"))
        assert first.drawings == second.drawings

    def test_partition_audits_for_run_layout(self, two_paths):
        result = embed_graphs(two_paths)

        names = [audit.name for audit in result.audits]
        assert "partition:0" in names
        assert "partition:1" in names

    def test_incompatible_set(self):
        first = make_graph({1: 1, 2: 1}, [(1, 2)])
        second = make_graph({1: 1, 2: 2}, [(1, 2)])

        with pytest.raises(CompatibilityError):
            embed_graphs(ColoredGraphSet(graphs=(first, second), palette=2))

    def test_non_planar_set(self, k5_set):
        with pytest.raises(PlanarityError):
            embed_graphs(k5_set)

    def test_logger_receives_audits(self, two_paths, tmp_workspace):
        logger = RunLogger(log_dir=tmp_workspace / "logs")

        embed_graphs(two_paths, logger=logger)
        logger.close()

        text = logger.run_log_path.read_text(encoding="utf-8")
        assert "Embedding finished" in text
        assert "bend-bound:uphill" in logger.audit_log_path.read_text(encoding="utf-8")


class TestChainsGraphs:
    """chains_graphs のテスト"""

    @pytest.mark.parametrize("b", [1, 2, 3])
    def test_vertices_sit_on_points_of_their_color(self, two_paths, b):
        result = chains_graphs(two_paths, b)

        assert result.report.is_valid, result.report.failures
        names = {check.name for check in result.report.checks}
        assert "color-placement" in names
        assert "color-consistency" not in names
        points = next(a for a in result.audits if a.name == "chains:points")
        assert points.within

    def test_b_must_be_positive(self, two_paths):
        with pytest.raises(ParameterError):
            chains_graphs(two_paths, 0)


class TestPartitionValues:
    """partition_values のテスト"""

    def test_sequence(self):
        result = partition_values("sequence", [3, 1, 4, 1, 5, 9, 2, 6])

        assert result.report.is_valid
        assert result.audit.within
        assert result.lemma_main is not None

    def test_tuples(self):
        result = partition_values("tuples", [(1, 4), (2, 3), (3, 2), (4, 1)])

        assert result.report.is_valid
        assert len(result.partition.runs) == 1
        assert result.lemma_main is None

    @pytest.mark.parametrize("values", [[], [2, 1, 3]])
    def test_short_sequence_raises(self, values):
        """δ = 1/2 では 4 個未満の列を受け付けない"""
        with pytest.raises(ParameterError):
            partition_values("sequence", values, Fraction(1, 2))


class TestVerticalShiftReplay:
    """vertical_shift_replay のテスト"""

    @pytest.mark.parametrize("seed", [0, 1])
    def test_shifted_blocks_keep_bends(self, seed):
        """ブロックごとに y をずらしても uphill のまま、折れ点数も変わらない"""
        graph_set = random_graph_set(n=16, k=2, c=3, seed=seed)
        result = embed_graphs(graph_set, axis_split=False, verify=False)

        report, unchanged = vertical_shift_replay(result, seed=seed)

        assert report.is_valid
        assert unchanged

    @pytest.mark.parametrize("k, seed", [(2, 0), (3, 1), (4, 2)])
    def test_split_layout_shifts_each_axis(self, k, seed):
        """split 配置では Q1 は x 軸、Q2 は y 軸のブロックごとにずらし、折れ点数は変わらない"""
        # Arrange
        graph_set = random_graph_set(n=16, k=k, c=16, seed=seed)
        result = embed_graphs(graph_set, verify=False)

        # Act
        report, unchanged = vertical_shift_replay(result, seed=seed)

        # Assert
        assert result.layout.case == "split"
        assert report.is_valid, report.failures
        assert len(report.checks) == k
        assert unchanged

    def test_two_paths(self, two_paths):
        result = embed_graphs(two_paths, verify=False)

        report, unchanged = vertical_shift_replay(result)

        assert report.is_valid
        assert unchanged
