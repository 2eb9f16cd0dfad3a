"""
検証機能のテスト

検証器は構成側のコードを使わないので、手で作った小さな描画で
合格・不合格の両方を確かめる。不合格には必ず証拠が付く。
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simulembed.bookembed import (
    BookEmbedding,
    ColoredGraphSet,
    EdgePlacement,
    ItemKind,
    Page,
    SpineItem,
    extract_spinal_paths,
)
from simulembed.expand import GraphDrawing
from simulembed.layout import layout_case1
from simulembed.seqpart import Direction, MonotonicPartition, MonotonicRun
from simulembed.uphill import Polyline, UphillDrawing
from simulembed.verify import (
    BendParams,
    VerificationReport,
    check_bend_bounds,
    check_book_embedding,
    check_color_consistency,
    check_color_placement,
    check_expansion,
    check_partition,
    check_planarity,
    check_uphill,
    _shadow,
    orientation,
    planarity_violations_brute,
    planarity_violations_sweep,
    segment_contact,
    uphill_violations,
)
from tests.conftest import make_graph


def P(x, y) -> tuple[Fraction, Fraction]:
    return (Fraction(x), Fraction(y))


def line(*points) -> Polyline:
    return Polyline(tuple(P(*p) for p in points))


# 小さな整数座標の折れ線（連続する点は異なる）
polylines_strategy = st.lists(
    st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=2, max_size=4).filter(
        lambda points: all(a != b for a, b in zip(points, points[1:]))
    ),
    min_size=1,
    max_size=3,
)


def stacked_zigzags(count: int) -> list[list[tuple[Fraction, Fraction]]]:
    """高さ 10 ずつ上にずらしたジグザグの折れ線（互いに交わらず、後のものほど上）"""
    return [[P(i, 10 * j + i % 2) for i in range(6)] for j in range(count)]


def graph_drawing(locations, edges, uphill_bends=0, graph_index=0) -> GraphDrawing:
    return GraphDrawing(
        graph_index=graph_index,
        orientation="y",
        locations={v: P(*p) for v, p in locations.items()},
        edges=tuple(edges),
        uphill_bends=uphill_bends,
    )


def uphill_drawing(*edges: Polyline) -> UphillDrawing:
    locations = [edges[0].start] + [edge.end for edge in edges]
    return UphillDrawing(
        path_index=0,
        orientation="y",
        placements=tuple(range(len(locations))),
        locations=tuple(locations),
        edges=tuple(edges),
        edge_ranks=tuple(range(1, len(edges) + 1)),
    )


class TestVerificationReport:
    """VerificationReport のテスト"""

    def test_empty_report_is_valid(self):
        assert VerificationReport().is_valid

    def test_failures_are_listed(self):
        report = check_expansion([graph_drawing({}, [], uphill_bends=0)], 5, 9)
        report.extend(check_partition(MonotonicPartition(runs=(), source_length=1), [5]))

        assert not report.is_valid
        assert [c.name for c in report.failures] == ["partition"]


class TestSegmentContact:
    """segment_contact のテスト"""

    def test_proper_crossing(self):
        assert segment_contact(P(0, 0), P(2, 2), P(0, 2), P(2, 0)) == [P(1, 1)]

    def test_disjoint(self):
        assert segment_contact(P(0, 0), P(1, 0), P(0, 1), P(1, 1)) is None

    def test_touching_at_endpoint(self):
        assert segment_contact(P(0, 0), P(2, 0), P(1, 0), P(1, 1)) == [P(1, 0)]

    def test_collinear_overlap(self):
        assert segment_contact(P(0, 0), P(2, 0), P(1, 0), P(3, 0)) == [P(1, 0), P(2, 0)]

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=4, max_size=4))
    def test_contact_is_symmetric_and_on_both_segments(self, coords):
        """線分の順序を入れ替えても同じ共通部分になり、共通部分は両方の線分上にある"""
        p1, p2, q1, q2 = (P(x, y) for x, y in coords)

        contact = segment_contact(p1, p2, q1, q2)

        assert contact == segment_contact(q1, q2, p1, p2)
        for point in contact or []:
            assert orientation(p1, p2, point) == 0
            assert orientation(q1, q2, point) == 0
            assert min(p1, p2) <= point <= max(p1, p2)
            assert min(q1, q2) <= point <= max(q1, q2)


class TestCheckPlanarity:
    """check_planarity のテスト"""

    def test_crossing_edges_fail_with_witness(self):
        """交差する 2 辺は交点を証拠にして不合格"""
        # Arrange
        drawing = graph_drawing(
            {1: (0, 0), 2: (2, 2), 3: (0, 2), 4: (2, 0)},
            [((1, 2), line((0, 0), (2, 2))), ((3, 4), line((0, 2), (2, 0)))],
        )

        # Act
        report = check_planarity(drawing, cross_check=True)

        # Assert
        assert not report.is_valid
        check = report.checks[0]
        assert check.witnesses[0][2] == (P(1, 1),)
        assert check.stats["sweep_agrees"]

    def test_shared_endpoint_is_allowed(self):
        drawing = graph_drawing(
            {1: (0, 0), 2: (2, 2), 3: (2, 0)},
            [((1, 2), line((0, 0), (1, 3), (2, 2))), ((1, 3), line((0, 0), (2, 0)))],
        )

        report = check_planarity(drawing, cross_check=True)

        assert report.is_valid
        assert report.checks[0].stats["segments"] == 3

    def test_vertex_on_other_edge_fails(self):
        """頂点が他の辺の途中に乗っていれば不合格"""
        drawing = graph_drawing(
            {1: (0, 0), 2: (2, 2), 3: (1, 1)},
            [((1, 2), line((0, 0), (2, 2)))],
        )

        assert not check_planarity(drawing).is_valid

    def test_polyline_touching_itself_fails(self):
        drawing = graph_drawing(
            {1: (0, 0), 2: (2, 0)},
            [((1, 2), line((0, 0), (1, 1), (1, -1), (0, 0), (2, 0)))],
        )

        assert not check_planarity(drawing).is_valid

    @settings(max_examples=300, deadline=None)
    @given(polylines_strategy)
    def test_sweep_matches_brute_force(self, raw):
        """走査と総当たりで合否が一致し、走査の証拠は総当たりの証拠に含まれる"""
        # Arrange
        polylines = [[P(x, y) for x, y in points] for points in raw]
        vertices = {points[0] for points in polylines} | {points[-1] for points in polylines}

        # Act
        sweep = planarity_violations_sweep(polylines, vertices)
        brute = planarity_violations_brute(polylines, vertices)

        # Assert
        assert bool(sweep) == bool(brute)
        assert all(witness in brute for witness in sweep)

    def test_many_segments(self):
        """2000 本の線分でも走査で判定でき、最後に足した交差も見つかる"""
        # Arrange
        polylines = stacked_zigzags(400)
        ends = {points[0] for points in polylines} | {points[-1] for points in polylines}
        crossing = [P(Fraction(5, 2), -1), P(Fraction(5, 2), 4000)]

        # Act
        clean = planarity_violations_sweep(polylines, ends)
        crossed = planarity_violations_sweep(polylines + [crossing], ends | set(crossing))

        # Assert
        assert clean == []
        assert crossed
        assert all(400 in (first[0], second[0]) for first, second, _ in crossed)

    def test_vertical_segment_through_edge_fails(self):
        drawing = graph_drawing(
            {1: (0, 0), 2: (0, 2), 3: (-1, 1), 4: (1, 1)},
            [((1, 2), line((0, 0), (0, 2))), ((3, 4), line((-1, 1), (1, 1)))],
        )

        report = check_planarity(drawing, cross_check=True)

        assert not report.is_valid
        assert report.checks[0].witnesses[0][2] == (P(0, 1),)
        assert report.checks[0].stats["sweep_agrees"]


class TestCheckUphill:
    """check_uphill のテスト"""

    def test_later_edge_above_is_uphill(self):
        drawing = uphill_drawing(line((0, 0), (1, 1)), line((1, 1), (2, 0)))

        assert check_uphill(drawing).is_valid

    def test_later_edge_below_fails(self):
        """後の辺が前の辺の真下を通れば不合格"""
        drawing = uphill_drawing(line((0, 0), (2, 2)), line((2, 2), (1, 0)))

        report = check_uphill(drawing)

        assert not report.is_valid
        earlier, later, point = report.checks[0].witnesses[0]
        assert earlier == (0, 0)
        assert later == (1, 0)

    def test_downward_vertical_segment_fails(self):
        drawing = uphill_drawing(line((0, 2), (0, 0)))

        assert not check_uphill(drawing).is_valid

    @settings(max_examples=300, deadline=None)
    @given(polylines_strategy)
    def test_envelope_matches_pairwise_check(self, raw):
        """包絡線による判定が、すべての線分の組を調べた判定と一致する"""
        # Arrange
        polylines = [[P(x, y) for x, y in points] for points in raw]
        segments = [(a, b) for points in polylines for a, b in zip(points, points[1:])]
        downward = any(c[0] == d[0] and d[1] < c[1] for c, d in segments)
        shadowed = any(
            _shadow(segments[i], segments[j]) is not None
            for j in range(len(segments))
            for i in range(j)
        )

        # Act
        violations = uphill_violations(polylines)

        # Assert
        assert bool(violations) == (downward or shadowed)

    def test_many_segments(self):
        """2000 本の線分でも判定でき、最後に下へ描いた折れ線が違反になる"""
        polylines = stacked_zigzags(400)
        low = [P(2, -5), P(3, -5)]

        assert uphill_violations(polylines) == []
        violations = uphill_violations(polylines + [low])
        assert violations
        assert all(later == (400, 0) for _, later, _ in violations)


class TestColorChecks:
    """check_color_consistency / check_color_placement のテスト"""

    LOCATIONS = {1: (0, 0), 2: (2, 0), 3: (4, 0)}

    def test_consistent_locations(self, two_paths):
        """各色の頂点がどのグラフでも同じ位置にあれば合格"""
        # グラフ 1 の色は 頂点 1 = 3、頂点 2 = 1、頂点 3 = 2
        first = graph_drawing(self.LOCATIONS, [])
        second = graph_drawing({1: (4, 0), 2: (0, 0), 3: (2, 0)}, [], graph_index=1)

        assert check_color_consistency(two_paths, [first, second]).is_valid

    def test_inconsistent_locations(self, two_paths):
        first = graph_drawing(self.LOCATIONS, [])
        second = graph_drawing(self.LOCATIONS, [], graph_index=1)

        report = check_color_consistency(two_paths, [first, second])

        assert not report.is_valid
        assert all(witness[1] == 1 for witness in report.checks[0].witnesses)

    def test_drawing_count_mismatch(self, two_paths):
        report = check_color_consistency(two_paths, [graph_drawing(self.LOCATIONS, [])])

        assert report.checks[0].witnesses == [("drawing-count", 2, 1)]

    def test_color_placement(self, two_paths):
        layout = layout_case1(extract_spinal_paths(two_paths))
        good = graph_drawing(self.LOCATIONS, [])
        bad = graph_drawing({1: (2, 0), 2: (0, 0), 3: (4, 0)}, [])
        graph_set = ColoredGraphSet(graphs=two_paths.graphs[:1], palette=3)

        assert check_color_placement(graph_set, [good], layout).is_valid
        report = check_color_placement(graph_set, [bad], layout)
        assert not report.is_valid
        assert (0, 1, 1, P(2, 0)) in report.checks[0].witnesses


class TestBendBounds:
    """BendParams / check_bend_bounds / check_expansion のテスト"""

    def test_embed_base_is_min_of_c_and_power(self):
        params = BendParams(mode="embed", n=16, k=2, c=100, factor=16, gamma=2)

        assert params.base == pytest.approx(4.0)
        assert params.budget == pytest.approx(64.0)

    def test_embed_base_uses_c_when_smaller(self):
        params = BendParams(mode="embed", n=10000, k=2, c=5, factor=16, gamma=2)

        assert params.base == 5.0

    def test_chains_base_is_b(self):
        params = BendParams(mode="chains", n=100, k=2, c=10, factor=4, b=3)

        assert params.base == 3.0

    def test_bend_bound_reports_implied_constant(self):
        drawing = graph_drawing(
            {1: (0, 0), 2: (4, 0)}, [((1, 2), line((0, 0), (1, 1), (2, 0), (3, 1), (4, 0)))]
        )

        tight = check_bend_bounds([drawing], BendParams("chains", 5, 1, 1, factor=1, b=2))
        loose = check_bend_bounds([drawing], BendParams("chains", 5, 1, 1, factor=2, b=2))

        assert not tight.is_valid
        assert loose.is_valid
        assert loose.checks[0].stats["max_bends"] == 3
        assert loose.checks[0].stats["implied_constant"] == pytest.approx(1.5)

    def test_expansion_is_multiplicative(self):
        """拡張後の折れ点は C″·max(b, 下限) 以下で、実測の C″ を報告する"""
        # Arrange
        zigzag = line(*[(i, i % 2) for i in range(12)])

        def drawing(uphill_bends):
            return graph_drawing(
                {1: (0, 0), 2: (11, 1)}, [((1, 2), zigzag)], uphill_bends=uphill_bends
            )

        # Act
        tight = check_expansion([drawing(4)], 2)
        exact = check_expansion([drawing(5)], 2)
        floored = check_expansion([drawing(0)], 2, floor=5)

        # Assert
        assert zigzag.bends == 10
        assert not tight.is_valid
        assert tight.checks[0].witnesses == [(0, 10, 4)]
        assert exact.is_valid
        assert exact.checks[0].stats["implied_constant"] == pytest.approx(2.0)
        assert floored.is_valid
        assert floored.checks[0].stats["implied_constant"] == pytest.approx(10.0)


class TestCheckPartition:
    """check_partition のテスト"""

    def test_valid_partition(self):
        partition = MonotonicPartition(
            runs=(
                MonotonicRun((0, 2), (Direction.NONDEC,)),
                MonotonicRun((1,), (Direction.NONDEC,)),
            ),
            source_length=3,
        )

        assert check_partition(partition, [1, 5, 2]).is_valid

    def test_wrong_direction_and_uncovered(self):
        partition = MonotonicPartition(
            runs=(MonotonicRun((0, 1), (Direction.NONINC,)),), source_length=3
        )

        report = check_partition(partition, [1, 5, 2])

        kinds = {witness[0] for witness in report.checks[0].witnesses}
        assert kinds == {"monotone", "uncovered"}

    def test_overlap(self):
        partition = MonotonicPartition(
            runs=(
                MonotonicRun((0, 1), (Direction.NONDEC,)),
                MonotonicRun((1,), (Direction.NONDEC,)),
            ),
            source_length=2,
        )

        report = check_partition(partition, [1, 2])

        assert ("overlap", 0, 1, 1) in report.checks[0].witnesses

    def test_tuples(self):
        partition = MonotonicPartition(
            runs=(MonotonicRun((0, 1), (Direction.NONDEC, Direction.NONINC)),),
            source_length=2,
        )

        assert check_partition(partition, [(1, 5), (2, 4)]).is_valid


class TestCheckBookEmbedding:
    """check_book_embedding のテスト"""

    @staticmethod
    def spine(*refs):
        return tuple(SpineItem(ItemKind.VERTEX, r) for r in refs)

    def test_interleaving_arcs_on_one_page_fail(self):
        graph = make_graph({1: 1, 2: 1, 3: 1, 4: 1}, [(1, 3), (2, 4)])
        embedding = BookEmbedding(
            self.spine(1, 2, 3, 4),
            (
                EdgePlacement(1, 3, None, (Page.ABOVE,)),
                EdgePlacement(2, 4, None, (Page.ABOVE,)),
            ),
        )

        report = check_book_embedding(graph, embedding)

        assert not report.is_valid
        assert report.checks[0].witnesses[0][0] == "interleave"

    def test_opposite_pages_pass(self):
        graph = make_graph({1: 1, 2: 1, 3: 1, 4: 1}, [(1, 3), (2, 4)])
        embedding = BookEmbedding(
            self.spine(1, 2, 3, 4),
            (
                EdgePlacement(1, 3, None, (Page.ABOVE,)),
                EdgePlacement(2, 4, None, (Page.BELOW,)),
            ),
        )

        assert check_book_embedding(graph, embedding).is_valid

    def test_division_on_same_page_fails(self):
        graph = make_graph({1: 1, 2: 1}, [(1, 2)])
        embedding = BookEmbedding(
            (
                SpineItem(ItemKind.VERTEX, 1),
                SpineItem(ItemKind.DIVISION, 0),
                SpineItem(ItemKind.VERTEX, 2),
            ),
            (EdgePlacement(1, 2, 0, (Page.ABOVE, Page.ABOVE)),),
        )

        report = check_book_embedding(graph, embedding)

        assert report.checks[0].witnesses[0][0] == "division-pages"

    def test_missing_vertex_fails(self):
        graph = make_graph({1: 1, 2: 1, 3: 1}, [(1, 2)])
        embedding = BookEmbedding(self.spine(1, 2), (EdgePlacement(1, 2, None, (Page.ABOVE,)),))

        report = check_book_embedding(graph, embedding)

        assert ("spine-vertices", [3]) in report.checks[0].witnesses
