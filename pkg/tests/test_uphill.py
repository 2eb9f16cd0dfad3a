"""
uphill 描画のテスト

描画が平面的かつ uphill で、各辺の折れ点が「通過するブロック数」で抑えられることを確認する。
"""

from fractions import Fraction

import pytest

from simulembed.bookembed import (
    ItemKind,
    SpinalPath,
    SpineItem,
    compute_book_embedding,
    extract_spinal_paths,
)
from simulembed.errors import LayoutError
from simulembed.expand import lane_demand
from simulembed.generate import random_graph_set
from simulembed.layout import (
    build_tuples,
    layout_case1,
    layout_case2,
    layout_chains,
    layout_split,
)
from simulembed.uphill import (
    BENDS_PER_BLOCK,
    Polyline,
    Side,
    draw_path_case1,
    draw_path_case2,
    draw_path_chains,
    draw_paths_split,
    intermediate_blocks,
)
from simulembed.verify import check_planarity, check_uphill


def make_path(colors, graph_index=0) -> SpinalPath:
    items = tuple(SpineItem(ItemKind.VERTEX, i) for i in range(len(colors)))
    return SpinalPath(items, tuple(colors), graph_index)


def prepared(n, k, c, seed):
    graph_set = random_graph_set(n=n, k=k, c=c, seed=seed)
    embeddings = [compute_book_embedding(g, i) for i, g in enumerate(graph_set.graphs)]
    paths = extract_spinal_paths(graph_set, embeddings)
    demands = [lane_demand(e, len(p)) for e, p in zip(embeddings, paths)]
    return paths, demands


def assert_sound(drawing, layout):
    """平面的・uphill で、各辺の折れ点が 4 × (通過ブロック数 + 2) 以下"""
    assert check_planarity(drawing).is_valid
    assert check_uphill(drawing).is_valid
    for bends, blocks in zip(drawing.edge_bends, intermediate_blocks(drawing, layout)):
        assert bends <= BENDS_PER_BLOCK * (blocks + 2)


class TestPolyline:
    """Polyline のテスト"""

    def test_normalize_drops_collinear_points(self):
        points = [(Fraction(x), Fraction(y)) for x, y in [(0, 0), (1, 0), (2, 0), (2, 1)]]

        polyline = Polyline.normalize(points)

        assert polyline.points == ((0, 0), (2, 0), (2, 1))
        assert polyline.bends == 1

    def test_normalize_drops_duplicates(self):
        origin = (Fraction(0), Fraction(0))
        polyline = Polyline.normalize([origin, origin, (Fraction(1), Fraction(1))])

        assert polyline.bends == 0

    def test_transposed(self):
        polyline = Polyline(((Fraction(1), Fraction(2)), (Fraction(3), Fraction(4))))

        assert polyline.transposed().points == ((2, 1), (4, 3))


class TestDrawPathCase1:
    """draw_path_case1 のテスト"""

    def test_monochromatic_path_is_straight(self):
        """単色の道は 1 ブロックを左から順に使うので、辺は直線"""
        path = make_path([1, 1, 1, 1])
        layout = layout_case1([path])

        drawing = draw_path_case1(path, layout)

        assert drawing.max_bends == 0
        assert_sound(drawing, layout)

    def test_two_paths(self, two_paths):
        paths = extract_spinal_paths(two_paths)
        layout = layout_case1(paths)

        for path in paths:
            assert_sound(draw_path_case1(path, layout), layout)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_inputs_with_lanes(self, seed):
        """逃げ道を含めても平面的かつ uphill"""
        paths, demands = prepared(n=14, k=2, c=3, seed=seed)
        layout = layout_case1(paths)

        for path, demand in zip(paths, demands):
            drawing = draw_path_case1(path, layout, demand)

            assert_sound(drawing, layout)
            assert len(drawing.lanes) == sum(left + right for left, right in demand)

    def test_missing_color_block_raises(self):
        layout = layout_case1([make_path([1, 1])])

        with pytest.raises(LayoutError):
            draw_path_case1(make_path([1, 2]), layout)


class TestDrawPathCase2:
    """draw_path_case2 / draw_paths_split のテスト"""

    @pytest.mark.parametrize("seed", [0, 3])
    def test_run_blocks(self, seed):
        paths, demands = prepared(n=14, k=2, c=14, seed=seed)
        assignment = build_tuples(paths)
        layout = layout_case2(assignment.tuples, assignment.colors)

        for path, demand in zip(paths, demands):
            assert_sound(draw_path_case2(path, layout, assignment, demand), layout)

    @pytest.mark.parametrize("k", [2, 3])
    def test_split_orientations(self, k):
        """Q1 の道は +y、Q2 の道は +x 方向に uphill"""
        # Arrange
        paths, demands = prepared(n=12, k=k, c=12, seed=k)
        assignment = build_tuples(paths)
        layout = layout_split(paths, assignment)

        # Act
        drawings = draw_paths_split(paths, layout, assignment, demands)

        # Assert
        orientations = [d.orientation for d in drawings]
        assert orientations == ["y"] * len(layout.axis_split.x_paths) + ["x"] * len(
            layout.axis_split.y_paths
        )
        for drawing in drawings:
            assert_sound(drawing, layout)

    def test_split_without_axis_split_uses_case2(self):
        path = make_path([1, 2, 3])
        assignment = build_tuples([path])
        layout = layout_case2(assignment.tuples, assignment.colors)

        drawings = draw_paths_split([path], layout, assignment)

        assert drawings[0].orientation == "y"


class TestDrawPathChains:
    """draw_path_chains のテスト"""

    @pytest.mark.parametrize("b", [1, 2, 4])
    def test_chains(self, b):
        paths, demands = prepared(n=12, k=2, c=4, seed=b)
        layout = layout_chains(paths, b)

        for path, demand in zip(paths, demands):
            drawing = draw_path_chains(path, layout, demand)

            assert_sound(drawing, layout)
            colors = [layout.points[p].color for p in drawing.placements]
            assert colors == list(path.colors)


class TestLanes:
    """逃げ道の参照のテスト"""

    def test_lane_lookup(self):
        path = make_path([1, 1, 1])
        layout = layout_case1([path])

        drawing = draw_path_case1(path, layout, [(1, 0), (0, 0), (0, 1)])

        assert drawing.lane(0, Side.LEFT, 0).polyline.start == drawing.locations[0]
        assert drawing.lane(2, Side.RIGHT, 0).polyline.end[0] == drawing.boundary[1]
        with pytest.raises(LayoutError):
            drawing.lane(1, Side.LEFT, 0)
