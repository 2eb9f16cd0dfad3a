"""
グラフ描画への拡張のテスト
"""

import pytest

from simulembed.bookembed import (
    BookEmbedding,
    EdgePlacement,
    ItemKind,
    Page,
    SpinalPath,
    SpineItem,
    compute_book_embedding,
    extract_spinal_paths,
)
from simulembed.errors import ConsistencyError
from simulembed.expand import (
    EXPANSION_CONSTANT,
    EXPANSION_FLOOR,
    expand_drawing,
    lane_demand,
    lane_slots,
)
from simulembed.generate import random_graph_set
from simulembed.layout import build_tuples, layout_case1, layout_split
from simulembed.uphill import draw_path_case1, draw_paths_split
from simulembed.verify import check_expansion, check_planarity


def vertex(ref: int) -> SpineItem:
    return SpineItem(ItemKind.VERTEX, ref)


def division(ref: int) -> SpineItem:
    return SpineItem(ItemKind.DIVISION, ref)


@pytest.fixture
def nested_embedding() -> BookEmbedding:
    """
    spine 1, 2, 3, d0, 4 に入れ子の弧を持つ埋め込み

    (1, 3) と (1, 4) は上側、(2, 4) は 3 の下で d0 を通って上側に移る。
    """
    spine = (vertex(1), vertex(2), vertex(3), division(0), vertex(4))
    placements = (
        EdgePlacement(1, 2, None, (Page.ABOVE,)),
        EdgePlacement(2, 3, None, (Page.ABOVE,)),
        EdgePlacement(1, 3, None, (Page.ABOVE,)),
        EdgePlacement(1, 4, None, (Page.ABOVE,)),
        EdgePlacement(2, 4, 0, (Page.BELOW, Page.ABOVE)),
    )
    return BookEmbedding(spine, placements, "supplied")


class TestLaneDemand:
    """lane_demand / lane_slots のテスト"""

    def test_demand_counts_non_adjacent_arcs(self, nested_embedding):
        """隣り合わない弧の両端に、ページに応じた側の逃げ道が 1 本ずつ要る"""
        demand = lane_demand(nested_embedding, 6)

        # 上側の弧: (1,3) = 位置 0-2、(1,4) = 0-4。下側の弧: (2,d0) = 1-3
        assert demand == [(2, 0), (0, 1), (1, 0), (0, 1), (1, 0), (0, 0)]

    def test_nested_arcs_get_nested_slots(self, nested_embedding):
        """要素 0 では外側の弧 (0-4) の逃げ道が先に来る"""
        slots = lane_slots(nested_embedding)

        by_arc = {(arc.start, arc.stop): slot for (at, arc), slot in slots.items() if at == 0}
        assert by_arc == {(0, 4): 0, (0, 2): 1}


class TestExpandDrawing:
    """expand_drawing のテスト"""

    def test_nested_embedding(self, nested_embedding):
        """入れ子の弧と分割頂点を持つ埋め込みを平面的に拡張する"""
        # Arrange
        path = SpinalPath(nested_embedding.spine, (1, 1, 1, 2, 1))
        layout = layout_case1([path])
        demand = lane_demand(nested_embedding, len(path))
        uphill = draw_path_case1(path, layout, demand)

        # Act
        drawing = expand_drawing(nested_embedding, uphill)

        # Assert
        assert set(drawing.locations) == {1, 2, 3, 4}
        assert [edge for edge, _ in drawing.edges] == sorted(
            p.edge for p in nested_embedding.placements
        )
        assert check_planarity(drawing).is_valid
        assert drawing.max_bends <= 4 * drawing.uphill_bends + 9
        assert drawing.max_bends <= EXPANSION_CONSTANT * max(drawing.uphill_bends, EXPANSION_FLOOR)

    def test_polylines_start_at_first_endpoint(self, nested_embedding):
        path = SpinalPath(nested_embedding.spine, (1, 1, 1, 2, 1))
        layout = layout_case1([path])
        uphill = draw_path_case1(path, layout, lane_demand(nested_embedding, len(path)))

        drawing = expand_drawing(nested_embedding, uphill)

        for (u, v), polyline in drawing.edges:
            assert polyline.start == drawing.locations[u]
            assert polyline.end == drawing.locations[v]

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_graphs_case1(self, seed):
        graph_set = random_graph_set(n=16, k=2, c=3, seed=seed)
        embeddings = [compute_book_embedding(g) for g in graph_set.graphs]
        paths = extract_spinal_paths(graph_set, embeddings)
        layout = layout_case1(paths)

        for embedding, path in zip(embeddings, paths):
            uphill = draw_path_case1(path, layout, lane_demand(embedding, len(path)))
            drawing = expand_drawing(embedding, uphill)

            assert check_planarity(drawing).is_valid
            assert drawing.max_bends <= 4 * drawing.uphill_bends + 9
            report = check_expansion([drawing], EXPANSION_CONSTANT, EXPANSION_FLOOR)
            assert report.is_valid
            assert "implied_constant" in report.checks[0].stats

    def test_transposed_drawing(self):
        """+x 方向の uphill 描画からも平面的な描画を作れる"""
        graph_set = random_graph_set(n=12, k=2, c=12, seed=8)
        embeddings = [compute_book_embedding(g) for g in graph_set.graphs]
        paths = extract_spinal_paths(graph_set, embeddings)
        assignment = build_tuples(paths)
        layout = layout_split(paths, assignment)
        demands = [lane_demand(e, len(p)) for e, p in zip(embeddings, paths)]

        uphill = draw_paths_split(paths, layout, assignment, demands)
        drawing = expand_drawing(embeddings[1], uphill[1])

        assert drawing.orientation == "x"
        assert check_planarity(drawing).is_valid

    def test_missing_lanes_raise(self, nested_embedding):
        """逃げ道のない描画は拡張できない"""
        path = SpinalPath(nested_embedding.spine, (1, 1, 1, 2, 1))
        uphill = draw_path_case1(path, layout_case1([path]))

        with pytest.raises(ConsistencyError):
            expand_drawing(nested_embedding, uphill)
