"""
uphill 描画から元のグラフの描画への拡張モジュール

本埋め込みの各弧を、spinal path の uphill 描画を使って折れ線にする。

- spine 上で隣り合う要素を結ぶ弧は、道の辺の折れ線をそのまま使う
- 上側（ABOVE）の弧は両端の「左の逃げ道」を使い、描画範囲の左外側で
  入れ子の長方形としてつなぐ
- 下側（BELOW）の弧は「右の逃げ道」を使い、右外側でつなぐ
- 分割頂点は辺の途中の折れ点になり、ダミー頂点は捨てる

1 本の弧の折れ点は 2b + 4 以下（b は道の辺と逃げ道の折れ点の最大数）、
分割頂点を持つ辺は 4b + 9 以下になる。したがって辺の折れ点は
EXPANSION_CONSTANT × max(b, EXPANSION_FLOOR) 以下に収まる。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from simulembed.bookembed import BookEmbedding, ItemKind, Page, SpineItem
from simulembed.errors import ConsistencyError, LayoutError
from simulembed.uphill import Point, Polyline, Side, UphillDrawing

# 拡張後の折れ点の上界 C″·max(b, b₀)。4b + 9 ≤ 5·max(b, 9)
EXPANSION_CONSTANT = 5
EXPANSION_FLOOR = 9


@dataclass(frozen=True)
class GraphDrawing:
    """
    元のグラフの折れ線描画

    Attributes:
        graph_index: グラフの番号
        orientation: 元になった uphill 描画の向き
        locations: 頂点 id → 座標（uphill 描画の位置そのまま）
        edges: (辺, 折れ線) の組。折れ線は辺の 1 つ目の端点から 2 つ目の端点へ向かう
        uphill_bends: 元の uphill 描画での折れ点の最大数 b
    """

    graph_index: int
    orientation: str
    locations: dict[int, Point]
    edges: tuple[tuple[tuple[int, int], Polyline], ...]
    uphill_bends: int = 0

    @property
    def edge_bends(self) -> dict[tuple[int, int], int]:
        return {edge: polyline.bends for edge, polyline in self.edges}

    @property
    def max_bends(self) -> int:
        return max((polyline.bends for _, polyline in self.edges), default=0)

    @property
    def bounding_box(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """(x_min, y_min, x_max, y_max)"""
        xs = [p[0] for p in self.locations.values()]
        ys = [p[1] for p in self.locations.values()]
        for _, polyline in self.edges:
            xs.extend(p[0] for p in polyline.points)
            ys.extend(p[1] for p in polyline.points)
        if not xs:
            return (Fraction(0), Fraction(0), Fraction(0), Fraction(0))
        return (min(xs), min(ys), max(xs), max(ys))


@dataclass(frozen=True)
class _Arc:
    start: int  # spine 上の位置（左）
    stop: int  # spine 上の位置（右）
    page: Page


def _arcs(embedding: BookEmbedding) -> list[_Arc]:
    """spine 上で隣り合わない弧（逃げ道が必要なもの）"""
    position = embedding.position()
    arcs = []
    for placement in embedding.placements:
        for a, b, page in placement.segments():
            start, stop = sorted((position[a], position[b]))
            if stop - start > 1:
                arcs.append(_Arc(start, stop, page))
    return arcs


def _side(page: Page) -> Side:
    return Side.LEFT if page is Page.ABOVE else Side.RIGHT


def lane_slots(embedding: BookEmbedding) -> dict[tuple[int, _Arc], int]:
    """
    各弧が両端の要素でどの逃げ道を使うか

    要素 t の同じ側の逃げ道は、先に「t より左の要素への弧」を相手の位置の降順に、
    続いて「t より右の要素への弧」を相手の位置の降順に割り当てる。
    こうすると、入れ子になった弧の逃げ道は境界上でも入れ子の高さに並ぶ。
    """
    incident: dict[tuple[int, Side], list[tuple[int, int, _Arc]]] = {}
    for arc in _arcs(embedding):
        side = _side(arc.page)
        # (向き, 相手の位置の降順) で並べる。左向き = 0、右向き = 1
        incident.setdefault((arc.start, side), []).append((1, -arc.stop, arc))
        incident.setdefault((arc.stop, side), []).append((0, -arc.start, arc))

    slots = {}
    for (position, _), entries in incident.items():
        entries.sort(key=lambda entry: (entry[0], entry[1]))
        for slot, (_, _, arc) in enumerate(entries):
            slots[(position, arc)] = slot
    return slots


def lane_demand(embedding: BookEmbedding, length: int) -> list[tuple[int, int]]:
    """道の各要素に必要な逃げ道の本数（左, 右）"""
    demand = [[0, 0] for _ in range(length)]
    for arc in _arcs(embedding):
        column = 0 if arc.page is Page.ABOVE else 1
        demand[arc.start][column] += 1
        demand[arc.stop][column] += 1
    return [(left, right) for left, right in demand]


def _depths(arcs: Sequence[_Arc]) -> dict[_Arc, int]:
    """
    入れ子の深さ: 1 + 内側に含む弧の深さの最大値

    同じページの弧は交互に並ばないので、左端の昇順（同じなら右端の降順）に
    スタックへ積むと、スタックの 1 つ下が外側の弧になる。
    """
    depth = {arc: 1 for arc in arcs}
    stack: list[_Arc] = []

    def close(arc: _Arc) -> None:
        if stack:
            parent = stack[-1]
            depth[parent] = max(depth[parent], depth[arc] + 1)

    for arc in sorted(arcs, key=lambda a: (a.start, -a.stop)):
        while stack and stack[-1].stop <= arc.start:
            close(stack.pop())
        stack.append(arc)
    while stack:
        close(stack.pop())
    return depth


def _to_frame(polyline: Polyline, orientation: str) -> Polyline:
    return polyline.transposed() if orientation == "x" else polyline


def expand_drawing(embedding: BookEmbedding, drawing: UphillDrawing) -> GraphDrawing:
    """
    spinal path の uphill 描画を元のグラフの描画に拡張する

    Args:
        embedding: グラフの本埋め込み
        drawing: その spinal path（末尾のダミーを含んでよい）の uphill 描画。
                 lane_demand(embedding, ...) の本数の逃げ道を持っていること

    Returns:
        GraphDrawing

    Raises:
        ConsistencyError: 描画が本埋め込みの spine と対応していない場合
    """
    spine = embedding.spine
    if len(drawing.locations) < len(spine):
        raise ConsistencyError(
            f"描画の要素数 {len(drawing.locations)} が spine の長さ {len(spine)} より少ない"
        )
    position = embedding.position()
    orientation = drawing.orientation
    left_boundary, right_boundary = drawing.boundary

    arcs = _arcs(embedding)
    slots = lane_slots(embedding)
    depth = {}
    for page in (Page.ABOVE, Page.BELOW):
        depth.update(_depths([arc for arc in arcs if arc.page is page]))

    def lane_path(at: int, arc: _Arc) -> Polyline:
        try:
            lane = drawing.lane(at, _side(arc.page), slots[(at, arc)])
        except LayoutError as e:
            raise ConsistencyError(str(e)) from e
        return _to_frame(lane.polyline, orientation)

    def segment(a: SpineItem, b: SpineItem, page: Page) -> list[Point]:
        """spine 要素 a から b へ向かう点列（描画の座標系）"""
        pa, pb = position[a], position[b]
        start, stop = sorted((pa, pb))
        if stop - start == 1:
            points = list(_to_frame(drawing.edges[start], orientation).points)
        elif stop == start:
            raise ConsistencyError(f"同じ要素を結ぶ弧があります: {a}")
        else:
            arc = _Arc(start, stop, page)
            outgoing = lane_path(start, arc).points
            incoming = lane_path(stop, arc).points
            if page is Page.ABOVE:
                turn = left_boundary - depth[arc]
            else:
                turn = right_boundary + depth[arc]
            points = list(outgoing)
            points.append((turn, outgoing[-1][1]))
            points.append((turn, incoming[-1][1]))
            points.extend(reversed(incoming))
        return points if pa < pb else list(reversed(points))

    def finish(points: list[Point]) -> Polyline:
        polyline = Polyline.normalize(points)
        return polyline.transposed() if orientation == "x" else polyline

    locations = {}
    for item in spine:
        if item.kind is ItemKind.VERTEX:
            locations[item.ref] = drawing.locations[position[item]]

    edges = []
    for placement in embedding.placements:
        parts = placement.segments()
        points = segment(*parts[0])
        for a, b, page in parts[1:]:
            # 分割頂点の位置は前の部分の終点と同じなので重複を除く
            points.extend(segment(a, b, page)[1:])
        polyline = finish(points)
        left, right = placement.left, placement.right
        if (left, right) != placement.edge:
            polyline = polyline.reversed()
        edges.append((placement.edge, polyline))

    edges.sort(key=lambda entry: entry[0])
    return GraphDrawing(
        graph_index=drawing.path_index,
        orientation=orientation,
        locations=locations,
        edges=tuple(edges),
        uphill_bends=drawing.max_bends,
    )
