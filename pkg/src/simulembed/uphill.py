"""
uphill な道の描画モジュール

spinal path を点集合の上に折れ線で描く。描画は「uphill」になる:
描画中の任意の点から真上に伸ばした半直線は、それより前に描いた部分と交わらない。

描き方（すべての構成で共通）:
    描画要素（道の辺と、グラフへの拡張で使う左右の「逃げ道」）に描く順の番号 r = 1..R を付ける。
    要素 r は、端点の間にある各点を次のように越える。
      - すでに使われた点（その点を占める要素が r より前に置かれた）: 上側の高さ U_r = Ymax + r·ε
      - まだ使われていない点: 下側の高さ D_r = Ymin − (R+1−r)·ε
    ε = 1/(R+1)。同じ状態の点が続く区間ごとに、区間の両端から 1/4 外側に折れ点を 2 つ置く。

    r が大きいほど U_r も D_r も高いので、どの x でも後の要素は前の要素より上にある。
    このため描画は平面的かつ uphill で、点の y 座標には依存しない（点を縦に動かしても
    折れ点の数は変わらない）。ブロック内で使われた点は先頭側か末尾側にまとまっているので、
    1 本の辺の折れ点は「通過するブロック数 × 4」以下になる。

使用例:
    from simulembed.layout import layout_case1
    from simulembed.uphill import draw_path_case1

    layout = layout_case1(paths)
    drawing = draw_path_case1(paths[0], layout)
    print(drawing.max_edge_bends)
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence

from simulembed.bookembed import SpinalPath
from simulembed.errors import LayoutError, MalformedInputError
from simulembed.layout import LabelAssignment, PointLayout

Point = tuple[Fraction, Fraction]

# 点の左右に置く折れ点までの距離（点の間隔は 1 以上）
HOP = Fraction(1, 4)

# 1 ブロックあたりの折れ点の上限（使用済み・未使用の 2 区間 × 2 折れ点）
BENDS_PER_BLOCK = 4


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class Polyline:
    """
    折れ線

    端点と折れ点を順に持つ。normalize() を通したものは、連続する点が異なり、
    同一直線上の中間点を含まないので、折れ点の数 = 中間点の数になる。
    """

    points: tuple[Point, ...]

    @classmethod
    def normalize(cls, points: Sequence[Point]) -> "Polyline":
        cleaned: list[Point] = []
        for point in points:
            if cleaned and cleaned[-1] == point:
                continue
            # 直前の 2 点と同じ向きに進むなら、間の点は折れ点ではない
            while len(cleaned) >= 2 and _cross(cleaned[-2], cleaned[-1], point) == 0:
                before, middle = cleaned[-2], cleaned[-1]
                forward = (middle[0] - before[0]) * (point[0] - middle[0]) + (
                    middle[1] - before[1]
                ) * (point[1] - middle[1])
                if forward <= 0:
                    break
                cleaned.pop()
            cleaned.append(point)
        return cls(tuple(cleaned))

    @property
    def bends(self) -> int:
        return max(0, len(self.points) - 2)

    @property
    def start(self) -> Point:
        return self.points[0]

    @property
    def end(self) -> Point:
        return self.points[-1]

    def reversed(self) -> "Polyline":
        return Polyline(tuple(reversed(self.points)))

    def transposed(self) -> "Polyline":
        return Polyline(tuple((y, x) for x, y in self.points))


@dataclass(frozen=True)
class Lane:
    """
    逃げ道: 道の要素から描画範囲の左端（または右端）まで延びる折れ線

    Attributes:
        position: 道の何番目の要素から出るか
        side: 左右どちらへ出るか
        slot: 同じ要素・同じ向きの逃げ道の中での番号
        rank: 描く順の番号
        polyline: 要素の位置から境界までの折れ線
    """

    position: int
    side: Side
    slot: int
    rank: int
    polyline: Polyline


@dataclass(frozen=True)
class UphillDrawing:
    """
    1 本の spinal path の uphill な描画

    Attributes:
        path_index: 道（グラフ）の番号
        orientation: "y" なら +y 方向、"x" なら +x 方向が uphill の向き
        placements: 道の各要素を置いた点の番号
        locations: 道の各要素の座標
        edges: edges[t] は要素 t と t+1 を結ぶ折れ線
        edge_ranks: 各辺を描いた順の番号
        lanes: 逃げ道
        boundary: 逃げ道が到達する境界の座標（左, 右）。描画の向きの座標系で測る
    """

    path_index: int
    orientation: str
    placements: tuple[int, ...]
    locations: tuple[Point, ...]
    edges: tuple[Polyline, ...]
    edge_ranks: tuple[int, ...] = ()
    lanes: tuple[Lane, ...] = ()
    boundary: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))
    _lane_index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        self._lane_index.update({(ln.position, ln.side, ln.slot): ln for ln in self.lanes})

    @property
    def edge_bends(self) -> tuple[int, ...]:
        return tuple(edge.bends for edge in self.edges)

    @property
    def max_edge_bends(self) -> int:
        return max(self.edge_bends, default=0)

    @property
    def max_lane_bends(self) -> int:
        return max((lane.polyline.bends for lane in self.lanes), default=0)

    @property
    def max_bends(self) -> int:
        """辺と逃げ道を合わせた折れ点の最大数（グラフへの拡張の上界で使う b）"""
        return max(self.max_edge_bends, self.max_lane_bends)

    def lane(self, position: int, side: Side, slot: int) -> Lane:
        try:
            return self._lane_index[(position, side, slot)]
        except KeyError:
            raise LayoutError(f"逃げ道がありません: 要素 {position}, {side.value}, {slot}")

    def sequence(self) -> list[Polyline]:
        """辺と逃げ道を描いた順に並べる"""
        ranked = [(rank, edge) for rank, edge in zip(self.edge_ranks, self.edges)]
        ranked += [(lane.rank, lane.polyline) for lane in self.lanes]
        return [polyline for _, polyline in sorted(ranked, key=lambda item: item[0])]


# 要素ごとの逃げ道の本数（左, 右）
LaneDemand = Sequence[tuple[int, int]]


def _route(
    coords: Sequence[Point],
    units: Sequence[object],
    placements: Sequence[int],
    demand: Optional[LaneDemand],
) -> tuple[list[Polyline], list[int], list[tuple[int, Side, int, int, Polyline]], tuple]:
    """
    描画の本体（座標系は常に +y が uphill）

    Args:
        coords: 点の座標（x の昇順、x はすべて異なる）
        units: 点ごとの「消費単位」。同じ単位の点は同時に使用済みになる
        placements: 道の各要素を置く点の番号
        demand: 要素ごとの逃げ道の本数（左, 右）

    Returns:
        (辺, 辺の順番号, 逃げ道, 境界)
    """
    count = len(placements)
    if demand is None:
        demand = [(0, 0)] * count

    # 描く順番を決める: 辺 t-1→t、要素 t の左の逃げ道、右の逃げ道、の繰り返し
    consumed: dict[object, int] = {}
    schedule: list[tuple] = []
    rank = 0
    for t, point in enumerate(placements):
        if t > 0:
            rank += 1
            schedule.append(("edge", t - 1, rank))
        if units[point] in consumed:
            raise LayoutError(f"点 {point} が 2 回使われています")
        consumed[units[point]] = rank
        left, right = demand[t]
        for slot in range(left):
            rank += 1
            schedule.append(("lane", t, Side.LEFT, slot, rank))
        for slot in range(right):
            rank += 1
            schedule.append(("lane", t, Side.RIGHT, slot, rank))

    total = rank
    if not coords:
        return [], [], [], (Fraction(0), Fraction(0))
    epsilon = Fraction(1, total + 1)
    y_max = max(y for _, y in coords)
    y_min = min(y for _, y in coords)
    left_boundary = coords[0][0] - 1
    right_boundary = coords[-1][0] + 1

    def used(index: int, r: int) -> bool:
        return consumed.get(units[index], total + 1) < r

    def leveled(start: int, interior: range, stop: Point, r: int) -> Polyline:
        upper = y_max + r * epsilon
        lower = y_min - (total + 1 - r) * epsilon
        sign = 1 if stop[0] > coords[start][0] else -1
        points: list[Point] = [coords[start]]
        run_start: Optional[int] = None
        previous: Optional[int] = None
        for index in interior:
            if run_start is not None and used(index, r) != used(run_start, r):
                level = upper if used(run_start, r) else lower
                points.append((coords[run_start][0] - sign * HOP, level))
                points.append((coords[previous][0] + sign * HOP, level))
                run_start = None
            if run_start is None:
                run_start = index
            previous = index
        if run_start is not None:
            level = upper if used(run_start, r) else lower
            points.append((coords[run_start][0] - sign * HOP, level))
            points.append((coords[previous][0] + sign * HOP, level))
        points.append(stop)
        return Polyline.normalize(points)

    edges: list[Polyline] = []
    edge_ranks: list[int] = []
    lanes: list[tuple[int, Side, int, int, Polyline]] = []
    for item in schedule:
        if item[0] == "edge":
            _, t, r = item
            a, b = placements[t], placements[t + 1]
            interior = range(a + 1, b) if a < b else range(a - 1, b, -1)
            edges.append(leveled(a, interior, coords[b], r))
            edge_ranks.append(r)
        else:
            _, t, side, slot, r = item
            a = placements[t]
            lower = y_min - (total + 1 - r) * epsilon
            if side is Side.LEFT:
                polyline = leveled(a, range(a - 1, -1, -1), (left_boundary, lower), r)
            else:
                polyline = leveled(a, range(a + 1, len(coords)), (right_boundary, lower), r)
            lanes.append((t, side, slot, r, polyline))
    return edges, edge_ranks, lanes, (left_boundary, right_boundary)


def _check_distinct_abscissas(coords: Sequence[Point]) -> None:
    for (x1, _), (x2, _) in zip(coords, coords[1:]):
        if not x1 < x2:
            raise LayoutError("描画の向きに沿った座標が狭義単調増加ではありません")


def _check_prefix(
    blocks: Sequence[Sequence[int]], units: Sequence[object], placements: Sequence[int]
) -> None:
    """
    各ブロックの使用済みの単位が、常にブロックの先頭側か末尾側に連続していることを確かめる

    Raises:
        LayoutError: 途中の単位が先に使われた場合
    """
    where: dict[object, tuple[int, int]] = {}
    for block_id, members in enumerate(blocks):
        order: list[object] = []
        for point in members:
            if not order or order[-1] != units[point]:
                order.append(units[point])
        for position, unit in enumerate(order):
            where[unit] = (block_id, position)
    sizes = {}
    for block_id, members in enumerate(blocks):
        sizes[block_id] = len({units[p] for p in members})

    interval: dict[int, tuple[int, int]] = {}
    for point in placements:
        block_id, position = where[units[point]]
        if block_id not in interval:
            if position not in (0, sizes[block_id] - 1):
                raise LayoutError(f"ブロック {block_id} の途中から使い始めています")
            interval[block_id] = (position, position)
            continue
        low, high = interval[block_id]
        if position == high + 1 and low == 0:
            interval[block_id] = (low, position)
        elif position == low - 1 and high == sizes[block_id] - 1:
            interval[block_id] = (position, high)
        else:
            raise LayoutError(f"ブロック {block_id} の使用済みの点が連続していません")


def _assemble(
    path: SpinalPath,
    layout: PointLayout,
    placements: list[int],
    units: Sequence[object],
    demand: Optional[LaneDemand],
    transpose: bool = False,
) -> UphillDrawing:
    """座標系を選んで _route を呼び、UphillDrawing にまとめる"""
    if transpose:
        assert layout.axis_split is not None
        order = list(layout.axis_split.y_order)
        blocks = [order[b.start : b.stop] for b in layout.blocks_on("y")]
    else:
        order = list(range(len(layout.points)))
        blocks = [list(range(b.start, b.stop)) for b in layout.blocks_on("x")]

    rank_of = {point: i for i, point in enumerate(order)}
    if transpose:
        coords = [(layout.points[p].y, layout.points[p].x) for p in order]
    else:
        coords = [(layout.points[p].x, layout.points[p].y) for p in order]
    _check_distinct_abscissas(coords)
    _check_prefix(blocks, units, placements)

    frame_units = [units[p] for p in order]
    frame_placements = [rank_of[p] for p in placements]
    edges, ranks, lanes, boundary = _route(coords, frame_units, frame_placements, demand)

    if transpose:
        edges = [edge.transposed() for edge in edges]
        lanes = [(t, side, slot, r, poly.transposed()) for t, side, slot, r, poly in lanes]
    locations = tuple((layout.points[p].x, layout.points[p].y) for p in placements)
    return UphillDrawing(
        path_index=path.graph_index,
        orientation="x" if transpose else "y",
        placements=tuple(placements),
        locations=locations,
        edges=tuple(edges),
        edge_ranks=tuple(ranks),
        lanes=tuple(Lane(t, side, slot, r, poly) for t, side, slot, r, poly in lanes),
        boundary=boundary,
    )


def draw_path_case1(
    path: SpinalPath, layout: PointLayout, demand: Optional[LaneDemand] = None
) -> UphillDrawing:
    """
    色ブロック配置の上に道を描く

    要素 x_i は、その色のブロックでまだ使われていない最も左の点に置く。

    Raises:
        LayoutError: 色ブロックが足りない場合（色互換な入力では起こらない）
    """
    free: dict[int, list[int]] = {}
    for block in layout.blocks_on("x"):
        free[block.color] = list(range(block.start, block.stop))
    cursor = {color: 0 for color in free}

    placements = []
    for color in path.colors:
        if color not in free or cursor[color] >= len(free[color]):
            raise LayoutError(f"色 {color} のブロックに空きがありません")
        placements.append(free[color][cursor[color]])
        cursor[color] += 1
    units = list(range(len(layout.points)))
    return _assemble(path, layout, placements, units, demand)


def _label_placements(
    path: SpinalPath, layout: PointLayout, assignment: LabelAssignment
) -> list[int]:
    if layout.label_points is None or path.graph_index >= len(assignment.labels):
        raise MalformedInputError(f"道 {path.graph_index} のラベルがありません")
    placements = []
    for label in assignment.labels[path.graph_index]:
        if label not in layout.label_points:
            raise MalformedInputError(f"ラベル {label} の点がありません")
        placements.append(layout.label_points[label])
    return placements


def draw_path_case2(
    path: SpinalPath,
    layout: PointLayout,
    assignment: LabelAssignment,
    demand: Optional[LaneDemand] = None,
) -> UphillDrawing:
    """
    単調部分列ブロック配置の上に道を描く

    要素 x_i は、そのラベルに対応する点に置く。

    Raises:
        MalformedInputError: ラベルが割り当てに含まれていない場合
    """
    placements = _label_placements(path, layout, assignment)
    units = list(range(len(layout.points)))
    return _assemble(path, layout, placements, units, demand)


def draw_paths_split(
    paths: Sequence[SpinalPath],
    layout: PointLayout,
    assignment: LabelAssignment,
    demands: Optional[Sequence[Optional[LaneDemand]]] = None,
    only: Optional[Sequence[int]] = None,
) -> list[UphillDrawing]:
    """
    格子配置の上に道を描く

    Q1 の道は x 軸のブロック順で +y 方向に uphill に描く。
    Q2 の道は座標を入れ替えて同じ手順で描き、元に戻す（+x 方向に uphill）。
    各道の折れ点は自分の軸のブロック数だけで決まる。

    only を渡すとその番号の道だけを、その順に描く。
    """
    indices = range(len(paths)) if only is None else only
    if layout.axis_split is None:
        return [
            draw_path_case2(paths[i], layout, assignment, demands[i] if demands else None)
            for i in indices
        ]
    y_paths = set(layout.axis_split.y_paths)
    units = list(range(len(layout.points)))
    drawings = []
    for i in indices:
        path = paths[i]
        placements = _label_placements(path, layout, assignment)
        demand = demands[i] if demands else None
        drawings.append(
            _assemble(path, layout, placements, units, demand, transpose=i in y_paths)
        )
    return drawings


def draw_path_chains(
    path: SpinalPath, layout: PointLayout, demand: Optional[LaneDemand] = None
) -> UphillDrawing:
    """
    チェーン配置の上に道を描く

    色グループ C_j の色を持つ要素は、区間 S_j のまだ使っていないチェーンのうち
    最も左のものに、その色の点を選んで置く。チェーン全体を 1 つの頂点位置として扱う。
    """
    group_of = {color: j for j, group in enumerate(layout.color_groups) for color in group}
    slot: dict[tuple[int, int, int], int] = {}
    for index, point in enumerate(layout.points):
        slot[(point.block, point.chain, point.color)] = index
    next_chain = [0] * len(layout.color_groups)

    placements = []
    for color in path.colors:
        if color not in group_of:
            raise LayoutError(f"色 {color} はどの色グループにも含まれていません")
        j = group_of[color]
        key = (j, next_chain[j], color)
        if key not in slot:
            raise LayoutError(f"区間 {j} のチェーンが足りません")
        placements.append(slot[key])
        next_chain[j] += 1
    units = [(point.block, point.chain) for point in layout.points]
    return _assemble(path, layout, placements, units, demand)


def intermediate_blocks(drawing: UphillDrawing, layout: PointLayout) -> list[int]:
    """
    各辺が通過するブロックの数（端点のブロックを除く）

    折れ点の監査用。+x 向きの描画（split の Q2）では y 軸のブロックで数える。
    """
    block_of: Callable[[int], Optional[int]]
    if drawing.orientation == "x" and layout.axis_split is not None:
        sequence = list(layout.axis_split.y_order)
        block_of = lambda p: layout.points[p].y_block  # noqa: E731
    else:
        sequence = list(range(len(layout.points)))
        block_of = lambda p: layout.points[p].block  # noqa: E731
    rank_of = {p: i for i, p in enumerate(sequence)}

    counts = []
    for a, b in zip(drawing.placements, drawing.placements[1:]):
        low, high = sorted((rank_of[a], rank_of[b]))
        touched = {block_of(sequence[i]) for i in range(low, high + 1)}
        counts.append(len(touched - {block_of(a), block_of(b)}))
    return counts
