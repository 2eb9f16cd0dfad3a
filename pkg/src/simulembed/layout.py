"""
共有点集合（頂点位置）の構成モジュール

spinal path の各要素を置く点集合を作る。点はすべて厳密な有理数座標を持ち、
「ブロック」と呼ぶ連続した区間にまとめられる。

- layout_case1: 色ごとのブロックを x 軸上に並べる
- layout_case2: k 組列の単調部分列ごとのブロックを x 軸上に並べる
- layout_split: 半分の道を x 軸、残り半分を y 軸に対応させた格子状の配置
- layout_chains: 色グループごとの「チェーン」を並べた普遍点集合

座標の約束: ブロック内は 1 刻み、ブロックの間は 2 空ける。y = 0 が基準線。
"""

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from simulembed.bookembed import SpinalPath
from simulembed.errors import CompatibilityError, ParameterError
from simulembed.seqpart import DEFAULT_DELTA, MonotonicPartition, tuple_partition

BLOCK_GAP = 2


class SlotKind(str, Enum):
    COLOR_BLOCK = "color-block"
    RUN_BLOCK = "run-block"
    CHAIN = "chain"
    GRID = "grid"


@dataclass(frozen=True)
class LayoutPoint:
    """
    1 つの頂点位置

    Attributes:
        x, y: 座標
        block: x 軸方向のブロック番号
        kind: どの構成で作られた点か
        color: 点の色（Case 1 と chains では必ず付く）
        label: Case 2 / split でこの点に置かれるラベル
        chain: chains でのチェーン番号（区間ごとに 0 から）
        y_block: split での y 軸方向のブロック番号
    """

    x: Fraction
    y: Fraction
    block: int
    kind: SlotKind
    color: Optional[int] = None
    label: Optional[int] = None
    chain: Optional[int] = None
    y_block: Optional[int] = None


@dataclass(frozen=True)
class Block:
    """
    点の連続区間

    x 軸のブロックは points[start:stop]、y 軸のブロックは
    axis_split.y_order[start:stop] の点を指す。
    """

    id: int
    tag: str
    start: int
    stop: int
    axis: str = "x"
    color: Optional[int] = None

    @property
    def size(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class AxisSplit:
    """
    split 配置での道の割り振り

    Attributes:
        x_paths: x 軸に沿って描く道の番号（最初の ⌈k/2⌉ 本）
        y_paths: y 軸に沿って描く道の番号
        x_arity: x 軸の分割に使った次元数
        y_arity: y 軸の分割に使った次元数
        y_order: y 座標の昇順に並べた点の番号
    """

    x_paths: tuple[int, ...]
    y_paths: tuple[int, ...]
    x_arity: int
    y_arity: int
    y_order: tuple[int, ...]


@dataclass(frozen=True)
class PointLayout:
    """
    点集合とブロック構造

    Attributes:
        case: "case1", "case2", "split", "chains" のいずれか
        points: x 座標の昇順に並んだ点
        blocks: ブロック（x 軸のものが先、split なら続いて y 軸のもの）
        axis_split: split のときだけ設定される
        label_points: ラベル → 点の番号（Case 2 / split）
        color_groups: chains の色グループ C_1..C_b
        partitions: 配置に使った単調分割（上界の監査用）
    """

    case: str
    points: tuple[LayoutPoint, ...]
    blocks: tuple[Block, ...]
    axis_split: Optional[AxisSplit] = None
    label_points: Optional[dict[int, int]] = None
    color_groups: tuple[tuple[int, ...], ...] = ()
    partitions: tuple[MonotonicPartition, ...] = field(default=(), compare=False)

    def blocks_on(self, axis: str) -> list[Block]:
        return [b for b in self.blocks if b.axis == axis]

    @property
    def worst_block_count(self) -> int:
        """軸ごとのブロック数の最大値（配置の比較に使う）"""
        return max((len(self.blocks_on(axis)) for axis in ("x", "y")), default=0)

    def block_size_table(self) -> str:
        """ブロックの大きさを表にしたテキスト（上界の監査用）"""
        lines = [f"{'axis':<5} {'block':>6} {'tag':<16} {'size':>6}"]
        for block in self.blocks:
            lines.append(f"{block.axis:<5} {block.id:>6} {block.tag:<16} {block.size:>6}")
        lines.append(f"points={len(self.points)} blocks={len(self.blocks)}")
        return "\n".join(lines)


@dataclass(frozen=True)
class LabelAssignment:
    """
    すべての道に共通のラベル付け

    Attributes:
        labels: labels[i][j] = 道 i の j 番目の要素のラベル（1..N）
        tuples: tuples[ℓ-1][i] = ラベル ℓ の道 i での位置（1..N）
        colors: colors[ℓ-1] = ラベル ℓ の色
    """

    labels: tuple[tuple[int, ...], ...]
    tuples: tuple[tuple[int, ...], ...]
    colors: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.tuples)


def palette_order(paths: Sequence[SpinalPath]) -> list[int]:
    """道に現れる色を id 順に並べる（分割頂点の予約色も含む）"""
    return sorted({color for path in paths for color in path.colors})


def _require_equal_lengths(paths: Sequence[SpinalPath]) -> int:
    lengths = {len(path) for path in paths}
    if len(lengths) > 1:
        raise CompatibilityError(f"spinal path の長さがそろっていません: {sorted(lengths)}", [])
    return lengths.pop() if lengths else 0


def _coordinates(
    groups: Sequence[Sequence[int]],
) -> tuple[dict[int, Fraction], list[tuple[int, int]]]:
    """
    グループを左から順に並べた座標と、各グループの [start, stop) を返す

    グループ内は 1 刻み、グループの間は BLOCK_GAP 空ける。
    """
    coordinate: dict[int, Fraction] = {}
    ranges = []
    cursor = Fraction(0)
    count = 0
    for index, group in enumerate(groups):
        if index > 0:
            cursor += BLOCK_GAP - 1
        start = count
        for member in group:
            coordinate[member] = cursor
            cursor += 1
            count += 1
        ranges.append((start, count))
    return coordinate, ranges


def layout_case1(paths: Sequence[SpinalPath]) -> PointLayout:
    """
    色ごとのブロックを x 軸上に並べる

    色 q のブロックには、道 1 本あたりの色 q の要素数と同じ数の点を置く。
    ブロックはパレット順（色 id の昇順）。

    使用例:
        layout = layout_case1(paths)
        print([b.size for b in layout.blocks])
    """
    if not paths:
        return PointLayout(case="case1", points=(), blocks=())
    _require_equal_lengths(paths)
    counts = Counter(paths[0].colors)
    palette = palette_order(paths)

    groups = []
    slot = 0
    for color in palette:
        groups.append(list(range(slot, slot + counts[color])))
        slot += counts[color]
    coordinate, ranges = _coordinates(groups)

    points = []
    blocks = []
    for block_id, (color, (start, stop)) in enumerate(zip(palette, ranges)):
        blocks.append(Block(block_id, f"color:{color}", start, stop, "x", color))
        for slot_id in range(start, stop):
            points.append(
                LayoutPoint(coordinate[slot_id], Fraction(0), block_id, SlotKind.COLOR_BLOCK, color)
            )
    return PointLayout(case="case1", points=tuple(points), blocks=tuple(blocks))


def build_tuples(paths: Sequence[SpinalPath]) -> LabelAssignment:
    """
    色と矛盾しないラベル付けと、それが作る k 組列 I を求める

    ラベルは最初の道の左から順に 1..N を振る。他の道では、同じ色の中で
    左から順に最初の道の同じ色のラベルを割り当てる。

    Raises:
        CompatibilityError: 道の長さか色ごとの個数がそろっていない場合
    """
    length = _require_equal_lengths(paths)
    if not paths:
        return LabelAssignment(labels=(), tuples=(), colors=())

    reference = paths[0]
    by_color: dict[int, list[int]] = defaultdict(list)
    for position, color in enumerate(reference.colors):
        by_color[color].append(position + 1)

    labels = []
    for index, path in enumerate(paths):
        queues = {color: iter(members) for color, members in by_color.items()}
        row = []
        for color in path.colors:
            label = next(queues.get(color, iter(())), None)
            if label is None:
                raise CompatibilityError(
                    f"道 {index} の色 {color} の個数が最初の道と一致しません",
                    [(color, index, len(by_color.get(color, [])), path.colors.count(color))],
                )
            row.append(label)
        labels.append(tuple(row))

    tuples = [[0] * len(paths) for _ in range(length)]
    for i, row in enumerate(labels):
        for position, label in enumerate(row, start=1):
            tuples[label - 1][i] = position
    return LabelAssignment(
        labels=tuple(labels),
        tuples=tuple(tuple(t) for t in tuples),
        colors=tuple(reference.colors),
    )


def _run_groups(tuples: Sequence[Sequence[int]], partition: MonotonicPartition) -> list[list[int]]:
    """
    単調分割の各部分列をラベルのリストにする

    部分列の中は 1 次元目の値の昇順に並べる。どの次元も部分列の中では単調なので、
    この並びに沿って各道はブロックを先頭側か末尾側から順に使う。
    """
    groups = []
    for run in partition.runs:
        members = sorted(run.indices, key=lambda i: tuples[i][0])
        groups.append([i + 1 for i in members])
    return groups


def layout_case2(
    tuples: Sequence[Sequence[int]],
    colors: Optional[Sequence[int]] = None,
    delta: Fraction = DEFAULT_DELTA,
) -> PointLayout:
    """
    k 組列 I の単調部分列ごとにブロックを作って x 軸上に並べる

    Args:
        tuples: build_tuples が作った I（tuples[ℓ-1] がラベル ℓ の組）
        colors: ラベルの色（点に色を付けるため。省略可）
        delta: tuple_partition に渡す指数（既定値 1/2）
    """
    if not tuples:
        return PointLayout(case="case2", points=(), blocks=(), label_points={})
    partition = tuple_partition(tuples, delta)
    groups = _run_groups(tuples, partition)
    coordinate, ranges = _coordinates(groups)

    points = []
    blocks = []
    label_points = {}
    for block_id, (group, (start, stop)) in enumerate(zip(groups, ranges)):
        blocks.append(Block(block_id, f"run:{block_id}", start, stop))
        for label in group:
            label_points[label] = len(points)
            color = colors[label - 1] if colors is not None else None
            points.append(
                LayoutPoint(
                    coordinate[label], Fraction(0), block_id, SlotKind.RUN_BLOCK, color, label
                )
            )
    return PointLayout(
        case="case2",
        points=tuple(points),
        blocks=tuple(blocks),
        label_points=label_points,
        partitions=(partition,),
    )


def split_paths(k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """最初の ⌈k/2⌉ 本を x 軸、残りを y 軸に割り振る"""
    half = math.ceil(k / 2)
    return tuple(range(half)), tuple(range(half, k))


def layout_split(
    paths: Sequence[SpinalPath],
    assignment: Optional[LabelAssignment] = None,
    delta: Fraction = DEFAULT_DELTA,
) -> PointLayout:
    """
    半分の道を x 軸、残り半分を y 軸に対応させた格子状の配置

    Q1 = 最初の ⌈k/2⌉ 本、Q2 = 残り。I を Q1 の次元だけに制限した I1 と、
    Q2 の次元だけに制限した I2 をそれぞれ単調分割 M1, M2 する。
    ラベル ℓ の点は (M1 の並びでの ℓ の座標, M2 の並びでの ℓ の座標)。
    各軸の分割は ⌈k/2⌉ 次元以下しか使わないので、ブロック数は
    O(N^{1-1/γ})（γ = 2^{⌈k/2⌉}）に収まる。

    k < 2 のときは layout_case2 と同じ結果を返す。
    """
    if assignment is None:
        assignment = build_tuples(paths)
    k = len(paths)
    if k < 2:
        return layout_case2(assignment.tuples, assignment.colors, delta)

    x_paths, y_paths = split_paths(k)
    tuples_x = [tuple(t[i] for i in x_paths) for t in assignment.tuples]
    tuples_y = [tuple(t[i] for i in y_paths) for t in assignment.tuples]
    partition_x = tuple_partition(tuples_x, delta)
    partition_y = tuple_partition(tuples_y, delta)
    groups_x = _run_groups(tuples_x, partition_x)
    groups_y = _run_groups(tuples_y, partition_y)
    x_of, x_ranges = _coordinates(groups_x)
    y_of, y_ranges = _coordinates(groups_y)

    y_block_of = {}
    for block_id, group in enumerate(groups_y, start=len(groups_x)):
        for label in group:
            y_block_of[label] = block_id

    points = []
    blocks = []
    label_points = {}
    for block_id, (group, (start, stop)) in enumerate(zip(groups_x, x_ranges)):
        blocks.append(Block(block_id, f"run:x{block_id}", start, stop, "x"))
        for label in group:
            label_points[label] = len(points)
            points.append(
                LayoutPoint(
                    x_of[label],
                    y_of[label],
                    block_id,
                    SlotKind.GRID,
                    assignment.colors[label - 1],
                    label,
                    y_block=y_block_of[label],
                )
            )

    y_order = tuple(label_points[label] for group in groups_y for label in group)
    for offset, (start, stop) in enumerate(y_ranges):
        block_id = len(groups_x) + offset
        blocks.append(Block(block_id, f"run:y{offset}", start, stop, "y"))

    return PointLayout(
        case="split",
        points=tuple(points),
        blocks=tuple(blocks),
        axis_split=AxisSplit(x_paths, y_paths, len(x_paths), len(y_paths), y_order),
        label_points=label_points,
        partitions=(partition_x, partition_y),
    )


def color_groups(palette: Sequence[int], b: int) -> list[tuple[int, ...]]:
    """色を id 順に ⌈c/b⌉ 個ずつのグループに切る（グループ数は b 以下）"""
    if b < 1:
        raise ParameterError(f"b は 1 以上でなければなりません: {b}")
    if not palette:
        return []
    size = math.ceil(len(palette) / b)
    ordered = sorted(palette)
    return [tuple(ordered[i : i + size]) for i in range(0, len(ordered), size)]


def layout_chains(paths: Sequence[SpinalPath], b: int) -> PointLayout:
    """
    色グループごとのチェーンを並べた普遍点集合を作る

    色を b 個以下のグループ C_j に分け、グループ C_j に属する色の要素数を N_j とする。
    区間 S_j には「C_j の各色を 1 点ずつ持つチェーン」を N_j 個並べる。
    点の総数は Σ N_j·|C_j| ≤ N·⌈c/b⌉。

    Raises:
        ParameterError: b < 1 の場合
    """
    if b < 1:
        raise ParameterError(f"b は 1 以上でなければなりません: {b}")
    if not paths:
        return PointLayout(case="chains", points=(), blocks=())
    _require_equal_lengths(paths)
    counts = Counter(paths[0].colors)
    groups = color_groups(palette_order(paths), b)

    slots: list[list[tuple[int, int]]] = []
    for group in groups:
        chains = sum(counts[color] for color in group)
        slots.append([(chain, color) for chain in range(chains) for color in group])

    flat = []
    start = 0
    for members in slots:
        flat.append(list(range(start, start + len(members))))
        start += len(members)
    coordinate, ranges = _coordinates(flat)

    points = []
    blocks = []
    for block_id, (group, members, (start, stop)) in enumerate(zip(groups, slots, ranges)):
        tag = "chain:" + ",".join(str(color) for color in group)
        blocks.append(Block(block_id, tag, start, stop))
        for offset, (chain, color) in enumerate(members):
            points.append(
                LayoutPoint(
                    coordinate[start + offset],
                    Fraction(0),
                    block_id,
                    SlotKind.CHAIN,
                    color,
                    chain=chain,
                )
            )
    return PointLayout(
        case="chains",
        points=tuple(points),
        blocks=tuple(blocks),
        color_groups=tuple(groups),
    )


def shift_block_ordinates(
    layout: PointLayout, shifts: Sequence[Fraction], axis: str = "x"
) -> PointLayout:
    """
    ブロックごとに、ブロックの軸と直交する座標をずらした配置を返す

    axis="x" なら x 軸のブロックごとに y 座標を、axis="y"（split 配置のみ）なら
    y 軸のブロックごとに x 座標をずらす。uphill 描画の経路はブロックの軸に沿った
    点の並びだけで決まるので、その軸に沿って描く道は、ずらした配置で描き直しても
    折れ点の数が変わらない。もう一方の軸の並びは崩れてよい。

    Args:
        layout: 元の配置
        shifts: shifts[i] だけ、その軸の i 番目のブロックの点を動かす
        axis: "x" または "y"

    Raises:
        ParameterError: axis が不正な場合、split 以外で axis="y" の場合、
            shifts の長さがブロック数と違う場合
    """
    if axis not in ("x", "y"):
        raise ParameterError(f"axis は x か y です: {axis}")
    if axis == "y" and layout.axis_split is None:
        raise ParameterError("y 軸のブロックは split 配置にしかありません")
    blocks = layout.blocks_on(axis)
    if len(shifts) != len(blocks):
        raise ParameterError(f"shifts の長さ {len(shifts)} がブロック数 {len(blocks)} と違います")
    offset = {block.id: Fraction(shift) for block, shift in zip(blocks, shifts)}

    def moved(point: LayoutPoint) -> LayoutPoint:
        if axis == "x":
            return replace(point, y=point.y + offset[point.block])
        assert point.y_block is not None
        return replace(point, x=point.x + offset[point.y_block])

    return replace(layout, points=tuple(moved(point) for point in layout.points))
