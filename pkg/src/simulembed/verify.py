"""
検証モジュール

計算結果が約束どおりになっているかを、構成側のコードを使わずに確かめる。
幾何の判定はすべてこのモジュール内の有理数演算で行い、誤差の許容値は使わない。

検証項目:
1. 平面性: 折れ線の線分どうしが、共有する頂点以外で交わらない
2. uphill 性: 描画中の点から上向きの半直線が、それより前に描いた部分と交わらない
3. 色の一致: どの色についても、その色の頂点が置かれた位置の多重集合がグラフ間で同じ
4. 折れ点の上界: 最大折れ点数が「定数 × 理論上の量」以下
5. 単調分割: 互いに素で全体を覆い、各部分列が記録どおりに単調
6. 本埋め込み: spine の網羅、分割頂点の数と位置、同じページの弧が交互に並ばない

各チェックは VerificationReport を返す。失敗には必ず具体的な証拠（witness）が付く。

使用例:
    from simulembed.verify import check_planarity

    report = check_planarity(drawing)
    if not report.is_valid:
        for failure in report.failures:
            print(failure.name, failure.witnesses[:3])
"""

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable, Optional, Sequence, Union

from sortedcontainers import SortedDict, SortedList

from simulembed.bookembed import BookEmbedding, ColoredGraph, ColoredGraphSet, ItemKind
from simulembed.expand import GraphDrawing
from simulembed.layout import PointLayout
from simulembed.seqpart import Direction, MonotonicPartition
from simulembed.uphill import UphillDrawing

Point = tuple[Fraction, Fraction]

# 総当たりとの突き合わせを行う線分数の上限
BRUTE_FORCE_LIMIT = 1000

# 1 つのチェックで保存する証拠の最大数
MAX_WITNESSES = 20


@dataclass
class CheckResult:
    """
    1 つの検証項目の結果

    Attributes:
        name: 検証項目の名前
        passed: 合格したか
        witnesses: 不合格の証拠（線分の組、半直線、色、添字など）
        stats: 測定値（最大折れ点数、定数の実測値など）
    """

    name: str
    passed: bool
    witnesses: list[Any] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)


@dataclass
class VerificationReport:
    """
    検証結果の集まり

    Attributes:
        checks: 各検証項目の結果
    """

    checks: list[CheckResult] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        """
        すべての検証項目が合格したか

        Returns:
            True: すべて合格（検証項目が 1 つもない場合も True）
        """
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.checks.extend(other.checks)
        return self


def _single(name: str, witnesses: list[Any], **stats: Any) -> VerificationReport:
    return VerificationReport(
        [CheckResult(name, not witnesses, witnesses[:MAX_WITNESSES], dict(stats))]
    )


# ===== 幾何の基本判定 =====


def orientation(a: Point, b: Point, c: Point) -> int:
    """a→b→c が左回りなら 1、右回りなら -1、一直線なら 0"""
    value = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (value > 0) - (value < 0)


def _between(a: Point, b: Point, p: Point) -> bool:
    """一直線上の p が閉線分 ab の上にあるか"""
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(
        a[1], b[1]
    )


def segment_contact(p1: Point, p2: Point, q1: Point, q2: Point) -> Optional[list[Point]]:
    """
    2 つの閉線分の共通部分

    Returns:
        None: 交わらない
        [点]: 1 点で交わる（その点）
        [点, 点]: 一直線上で重なる（重なりの両端。両端が同じなら 1 点で接する）
    """
    d1 = orientation(q1, q2, p1)
    d2 = orientation(q1, q2, p2)
    d3 = orientation(p1, p2, q1)
    d4 = orientation(p1, p2, q2)

    if d1 == d2 == d3 == d4 == 0:
        # 一直線上: 重なりを軸の辞書順で求める
        low = max(min(p1, p2), min(q1, q2))
        high = min(max(p1, p2), max(q1, q2))
        if low > high:
            return None
        return [low] if low == high else [low, high]

    if d1 * d2 <= 0 and d3 * d4 <= 0:
        if d1 == 0 and _between(q1, q2, p1):
            return [p1]
        if d2 == 0 and _between(q1, q2, p2):
            return [p2]
        if d3 == 0 and _between(p1, p2, q1):
            return [q1]
        if d4 == 0 and _between(p1, p2, q2):
            return [q2]
        if 0 in (d1, d2, d3, d4):
            return None
        # 真に交差する: 交点を求める
        dx1, dy1 = p2[0] - p1[0], p2[1] - p1[1]
        dx2, dy2 = q2[0] - q1[0], q2[1] - q1[1]
        denominator = dx1 * dy2 - dy1 * dx2
        t = ((q1[0] - p1[0]) * dy2 - (q1[1] - p1[1]) * dx2) / denominator
        return [(p1[0] + t * dx1, p1[1] + t * dy1)]
    return None


@dataclass(frozen=True)
class _Segment:
    owner: int  # 折れ線の番号（頂点だけの場合は -1 - 頂点の番号）
    index: int  # 折れ線の中での番号
    a: Point
    b: Point


def _segments(polylines: Sequence[Sequence[Point]], vertices: Iterable[Point]) -> list[_Segment]:
    segments = []
    for owner, points in enumerate(polylines):
        for index, (a, b) in enumerate(zip(points, points[1:])):
            segments.append(_Segment(owner, index, a, b))
    for number, vertex in enumerate(sorted(set(vertices))):
        segments.append(_Segment(-1 - number, 0, vertex, vertex))
    return segments


def _allowed(s: _Segment, t: _Segment, contact: list[Point], ends: dict[int, set]) -> bool:
    """許される接触か（同じ折れ線の連続する線分の継ぎ目、または共有する頂点）"""
    if len(contact) != 1:
        return False
    point = contact[0]
    if s.owner == t.owner and abs(s.index - t.index) == 1:
        joint = s.b if s.index < t.index else s.a
        return point == joint
    if s.owner == t.owner:
        return False
    s_ends = ends.get(s.owner, {s.a})
    t_ends = ends.get(t.owner, {t.a})
    on_s_end = point in (s.a, s.b) and point in s_ends
    on_t_end = point in (t.a, t.b) and point in t_ends
    return on_s_end and on_t_end


def _polyline_ends(polylines: Sequence[Sequence[Point]]) -> dict[int, set]:
    return {owner: {points[0], points[-1]} for owner, points in enumerate(polylines) if points}


# 走査線上の並びで、同じ高さの線分を挟む番兵の傾き
_BELOW = float("-inf")
_ABOVE = float("inf")


class _Sweep:
    """走査線の現在の x（状態の並びの比較に使う）"""

    def __init__(self) -> None:
        self.x = Fraction(0)


class _Bound:
    """高さ y の直前・直後を表す番兵（SortedList の二分探索用）"""

    def __init__(self, y: Fraction, tilt: float) -> None:
        self._key = (y, tilt)

    def key(self) -> tuple:
        return self._key

    def __lt__(self, other: Any) -> bool:
        return bool(self.key() < other.key())


class _Entry:
    """
    走査線と交わる垂直でない線分

    並びは走査線上の高さで決める。同じ高さなら、走査線で始まる線分は右側の傾き順、
    走査線で終わる線分は左側の並び（傾きの降順）にする。
    """

    def __init__(self, segment: _Segment, sweep: _Sweep) -> None:
        self.segment = segment
        self.left, self.right = sorted((segment.a, segment.b))
        self.slope = (self.right[1] - self.left[1]) / (self.right[0] - self.left[0])
        self.sweep = sweep

    def key(self) -> tuple:
        x = self.sweep.x
        if self.left[0] == x:
            return (self.left[1], self.slope)
        if self.right[0] == x:
            return (self.right[1], -self.slope)
        return (_value_at(self.left, self.right, x), Fraction(0))

    def __lt__(self, other: Any) -> bool:
        return bool(self.key() < other.key())


def _contacts(pairs: Iterable[tuple[_Segment, _Segment]], ends: dict[int, set]) -> list[tuple]:
    violations: list[tuple] = []
    for s, t in pairs:
        contact = segment_contact(s.a, s.b, t.a, t.b)
        if contact is not None and not _allowed(s, t, contact, ends):
            witness = _witness(s, t, contact)
            if witness not in violations:
                violations.append(witness)
    return violations


def planarity_violations_sweep(
    polylines: Sequence[Sequence[Point]], vertices: Iterable[Point] = ()
) -> list[tuple]:
    """
    走査線で許されない接触を探す

    端点を (x, y) の辞書順にたどり、走査線と交わる線分を高さ順の SortedList に保つ。
    各端点では、その点を含む線分どうしと、削除・挿入で隣り合った線分どうしだけを比べる。
    垂直な線分と頂点は高さ順には入れず、下端で走査線上の範囲を問い合わせる。

    最初に違反が見つかった端点で止まるので、返すのはその端点で見つかった違反だけ
    （合否は総当たりと一致する）。
    """
    segments = _segments(polylines, vertices)
    ends = _polyline_ends(polylines)
    starts: dict[Point, list[_Segment]] = defaultdict(list)
    stops: set[Point] = set()
    for segment in segments:
        low, high = sorted((segment.a, segment.b))
        starts[low].append(segment)
        if low[0] != high[0]:
            stops.add(high)

    sweep = _Sweep()
    status = SortedList()
    column: list[tuple[Fraction, _Segment]] = []
    column_x: Optional[Fraction] = None
    for point in sorted(set(starts) | stops):
        x, y = point
        sweep.x = x
        if x != column_x:
            column, column_x = [], x
        column = [(top, s) for top, s in column if top >= y]
        beginning = starts.get(point, [])

        # この点を含む線分どうし
        lo = status.bisect_left(_Bound(y, _BELOW))
        hi = status.bisect_right(_Bound(y, _ABOVE))
        touching = list(
            dict.fromkeys(
                [s for _, s in column] + [e.segment for e in status[lo:hi]] + beginning
            )
        )
        pairs = list(combinations(touching, 2))
        for segment in beginning:
            if segment.a[0] == segment.b[0]:
                top = max(segment.a[1], segment.b[1])
                upper = status.bisect_right(_Bound(top, _ABOVE))
                pairs.extend((segment, e.segment) for e in status[hi:upper])
        violations = _contacts(pairs, ends)
        if violations:
            return violations

        # ここまで違反がなければ status[lo:hi] はこの点で終わる線分だけ
        del status[lo:hi]
        for segment in beginning:
            if segment.a[0] == segment.b[0]:
                column.append((max(segment.a[1], segment.b[1]), segment))
            else:
                status.add(_Entry(segment, sweep))

        lo = status.bisect_left(_Bound(y, _BELOW))
        hi = status.bisect_right(_Bound(y, _ABOVE))
        neighbours = [(lo - 1, lo), (hi - 1, hi)] if hi > lo else [(lo - 1, lo)]
        pairs = [
            (status[i].segment, status[j].segment)
            for i, j in neighbours
            if i >= 0 and j < len(status)
        ]
        violations = _contacts(pairs, ends)
        if violations:
            return violations
    return []


def planarity_violations_brute(
    polylines: Sequence[Sequence[Point]], vertices: Iterable[Point] = ()
) -> list[tuple]:
    """総当たりで許されない接触をすべて列挙する（走査の突き合わせ用）"""
    segments = _segments(polylines, vertices)
    ends = _polyline_ends(polylines)
    violations = []
    for i in range(len(segments)):
        for j in range(i + 1, len(segments)):
            s, t = segments[i], segments[j]
            contact = segment_contact(s.a, s.b, t.a, t.b)
            if contact is not None and not _allowed(s, t, contact, ends):
                violations.append(_witness(s, t, contact))
    return violations


def _witness(s: _Segment, t: _Segment, contact: list[Point]) -> tuple:
    first, second = sorted([(s.owner, s.index, s.a, s.b), (t.owner, t.index, t.a, t.b)])
    return (first, second, tuple(contact))


def _drawing_polylines(
    drawing: Union[GraphDrawing, UphillDrawing],
) -> tuple[list[tuple[Point, ...]], list[Point]]:
    if isinstance(drawing, GraphDrawing):
        return [poly.points for _, poly in drawing.edges], list(drawing.locations.values())
    return [poly.points for poly in drawing.sequence()], list(drawing.locations)


def check_planarity(
    drawing: Union[GraphDrawing, UphillDrawing], cross_check: bool = False
) -> VerificationReport:
    """
    描画が平面的かを確かめる

    許される接触は、同じ折れ線の連続する線分の継ぎ目と、両方の折れ線の端点である頂点だけ。
    頂点が他の折れ線の途中に乗っている場合も不合格にする。

    Args:
        drawing: GraphDrawing または UphillDrawing
        cross_check: True なら線分数が BRUTE_FORCE_LIMIT 以下のとき総当たりと突き合わせる
    """
    polylines, vertices = _drawing_polylines(drawing)
    violations = planarity_violations_sweep(polylines, vertices)
    segment_count = sum(max(0, len(p) - 1) for p in polylines)
    stats: dict[str, Any] = {"segments": segment_count}
    if cross_check and segment_count <= BRUTE_FORCE_LIMIT:
        brute = planarity_violations_brute(polylines, vertices)
        # 走査は最初の違反で止まるので、合否と証拠の正しさだけを突き合わせる
        stats["sweep_agrees"] = bool(brute) == bool(violations) and all(
            witness in brute for witness in violations
        )
        if not stats["sweep_agrees"]:
            violations = violations or brute
    return _single("planarity", violations, **stats)


# ===== uphill 性 =====


def _value_at(a: Point, b: Point, x: Fraction) -> Fraction:
    return a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0])


def _shadow(earlier: tuple[Point, Point], later: tuple[Point, Point]) -> Optional[Point]:
    """
    later 上の点から上向きの半直線が earlier に当たるなら、その点を返す

    共通の x 区間の両端だけ調べれば十分（区間内では高さの差が 1 次関数になる）。
    """
    (a, b), (c, d) = earlier, later
    lo = max(min(a[0], b[0]), min(c[0], d[0]))
    hi = min(max(a[0], b[0]), max(c[0], d[0]))
    if lo > hi:
        return None
    for x in (lo, hi) if lo != hi else (lo,):
        if c[0] == d[0]:
            lows = [min(c[1], d[1])]
        else:
            lows = [_value_at(c, d, x)]
        if a[0] == b[0]:
            top = max(a[1], b[1])
        else:
            top = _value_at(a, b, x)
        if top > lows[0]:
            return (x, lows[0])
    return None


def uphill_violations(polylines: Sequence[Sequence[Point]]) -> list[tuple]:
    """
    折れ線を描いた順に並べたとき、uphill でない箇所を列挙する

    それまでに描いた部分の上側の包絡線を、左端の x をキーにした SortedDict で持つ。
    新しい線分は、x 区間が重なる包絡線の断片とだけ比べる。
    合格した線分はその x 区間で包絡線になる。違反した線分は包絡線を更新しない。
    下向きに進む垂直な線分は、その線分自身の前半が上にあるので違反になる。
    """
    # 左端の x → (右端の x, 左端の y, 右端の y, 元の線分)
    pieces: SortedDict = SortedDict()
    # 垂直な線分: x → (上端の y, 元の線分)
    columns: SortedDict = SortedDict()
    violations = []
    for owner, points in enumerate(polylines):
        for index, (c, d) in enumerate(zip(points, points[1:])):
            source = (owner, index)
            if c[0] == d[0] and d[1] < c[1]:
                violations.append((source, source, d))
            else:
                hits = _envelope_hits(pieces, columns, (c, d))
                violations.extend((earlier, source, hit) for earlier, hit in hits)
                if not hits:
                    _raise_envelope(pieces, columns, (c, d), source)
            if len(violations) >= MAX_WITNESSES:
                return violations[:MAX_WITNESSES]
    return violations


def _envelope_hits(
    pieces: SortedDict, columns: SortedDict, segment: tuple[Point, Point]
) -> list[tuple]:
    (c, d) = segment
    lo, hi = min(c[0], d[0]), max(c[0], d[0])
    overlapping = []
    before = pieces.bisect_left(lo)
    if before > 0:
        x1, (x2, y1, y2, source) = pieces.peekitem(before - 1)
        if x2 >= lo:
            overlapping.append((((x1, y1), (x2, y2)), source))
    for x1 in pieces.irange(lo, hi):
        x2, y1, y2, source = pieces[x1]
        overlapping.append((((x1, y1), (x2, y2)), source))
    for x0 in columns.irange(lo, hi):
        top, source = columns[x0]
        overlapping.append((((x0, top), (x0, top)), source))

    hits = []
    for earlier, source in overlapping:
        hit = _shadow(earlier, segment)
        if hit is not None:
            hits.append((source, hit))
    return hits


def _raise_envelope(
    pieces: SortedDict, columns: SortedDict, segment: tuple[Point, Point], source: tuple
) -> None:
    """包絡線より下にない線分を、その x 区間の新しい包絡線にする"""
    left, right = sorted(segment)
    lo, hi = left[0], right[0]
    if lo == hi:
        columns[lo] = (right[1], source)
        return

    before = pieces.bisect_left(lo)
    if before > 0:
        x1, (x2, y1, y2, owner) = pieces.peekitem(before - 1)
        if x2 > lo:
            a, b = (x1, y1), (x2, y2)
            pieces[x1] = (lo, y1, _value_at(a, b, lo), owner)
            if x2 > hi:
                pieces[hi] = (x2, _value_at(a, b, hi), y2, owner)
    for x1 in list(pieces.irange(lo, hi, inclusive=(True, False))):
        x2, y1, y2, owner = pieces.pop(x1)
        if x2 > hi:
            pieces[hi] = (x2, _value_at((x1, y1), (x2, y2), hi), y2, owner)
    for x0 in list(columns.irange(lo, hi)):
        del columns[x0]
    pieces[lo] = (hi, left[1], right[1], source)


def check_uphill(drawing: UphillDrawing) -> VerificationReport:
    """
    描画が uphill かを確かめる

    描画の向きが "x" の場合は座標を入れ替えて +x 方向の半直線で調べる。
    """
    polylines = [poly.points for poly in drawing.sequence()]
    if drawing.orientation == "x":
        polylines = [tuple((y, x) for x, y in points) for points in polylines]
    violations = uphill_violations(polylines)
    return _single(
        "uphill",
        violations,
        orientation=drawing.orientation,
        polylines=len(polylines),
    )


# ===== 色 =====


def check_color_consistency(
    graph_set: ColoredGraphSet, drawings: Sequence[GraphDrawing]
) -> VerificationReport:
    """
    色ごとに、その色の頂点が置かれた位置の多重集合がすべての描画で同じかを確かめる
    """
    witnesses: list[Any] = []
    if len(drawings) != graph_set.k:
        witnesses.append(("drawing-count", graph_set.k, len(drawings)))
        return _single("color-consistency", witnesses)

    def by_color(graph: ColoredGraph, drawing: GraphDrawing) -> dict[int, Counter]:
        table: dict[int, Counter] = {}
        for vertex in graph.vertices:
            table.setdefault(vertex.color, Counter())[drawing.locations[vertex.id]] += 1
        return table

    reference = by_color(graph_set.graphs[0], drawings[0]) if drawings else {}
    for index in range(1, graph_set.k):
        table = by_color(graph_set.graphs[index], drawings[index])
        for color in sorted(set(reference) | set(table)):
            expected = reference.get(color, Counter())
            actual = table.get(color, Counter())
            if expected != actual:
                location = next(iter((expected - actual) or (actual - expected)))
                witnesses.append((color, index, location))
    return _single("color-consistency", witnesses, graphs=graph_set.k)


def check_color_placement(
    graph_set: ColoredGraphSet, drawings: Sequence[GraphDrawing], layout: PointLayout
) -> VerificationReport:
    """各頂点が、自分と同じ色の点集合の点に置かれているかを確かめる（普遍点集合用）"""
    colored = {(p.x, p.y): p.color for p in layout.points}
    witnesses = []
    for graph, drawing in zip(graph_set.graphs, drawings):
        for vertex in graph.vertices:
            location = drawing.locations.get(vertex.id)
            if colored.get(location) != vertex.color:
                witnesses.append((drawing.graph_index, vertex.id, vertex.color, location))
    return _single("color-placement", witnesses, points=len(layout.points))


# ===== 折れ点の上界 =====


@dataclass(frozen=True)
class BendParams:
    """
    折れ点の上界の計算に使う値

    Attributes:
        mode: "embed" または "chains"
        n: spinal path の長さ N（ダミーを含む）
        k: グラフの数
        c: 色数（分割頂点の予約色を含む）
        gamma: 指数 γ（embed のみ。δ = 1/2 なら 2 のべき）
        b: 色グループ数（chains のみ）
        factor: 上界の定数
        label: 報告用の名前（"uphill" や "graph"）
    """

    mode: str
    n: int
    k: int
    c: int
    factor: float
    gamma: Fraction | int = 2
    b: int = 1
    label: str = "bends"

    @property
    def base(self) -> float:
        """定数を掛ける前の量: min{c, N^{1-1/γ}} または b"""
        if self.mode == "chains":
            return float(self.b)
        if self.n == 0:
            return 0.0
        return min(float(self.c), self.n ** (1 - 1 / float(self.gamma)))

    @property
    def budget(self) -> float:
        return self.factor * self.base


def _max_bends(drawing: Union[GraphDrawing, UphillDrawing]) -> int:
    if isinstance(drawing, GraphDrawing):
        return max((len(p.points) - 2 for _, p in drawing.edges if len(p.points) > 2), default=0)
    polylines = list(drawing.edges) + [lane.polyline for lane in drawing.lanes]
    return max((len(p.points) - 2 for p in polylines if len(p.points) > 2), default=0)


def check_bend_bounds(
    drawings: Sequence[Union[GraphDrawing, UphillDrawing]], params: BendParams
) -> VerificationReport:
    """
    最大折れ点数が params.factor × base 以下かを確かめ、定数の実測値を報告する
    """
    measured = max((_max_bends(d) for d in drawings), default=0)
    witnesses = []
    if measured > params.budget:
        witnesses.append((params.label, measured, params.budget))
    implied = measured / params.base if params.base > 0 else 0.0
    return _single(
        f"bend-bound:{params.label}",
        witnesses,
        max_bends=measured,
        budget=params.budget,
        base=params.base,
        implied_constant=implied,
    )


def check_expansion(
    drawings: Sequence[GraphDrawing], constant: float, floor: int = 0
) -> VerificationReport:
    """
    拡張後の辺の折れ点数が constant × max(b, floor) 以下かを確かめる

    b は元の uphill 描画の折れ点の最大数。stats の implied_constant は
    実測の折れ点数 / max(b, 1) の最大値（実測の C″）。
    """
    witnesses = []
    ratios = []
    for drawing in drawings:
        measured = _max_bends(drawing)
        if measured > constant * max(drawing.uphill_bends, floor):
            witnesses.append((drawing.graph_index, measured, drawing.uphill_bends))
        ratios.append(measured / max(drawing.uphill_bends, 1))
    return _single(
        "expansion",
        witnesses,
        implied_constant=max(ratios, default=0.0),
        constant=constant,
        floor=floor,
    )


# ===== 単調分割 =====


def _monotone(values: Sequence[int], direction: str) -> Optional[int]:
    """単調でなければ、最初に崩れた位置を返す"""
    for i in range(1, len(values)):
        if direction == "nondec" and values[i] < values[i - 1]:
            return i
        if direction == "noninc" and values[i] > values[i - 1]:
            return i
    return None


def check_partition(
    partition: MonotonicPartition, source: Sequence[Union[int, Sequence[int]]]
) -> VerificationReport:
    """
    単調分割が互いに素で全体を覆い、各部分列が記録どおりに単調かを確かめる
    """
    witnesses: list[Any] = []
    rows = [(v,) if isinstance(v, int) else tuple(v) for v in source]
    seen: dict[int, int] = {}
    for number, run in enumerate(partition.runs):
        indices = list(run.indices)
        if any(b <= a for a, b in zip(indices, indices[1:])):
            witnesses.append(("order", number, indices[:10]))
        for index in indices:
            if not 0 <= index < len(rows):
                witnesses.append(("range", number, index))
            elif index in seen:
                witnesses.append(("overlap", seen[index], number, index))
            else:
                seen[index] = number
        arity = len(rows[0]) if rows else 0
        if len(run.directions) != arity and indices:
            witnesses.append(("arity", number, len(run.directions)))
            continue
        for dim, direction in enumerate(run.directions):
            label = direction.value if isinstance(direction, Direction) else str(direction)
            values = [rows[i][dim] for i in indices if 0 <= i < len(rows)]
            broken = _monotone(values, label)
            if broken is not None:
                witnesses.append(("monotone", number, dim, indices[broken]))
    missing = sorted(set(range(len(rows))) - set(seen))
    if missing:
        witnesses.append(("uncovered", missing[:10]))
    if partition.source_length != len(rows):
        witnesses.append(("length", partition.source_length, len(rows)))
    return _single(
        "partition",
        witnesses,
        runs=len(partition.runs),
        n=len(rows),
        bound=partition.bound,
        implied_constant=partition.implied_constant,
    )


# ===== 本埋め込み =====


def check_book_embedding(graph: ColoredGraph, embedding: BookEmbedding) -> VerificationReport:
    """
    本埋め込みが正しいかを確かめる

    - spine に各頂点がちょうど 1 回現れる
    - 辺の集合が入力と一致し、各辺の分割頂点は高々 1 つで、両端点の間にある
    - 分割された辺の 2 つの部分は反対側のページにある
    - 同じページの弧が a < c < b < d の形で交互に並ばない
    """
    witnesses: list[Any] = []
    position: dict[tuple[str, int], int] = {}
    for index, item in enumerate(embedding.spine):
        key = (item.kind.value, item.ref)
        if key in position:
            witnesses.append(("duplicate-item", str(item)))
        position[key] = index

    vertex_ids = {v.id for v in graph.vertices}
    on_spine = {ref for kind, ref in position if kind == ItemKind.VERTEX.value}
    if on_spine != vertex_ids:
        witnesses.append(("spine-vertices", sorted(vertex_ids ^ on_spine)[:10]))

    expected = {tuple(sorted(edge)) for edge in graph.edges}
    covered = {tuple(sorted((p.left, p.right))) for p in embedding.placements}
    if expected != covered:
        witnesses.append(("edge-set", sorted(expected ^ covered)[:10]))

    divisions_used: Counter = Counter()
    arcs: dict[str, list[tuple[int, int, tuple]]] = {"above": [], "below": []}
    for placement in embedding.placements:
        left = position.get((ItemKind.VERTEX.value, placement.left))
        right = position.get((ItemKind.VERTEX.value, placement.right))
        edge = (placement.left, placement.right)
        if left is None or right is None:
            continue
        if not left < right:
            witnesses.append(("endpoint-order", edge))
        pages = [page.value for page in placement.pages]
        if placement.division is None:
            if len(pages) != 1:
                witnesses.append(("page-count", edge, pages))
                continue
            arcs[pages[0]].append((min(left, right), max(left, right), edge))
            continue
        divisions_used[placement.division] += 1
        middle = position.get((ItemKind.DIVISION.value, placement.division))
        if middle is None or not left < middle < right:
            witnesses.append(("division-position", edge, placement.division))
            continue
        if len(pages) != 2 or pages[0] == pages[1]:
            witnesses.append(("division-pages", edge, pages))
            continue
        arcs[pages[0]].append((left, middle, edge))
        arcs[pages[1]].append((middle, right, edge))

    for ref, count in divisions_used.items():
        if count > 1:
            witnesses.append(("shared-division", ref, count))
    spine_divisions = {ref for kind, ref in position if kind == ItemKind.DIVISION.value}
    if spine_divisions != set(divisions_used):
        witnesses.append(("orphan-division", sorted(spine_divisions ^ set(divisions_used))))

    for page, spans in arcs.items():
        spans.sort()
        for i in range(len(spans)):
            a, b, first = spans[i]
            for j in range(i + 1, len(spans)):
                c, d, second = spans[j]
                if c >= b:
                    break
                if a < c < b < d:
                    witnesses.append(("interleave", page, first, second))
    return _single(
        "book-embedding",
        witnesses,
        divisions=len(spine_divisions),
        method=embedding.method,
    )
