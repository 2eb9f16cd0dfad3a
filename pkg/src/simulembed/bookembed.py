"""
単調トポロジカル本埋め込みモジュール

平面グラフの頂点を 1 本の水平線（spine）の上に並べ、各辺を spine の上側（ABOVE）
または下側（BELOW）の弧として描く。辺は spine を高々 1 回だけ横切ってよく、
横切る点を「分割頂点（division vertex）」と呼ぶ。

埋め込みの求め方（先に成功したものを使う）:
1. 入力 JSON に spine とページ割り当てが書かれていればそれを使う
2. 森なら DFS の行きがけ順で 1 ページ（すべて ABOVE、分割頂点なし）
3. 頂点数 8 以下なら spine 順を総当たりし、交差グラフの 2 彩色でページを決める
4. それ以外は三角形分割の canonical ordering に沿って頂点を 1 つずつ追加する

使用例:
    from simulembed.bookembed import ColoredGraph, Vertex, compute_book_embedding

    graph = ColoredGraph(
        vertices=(Vertex(1, 1), Vertex(2, 1), Vertex(3, 2)),
        edges=((1, 2), (2, 3)),
    )
    embedding = compute_book_embedding(graph)
    print(embedding.spine)
"""

from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

import networkx as nx
from networkx.algorithms.planar_drawing import get_canonical_ordering, triangulate_embedding

from simulembed.errors import (
    CompatibilityError,
    ConsistencyError,
    MalformedInputError,
    PlanarityError,
)

# これ以下の頂点数なら spine 順を総当たりする
EXHAUSTIVE_LIMIT = 8


class Page(str, Enum):
    ABOVE = "above"
    BELOW = "below"


class ItemKind(str, Enum):
    """spine 上の要素の種類"""

    VERTEX = "vertex"
    DIVISION = "division"
    DUMMY = "dummy"


@dataclass(frozen=True, order=True)
class SpineItem:
    """
    spine 上の 1 要素

    Attributes:
        kind: 元の頂点・分割頂点・ダミー頂点のいずれか
        ref: VERTEX なら頂点 id、DIVISION / DUMMY ならグラフ内の通し番号
    """

    kind: ItemKind
    ref: int

    def __str__(self) -> str:
        if self.kind is ItemKind.VERTEX:
            return str(self.ref)
        prefix = "d" if self.kind is ItemKind.DIVISION else "p"
        return f"{prefix}{self.ref}"


@dataclass(frozen=True)
class Vertex:
    id: int
    color: int


def normalize_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class ColoredGraph:
    """
    頂点に色が付いた単純グラフ

    Attributes:
        vertices: 頂点（id と色）
        edges: 無向辺
        labels: 頂点 id → 1..n の一意なラベル（任意）
        spine: 外部ツールで計算済みの spine 順（任意）
        pages: spine と対になるページ割り当て（任意）
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[int, int], ...]
    labels: Optional[dict[int, int]] = None
    spine: Optional[tuple[SpineItem, ...]] = None
    pages: Optional[tuple["EdgePlacement", ...]] = None

    @property
    def n(self) -> int:
        return len(self.vertices)

    def color_of(self, vertex_id: int) -> int:
        return self._colors[vertex_id]

    @cached_property
    def _colors(self) -> dict[int, int]:
        return {v.id: v.color for v in self.vertices}

    def color_counts(self) -> Counter:
        return Counter(v.color for v in self.vertices)

    def validate(self) -> None:
        """
        単純グラフであることを確認する

        Raises:
            MalformedInputError: id の重複、自己ループ、多重辺、未定義の端点、ラベルの重複
        """
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise MalformedInputError("頂点 id が重複しています")
        known = set(ids)
        seen: set[tuple[int, int]] = set()
        for u, v in self.edges:
            if u == v:
                raise MalformedInputError(f"自己ループがあります: ({u}, {v})")
            if u not in known or v not in known:
                raise MalformedInputError(f"未定義の頂点を参照する辺があります: ({u}, {v})")
            key = normalize_edge(u, v)
            if key in seen:
                raise MalformedInputError(f"多重辺があります: ({u}, {v})")
            seen.add(key)
        if self.labels is not None:
            values = sorted(self.labels.values())
            if values != list(range(1, self.n + 1)) or set(self.labels) != known:
                raise MalformedInputError("ラベルは各頂点に 1..n を一意に割り当てる必要があります")

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(sorted(v.id for v in self.vertices))
        graph.add_edges_from(self.edges)
        return graph


@dataclass(frozen=True)
class ColoredGraphSet:
    """
    共通のパレットを持つ k 個のグラフ

    Attributes:
        graphs: 入力グラフ
        palette: 色数 c（色 id は 1..c）
    """

    graphs: tuple[ColoredGraph, ...]
    palette: int

    @property
    def k(self) -> int:
        return len(self.graphs)

    @property
    def division_color(self) -> int:
        """分割頂点・ダミー頂点に付ける予約色"""
        return self.palette + 1


@dataclass(frozen=True)
class EdgePlacement:
    """
    1 本の辺の本埋め込み上での描き方

    left / right は spine 上で左側・右側にある端点。
    分割頂点がなければ pages は 1 要素、あれば (left→division, division→right) の 2 要素で、
    2 つのページは必ず異なる（spine を横切る）。
    """

    left: int
    right: int
    division: Optional[int]
    pages: tuple[Page, ...]

    @property
    def edge(self) -> tuple[int, int]:
        return normalize_edge(self.left, self.right)

    def segments(self) -> list[tuple[SpineItem, SpineItem, Page]]:
        left = SpineItem(ItemKind.VERTEX, self.left)
        right = SpineItem(ItemKind.VERTEX, self.right)
        if self.division is None:
            return [(left, right, self.pages[0])]
        middle = SpineItem(ItemKind.DIVISION, self.division)
        return [(left, middle, self.pages[0]), (middle, right, self.pages[1])]


@dataclass(frozen=True)
class BookEmbedding:
    """
    本埋め込み

    Attributes:
        spine: spine 上の要素（左から右）
        placements: 辺ごとの描き方（入力辺と 1 対 1）
        method: 使った構成法（"supplied", "forest", "exhaustive", "canonical"）
    """

    spine: tuple[SpineItem, ...]
    placements: tuple[EdgePlacement, ...]
    method: str = "canonical"

    @property
    def division_count(self) -> int:
        return sum(1 for item in self.spine if item.kind is ItemKind.DIVISION)

    def position(self) -> dict[SpineItem, int]:
        return {item: i for i, item in enumerate(self.spine)}

    def division_map(self) -> dict[tuple[int, int], int]:
        return {p.edge: p.division for p in self.placements if p.division is not None}

    def edge_set(self) -> set[tuple[int, int]]:
        """分割頂点を取り除いて元の辺集合に戻す"""
        return {p.edge for p in self.placements}


@dataclass(frozen=True)
class SpinalPath:
    """
    spine 上の要素を順につないだ道（色付き）

    Attributes:
        items: spine 順の要素
        colors: items と同じ長さの色
        graph_index: 元のグラフの番号
    """

    items: tuple[SpineItem, ...]
    colors: tuple[int, ...]
    graph_index: int = 0

    def __len__(self) -> int:
        return len(self.items)


@dataclass
class CompatibilityReport:
    """
    色互換性チェックの結果

    Attributes:
        violations: (色, グラフ番号, 基準グラフでの個数, そのグラフでの個数)
        size_mismatches: (グラフ番号, 頂点数) 基準グラフと頂点数が違うもの
    """

    violations: list[tuple[int, int, int, int]] = field(default_factory=list)
    size_mismatches: list[tuple[int, int]] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not self.violations and not self.size_mismatches


def check_compatibility(graph_set: ColoredGraphSet) -> CompatibilityReport:
    """
    すべてのグラフで色ごとの頂点数が等しいか確認する

    最初のグラフを基準に、食い違う (色, グラフ) の組をすべて列挙する。
    """
    report = CompatibilityReport()
    if graph_set.k <= 1:
        return report

    reference = graph_set.graphs[0]
    expected = reference.color_counts()
    for index, graph in enumerate(graph_set.graphs[1:], start=1):
        if graph.n != reference.n:
            report.size_mismatches.append((index, graph.n))
        actual = graph.color_counts()
        for color in sorted(set(expected) | set(actual)):
            if expected[color] != actual[color]:
                report.violations.append((color, index, expected[color], actual[color]))
    return report


def require_compatible(graph_set: ColoredGraphSet) -> None:
    """check_compatibility が不合格なら CompatibilityError を送出する"""
    report = check_compatibility(graph_set)
    if not report.accepted:
        raise CompatibilityError(
            f"色互換でないグラフがあります（違反 {len(report.violations)} 件、"
            f"頂点数の不一致 {len(report.size_mismatches)} 件）",
            report.violations,
        )


# ===== ページ割り当て =====


def _interleave(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """spine 上の位置の組 a, b が a0 < b0 < a1 < b1 の形で交互に並ぶか"""
    (p, q), (r, s) = sorted(a), sorted(b)
    return p < r < q < s or r < p < s < q


def _two_page(order: Sequence[int], edges: Sequence[tuple[int, int]]) -> Optional[list[Page]]:
    """
    spine 順を固定して、交差しないページ割り当てを探す

    交互に並ぶ辺の組を結んだ「衝突グラフ」が 2 部グラフなら、その 2 彩色がページになる。
    """
    position = {v: i for i, v in enumerate(order)}
    spans = [(position[u], position[v]) for u, v in edges]
    conflicts: list[list[int]] = [[] for _ in edges]
    for i, j in combinations(range(len(edges)), 2):
        if _interleave(spans[i], spans[j]):
            conflicts[i].append(j)
            conflicts[j].append(i)

    side: list[Optional[int]] = [None] * len(edges)
    for start in range(len(edges)):
        if side[start] is not None:
            continue
        side[start] = 0
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for other in conflicts[current]:
                if side[other] is None:
                    side[other] = 1 - side[current]
                    queue.append(other)
                elif side[other] == side[current]:
                    return None
    return [Page.ABOVE if s == 0 else Page.BELOW for s in side]


def _placements_for_order(
    order: Sequence[int], edges: Sequence[tuple[int, int]], pages: Sequence[Page]
) -> tuple[EdgePlacement, ...]:
    position = {v: i for i, v in enumerate(order)}
    placements = []
    for (u, v), page in zip(edges, pages):
        left, right = (u, v) if position[u] < position[v] else (v, u)
        placements.append(EdgePlacement(left, right, None, (page,)))
    return tuple(placements)


def _vertex_spine(order: Iterable[int]) -> tuple[SpineItem, ...]:
    return tuple(SpineItem(ItemKind.VERTEX, v) for v in order)


def _forest_embedding(graph: nx.Graph) -> BookEmbedding:
    """森は DFS の行きがけ順に並べれば 1 ページに収まる"""
    order: list[int] = []
    for component in sorted(nx.connected_components(graph), key=min):
        # 次数最小のうち id 最小の頂点を根にし、子は id 順にたどる
        root = min(component, key=lambda v: (graph.degree(v), v))
        stack = [root]
        visited: set[int] = set()
        while stack:
            v = stack.pop()
            if v in visited:
                continue
            visited.add(v)
            order.append(v)
            stack.extend(sorted((w for w in graph[v] if w not in visited), reverse=True))
    edges = [tuple(e) for e in graph.edges()]
    pages = [Page.ABOVE] * len(edges)
    return BookEmbedding(_vertex_spine(order), _placements_for_order(order, edges, pages), "forest")


def _exhaustive_embedding(graph: nx.Graph) -> Optional[BookEmbedding]:
    """
    小さなグラフで、分割頂点なしの 2 ページ埋め込みを総当たりで探す

    交互判定は巡回順だけで決まるので、先頭の頂点は固定してよい。
    """
    nodes = sorted(graph.nodes())
    edges = [tuple(e) for e in graph.edges()]
    if not nodes:
        return BookEmbedding((), (), "exhaustive")
    first, rest = nodes[0], nodes[1:]
    for tail in permutations(rest):
        order = (first, *tail)
        pages = _two_page(order, edges)
        if pages is not None:
            return BookEmbedding(
                _vertex_spine(order), _placements_for_order(order, edges, pages), "exhaustive"
            )
    return None


def _canonical_embedding(graph: nx.Graph, embedding: nx.PlanarEmbedding) -> BookEmbedding:
    """
    canonical ordering に沿った追加構成

    三角形分割したグラフの頂点を canonical ordering の順に追加していく。
    外周（contour）w_1 = v1, ..., w_m = v2 は常に spine 上で左から右に並び、
    外周の辺 (w_i, w_{i+1}) は「w_i から分割頂点 d_i までの下側の弧」と
    「d_i から w_{i+1} までの上側の弧」で描かれている。w_i と d_i の間には何もない。

    新しい頂点 v の近傍が外周上の w_p..w_q のとき、w_p の直後に
    d', v, d'', x_{q-1}, ..., x_{p+1} を挿入し、
    (w_p, v) = 下 w_p→d' + 上 d'→v、(v, w_q) = 下 v→d'' + 上 d''→w_q、
    (v, w_j) = 下 v→x_j + 上 x_j→w_j と描く。
    上側の弧は常に「分割頂点 → 右の頂点」の形なので、外周の頂点の上を越えない。

    最後に三角形分割で足した辺を分割頂点ごと取り除き、端点と spine 上で隣り合う
    分割頂点は取り除いて辺を反対側の 1 本の弧にする。
    """
    triangulated, outer_face = triangulate_embedding(embedding, fully_triangulate=True)
    order = [v for v, _ in get_canonical_ordering(triangulated, outer_face)]
    adjacency = {v: set(triangulated.neighbors(v)) for v in triangulated.nodes()}

    def division(ref: int) -> SpineItem:
        return SpineItem(ItemKind.DIVISION, ref)

    v1, v2 = order[0], order[1]
    spine: list[SpineItem] = [
        SpineItem(ItemKind.VERTEX, v1),
        division(0),
        SpineItem(ItemKind.VERTEX, v2),
    ]
    # 辺 → (左端点, 分割頂点番号, 右端点)
    routes: dict[tuple[int, int], tuple[int, int, int]] = {normalize_edge(v1, v2): (v1, 0, v2)}
    next_division = 1
    contour = [v1, v2]
    placed = {v1, v2}

    for v in order[2:]:
        contour_position = {w: i for i, w in enumerate(contour)}
        neighbours = sorted(contour_position[w] for w in adjacency[v] if w in placed)
        if len(neighbours) < 2 or neighbours != list(range(neighbours[0], neighbours[-1] + 1)):
            raise ConsistencyError(f"頂点 {v} の近傍が外周上で連続していません")
        p, q = neighbours[0], neighbours[-1]
        w_p, w_q = contour[p], contour[q]

        left_div, right_div = next_division, next_division + 1
        next_division += 2
        interior = contour[p + 1 : q]
        inner_divs = {w: next_division + i for i, w in enumerate(interior)}
        next_division += len(interior)

        block = [division(left_div), SpineItem(ItemKind.VERTEX, v), division(right_div)]
        block += [division(inner_divs[w]) for w in reversed(interior)]
        anchor = spine.index(SpineItem(ItemKind.VERTEX, w_p)) + 1
        spine[anchor:anchor] = block

        routes[normalize_edge(w_p, v)] = (w_p, left_div, v)
        routes[normalize_edge(v, w_q)] = (v, right_div, w_q)
        for w in interior:
            routes[normalize_edge(v, w)] = (v, inner_divs[w], w)

        contour = contour[: p + 1] + [v] + contour[q:]
        placed.add(v)

    # 元のグラフにある辺だけ残す
    kept: dict[tuple[int, int], list] = {}
    for u, w in graph.edges():
        key = normalize_edge(u, w)
        if key not in routes:
            raise ConsistencyError(f"三角形分割に辺 {key} が含まれていません")
        left, ref, right = routes[key]
        kept[key] = [left, ref, right, (Page.BELOW, Page.ABOVE)]
    used = {record[1] for record in kept.values()}
    spine = [i for i in spine if i.kind is ItemKind.VERTEX or i.ref in used]

    # 端点と隣り合う分割頂点を、変化がなくなるまで取り除く。
    # 取り除くと両隣が隣り合うので、両隣の分割頂点だけを再検査すればよい
    before: dict[SpineItem, Optional[SpineItem]] = {}
    after: dict[SpineItem, Optional[SpineItem]] = {}
    for i, item in enumerate(spine):
        before[item] = spine[i - 1] if i > 0 else None
        after[item] = spine[i + 1] if i + 1 < len(spine) else None
    owner = {record[1]: record for record in kept.values()}
    queue = deque(item.ref for item in spine if item.kind is ItemKind.DIVISION)
    while queue:
        ref = queue.popleft()
        record = owner[ref]
        left, current, right, pages = record
        if current is None:
            continue
        item = division(ref)
        if before[item] == SpineItem(ItemKind.VERTEX, left):
            record[1], record[3] = None, (pages[1],)
        elif after[item] == SpineItem(ItemKind.VERTEX, right):
            record[1], record[3] = None, (pages[0],)
        else:
            continue
        prev_item, next_item = before.pop(item), after.pop(item)
        if prev_item is not None:
            after[prev_item] = next_item
        if next_item is not None:
            before[next_item] = prev_item
        for neighbour in (prev_item, next_item):
            if neighbour is not None and neighbour.kind is ItemKind.DIVISION:
                queue.append(neighbour.ref)

    head = next(item for item, prev_item in before.items() if prev_item is None)
    spine = []
    cursor: Optional[SpineItem] = head
    while cursor is not None:
        spine.append(cursor)
        cursor = after[cursor]

    # 分割頂点を spine 順に 0 から振り直す
    renumber = {}
    for item in spine:
        if item.kind is ItemKind.DIVISION:
            renumber[item.ref] = len(renumber)
    final_spine = tuple(
        division(renumber[i.ref]) if i.kind is ItemKind.DIVISION else i for i in spine
    )
    placements = tuple(
        EdgePlacement(left, right, None if ref is None else renumber[ref], pages)
        for left, ref, right, pages in kept.values()
    )
    return BookEmbedding(final_spine, placements, "canonical")


def _supplied_embedding(graph: ColoredGraph) -> BookEmbedding:
    """入力に書かれた spine とページ割り当てをそのまま使う"""
    assert graph.spine is not None
    if graph.pages is not None:
        return BookEmbedding(graph.spine, graph.pages, "supplied")
    if any(item.kind is not ItemKind.VERTEX for item in graph.spine):
        raise MalformedInputError("分割頂点を含む spine にはページ割り当てが必要です")
    order = [item.ref for item in graph.spine]
    edges = list(graph.edges)
    pages = _two_page(order, edges)
    if pages is None:
        raise MalformedInputError("指定された spine 順では 2 ページに収まりません")
    return BookEmbedding(graph.spine, _placements_for_order(order, edges, pages), "supplied")


def planarity_obstruction(graph: ColoredGraph, graph_index: int = 0) -> nx.PlanarEmbedding:
    """
    平面性を判定し、平面的なら組合せ埋め込みを返す

    Raises:
        PlanarityError: 非平面の場合。Kuratowski 部分グラフの辺を持つ
    """
    is_planar, certificate = nx.check_planarity(graph.to_networkx(), counterexample=True)
    if not is_planar:
        obstruction = sorted(normalize_edge(u, v) for u, v in certificate.edges())
        raise PlanarityError(
            f"グラフ {graph_index} は平面的ではありません（Kuratowski 部分グラフ: "
            f"{len(obstruction)} 辺）",
            graph_index,
            obstruction,
        )
    return certificate


def compute_book_embedding(graph: ColoredGraph, graph_index: int = 0) -> BookEmbedding:
    """
    平面グラフの単調トポロジカル本埋め込みを求める

    Args:
        graph: 入力グラフ
        graph_index: エラーメッセージ用のグラフ番号

    Returns:
        BookEmbedding: すべての辺を含み、各辺の分割頂点は高々 1 つ

    Raises:
        PlanarityError: 非平面グラフの場合
    """
    if graph.spine is not None:
        return _supplied_embedding(graph)

    embedding = planarity_obstruction(graph, graph_index)
    nx_graph = graph.to_networkx()

    if nx.is_forest(nx_graph):
        return _forest_embedding(nx_graph)
    if nx_graph.number_of_nodes() <= EXHAUSTIVE_LIMIT:
        found = _exhaustive_embedding(nx_graph)
        if found is not None:
            return found
    return _canonical_embedding(nx_graph, embedding)


def extract_spinal_paths(
    graph_set: ColoredGraphSet, embeddings: Optional[Sequence[BookEmbedding]] = None
) -> list[SpinalPath]:
    """
    本埋め込みから spinal path を取り出し、長さをそろえる

    分割頂点には予約色 c+1 を付ける。短い道の右端には同じ予約色のダミー頂点を足して、
    すべての道の長さを N（最長の道の長さ）にそろえる。

    Args:
        graph_set: 入力グラフ集合
        embeddings: 計算済みの本埋め込み（省略時はここで計算する）
    """
    if embeddings is None:
        embeddings = [compute_book_embedding(g, i) for i, g in enumerate(graph_set.graphs)]
    if len(embeddings) != graph_set.k:
        raise ConsistencyError("グラフと本埋め込みの個数が一致しません")

    reserved = graph_set.division_color
    length = max((len(e.spine) for e in embeddings), default=0)
    paths = []
    for index, (graph, embedding) in enumerate(zip(graph_set.graphs, embeddings)):
        items = list(embedding.spine)
        colors = [
            graph.color_of(item.ref) if item.kind is ItemKind.VERTEX else reserved
            for item in items
        ]
        for dummy in range(length - len(items)):
            items.append(SpineItem(ItemKind.DUMMY, dummy))
            colors.append(reserved)
        paths.append(SpinalPath(tuple(items), tuple(colors), index))
    return paths
