"""
ランダムな色互換入力の生成モジュール

実験とテスト用に、k 個の平面グラフと色互換な色付けを作る。

1. 一様乱数の点集合を作り、Delaunay 三角形分割の辺を取る（平面グラフになる）
2. 各辺を確率 drop で取り除く
3. 色の多重集合を 1 つ決め、グラフごとにシャッフルして頂点に割り当てる

同じ種（seed）からは常に同じ入力ができる。
"""

from typing import Optional

import numpy as np
from scipy.spatial import Delaunay

from simulembed.bookembed import ColoredGraph, ColoredGraphSet, Vertex, normalize_edge
from simulembed.errors import ParameterError


def delaunay_edges(points: np.ndarray) -> list[tuple[int, int]]:
    """
    点集合の Delaunay 三角形分割の辺（0 始まりの添字、昇順）

    点が 3 個未満なら、並べた順に結んだ道を返す。
    """
    count = len(points)
    if count < 3:
        return [(i, i + 1) for i in range(count - 1)]
    # QJ: 退化した配置（同一直線上など）でも三角形分割を作る
    triangulation = Delaunay(points, qhull_options="QJ")
    edges = set()
    for simplex in triangulation.simplices:
        a, b, c = (int(v) for v in simplex)
        edges.update({normalize_edge(a, b), normalize_edge(b, c), normalize_edge(a, c)})
    return sorted(edges)


def color_multiset(n: int, c: int, rng: np.random.Generator) -> list[int]:
    """
    n 個の頂点に付ける色の多重集合（1..c の各色を少なくとも 1 回使う）
    """
    if c > n:
        raise ParameterError(f"色数 c={c} が頂点数 n={n} を超えています")
    colors = list(range(1, c + 1))
    colors += [int(v) for v in rng.integers(1, c + 1, size=n - c)]
    return sorted(colors)


def random_graph(n: int, rng: np.random.Generator, drop: float) -> list[tuple[int, int]]:
    """頂点 1..n の平面グラフの辺"""
    points = rng.random((n, 2))
    edges = []
    for a, b in delaunay_edges(points):
        if rng.random() >= drop:
            edges.append((a + 1, b + 1))
    return edges


def random_graph_set(
    n: int,
    k: int,
    c: Optional[int] = None,
    seed: int = 0,
    drop: float = 0.3,
) -> ColoredGraphSet:
    """
    色互換な k 個のランダム平面グラフを作る

    Args:
        n: 各グラフの頂点数
        k: グラフの数
        c: 色数（省略時は n。すべての頂点が異なる色になる）
        seed: 乱数の種
        drop: Delaunay 三角形分割の各辺を取り除く確率

    Raises:
        ParameterError: 引数が範囲外の場合

    使用例:
        graph_set = random_graph_set(n=64, k=2, c=4, seed=1)
        print(graph_set.k, graph_set.palette)
    """
    if n < 1 or k < 1:
        raise ParameterError(f"n と k は 1 以上でなければなりません: n={n}, k={k}")
    if not 0 <= drop <= 1:
        raise ParameterError(f"drop は 0 以上 1 以下でなければなりません: {drop}")
    palette = n if c is None or c == 0 else c

    rng = np.random.default_rng(seed)
    colors = color_multiset(n, palette, rng)
    graphs = []
    for _ in range(k):
        edges = random_graph(n, rng, drop)
        assigned = [int(v) for v in rng.permutation(colors)]
        vertices = tuple(Vertex(i + 1, assigned[i]) for i in range(n))
        graphs.append(ColoredGraph(vertices=vertices, edges=tuple(edges)))
    return ColoredGraphSet(graphs=tuple(graphs), palette=palette)
