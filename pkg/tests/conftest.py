"""
pytest の共通フィクスチャ

テスト全体で使う共通の入力（小さなグラフ集合など）をここに定義する

フィクスチャ (fixture) とは:
- テストの前準備（セットアップ）を行う関数
- @pytest.fixture デコレータで定義
- テスト関数の引数として指定すると自動的に呼び出される
- テストごとに独立した環境を提供できる

conftest.py は pytest が自動的に読み込む特別なファイルで、
このファイルに定義されたフィクスチャは同じディレクトリ以下の
すべてのテストファイルで使用できます。
"""

import json
from pathlib import Path
from typing import Any

import pytest

from simulembed.bookembed import ColoredGraph, ColoredGraphSet, Vertex


def make_graph(colors: dict[int, int], edges: list[tuple[int, int]]) -> ColoredGraph:
    """頂点 id → 色 の辞書と辺リストから ColoredGraph を作る"""
    vertices = tuple(Vertex(vertex_id, color) for vertex_id, color in sorted(colors.items()))
    return ColoredGraph(vertices=vertices, edges=tuple(edges))


def write_input(path: Path, data: dict[str, Any]) -> Path:
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


@pytest.fixture
def tmp_workspace(tmp_path: Path) -> Path:
    """
    テスト用の一時ディレクトリを作成する

    各テストで独立したワークスペースを使える

    引数:
        tmp_path: pytest が提供する一時ディレクトリ
                  テストごとに異なるパスが提供される

    戻り値:
        Path: 作成されたワークスペースディレクトリのパス
    """
    workspace = tmp_path / "workspace"
    workspace.mkdir()
    return workspace


@pytest.fixture
def two_paths() -> ColoredGraphSet:
    """
    3 色の道 2 本（色互換）

    グラフ 0: 1 - 2 - 3（色 1, 2, 3）
    グラフ 1: 1 - 3 - 2（頂点 1, 2, 3 の色は 3, 1, 2）
    """
    first = make_graph({1: 1, 2: 2, 3: 3}, [(1, 2), (2, 3)])
    second = make_graph({1: 3, 2: 1, 3: 2}, [(1, 3), (3, 2)])
    return ColoredGraphSet(graphs=(first, second), palette=3)


@pytest.fixture
def mixed_set() -> ColoredGraphSet:
    """
    三角形を含む 2 色のグラフ 2 個（色互換）

    グラフ 0: 4 頂点の閉路 + 対角線（平面的、木でない）
    グラフ 1: 星形の木
    """
    first = make_graph(
        {1: 1, 2: 2, 3: 1, 4: 2},
        [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)],
    )
    second = make_graph({1: 2, 2: 1, 3: 2, 4: 1}, [(1, 2), (1, 3), (1, 4)])
    return ColoredGraphSet(graphs=(first, second), palette=2)


@pytest.fixture
def k5_set() -> ColoredGraphSet:
    """K5（非平面）1 個だけのグラフ集合"""
    colors = {v: 1 for v in range(1, 6)}
    edges = [(u, v) for u in range(1, 6) for v in range(u + 1, 6)]
    return ColoredGraphSet(graphs=(make_graph(colors, edges),), palette=1)


@pytest.fixture
def two_paths_json() -> dict[str, Any]:
    """two_paths と同じ内容の入力 JSON"""
    return {
        "format": "simulembed/1",
        "palette": 3,
        "graphs": [
            {"vertices": [[1, 1], [2, 2], [3, 3]], "edges": [[1, 2], [2, 3]]},
            {"vertices": [[1, 3], [2, 1], [3, 2]], "edges": [[1, 3], [3, 2]]},
        ],
    }
