"""
JSON 入出力モジュール

入力（グラフ集合・整数列・k 組列）の読み込みと、計算結果の書き出しを行う。
すべての JSON はトップレベルに "format": "simulembed/1" を持つ。

数値の書き方:
- 整数はそのまま書く（符号付き 64 ビットの範囲外は FormatError）
- 整数でない有理数は {"num": 分子, "den": 分母} と書く

入力グラフ集合の例:
    {
      "format": "simulembed/1",
      "palette": 2,
      "graphs": [
        {"vertices": [[1, 1], [2, 2], [3, 1]], "edges": [[1, 2], [2, 3]]},
        {"vertices": [[1, 2], [2, 1], [3, 1]], "edges": [[1, 3], [3, 2]]}
      ]
    }

頂点は [id, 色] でも {"id": id, "color": 色} でもよい。
任意で "labels"（{"id": ラベル}）、"spine"（["1", "d0", "2", ...]）、
"pages"（辺ごとの {"left", "right", "division", "pages"}）を書ける。

ファイルの書き出しは一時ファイルに書いてから置き換える（途中で止まっても壊れない）。
"""

import json
import os
import tempfile
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from simulembed.bookembed import (
    BookEmbedding,
    ColoredGraph,
    ColoredGraphSet,
    EdgePlacement,
    ItemKind,
    Page,
    SpineItem,
    Vertex,
)
from simulembed.errors import FormatError
from simulembed.expand import GraphDrawing
from simulembed.layout import Block, LayoutPoint, PointLayout, SlotKind
from simulembed.seqpart import MonotonicPartition
from simulembed.uphill import Polyline, UphillDrawing
from simulembed.verify import VerificationReport

FORMAT_TAG = "simulembed/1"

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


# ===== 数値 =====


def check_int64(value: Any, where: str) -> int:
    """
    JSON の値が符号付き 64 ビット整数か確認する

    Raises:
        FormatError: 整数でない、または範囲外の場合
    """
    # bool は int のサブクラスなので先に除外する
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where}: 整数が必要です（{value!r}）")
    if not INT64_MIN <= value <= INT64_MAX:
        raise FormatError(f"{where}: 64 ビット整数の範囲外です（{value}）")
    return value


def number_to_json(value: Fraction | int) -> Any:
    fraction = Fraction(value)
    if fraction.denominator == 1:
        return fraction.numerator
    return {"num": fraction.numerator, "den": fraction.denominator}


def number_from_json(value: Any, where: str) -> Fraction:
    if isinstance(value, dict):
        if set(value) != {"num", "den"}:
            raise FormatError(f"{where}: 有理数は {{'num', 'den'}} で書いてください")
        den = check_int64(value["den"], where)
        if den == 0:
            raise FormatError(f"{where}: 分母が 0 です")
        return Fraction(check_int64(value["num"], where), den)
    return Fraction(check_int64(value, where))


def delta_from_text(text: str) -> Fraction:
    """"1/2" や "0.5" のような文字列を Fraction にする"""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise FormatError(f"delta を有理数として読めません: {text!r}") from e


def _point_to_json(point: tuple[Fraction, Fraction]) -> list[Any]:
    return [number_to_json(point[0]), number_to_json(point[1])]


def _point_from_json(value: Any, where: str) -> tuple[Fraction, Fraction]:
    if not isinstance(value, list) or len(value) != 2:
        raise FormatError(f"{where}: 座標は [x, y] で書いてください")
    return (number_from_json(value[0], where), number_from_json(value[1], where))


def to_plain(value: Any) -> Any:
    """検証の証拠などを JSON に書ける値へ変換する"""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return number_to_json(value)
    if isinstance(value, float):
        return round(value, 6)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, SpineItem):
        return str(value)
    if isinstance(value, dict):
        return {str(to_plain(k)): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=repr) if isinstance(value, (set, frozenset)) else value
        return [to_plain(item) for item in items]
    return str(value)


# ===== ファイル =====


def read_json(path: Path) -> dict[str, Any]:
    """
    JSON ファイルを読み込み、format タグを確認する

    Raises:
        FileNotFoundError: ファイルが存在しない場合
        FormatError: JSON として読めない、またはタグが違う場合
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"入力ファイルが見つかりません: {path}")
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError(f"JSON の解析に失敗しました: {path}: {e}") from e
    if not isinstance(data, dict):
        raise FormatError(f"トップレベルはオブジェクトでなければなりません: {path}")
    tag = data.get("format", FORMAT_TAG)
    if tag != FORMAT_TAG:
        raise FormatError(f"未対応の format です: {tag!r}（{FORMAT_TAG} のみ対応）")
    return data


def write_json(path: Path, data: dict[str, Any]) -> Path:
    """
    JSON を一時ファイル経由で書き出す

    キーの順序を含めて出力は決定的（同じ入力なら同じバイト列）。
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"format": FORMAT_TAG, **data}
    text = json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    write_text_atomic(path, text)
    return path


def write_text_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(temp, path)
    except BaseException:
        if os.path.exists(temp):
            os.unlink(temp)
        raise


# ===== 入力 =====


def parse_spine_item(text: Any, where: str) -> SpineItem:
    """"5" → 頂点 5、"d2" → 分割頂点 2、"p0" → ダミー 0"""
    if isinstance(text, int) and not isinstance(text, bool):
        return SpineItem(ItemKind.VERTEX, check_int64(text, where))
    if not isinstance(text, str) or not text:
        raise FormatError(f"{where}: spine の要素は文字列か整数で書いてください")
    kinds = {"d": ItemKind.DIVISION, "p": ItemKind.DUMMY}
    try:
        if text[0] in kinds:
            return SpineItem(kinds[text[0]], check_int64(int(text[1:]), where))
        return SpineItem(ItemKind.VERTEX, check_int64(int(text), where))
    except ValueError as e:
        raise FormatError(f"{where}: spine の要素を読めません: {text!r}") from e


def _parse_page(value: Any, where: str) -> Page:
    try:
        return Page(value)
    except ValueError as e:
        raise FormatError(f"{where}: ページは 'above' か 'below' です: {value!r}") from e


def _parse_placement(value: Any, where: str) -> EdgePlacement:
    if not isinstance(value, dict):
        raise FormatError(f"{where}: 辺の描き方はオブジェクトで書いてください")
    division = value.get("division")
    pages = value.get("pages", [])
    if not isinstance(pages, list) or len(pages) != (1 if division is None else 2):
        raise FormatError(f"{where}: pages の個数が分割頂点の有無と合いません")
    return EdgePlacement(
        left=check_int64(value.get("left"), f"{where}.left"),
        right=check_int64(value.get("right"), f"{where}.right"),
        division=None if division is None else check_int64(division, f"{where}.division"),
        pages=tuple(_parse_page(p, where) for p in pages),
    )


def _parse_vertex(value: Any, where: str) -> Vertex:
    if isinstance(value, list) and len(value) == 2:
        return Vertex(check_int64(value[0], where), check_int64(value[1], where))
    if isinstance(value, dict) and "id" in value and "color" in value:
        return Vertex(check_int64(value["id"], where), check_int64(value["color"], where))
    raise FormatError(f"{where}: 頂点は [id, 色] か {{'id', 'color'}} で書いてください")


def _parse_graph(value: Any, index: int) -> ColoredGraph:
    where = f"graphs[{index}]"
    if not isinstance(value, dict):
        raise FormatError(f"{where}: グラフはオブジェクトで書いてください")
    vertices = value.get("vertices")
    edges = value.get("edges", [])
    if not isinstance(vertices, list) or not isinstance(edges, list):
        raise FormatError(f"{where}: vertices と edges はリストで書いてください")

    parsed_edges = []
    for position, edge in enumerate(edges):
        if not isinstance(edge, list) or len(edge) != 2:
            raise FormatError(f"{where}.edges[{position}]: 辺は [u, v] で書いてください")
        parsed_edges.append(
            (check_int64(edge[0], f"{where}.edges"), check_int64(edge[1], f"{where}.edges"))
        )

    labels = None
    if value.get("labels") is not None:
        raw = value["labels"]
        if not isinstance(raw, dict):
            raise FormatError(f"{where}.labels: {{'頂点 id': ラベル}} で書いてください")
        try:
            labels = {int(k): check_int64(v, f"{where}.labels") for k, v in raw.items()}
        except ValueError as e:
            raise FormatError(f"{where}.labels: 頂点 id を読めません") from e

    spine = None
    if value.get("spine") is not None:
        spine = tuple(parse_spine_item(item, f"{where}.spine") for item in value["spine"])
    pages = None
    if value.get("pages") is not None:
        pages = tuple(
            _parse_placement(item, f"{where}.pages[{i}]") for i, item in enumerate(value["pages"])
        )

    return ColoredGraph(
        vertices=tuple(_parse_vertex(v, f"{where}.vertices") for v in vertices),
        edges=tuple(parsed_edges),
        labels=labels,
        spine=spine,
        pages=pages,
    )


def graph_set_from_json(data: dict[str, Any]) -> ColoredGraphSet:
    """
    入力 JSON から ColoredGraphSet を作る

    色は 1..palette でなければならない（palette + 1 は分割頂点の予約色）。
    palette を省略した場合は、現れる色の最大値を使う。

    Raises:
        FormatError: スキーマ違反、または色が範囲外の場合
        MalformedInputError: グラフが単純グラフでない場合
    """
    graphs_data = data.get("graphs")
    if not isinstance(graphs_data, list):
        raise FormatError("'graphs' はリストで書いてください")
    graphs = tuple(_parse_graph(g, i) for i, g in enumerate(graphs_data))

    colors = {v.color for g in graphs for v in g.vertices}
    palette = data.get("palette")
    palette = max(colors, default=0) if palette is None else check_int64(palette, "palette")
    out_of_range = sorted(c for c in colors if not 1 <= c <= palette)
    if out_of_range:
        raise FormatError(f"色は 1..{palette} でなければなりません: {out_of_range[:5]}")

    for graph in graphs:
        graph.validate()
    return ColoredGraphSet(graphs=graphs, palette=palette)


def graph_set_to_json(graph_set: ColoredGraphSet) -> dict[str, Any]:
    graphs = []
    for graph in graph_set.graphs:
        entry: dict[str, Any] = {
            "vertices": [[v.id, v.color] for v in graph.vertices],
            "edges": [list(edge) for edge in graph.edges],
        }
        if graph.labels is not None:
            entry["labels"] = {str(k): v for k, v in sorted(graph.labels.items())}
        graphs.append(entry)
    return {"palette": graph_set.palette, "graphs": graphs}


def load_graph_set(path: Path) -> ColoredGraphSet:
    return graph_set_from_json(read_json(path))


def sequence_from_json(data: dict[str, Any]) -> tuple[str, list[Any]]:
    """
    分割の入力を読む

    {"sequence": [整数, ...]} なら ("sequence", 整数列)、
    {"tuples": [[整数, ...], ...]} なら ("tuples", k 組の列) を返す。
    """
    if "sequence" in data:
        raw = data["sequence"]
        if not isinstance(raw, list):
            raise FormatError("'sequence' はリストで書いてください")
        return "sequence", [check_int64(v, f"sequence[{i}]") for i, v in enumerate(raw)]
    if "tuples" in data:
        raw = data["tuples"]
        if not isinstance(raw, list):
            raise FormatError("'tuples' はリストで書いてください")
        tuples = []
        for i, item in enumerate(raw):
            if not isinstance(item, list):
                raise FormatError(f"tuples[{i}]: 組はリストで書いてください")
            tuples.append(tuple(check_int64(v, f"tuples[{i}]") for v in item))
        return "tuples", tuples
    raise FormatError("'sequence' か 'tuples' のどちらかが必要です")


# ===== 出力 =====


def partition_to_json(partition: MonotonicPartition) -> dict[str, Any]:
    return {
        "runs": [
            {"indices": list(run.indices), "directions": [d.value for d in run.directions]}
            for run in partition.runs
        ],
        "source_length": partition.source_length,
        "delta": number_to_json(partition.delta),
        "constant": number_to_json(partition.constant),
        "hypothesis_held": partition.hypothesis_held,
    }


def embedding_to_json(embedding: BookEmbedding) -> dict[str, Any]:
    return {
        "method": embedding.method,
        "spine": [str(item) for item in embedding.spine],
        "pages": [
            {
                "left": p.left,
                "right": p.right,
                "division": p.division,
                "pages": [page.value for page in p.pages],
            }
            for p in embedding.placements
        ],
    }


def _block_to_json(block: Block) -> dict[str, Any]:
    entry: dict[str, Any] = {
        "id": block.id,
        "tag": block.tag,
        "axis": block.axis,
        "start": block.start,
        "stop": block.stop,
    }
    if block.color is not None:
        entry["color"] = block.color
    return entry


def layout_to_json(layout: PointLayout) -> dict[str, Any]:
    points = []
    for point in layout.points:
        entry: dict[str, Any] = {
            "at": _point_to_json((point.x, point.y)),
            "block": point.block,
            "kind": point.kind.value,
        }
        for name in ("color", "label", "chain", "y_block"):
            if getattr(point, name) is not None:
                entry[name] = getattr(point, name)
        points.append(entry)
    data: dict[str, Any] = {
        "case": layout.case,
        "points": points,
        "blocks": [
            _block_to_json(b) for b in layout.blocks
        ],
    }
    if layout.axis_split is not None:
        data["axis_split"] = {
            "x_paths": list(layout.axis_split.x_paths),
            "y_paths": list(layout.axis_split.y_paths),
        }
    if layout.color_groups:
        data["color_groups"] = [list(group) for group in layout.color_groups]
    return data


def _polyline_to_json(polyline: Polyline) -> list[list[Any]]:
    return [_point_to_json(p) for p in polyline.points]


def uphill_drawing_to_json(drawing: UphillDrawing) -> dict[str, Any]:
    return {
        "path_index": drawing.path_index,
        "orientation": drawing.orientation,
        "placements": list(drawing.placements),
        "edges": [
            {"rank": rank, "points": _polyline_to_json(edge)}
            for rank, edge in zip(drawing.edge_ranks, drawing.edges)
        ],
        "lanes": [
            {
                "position": lane.position,
                "side": lane.side.value,
                "slot": lane.slot,
                "rank": lane.rank,
                "points": _polyline_to_json(lane.polyline),
            }
            for lane in drawing.lanes
        ],
        "max_bends": drawing.max_bends,
    }


def graph_drawing_to_json(drawing: GraphDrawing) -> dict[str, Any]:
    return {
        "graph_index": drawing.graph_index,
        "orientation": drawing.orientation,
        "uphill_bends": drawing.uphill_bends,
        "vertices": [
            {"id": vertex_id, "at": _point_to_json(point)}
            for vertex_id, point in sorted(drawing.locations.items())
        ],
        "edges": [
            {"edge": list(edge), "points": _polyline_to_json(polyline)}
            for edge, polyline in drawing.edges
        ],
        "max_bends": drawing.max_bends,
    }


def graph_drawing_from_json(data: dict[str, Any]) -> GraphDrawing:
    """graph_drawing_to_json の出力を読み戻す（verify コマンド用）"""
    try:
        locations = {
            check_int64(v["id"], "vertices.id"): _point_from_json(v["at"], "vertices.at")
            for v in data["vertices"]
        }
        edges = []
        for entry in data["edges"]:
            u, v = (check_int64(x, "edges.edge") for x in entry["edge"])
            points = tuple(_point_from_json(p, "edges.points") for p in entry["points"])
            edges.append(((u, v), Polyline(points)))
        return GraphDrawing(
            graph_index=check_int64(data["graph_index"], "graph_index"),
            orientation=str(data.get("orientation", "y")),
            locations=locations,
            edges=tuple(edges),
            uphill_bends=check_int64(data.get("uphill_bends", 0), "uphill_bends"),
        )
    except (KeyError, TypeError) as e:
        raise FormatError(f"描画 JSON の形式が正しくありません: {e}") from e


def report_to_json(report: VerificationReport, extra: Optional[dict] = None) -> dict[str, Any]:
    data: dict[str, Any] = {
        "valid": report.is_valid,
        "checks": [
            {
                "name": check.name,
                "passed": check.passed,
                "witnesses": to_plain(check.witnesses),
                "stats": to_plain(check.stats),
            }
            for check in report.checks
        ],
    }
    if extra:
        data.update(to_plain(extra))
    return data


def layout_from_json(data: dict[str, Any]) -> PointLayout:
    """
    layout_to_json の出力から点とブロックを読み戻す（verify コマンド用）

    分割の記録や split の y 軸の並びは戻らない。色の確認と図の網掛けには十分。
    """
    try:
        points = []
        for entry in data["points"]:
            x, y = _point_from_json(entry["at"], "points.at")
            points.append(
                LayoutPoint(
                    x,
                    y,
                    check_int64(entry["block"], "points.block"),
                    SlotKind(entry["kind"]),
                    entry.get("color"),
                    entry.get("label"),
                    entry.get("chain"),
                    entry.get("y_block"),
                )
            )
        blocks = tuple(
            Block(
                b["id"], b["tag"], b["start"], b["stop"], b.get("axis", "x"), b.get("color")
            )
            for b in data["blocks"]
        )
        return PointLayout(
            case=str(data["case"]),
            points=tuple(points),
            blocks=blocks,
            color_groups=tuple(tuple(g) for g in data.get("color_groups", [])),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"配置 JSON の形式が正しくありません: {e}") from e
