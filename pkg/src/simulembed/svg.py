"""
SVG 出力モジュール

GraphDrawing を SVG 1.1 の静的な図にする。図はレイヤー（<g> 要素）に分かれている:

- blocks: 点集合のブロックの網掛け
- spine: spinal path の辺（uphill 描画、薄い線）
- edges: グラフの辺の折れ線
- vertices: 頂点（色ごとに塗り分け）

座標は有理数のまま保持されているので、書き出すときにだけ小数に丸める。
出力は決定的で、同じ描画からは同じ文字列ができる。
"""

from fractions import Fraction
from typing import Iterable, Optional, Sequence
from xml.sax.saxutils import escape

from simulembed.expand import GraphDrawing
from simulembed.layout import PointLayout
from simulembed.uphill import Point, UphillDrawing

# 1 単位あたりのピクセル数と余白
SCALE = 24
MARGIN = 24

# 色 id → 塗りの色（足りなければ循環させる）
PALETTE = (
    "#4e79a7",
    "#f28e2b",
    "#e15759",
    "#76b7b2",
    "#59a14f",
    "#edc948",
    "#b07aa1",
    "#ff9da7",
    "#9c755f",
    "#bab0ac",
)


def color_for(color: Optional[int]) -> str:
    if color is None:
        return "#333333"
    return PALETTE[(color - 1) % len(PALETTE)]


class SvgCanvas:
    """
    SVG 文字列を組み立てるクラス

    使用例:
        canvas = SvgCanvas((0, 0, 10, 5))
        canvas.group_start("edges")
        canvas.polyline([(0, 0), (3, 4)], "#000")
        canvas.group_end()
        text = canvas.get_svg()
    """

    def __init__(self, box: tuple[Fraction, Fraction, Fraction, Fraction]) -> None:
        self.x_min, self.y_min, self.x_max, self.y_max = (Fraction(v) for v in box)
        self.width = float(self.x_max - self.x_min) * SCALE + 2 * MARGIN
        self.height = float(self.y_max - self.y_min) * SCALE + 2 * MARGIN
        self.parts: list[str] = []

    def _map(self, point: Point) -> tuple[float, float]:
        # SVG は y が下向きなので反転する
        x = float(point[0] - self.x_min) * SCALE + MARGIN
        y = float(self.y_max - point[1]) * SCALE + MARGIN
        return round(x, 2), round(y, 2)

    def group_start(self, layer: str, title: Optional[str] = None) -> None:
        self.parts.append(f'<g id="{escape(layer)}">')
        if title:
            self.parts.append(f"<title>{escape(title)}</title>")

    def group_end(self) -> None:
        self.parts.append("</g>")

    def polyline(self, points: Sequence[Point], stroke: str, width: float = 1.5) -> None:
        coords = " ".join(f"{x},{y}" for x, y in map(self._map, points))
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}" stroke-linejoin="round"/>'
        )

    def circle(self, point: Point, fill: str, radius: float = 4.0, title: str = "") -> None:
        x, y = self._map(point)
        body = f"<title>{escape(title)}</title>" if title else ""
        self.parts.append(
            f'<circle cx="{x}" cy="{y}" r="{radius}" fill="{fill}" stroke="#000" '
            f'stroke-width="0.5">{body}</circle>'
        )

    def band(self, x_from: Fraction, x_to: Fraction, fill: str) -> None:
        """x 方向の区間を縦に塗る（ブロックの網掛け）"""
        left, _ = self._map((x_from, self.y_max))
        right, _ = self._map((x_to, self.y_max))
        self.parts.append(
            f'<rect x="{left}" y="0" width="{round(right - left, 2)}" '
            f'height="{round(self.height, 2)}" fill="{fill}" fill-opacity="0.08"/>'
        )

    def get_svg(self) -> str:
        header = (
            '<?xml version="1.0" standalone="no"?>\n'
            '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
            '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">\n'
            f'<svg version="1.1" width="{round(self.width, 2)}" '
            f'height="{round(self.height, 2)}" xmlns="http://www.w3.org/2000/svg">\n'
        )
        return header + "\n".join(self.parts) + "\n</svg>\n"


def _box(points: Iterable[Point]) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    xs, ys = [], []
    for x, y in points:
        xs.append(x)
        ys.append(y)
    if not xs:
        return (Fraction(0), Fraction(0), Fraction(1), Fraction(1))
    return (min(xs), min(ys), max(xs), max(ys))


def render_drawing(
    drawing: GraphDrawing,
    colors: dict[int, int],
    layout: Optional[PointLayout] = None,
    uphill: Optional[UphillDrawing] = None,
) -> str:
    """
    1 つのグラフの描画を SVG にする

    Args:
        drawing: グラフの描画
        colors: 頂点 id → 色
        layout: 指定すると x 軸のブロックを網掛けする
        uphill: 指定すると spinal path の辺を薄く重ねる
    """
    points: list[Point] = list(drawing.locations.values())
    for _, polyline in drawing.edges:
        points.extend(polyline.points)
    if uphill is not None:
        for edge in uphill.edges:
            points.extend(edge.points)
    canvas = SvgCanvas(_box(points))

    if layout is not None:
        canvas.group_start("blocks")
        for block in layout.blocks_on("x"):
            if block.size == 0:
                continue
            first = layout.points[block.start].x
            last = layout.points[block.stop - 1].x
            shade = color_for(block.color) if block.color is not None else "#888888"
            canvas.band(first - Fraction(1, 2), last + Fraction(1, 2), shade)
        canvas.group_end()

    if uphill is not None:
        canvas.group_start("spine", "spinal path")
        for edge in uphill.edges:
            canvas.polyline(edge.points, "#bbbbbb", width=0.75)
        canvas.group_end()

    canvas.group_start("edges")
    for _, polyline in drawing.edges:
        canvas.polyline(polyline.points, "#222222")
    canvas.group_end()

    canvas.group_start("vertices")
    for vertex_id, point in sorted(drawing.locations.items()):
        color = colors.get(vertex_id)
        canvas.circle(point, color_for(color), title=f"v{vertex_id} (color {color})")
    canvas.group_end()
    return canvas.get_svg()
