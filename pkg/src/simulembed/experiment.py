"""
実験モジュール

- run_scale_experiment: (n, k, c) の格子の各セルでランダム入力を生成して埋め込み、
  最大折れ点数と上界 min{c', N^{1-1/γ}} を CSV の 1 行にする
- chains_sweep: 同じ入力で b を変えたときの点数と最大折れ点数
- vertical_shift_replay: ブロックごとに点の高さをずらして描き直し、
  uphill 性と折れ点数が変わらないことを確かめる

同じ種からは同じ CSV（バイト単位で同一）ができる。セルは並列に計算し、
結果は格子の順に並べる。
"""

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from simulembed.bookembed import ColoredGraphSet
from simulembed.engine import EmbedResult, chains_graphs, draw_paths, embed_graphs, parallel_map
from simulembed.expand import lane_demand
from simulembed.formats import write_json, write_text_atomic
from simulembed.generate import random_graph_set
from simulembed.layout import shift_block_ordinates
from simulembed.logging import RunLogger
from simulembed.uphill import UphillDrawing, draw_paths_split
from simulembed.verify import VerificationReport, check_uphill

SCALE_COLUMNS = (
    "n",
    "k",
    "c",
    "gamma",
    "case",
    "path_length",
    "max_bends",
    "graph_bends",
    "budget",
    "implied_constant",
)

SWEEP_COLUMNS = ("b", "groups", "points", "point_budget", "max_bends", "graph_bends")


@dataclass(frozen=True)
class ScaleCell:
    n: int
    k: int
    c: int

    @property
    def palette(self) -> int:
        """c = 0 は「c = n」（すべての頂点が異なる色）を意味する"""
        return self.n if self.c == 0 else min(self.c, self.n)

    def seed(self, base: int) -> int:
        # セルの位置に依存しない種（格子を並べ替えても同じ行になる）
        sequence = np.random.SeedSequence([base, self.n, self.k, self.c])
        return int(sequence.generate_state(1)[0])


def _format(value: float) -> str:
    return f"{value:.4f}"


def _gamma_text(gamma: Optional[Fraction]) -> str:
    if gamma is None:
        return ""
    return str(gamma.numerator) if gamma.denominator == 1 else f"{float(gamma):.4f}"


def _scale_row(cell: ScaleCell, result: EmbedResult) -> dict[str, str]:
    check = next(c for c in result.report.checks if c.name == "bend-bound:uphill")
    return {
        "n": str(cell.n),
        "k": str(cell.k),
        "c": str(cell.palette),
        "gamma": _gamma_text(result.gamma),
        "case": result.layout.case,
        "path_length": str(result.path_length),
        "max_bends": str(result.max_uphill_bends),
        "graph_bends": str(result.max_graph_bends),
        "budget": _format(check.stats["base"]),
        "implied_constant": _format(check.stats["implied_constant"]),
    }


def _to_csv(columns: Sequence[str], rows: Sequence[dict[str, str]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def scale_grid(
    grid_n: Sequence[int], grid_k: Sequence[int], grid_c: Sequence[int]
) -> list[ScaleCell]:
    cells = [ScaleCell(n, k, c) for n in grid_n for k in grid_k for c in grid_c]
    # c が n を超えるセルは c = n のセルと同じになるので除く
    unique: dict[tuple[int, int, int], ScaleCell] = {}
    for cell in cells:
        unique.setdefault((cell.n, cell.k, cell.palette), cell)
    return list(unique.values())


def run_scale_experiment(
    cells: Sequence[ScaleCell],
    seed: int = 0,
    threads: int = 1,
    out: Optional[Path] = None,
    axis_split: bool = True,
    logger: Optional[RunLogger] = None,
) -> str:
    """
    格子の各セルで埋め込みを計算し、CSV の文字列を返す

    out を指定すると、CSV（scale.csv）とセルごとの要約 JSON を書き出す。
    セルの計算では幾何の検証は省き、折れ点数の監査だけを行う。
    """

    def run(cell: ScaleCell) -> dict[str, str]:
        graph_set = random_graph_set(cell.n, cell.k, cell.palette, seed=cell.seed(seed))
        result = embed_graphs(graph_set, axis_split=axis_split, verify=False)
        row = _scale_row(cell, result)
        if out is not None:
            name = f"cell_n{cell.n}_k{cell.k}_c{cell.palette}.json"
            write_json(Path(out) / "cells" / name, {"row": row})
        return row

    rows = parallel_map(threads, run, list(cells))
    text = _to_csv(SCALE_COLUMNS, rows)
    if out is not None:
        write_text_atomic(Path(out) / "scale.csv", text)
    if logger is not None:
        for row in rows:
            logger.info("Scale cell", **row)
    return text


def chains_sweep(graph_set: ColoredGraphSet, bs: Sequence[int], threads: int = 1) -> str:
    """b ごとの点数と最大折れ点数を CSV の文字列にする"""
    rows = []
    for b in bs:
        result = chains_graphs(graph_set, b, verify=False, threads=threads)
        points = next(a for a in result.audits if a.name == "chains:points")
        rows.append(
            {
                "b": str(b),
                "groups": str(len(result.layout.color_groups)),
                "points": str(len(result.layout.points)),
                "point_budget": str(int(points.budget)),
                "max_bends": str(result.max_uphill_bends),
                "graph_bends": str(result.max_graph_bends),
            }
        )
    return _to_csv(SWEEP_COLUMNS, rows)


def vertical_shift_replay(
    result: EmbedResult, seed: int = 0, spread: int = 8
) -> tuple[VerificationReport, bool]:
    """
    ブロックごとに、描画の向きの座標をランダムにずらして描き直す

    x 軸のブロックに沿って描いた道（split 以外のすべての道と split の Q1）は
    x 軸のブロックごとに y 座標を、split の Q2 は y 軸のブロックごとに x 座標をずらす。

    Returns:
        (描き直した描画の uphill 検証結果, 各辺と逃げ道の折れ点数がすべて元と同じか)
    """
    rng = np.random.default_rng(seed)
    demands = [lane_demand(e, len(p)) for e, p in zip(result.embeddings, result.paths)]
    split = result.layout.axis_split
    if split is None:
        groups = [("x", list(range(len(result.paths))))]
    else:
        groups = [("x", list(split.x_paths)), ("y", list(split.y_paths))]

    redrawn: dict[int, UphillDrawing] = {}
    for axis, indices in groups:
        if not indices:
            continue
        count = len(result.layout.blocks_on(axis))
        shifts = [
            Fraction(int(rng.integers(-spread * 4, spread * 4 + 1)), 4) for _ in range(count)
        ]
        shifted = shift_block_ordinates(result.layout, shifts, axis)
        if split is None:
            drawings = draw_paths(result.paths, shifted, result.assignment, demands)
        else:
            assert result.assignment is not None
            drawings = draw_paths_split(
                result.paths, shifted, result.assignment, demands, only=indices
            )
        redrawn.update(zip(indices, drawings))

    report = VerificationReport()
    for index in sorted(redrawn):
        report.extend(check_uphill(redrawn[index]))
    unchanged = all(
        before.edge_bends == redrawn[index].edge_bends
        and [lane.polyline.bends for lane in before.lanes]
        == [lane.polyline.bends for lane in redrawn[index].lanes]
        for index, before in enumerate(result.uphill)
    )
    return report, unchanged
