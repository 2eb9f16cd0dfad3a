"""
同時埋め込みの実行モジュール

入力グラフ集合から、すべてのグラフの描画と検証結果までを通しで計算する。

embed（色付き同時埋め込み）の流れ:
    1. 色互換性の確認
    2. 各グラフの本埋め込み（グラフごとに並列）
    3. spinal path の取り出しと長さの調整
    4. 点集合の候補（色ブロック / 単調部分列ブロック）を作り、
       軸ごとのブロック数が少ない方を選ぶ
    5. 各道の uphill 描画（逃げ道つき）
    6. 元のグラフの描画への拡張
    7. 検証と上界の監査

chains（普遍点集合）は 4 の代わりに色グループのチェーン配置を使う。

使用例:
    from simulembed.engine import embed_graphs

    result = embed_graphs(graph_set)
    print(result.report.is_valid, result.layout.case)
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence, TypeVar

from simulembed.bookembed import (
    BookEmbedding,
    ColoredGraphSet,
    SpinalPath,
    compute_book_embedding,
    extract_spinal_paths,
    require_compatible,
)
from simulembed.expand import (
    EXPANSION_CONSTANT,
    EXPANSION_FLOOR,
    GraphDrawing,
    expand_drawing,
    lane_demand,
)
from simulembed.layout import (
    LabelAssignment,
    PointLayout,
    build_tuples,
    layout_case1,
    layout_case2,
    layout_chains,
    layout_split,
)
from simulembed.logging import RunLogger
from simulembed.seqpart import (
    DEFAULT_DELTA,
    LemmaMainResult,
    MonotonicPartition,
    greedy_partition,
    lemma_main_extract,
    tuple_partition,
)
from simulembed.uphill import (
    UphillDrawing,
    draw_path_case1,
    draw_path_chains,
    draw_paths_split,
)
from simulembed.verify import (
    BendParams,
    VerificationReport,
    check_bend_bounds,
    check_book_embedding,
    check_color_consistency,
    check_color_placement,
    check_expansion,
    check_partition,
    check_planarity,
    check_uphill,
)

# 折れ点の上界の定数（embed）: uphill ≤ 8·min{c', N^{1-1/γ}}、グラフ ≤ 100·min{...}
UPHILL_FACTOR = 8
GRAPH_FACTOR = 100

# 折れ点の上界の定数（chains）: uphill ≤ 4b、グラフ ≤ 25b
CHAIN_UPHILL_FACTOR = 4
CHAIN_GRAPH_FACTOR = 25

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class BoundAudit:
    """
    上界の監査結果 1 件

    Attributes:
        name: 監査項目
        measured: 実測値
        budget: 上界
        constant: 実測値から逆算した定数
    """

    name: str
    measured: float
    budget: float
    constant: float

    @property
    def within(self) -> bool:
        return self.measured <= self.budget


@dataclass
class EmbedResult:
    """
    embed / chains の計算結果

    Attributes:
        mode: "embed" または "chains"
        graph_set: 入力
        embeddings: 各グラフの本埋め込み
        paths: 長さをそろえた spinal path
        layout: 選ばれた点集合
        assignment: ラベル付け（単調部分列ブロックを使った場合）
        uphill: 各道の uphill 描画
        drawings: 各グラフの描画
        report: 検証結果（verify=False なら監査用の項目だけ）
        audits: 上界の監査結果
        candidates: 候補の配置ごとの軸あたりのブロック数
        gamma: 上界の指数 γ（embed のみ）
    """

    mode: str
    graph_set: ColoredGraphSet
    embeddings: list[BookEmbedding]
    paths: list[SpinalPath]
    layout: PointLayout
    assignment: Optional[LabelAssignment]
    uphill: list[UphillDrawing]
    drawings: list[GraphDrawing]
    report: VerificationReport = field(default_factory=VerificationReport)
    audits: list[BoundAudit] = field(default_factory=list)
    candidates: dict[str, int] = field(default_factory=dict)
    gamma: Optional[Fraction] = None

    @property
    def path_length(self) -> int:
        return len(self.paths[0]) if self.paths else 0

    @property
    def max_uphill_bends(self) -> int:
        return max((d.max_bends for d in self.uphill), default=0)

    @property
    def max_graph_bends(self) -> int:
        return max((d.max_bends for d in self.drawings), default=0)


def parallel_map(threads: int, fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """items の順序を保ったまま fn を並列に適用する"""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _log(logger: Optional[RunLogger], level: str, message: str, **kwargs: Any) -> None:
    if logger is not None:
        getattr(logger, level)(message, **kwargs)


def effective_exponent(k: int, axis_split: bool, delta: Fraction = DEFAULT_DELTA) -> Fraction:
    """
    ブロック数の指数 δ' = δ^{軸あたりの次元数}

    δ = 1/2 なら 1/γ（γ = 2^{⌈k/2⌉}、split しない場合は 2^k）。
    """
    arity = math.ceil(k / 2) if axis_split and k >= 2 else max(k, 1)
    return Fraction(delta) ** arity


def _embed_all(
    graph_set: ColoredGraphSet, threads: int, logger: Optional[RunLogger]
) -> tuple[list[BookEmbedding], list[SpinalPath]]:
    require_compatible(graph_set)
    embeddings = parallel_map(
        threads,
        lambda item: compute_book_embedding(item[1], item[0]),
        list(enumerate(graph_set.graphs)),
    )
    for index, embedding in enumerate(embeddings):
        _log(
            logger,
            "debug",
            "Book embedding",
            graph=index,
            method=embedding.method,
            divisions=embedding.division_count,
        )
    paths = extract_spinal_paths(graph_set, embeddings)
    return embeddings, paths


def _partition_sources(
    layout: PointLayout, assignment: Optional[LabelAssignment]
) -> list[list[tuple[int, ...]]]:
    """配置に使った単調分割の元になった k 組列"""
    if assignment is None:
        return []
    if layout.axis_split is None:
        return [list(assignment.tuples)]
    split = layout.axis_split
    return [
        [tuple(t[i] for i in split.x_paths) for t in assignment.tuples],
        [tuple(t[i] for i in split.y_paths) for t in assignment.tuples],
    ]


def _verify_common(
    result: EmbedResult, threads: int, cross_check: bool
) -> VerificationReport:
    """本埋め込み・平面性・uphill 性の検証（embed と chains で共通）"""
    report = VerificationReport()
    pairs = list(zip(result.graph_set.graphs, result.embeddings))
    for part in parallel_map(threads, lambda p: check_book_embedding(*p), pairs):
        report.extend(part)
    for part in parallel_map(threads, check_uphill, result.uphill):
        report.extend(part)
    for part in parallel_map(threads, lambda d: check_planarity(d, cross_check), result.drawings):
        report.extend(part)
    return report


def _bend_audits(report: VerificationReport) -> list[BoundAudit]:
    audits = []
    for check in report.checks:
        if check.name.startswith("bend-bound:"):
            audits.append(
                BoundAudit(
                    check.name,
                    check.stats["max_bends"],
                    check.stats["budget"],
                    check.stats["implied_constant"],
                )
            )
    return audits


def _record_audits(result: EmbedResult, logger: Optional[RunLogger]) -> None:
    for audit in result.audits:
        if logger is not None:
            logger.log_bound_audit(audit.name, audit.measured, audit.budget, audit.constant)


def _choose_layout(
    paths: Sequence[SpinalPath], delta: Fraction, axis_split: bool
) -> tuple[PointLayout, Optional[LabelAssignment], dict[str, int]]:
    """
    色ブロック配置と単調部分列ブロック配置のうち、軸あたりのブロック数が少ない方を選ぶ

    同数なら色ブロック配置を選ぶ。
    """
    color_layout = layout_case1(paths)
    assignment = build_tuples(paths)
    if axis_split and len(paths) >= 2:
        run_layout = layout_split(paths, assignment, delta)
    else:
        run_layout = layout_case2(assignment.tuples, assignment.colors, delta)
    candidates = {
        color_layout.case: color_layout.worst_block_count,
        run_layout.case: run_layout.worst_block_count,
    }
    if run_layout.worst_block_count < color_layout.worst_block_count:
        return run_layout, assignment, candidates
    return color_layout, None, candidates


def draw_paths(
    paths: Sequence[SpinalPath],
    layout: PointLayout,
    assignment: Optional[LabelAssignment],
    demands: Sequence[Sequence[tuple[int, int]]],
    threads: int = 1,
) -> list[UphillDrawing]:
    """
    選んだ配置の種類に合わせて、すべての道を uphill に描く

    同じ配置で描き直す（y 座標をずらした配置など）ときにも使う。
    """
    if layout.case == "chains":
        return parallel_map(
            threads, lambda i: draw_path_chains(paths[i], layout, demands[i]), range(len(paths))
        )
    if assignment is None:
        return parallel_map(
            threads, lambda i: draw_path_case1(paths[i], layout, demands[i]), range(len(paths))
        )
    return draw_paths_split(paths, layout, assignment, demands)


def embed_graphs(
    graph_set: ColoredGraphSet,
    delta: Fraction = DEFAULT_DELTA,
    axis_split: bool = True,
    verify: bool = True,
    threads: int = 1,
    logger: Optional[RunLogger] = None,
    cross_check: bool = False,
) -> EmbedResult:
    """
    色互換な平面グラフ集合の同時埋め込みを計算する

    Args:
        graph_set: 入力グラフ集合
        delta: 単調分割の指数（既定値 1/2）
        axis_split: True なら道を x 軸と y 軸に半分ずつ割り振る
        verify: True なら平面性・uphill 性・色の一致も検証する
        threads: 並列に処理するワーカー数
        logger: ログ出力先（省略可）
        cross_check: True なら平面性の判定を総当たりとも突き合わせる

    Returns:
        EmbedResult

    Raises:
        CompatibilityError: 色互換でない場合
        PlanarityError: 非平面グラフを含む場合
    """
    _log(logger, "info", "Embedding started", graphs=graph_set.k, palette=graph_set.palette)
    embeddings, paths = _embed_all(graph_set, threads, logger)
    layout, assignment, candidates = _choose_layout(paths, delta, axis_split)
    _log(logger, "info", "Layout chosen", case=layout.case, points=len(layout.points), **candidates)

    demands = [lane_demand(e, len(p)) for e, p in zip(embeddings, paths)]
    uphill = draw_paths(paths, layout, assignment, demands, threads)
    drawings = parallel_map(
        threads, lambda pair: expand_drawing(*pair), list(zip(embeddings, uphill))
    )

    exponent = effective_exponent(graph_set.k, axis_split, delta)
    result = EmbedResult(
        mode="embed",
        graph_set=graph_set,
        embeddings=embeddings,
        paths=paths,
        layout=layout,
        assignment=assignment,
        uphill=uphill,
        drawings=drawings,
        candidates=candidates,
        gamma=1 / exponent,
    )

    report = _verify_common(result, threads, cross_check) if verify else VerificationReport()
    if verify:
        report.extend(check_color_consistency(graph_set, drawings))

    # ブロック数の上界 (3-2δ')/(1-δ')·N^{1-δ'} が 4·N^{1-δ'} を超える δ' > 1/2 では定数を広げる
    block_constant = max(4.0, float((3 - 2 * exponent) / (1 - exponent)))
    common = dict(mode="embed", n=result.path_length, k=graph_set.k, c=graph_set.palette + 1)
    report.extend(
        check_bend_bounds(
            uphill,
            BendParams(
                factor=UPHILL_FACTOR * block_constant / 4,
                gamma=1 / exponent,
                label="uphill",
                **common,
            ),
        )
    )
    report.extend(
        check_bend_bounds(
            drawings,
            BendParams(
                factor=GRAPH_FACTOR * block_constant / 4,
                gamma=1 / exponent,
                label="graph",
                **common,
            ),
        )
    )
    report.extend(check_expansion(drawings, EXPANSION_CONSTANT, EXPANSION_FLOOR))

    for partition, source in zip(layout.partitions, _partition_sources(layout, assignment)):
        report.extend(check_partition(partition, source))

    result.report = report
    result.audits = _bend_audits(report) + _partition_audits(layout.partitions)
    _record_audits(result, logger)
    _log_outcome(result, logger)
    return result


def _partition_audits(partitions: Sequence[MonotonicPartition]) -> list[BoundAudit]:
    return [
        BoundAudit(
            f"partition:{index}",
            len(partition.runs),
            partition.bound,
            partition.implied_constant,
        )
        for index, partition in enumerate(partitions)
    ]


def _log_outcome(result: EmbedResult, logger: Optional[RunLogger]) -> None:
    _log(
        logger,
        "info",
        "Embedding finished",
        mode=result.mode,
        uphill_bends=result.max_uphill_bends,
        graph_bends=result.max_graph_bends,
        valid=result.report.is_valid,
    )
    for failure in result.report.failures:
        _log(logger, "error", "Check failed", check=failure.name, witness=failure.witnesses[:1])


def chains_graphs(
    graph_set: ColoredGraphSet,
    b: int,
    verify: bool = True,
    threads: int = 1,
    logger: Optional[RunLogger] = None,
    cross_check: bool = False,
) -> EmbedResult:
    """
    色グループのチェーン配置（点数 N⌈c'/b⌉ 以下）の上にすべてのグラフを描く

    異なるグラフが同じ色の別の点を使うことがあるので、同時埋め込みにはならない。
    代わりに、各頂点が自分の色の点に置かれていることを検証する。

    Raises:
        ParameterError: b < 1 の場合
        CompatibilityError: 色互換でない場合
        PlanarityError: 非平面グラフを含む場合
    """
    _log(logger, "info", "Chains started", graphs=graph_set.k, b=b)
    embeddings, paths = _embed_all(graph_set, threads, logger)
    layout = layout_chains(paths, b)
    demands = [lane_demand(e, len(p)) for e, p in zip(embeddings, paths)]
    uphill = draw_paths(paths, layout, None, demands, threads)
    drawings = parallel_map(
        threads, lambda pair: expand_drawing(*pair), list(zip(embeddings, uphill))
    )
    result = EmbedResult(
        mode="chains",
        graph_set=graph_set,
        embeddings=embeddings,
        paths=paths,
        layout=layout,
        assignment=None,
        uphill=uphill,
        drawings=drawings,
        candidates={layout.case: layout.worst_block_count},
    )

    report = _verify_common(result, threads, cross_check) if verify else VerificationReport()
    if verify:
        report.extend(check_color_placement(graph_set, drawings, layout))

    groups = len(layout.color_groups)
    common = dict(mode="chains", n=result.path_length, k=graph_set.k, c=graph_set.palette + 1)
    report.extend(
        check_bend_bounds(
            uphill, BendParams(factor=CHAIN_UPHILL_FACTOR, b=groups, label="uphill", **common)
        )
    )
    report.extend(
        check_bend_bounds(
            drawings, BendParams(factor=CHAIN_GRAPH_FACTOR, b=groups, label="graph", **common)
        )
    )
    report.extend(check_expansion(drawings, EXPANSION_CONSTANT, EXPANSION_FLOOR))

    colors = len({color for path in paths for color in path.colors})
    point_budget = result.path_length * math.ceil(colors / b) if colors else 0
    result.report = report
    result.audits = _bend_audits(report) + [
        BoundAudit(
            "chains:points",
            len(layout.points),
            point_budget,
            len(layout.points) / result.path_length if result.path_length else 0.0,
        )
    ]
    _record_audits(result, logger)
    _log_outcome(result, logger)
    return result


@dataclass
class PartitionResult:
    """
    partition コマンドの計算結果

    Attributes:
        kind: "sequence" または "tuples"
        partition: 単調分割
        report: 分割の検証結果
        audit: 個数の上界の監査
        lemma_main: 整数列の場合の、値の種類数を使った抽出結果
    """

    kind: str
    partition: MonotonicPartition
    report: VerificationReport
    audit: BoundAudit
    lemma_main: Optional[LemmaMainResult] = None


def partition_values(
    kind: str,
    values: Sequence[Any],
    delta: Fraction = DEFAULT_DELTA,
    logger: Optional[RunLogger] = None,
) -> PartitionResult:
    """
    整数列または k 組の列を単調分割し、検証と監査を付けて返す

    Raises:
        ParameterError: delta が範囲外の場合、整数列が 2^{1/δ} より短い場合
        MalformedInputError: 組の次元がそろっていない場合
    """
    if kind == "sequence":
        partition = greedy_partition(values, delta)
        lemma = lemma_main_extract(values)
    else:
        partition = tuple_partition(values, delta)
        lemma = None
    report = check_partition(partition, values)
    audit = BoundAudit(
        "partition", len(partition.runs), partition.bound, partition.implied_constant
    )
    if logger is not None:
        logger.log_bound_audit(audit.name, audit.measured, audit.budget, audit.constant)
        if not partition.hypothesis_held:
            logger.warning("Extraction length fell below n^delta", delta=partition.delta)
        if lemma is not None and not lemma.preconditions_met:
            logger.warning("Preconditions of the distinct-value bound do not hold")
    return PartitionResult(kind, partition, report, audit, lemma)
