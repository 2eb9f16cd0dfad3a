"""
メインエントリーポイント

python -m simulembed で実行可能にする

click ライブラリを使用してコマンドラインインターフェース (CLI) を構築している。
サブコマンド:
- embed: 色互換な平面グラフ集合の同時埋め込み
- chains: 色グループのチェーン配置の上への描画
- partition: 整数列 / k 組列の単調分割
- verify: 書き出し済みの出力ディレクトリの再検証
- scale: (n, k, c) の格子での折れ点数の測定

終了コード:
    0 成功 / 1 検証失敗 / 2 入力・形式・設定・引数の誤り / 3 非平面グラフ / 4 色互換でない
"""

import csv
import io
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Optional

import click
from rich.console import Console
from rich.table import Table

# 自作モジュールのインポート
from simulembed.config import RunConfig, load_config, resolve_threads
from simulembed.engine import (
    BoundAudit,
    EmbedResult,
    chains_graphs,
    embed_graphs,
    partition_values,
)
from simulembed.errors import (
    CompatibilityError,
    ConfigError,
    EmptySequenceError,
    FormatError,
    MalformedInputError,
    ParameterError,
    PlanarityError,
    SimulembedError,
)
from simulembed.expand import EXPANSION_CONSTANT, EXPANSION_FLOOR
from simulembed.experiment import chains_sweep, run_scale_experiment, scale_grid
from simulembed.formats import (
    delta_from_text,
    embedding_to_json,
    graph_drawing_from_json,
    graph_drawing_to_json,
    graph_set_from_json,
    graph_set_to_json,
    layout_from_json,
    layout_to_json,
    load_graph_set,
    number_to_json,
    partition_to_json,
    read_json,
    report_to_json,
    sequence_from_json,
    uphill_drawing_to_json,
    write_json,
    write_text_atomic,
)
from simulembed.logging import RunLogger
from simulembed.report import ReportGenerator
from simulembed.svg import render_drawing
from simulembed.verify import (
    VerificationReport,
    check_color_consistency,
    check_color_placement,
    check_expansion,
    check_planarity,
)

# rich の Console オブジェクト（見やすい出力用）
console = Console()

# 終了コード
EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2
EXIT_PLANARITY = 3
EXIT_COMPATIBILITY = 4

# 入力・形式・設定・引数の誤りとして終了コード 2 にまとめる例外
_INPUT_ERRORS = (
    FileNotFoundError,
    FormatError,
    ConfigError,
    ParameterError,
    MalformedInputError,
    EmptySequenceError,
)


@contextmanager
def _exit_on_error() -> Iterator[None]:
    """ドメイン例外を赤字のメッセージと終了コードに変換する"""
    try:
        yield
    except PlanarityError as e:
        console.print(f"[red]エラー: {e}[/red]")
        console.print(f"  グラフ {e.graph_index} の Kuratowski 部分グラフの辺:")
        for u, v in e.obstruction:
            console.print(f"    ({u}, {v})")
        raise SystemExit(EXIT_PLANARITY)
    except CompatibilityError as e:
        console.print(f"[red]エラー: {e}[/red]")
        for violation in e.violations[:10]:
            console.print(f"  (色, グラフ, 基準の個数, 実際の個数) = {violation}")
        raise SystemExit(EXIT_COMPATIBILITY)
    except _INPUT_ERRORS as e:
        console.print(f"[red]エラー: {e}[/red]")
        raise SystemExit(EXIT_INPUT)
    except SimulembedError as e:
        # LayoutError / ConsistencyError は内部の不変条件の破れ
        console.print(f"[red]エラー: 内部の整合性検査に失敗しました: {e}[/red]")
        raise SystemExit(EXIT_VERIFICATION)


def _build_config(mode: str, config_path: Optional[str], **overrides: Any) -> RunConfig:
    """
    設定ファイルとコマンドライン引数から RunConfig を組み立てる

    優先順位はコマンドライン引数 > 設定ファイル > デフォルト値。

    Raises:
        FileNotFoundError: 設定ファイルが存在しない場合
        ConfigError: 設定が不正な場合
    """
    config = load_config(Path(config_path)) if config_path else RunConfig()
    delta = overrides.pop("delta", None)
    if delta is not None:
        overrides["delta"] = delta_from_text(delta)
    for name in ("input", "out"):
        if overrides.get(name) is not None:
            overrides[name] = Path(overrides[name])
    config = config.merged(mode=mode, **overrides)
    config = config.merged(threads=resolve_threads(config.threads))
    config.validate()
    return config


def _config_option(fn: Any) -> Any:
    return click.option(
        "--config",
        "-c",
        "config_path",
        default=None,
        type=click.Path(exists=False),
        help="設定ファイル（TOML）のパス",
    )(fn)


def _run_options(fn: Any) -> Any:
    """embed / chains に共通のオプション"""
    options = [
        click.option("--input", "input_path", default=None, help="入力グラフ集合の JSON"),
        click.option("--out", default=None, help="出力ディレクトリ"),
        click.option("--threads", type=int, default=None, help="並列に処理するワーカー数"),
        click.option("--svg/--no-svg", default=None, help="SVG も書き出す"),
        click.option("--verify/--no-verify", default=None, help="出力を検証する"),
        click.option(
            "--cross-check",
            is_flag=True,
            default=False,
            help="平面性の判定を総当たりとも突き合わせる（小さな入力向け）",
        ),
        click.option("--verbose", "-v", is_flag=True, default=False, help="詳細な出力を表示"),
        _config_option,
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


# @click.group() デコレータは、このコマンドが
# サブコマンドを持つグループコマンドであることを示す
@click.group()
@click.version_option()  # --version オプションを自動追加
def main() -> None:
    """彩色平面グラフの同時埋め込みを計算するツール"""
    pass


# ===== embed / chains =====


def _write_outputs(result: EmbedResult, config: RunConfig, extra: dict[str, Any]) -> None:
    """
    計算結果を出力ディレクトリに書き出す

    出力:
        input.json, run.json, layout.json, report.json, report.md,
        embeddings/graph_<i>.json, uphill/path_<i>.json, drawings/graph_<i>.json,
        svg/graph_<i>.svg（--svg の場合）
    """
    out = config.out
    graph_set = result.graph_set
    write_json(out / "input.json", graph_set_to_json(graph_set))
    write_json(
        out / "run.json",
        {"mode": result.mode, "k": graph_set.k, "palette": graph_set.palette, **extra},
    )
    write_json(out / "layout.json", layout_to_json(result.layout))
    for i, embedding in enumerate(result.embeddings):
        write_json(out / "embeddings" / f"graph_{i}.json", embedding_to_json(embedding))
    for i, drawing in enumerate(result.uphill):
        write_json(out / "uphill" / f"path_{i}.json", uphill_drawing_to_json(drawing))
    for i, drawing in enumerate(result.drawings):
        write_json(out / "drawings" / f"graph_{i}.json", graph_drawing_to_json(drawing))
    if config.svg:
        for i, (graph, drawing) in enumerate(zip(graph_set.graphs, result.drawings)):
            colors = {v.id: v.color for v in graph.vertices}
            svg = render_drawing(drawing, colors, result.layout, result.uphill[i])
            write_text_atomic(out / "svg" / f"graph_{i}.svg", svg)

    audits = [_audit_to_json(a) for a in result.audits]
    write_json(
        out / "report.json",
        report_to_json(result.report, {"audits": audits, "candidates": result.candidates}),
    )
    ReportGenerator(result.report, result.audits, result.layout).generate(out / "report.md")


def _audit_to_json(audit: BoundAudit) -> dict[str, Any]:
    return {
        "name": audit.name,
        "measured": audit.measured,
        "budget": round(audit.budget, 6),
        "implied_constant": round(audit.constant, 6),
        "within": audit.within,
    }


def _print_report(report: VerificationReport, audits: list[BoundAudit], verbose: bool) -> None:
    """
    検証結果と上界の監査をテーブルで表示する

    Args:
        report: 検証結果
        audits: 上界の監査結果
        verbose: True なら合格した検証項目も表示する
    """
    table = Table(title="検証結果")
    table.add_column("検証項目", style="cyan")
    table.add_column("結果")
    table.add_column("証拠", justify="right")
    for check in report.checks:
        if check.passed and not verbose:
            continue
        result = "[green]OK[/green]" if check.passed else "[red]NG[/red]"
        table.add_row(check.name, result, str(len(check.witnesses)))
    if table.row_count:
        console.print(table)

    if audits:
        audit_table = Table(title="上界の監査")
        audit_table.add_column("項目", style="cyan")
        audit_table.add_column("実測値", justify="right")
        audit_table.add_column("上界", justify="right")
        audit_table.add_column("定数", justify="right")
        for audit in audits:
            style = "green" if audit.within else "red"
            audit_table.add_row(
                audit.name,
                f"[{style}]{audit.measured}[/{style}]",
                f"{audit.budget:.3f}",
                f"{audit.constant:.3f}",
            )
        console.print(audit_table)

    passed = sum(1 for check in report.checks if check.passed)
    if report.is_valid:
        console.print(f"[bold green]すべての検証に合格しました（{passed} 項目）[/bold green]")
    else:
        failed = len(report.checks) - passed
        console.print(f"[bold red]検証に失敗しました: {failed} 項目[/bold red]")


def _finish(result: EmbedResult, config: RunConfig, verbose: bool) -> None:
    console.print()
    console.print(f"  点集合: {result.layout.case}（{len(result.layout.points)} 点）")
    console.print(f"  道の長さ: {result.path_length}")
    console.print(f"  最大折れ点数: uphill {result.max_uphill_bends}, グラフ {result.max_graph_bends}")
    if verbose:
        for case, blocks in result.candidates.items():
            console.print(f"  候補 {case}: 軸あたりのブロック数 {blocks}")
    console.print(f"  出力先: {config.out}")
    _print_report(result.report, result.audits, verbose)
    if not result.report.is_valid:
        raise SystemExit(EXIT_VERIFICATION)


@main.command()
@click.option("--delta", default=None, help="単調分割の指数（例: 1/2）")
@click.option(
    "--split/--no-split",
    "axis_split",
    default=None,
    help="道を x 軸と y 軸に割り振る配置を候補にするか",
)
@_run_options
def embed(
    delta: Optional[str],
    axis_split: Optional[bool],
    input_path: Optional[str],
    out: Optional[str],
    threads: Optional[int],
    svg: Optional[bool],
    verify: Optional[bool],
    cross_check: bool,
    verbose: bool,
    config_path: Optional[str],
) -> None:
    """
    色互換な平面グラフ集合の同時埋め込みを計算する

    使用例:
        simulembed embed --input graphs.json --out out
        simulembed embed --input graphs.json --out out --svg --no-split
    """
    with _exit_on_error():
        config = _build_config(
            "embed",
            config_path,
            input=input_path,
            out=out,
            delta=delta,
            axis_split=axis_split,
            threads=threads,
            svg=svg,
            verify=verify,
        )
        console.print("[bold blue]同時埋め込みを開始します...[/bold blue]")
        logger = RunLogger(config.resolved_log_dir)
        try:
            graph_set = load_graph_set(config.input)
            result = embed_graphs(
                graph_set,
                delta=config.delta,
                axis_split=config.axis_split,
                verify=config.verify,
                threads=config.threads,
                logger=logger,
                cross_check=cross_check,
            )
            extra = {
                "delta": number_to_json(config.delta),
                "axis_split": config.axis_split,
                "gamma": number_to_json(result.gamma) if result.gamma is not None else None,
            }
            _write_outputs(result, config, extra)
        finally:
            logger.close()
    _finish(result, config, verbose)


def _parse_sweep(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise FormatError(f"--sweep は整数をカンマで区切って書いてください: {text!r}") from e
    if not values or any(b < 1 for b in values):
        raise ParameterError(f"--sweep の b は 1 以上でなければなりません: {text!r}")
    return values


@main.command()
@click.option("--b", type=int, default=None, help="色グループの数（1 以上）")
@click.option("--sweep", default=None, help="b を変えた表も書き出す（例: 1,2,4,8）")
@_run_options
def chains(
    b: Optional[int],
    sweep: Optional[str],
    input_path: Optional[str],
    out: Optional[str],
    threads: Optional[int],
    svg: Optional[bool],
    verify: Optional[bool],
    cross_check: bool,
    verbose: bool,
    config_path: Optional[str],
) -> None:
    """
    色グループのチェーン配置（N⌈c/b⌉ 点以下）の上にすべてのグラフを描く

    使用例:
        simulembed chains --input graphs.json --out out --b 2
        simulembed chains --input graphs.json --out out --b 2 --sweep 1,2,4,8
    """
    with _exit_on_error():
        config = _build_config(
            "chains",
            config_path,
            input=input_path,
            out=out,
            b=b,
            threads=threads,
            svg=svg,
            verify=verify,
        )
        assert config.b is not None  # validate() で確認済み
        bs = _parse_sweep(sweep) if sweep else []
        console.print(f"[bold blue]チェーン配置で描画します（b = {config.b}）...[/bold blue]")
        logger = RunLogger(config.resolved_log_dir)
        try:
            graph_set = load_graph_set(config.input)
            result = chains_graphs(
                graph_set,
                config.b,
                verify=config.verify,
                threads=config.threads,
                logger=logger,
                cross_check=cross_check,
            )
            _write_outputs(result, config, {"b": config.b})
            if bs:
                text = chains_sweep(graph_set, bs, config.threads)
                write_text_atomic(config.out / "chains_sweep.csv", text)
        finally:
            logger.close()
    if bs:
        _print_csv("b ごとの点数と折れ点数", text)
    _finish(result, config, verbose)


# ===== partition =====


@main.command()
@click.option("--input", "input_path", default=None, help="整数列または k 組列の JSON")
@click.option("--out", default=None, help="出力ディレクトリ")
@click.option("--delta", default=None, help="単調分割の指数（例: 1/2）")
@click.option("--verbose", "-v", is_flag=True, default=False, help="各部分列も表示")
@_config_option
def partition(
    input_path: Optional[str],
    out: Optional[str],
    delta: Optional[str],
    verbose: bool,
    config_path: Optional[str],
) -> None:
    """
    整数列または k 組列を単調部分列に分割する

    入力は {"sequence": [...]} または {"tuples": [[...], ...]}。

    使用例:
        simulembed partition --input seq.json --out out --delta 1/3
    """
    with _exit_on_error():
        config = _build_config(
            "partition", config_path, input=input_path, out=out, delta=delta
        )
        logger = RunLogger(config.resolved_log_dir)
        try:
            kind, values = sequence_from_json(read_json(config.input))
            result = partition_values(kind, values, config.delta, logger)
        finally:
            logger.close()

        data: dict[str, Any] = {
            "kind": result.kind,
            "partition": partition_to_json(result.partition),
            "audit": _audit_to_json(result.audit),
        }
        if result.lemma_main is not None:
            lemma = result.lemma_main
            data["distinct_value_extraction"] = {
                "indices": list(lemma.run.indices),
                "directions": [d.value for d in lemma.run.directions],
                "preconditions_met": lemma.preconditions_met,
                "guaranteed_length": lemma.guaranteed_length,
                "source": lemma.source,
            }
        write_json(config.out / "partition.json", data)
        write_json(config.out / "report.json", report_to_json(result.report))

    console.print(
        f"  {result.partition.source_length} 要素 → {len(result.partition.runs)} 個の単調部分列"
    )
    if verbose:
        for i, run in enumerate(result.partition.runs):
            directions = ",".join(d.value for d in run.directions)
            console.print(f"    [{i}] {directions}: {list(run.indices)}")
    _print_report(result.report, [result.audit], verbose)
    if not result.report.is_valid:
        raise SystemExit(EXIT_VERIFICATION)


# ===== verify =====


def reverify_directory(directory: Path, cross_check: bool = False) -> VerificationReport:
    """
    書き出し済みの出力ディレクトリを、再計算せずに検証し直す

    input.json と drawings/graph_<i>.json から平面性・色・拡張後の折れ点数を確認する。
    chains の出力では layout.json も読み、頂点が自分の色の点にあるかを確かめる。

    Raises:
        FileNotFoundError: 必要なファイルがない場合
        FormatError: JSON の形式が正しくない場合
    """
    run = read_json(directory / "run.json")
    graph_set = graph_set_from_json(read_json(directory / "input.json"))
    drawings = [
        graph_drawing_from_json(read_json(directory / "drawings" / f"graph_{i}.json"))
        for i in range(graph_set.k)
    ]

    report = VerificationReport()
    for drawing in drawings:
        report.extend(check_planarity(drawing, cross_check=cross_check))
    if run.get("mode") == "chains":
        layout = layout_from_json(read_json(directory / "layout.json"))
        report.extend(check_color_placement(graph_set, drawings, layout))
    else:
        report.extend(check_color_consistency(graph_set, drawings))
    report.extend(check_expansion(drawings, EXPANSION_CONSTANT, EXPANSION_FLOOR))
    return report


@main.command(name="verify")
@click.option("--input", "input_path", default=None, help="embed / chains の出力ディレクトリ")
@click.option("--out", default=None, help="検証結果の出力先（省略時は書き出さない）")
@click.option("--cross-check", is_flag=True, default=False, help="総当たりとも突き合わせる")
@click.option("--verbose", "-v", is_flag=True, default=False, help="詳細な出力を表示")
@_config_option
def verify_command(
    input_path: Optional[str],
    out: Optional[str],
    cross_check: bool,
    verbose: bool,
    config_path: Optional[str],
) -> None:
    """
    embed / chains の出力ディレクトリを再検証する

    使用例:
        simulembed verify --input out
    """
    with _exit_on_error():
        config = _build_config("verify", config_path, input=input_path)
        assert config.input is not None
        directory = config.input
        if not directory.is_dir():
            raise FileNotFoundError(f"出力ディレクトリが見つかりません: {directory}")
        console.print(f"[bold blue]再検証します: {directory}[/bold blue]")
        report = reverify_directory(directory, cross_check)
        if out is not None:
            write_json(Path(out) / "verify.json", report_to_json(report))
    _print_report(report, [], verbose)
    if not report.is_valid:
        raise SystemExit(EXIT_VERIFICATION)


# ===== scale =====


def _print_csv(title: str, text: str) -> None:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        return
    table = Table(title=title)
    for column in rows[0]:
        table.add_column(column, justify="right")
    for row in rows[1:]:
        table.add_row(*row)
    console.print(table)


@main.command()
@click.option("--n", "grid_n", type=int, multiple=True, help="頂点数（複数指定可）")
@click.option("--k", "grid_k", type=int, multiple=True, help="グラフの数（複数指定可）")
@click.option("--c", "grid_c", type=int, multiple=True, help="色数（0 は c = n、複数指定可）")
@click.option("--seed", type=int, default=None, help="乱数の種")
@click.option("--out", default=None, help="出力ディレクトリ")
@click.option("--threads", type=int, default=None, help="並列に処理するセル数")
@click.option("--split/--no-split", "axis_split", default=None, help="x / y 軸への割り振り")
@_config_option
def scale(
    grid_n: tuple[int, ...],
    grid_k: tuple[int, ...],
    grid_c: tuple[int, ...],
    seed: Optional[int],
    out: Optional[str],
    threads: Optional[int],
    axis_split: Optional[bool],
    config_path: Optional[str],
) -> None:
    """
    (n, k, c) の格子の各セルでランダム入力を埋め込み、最大折れ点数を CSV にまとめる

    同じ種なら同じ CSV（バイト単位で同一）ができる。

    使用例:
        simulembed scale --n 64 --n 256 --k 2 --c 0 --c 4 --out out
    """
    with _exit_on_error():
        config = _build_config(
            "scale",
            config_path,
            out=out,
            seed=seed,
            threads=threads,
            axis_split=axis_split,
            grid_n=grid_n or None,
            grid_k=grid_k or None,
            grid_c=grid_c or None,
        )
        cells = scale_grid(config.grid_n, config.grid_k, config.grid_c)
        console.print(f"[bold blue]{len(cells)} セルを計算します...[/bold blue]")
        logger = RunLogger(config.resolved_log_dir)
        try:
            text = run_scale_experiment(
                cells,
                seed=config.seed,
                threads=config.threads,
                out=config.out,
                axis_split=config.axis_split,
                logger=logger,
            )
        finally:
            logger.close()
    _print_csv("折れ点数と上界", text)
    console.print(f"  出力先: {config.out / 'scale.csv'}")


# Python から直接実行された場合のエントリーポイント
if __name__ == "__main__":
    main()
