"""
設定管理モジュール

設定ファイル（TOML）の読み込みと、コマンドライン引数のマージを行う。

設定の優先順位:
1. コマンドライン引数（最優先）
2. 設定ファイル（config.toml）
3. デフォルト値

TOML ファイルの構造例:
    [run]
    input = "graphs.json"
    out = "out"
    seed = 0
    verify = true
    svg = false
    threads = 4

    [partition]
    delta = "1/2"
    axis_split = true

    [chains]
    b = 2

    [experiment]
    n = [64, 256, 1024]
    k = [2]
    c = [4]
"""

import os
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

# tomli は Python 3.11 未満で TOML を読み込むためのライブラリ
# Python 3.11 以降では標準ライブラリの tomllib が使える
import tomli

from simulembed.errors import ConfigError

# SIMULEMBED_THREADS 環境変数で並列数の上限を指定できる
THREADS_ENV = "SIMULEMBED_THREADS"

MODES = ("embed", "chains", "partition", "verify", "scale")


@dataclass
class RunConfig:
    """
    1 回の実行の設定を保持するデータクラス

    Attributes:
        mode: 実行モード（embed, chains, partition, verify, scale）
        input: 入力 JSON のパス（scale 以外では必須）
        out: 出力ディレクトリ
        b: chains の色グループ数（chains では必須、1 以上）
        delta: 単調分割の指数（0 < delta < 1、既定値 1/2）
        seed: 乱数の種（生成器と実験で使う）
        axis_split: True なら道を x 軸と y 軸に半分ずつ割り振る配置も候補にする
        verify: True なら出力を検証する
        svg: True なら SVG も書き出す
        threads: 並列に処理するワーカー数
        grid_n, grid_k, grid_c: scale 実験の格子（c = 0 は「c = n」を意味する）
        log_dir: ログの出力先（省略時は <out>/logs）
    """

    # ===== 実行モード =====
    mode: str = "embed"
    input: Optional[Path] = None
    out: Path = field(default_factory=lambda: Path("out"))

    # ===== アルゴリズムの設定 =====
    b: Optional[int] = None  # chains の色グループ数
    delta: Fraction = Fraction(1, 2)  # 単調分割の指数
    seed: int = 0  # 乱数の種
    axis_split: bool = True  # x 軸 / y 軸への割り振りを使うか

    # ===== 出力の設定 =====
    verify: bool = True  # 出力を検証するか
    svg: bool = False  # SVG を書き出すか
    threads: int = 1  # ワーカー数

    # ===== scale 実験の格子 =====
    grid_n: tuple[int, ...] = (64, 256, 1024)
    grid_k: tuple[int, ...] = (2,)
    grid_c: tuple[int, ...] = (0, 4)

    # ===== ログ =====
    log_dir: Optional[Path] = None

    @property
    def resolved_log_dir(self) -> Path:
        return self.log_dir if self.log_dir is not None else self.out / "logs"

    def validate(self) -> None:
        """
        モードごとの必須項目と値の範囲を確認する

        Raises:
            ConfigError: 必須項目の欠落、または範囲外の値がある場合
        """
        if self.mode not in MODES:
            raise ConfigError(f"未対応のモードです: {self.mode}")
        if self.mode != "scale" and self.input is None:
            raise ConfigError(f"{self.mode} には --input が必要です")
        if self.mode == "chains" and self.b is None:
            raise ConfigError("chains には --b が必要です")
        if self.b is not None and self.b < 1:
            raise ConfigError(f"b は 1 以上でなければなりません: {self.b}")
        if not 0 < self.delta < 1:
            raise ConfigError(f"delta は 0 < delta < 1 でなければなりません: {self.delta}")
        if self.threads < 1:
            raise ConfigError(f"threads は 1 以上でなければなりません: {self.threads}")
        if any(n < 1 for n in self.grid_n) or any(k < 1 for k in self.grid_k):
            raise ConfigError("実験の格子の n と k は 1 以上でなければなりません")
        if any(c < 0 for c in self.grid_c):
            raise ConfigError("実験の格子の c は 0 以上でなければなりません")

    def merged(self, **overrides: Any) -> "RunConfig":
        """
        None でない値だけを上書きした新しい設定を返す

        コマンドライン引数のうち、指定されなかったもの（None）は設定ファイルの値を残す。
        """
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigError(f"未知の設定項目です: {sorted(unknown)}")
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def resolve_threads(requested: int) -> int:
    """
    SIMULEMBED_THREADS が設定されていれば、それを上限にしたワーカー数を返す

    Raises:
        ConfigError: 環境変数が正の整数でない場合
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return max(1, requested)
    try:
        cap = int(raw)
    except ValueError as e:
        raise ConfigError(f"{THREADS_ENV} は正の整数でなければなりません: {raw!r}") from e
    if cap < 1:
        raise ConfigError(f"{THREADS_ENV} は正の整数でなければなりません: {raw!r}")
    return max(1, min(requested, cap))


def _as_fraction(value: Any) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"delta を有理数として読めません: {value!r}") from e


def _as_tuple(value: Any, name: str) -> tuple[int, ...]:
    if isinstance(value, int):
        return (value,)
    if isinstance(value, list) and all(isinstance(v, int) for v in value):
        return tuple(value)
    raise ConfigError(f"{name} は整数か整数のリストで書いてください: {value!r}")


def load_config(config_path: Path) -> RunConfig:
    """
    TOML ファイルから設定を読み込む

    Args:
        config_path: 設定ファイルのパス

    Returns:
        RunConfig: 書かれていない項目はデフォルト値

    Raises:
        FileNotFoundError: 設定ファイルが存在しない場合
        ConfigError: TOML として読めない、または値の型が違う場合

    使用例:
        config = load_config(Path("config.toml"))
        print(config.delta)
    """
    if not config_path.exists():
        raise FileNotFoundError(f"設定ファイルが見つかりません: {config_path}")

    with open(config_path, "rb") as f:
        try:
            data = tomli.load(f)
        except tomli.TOMLDecodeError as e:
            raise ConfigError(f"設定ファイルの解析に失敗しました: {e}") from e

    run_section = data.get("run", {})
    partition_section = data.get("partition", {})
    chains_section = data.get("chains", {})
    experiment_section = data.get("experiment", {})

    defaults = RunConfig()
    input_path = run_section.get("input")
    log_dir = run_section.get("log_dir")
    return RunConfig(
        # ===== 実行モード =====
        mode=run_section.get("mode", defaults.mode),
        input=Path(input_path) if input_path else None,
        out=Path(run_section.get("out", str(defaults.out))),
        # ===== アルゴリズムの設定 =====
        b=chains_section.get("b"),
        delta=_as_fraction(partition_section.get("delta", defaults.delta)),
        seed=run_section.get("seed", defaults.seed),
        axis_split=partition_section.get("axis_split", defaults.axis_split),
        # ===== 出力の設定 =====
        verify=run_section.get("verify", defaults.verify),
        svg=run_section.get("svg", defaults.svg),
        threads=run_section.get("threads", defaults.threads),
        # ===== scale 実験の格子 =====
        grid_n=_as_tuple(experiment_section.get("n", list(defaults.grid_n)), "n"),
        grid_k=_as_tuple(experiment_section.get("k", list(defaults.grid_k)), "k"),
        grid_c=_as_tuple(experiment_section.get("c", list(defaults.grid_c)), "c"),
        # ===== ログ =====
        log_dir=Path(log_dir) if log_dir else None,
    )
