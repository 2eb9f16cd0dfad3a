"""
例外クラス

パッケージ内で発生するエラーはすべて SimulembedError を継承する。
CLI はこの階層を見て終了コードを決める（__main__.py を参照）。

    2: 入力の解析・設定エラー（FormatError, MalformedInputError, ConfigError, ...）
    3: 平面性エラー（PlanarityError）
    4: 色互換性エラー（CompatibilityError）
"""

from typing import Any


class SimulembedError(Exception):
    """パッケージ共通の基底例外"""


class EmptySequenceError(SimulembedError):
    """空の列に対して最長単調部分列を求めようとした"""


class ParameterError(SimulembedError):
    """delta や b などのパラメータが範囲外"""


class MalformedInputError(SimulembedError):
    """組の次元がそろっていない、ラベルが欠けている等の不正入力"""


class FormatError(SimulembedError):
    """JSON の構文・スキーマ違反、64 ビット整数の範囲外"""


class ConfigError(SimulembedError):
    """モードに必要な設定値が欠けている、または範囲外"""


class LayoutError(SimulembedError):
    """点配置や経路計算の内部不変条件が破れた（色ブロックの枯渇など）"""


class ConsistencyError(SimulembedError):
    """本埋め込みと描画が対応していない"""


class PlanarityError(SimulembedError):
    """
    入力グラフが平面的でない

    Attributes:
        graph_index: 何番目のグラフか（0 始まり）
        obstruction: Kuratowski 部分グラフ（K5 または K3,3 の細分）の辺リスト
    """

    def __init__(self, message: str, graph_index: int, obstruction: list[tuple[Any, Any]]):
        super().__init__(message)
        self.graph_index = graph_index
        self.obstruction = obstruction


class CompatibilityError(SimulembedError):
    """
    グラフ集合が色互換でない

    Attributes:
        violations: (色, グラフ番号, 期待個数, 実際の個数) のリスト
    """

    def __init__(self, message: str, violations: list[tuple[int, int, int, int]]):
        super().__init__(message)
        self.violations = violations
