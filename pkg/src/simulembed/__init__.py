"""
彩色平面グラフの同時埋め込みを計算するツール

このパッケージは以下の機能を提供します:
- 整数列・k 組列の単調部分列への分割
- 単調トポロジカル本埋め込みと spinal path の抽出
- 共有頂点位置（点集合）の構成と uphill な折れ線描画
- 元グラフへの描画の拡張と、独立した厳密検証器
"""

# パッケージのバージョン番号（SemVer: メジャー.マイナー.パッチ）
__version__ = "0.1.0"
