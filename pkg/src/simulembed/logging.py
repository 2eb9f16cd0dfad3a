"""
ログシステムモジュール

実行ごとのログ管理機能を提供する。
以下の3種類のログファイルを出力する:
- run_YYYYMMDD_HHMMSS.log: すべてのログ（DEBUG以上）
- errors_YYYYMMDD_HHMMSS.log: エラーログのみ
- audit_YYYYMMDD_HHMMSS.log: 折れ点数や分割数の上界の監査結果

ログファイルは実行時刻を含むので、決定的な出力（JSON / CSV / SVG）には含めない。

使用例:
    from simulembed.logging import RunLogger

    logger = RunLogger(Path("./out/logs"))
    logger.info("埋め込みを開始します", graphs=2)
    logger.log_bound_audit("bend-bound:uphill", 12, 64.0, 0.75)
    logger.close()
"""

import itertools
import logging
from datetime import datetime
from pathlib import Path
from typing import Any

# 同じ秒に複数のロガーを作っても名前が衝突しないようにする
_serial = itertools.count()


class RunLogger:
    """
    1 回の実行用のロガークラス

    Python の標準 logging モジュールを使用して、
    複数のログファイルに同時に出力する。

    属性:
        log_dir (Path): ログファイルを保存するディレクトリ
        timestamp (str): ログファイル名に使用するタイムスタンプ
        logger (logging.Logger): メインのロガーオブジェクト
    """

    def __init__(self, log_dir: Path) -> None:
        """
        RunLogger を初期化する

        引数:
            log_dir: ログファイルを保存するディレクトリのパス
                     存在しない場合は自動的に作成される
        """
        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        self._setup_loggers()

    def _setup_loggers(self) -> None:
        """ロガーとファイルハンドラを設定する"""
        self.logger = logging.getLogger(f"simulembed_{self.timestamp}_{next(_serial)}")
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False
        self.logger.handlers.clear()

        formatter = logging.Formatter(
            "%(asctime)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )

        # === 1. run_*.log: 全ログ用ハンドラ ===
        self.run_log_path = self.log_dir / f"run_{self.timestamp}.log"
        self.run_handler = logging.FileHandler(self.run_log_path, encoding="utf-8")
        self.run_handler.setLevel(logging.DEBUG)
        self.run_handler.setFormatter(formatter)
        self.logger.addHandler(self.run_handler)

        # === 2. errors_*.log: エラー専用ハンドラ ===
        self.errors_log_path = self.log_dir / f"errors_{self.timestamp}.log"
        self.errors_handler = logging.FileHandler(self.errors_log_path, encoding="utf-8")
        self.errors_handler.setLevel(logging.ERROR)
        self.errors_handler.setFormatter(formatter)
        self.logger.addHandler(self.errors_handler)

        # === 3. audit_*.log: 監査ブロック用（直接ファイル書き込み） ===
        self.audit_log_path = self.log_dir / f"audit_{self.timestamp}.log"
        self.audit_file = open(self.audit_log_path, "a", encoding="utf-8")

    def _format_message(self, message: str, **kwargs: Any) -> str:
        """
        ログメッセージをフォーマットする

        追加のキーワード引数があれば " | key=value" の形で追記する。
        """
        if not kwargs:
            return message
        extras = " | ".join(f"{k}={v}" for k, v in kwargs.items())
        return f"{message} | {extras}"

    def debug(self, message: str, **kwargs: Any) -> None:
        self.logger.debug(self._format_message(message, **kwargs))

    def info(self, message: str, **kwargs: Any) -> None:
        self.logger.info(self._format_message(message, **kwargs))

    def warning(self, message: str, **kwargs: Any) -> None:
        """
        WARNING レベルのログを出力する

        例: 上界の超過、前提条件を満たさない入力での代替処理など。
        """
        self.logger.warning(self._format_message(message, **kwargs))

    def error(self, message: str, **kwargs: Any) -> None:
        """
        ERROR レベルのログを出力する

        run_*.log と errors_*.log の両方に出力される。
        """
        self.logger.error(self._format_message(message, **kwargs))

    def log_bound_audit(self, name: str, measured: float, budget: float, constant: float) -> None:
        """
        上界の監査結果を audit_*.log に記録する

        引数:
            name: 監査項目（例: "bend-bound:uphill", "partition"）
            measured: 実測値
            budget: 上界（定数 × 理論上の量）
            constant: 実測値から逆算した定数

        出力例:
            ============================================================
            BOUND AUDIT: bend-bound:uphill
            ============================================================
            Measured: 12
            Budget: 64.000
            Implied constant: 0.750
            Status: OK
            ============================================================
        """
        within = measured <= budget
        separator = "=" * 60
        entry = f"""
{separator}
BOUND AUDIT: {name}
{separator}
Measured: {measured}
Budget: {budget:.3f}
Implied constant: {constant:.3f}
Status: {"OK" if within else "EXCEEDED"}
{separator}
"""
        self.audit_file.write(entry)
        self.audit_file.flush()

        if within:
            self.debug("Bound audit", name=name, measured=measured, budget=f"{budget:.3f}")
        else:
            self.warning("Bound exceeded", name=name, measured=measured, budget=f"{budget:.3f}")

    def close(self) -> None:
        """すべてのファイルハンドラを閉じる"""
        for handler in self.logger.handlers[:]:
            handler.close()
            self.logger.removeHandler(handler)
        if hasattr(self, "audit_file") and self.audit_file:
            self.audit_file.close()
