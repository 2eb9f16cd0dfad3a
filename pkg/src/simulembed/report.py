"""
レポート生成モジュール

検証結果と上界の監査を Markdown 形式で出力する。
このモジュールは以下の機能を提供する：

- 検証サマリー（検証項目ごとの合否）
- 不合格の検証項目の証拠の一覧
- 上界の監査表（実測値と上界）
- 点集合のブロックの大きさの表

出力は決定的にするため、生成日時は書かない。
"""

from pathlib import Path
from typing import Optional, Sequence

from simulembed.engine import BoundAudit
from simulembed.formats import to_plain, write_text_atomic
from simulembed.layout import PointLayout
from simulembed.verify import VerificationReport

# 1 つの検証項目について表示する証拠の最大数
MAX_LISTED = 10


class ReportGenerator:
    """
    検証結果のレポートを生成するクラス

    使用例:
        generator = ReportGenerator(result.report, result.audits, result.layout)
        generator.generate(Path("out/report.md"))

    Attributes:
        report: 検証結果
        audits: 上界の監査結果
        layout: ブロック表を出す点集合（省略可）
        title: レポートの見出し
    """

    def __init__(
        self,
        report: VerificationReport,
        audits: Sequence[BoundAudit] = (),
        layout: Optional[PointLayout] = None,
        title: str = "simulembed レポート",
    ) -> None:
        self._report = report
        self._audits = list(audits)
        self._layout = layout
        self._title = title

    def render(self) -> str:
        sections = [
            self._generate_header(),
            self._generate_summary(),
            self._generate_failures(),
            self._generate_audits(),
            self._generate_blocks(),
        ]
        return "\n".join(section for section in sections if section)

    def generate(self, output_path: Path) -> None:
        """
        レポートをファイルに出力する

        Args:
            output_path: 出力ファイルのパス
        """
        write_text_atomic(output_path, self.render())

    def _generate_header(self) -> str:
        status = "合格" if self._report.is_valid else "不合格"
        return f"""# {self._title}

判定: **{status}**
"""

    def _generate_summary(self) -> str:
        """検証項目ごとの合否をテーブルにする"""
        if not self._report.checks:
            return "## 検証サマリー\n\n検証は実行されていません。\n"
        lines = [
            "## 検証サマリー",
            "",
            "| 検証項目 | 結果 | 測定値 |",
            "|----------|------|--------|",
        ]
        for check in self._report.checks:
            result = "OK" if check.passed else "NG"
            stats = ", ".join(f"{k}={to_plain(v)}" for k, v in check.stats.items())
            lines.append(f"| {check.name} | {result} | {stats} |")
        passed = sum(1 for check in self._report.checks if check.passed)
        lines.append("")
        lines.append(f"合格: {passed} / {len(self._report.checks)}")
        return "\n".join(lines) + "\n"

    def _generate_failures(self) -> str:
        """
        不合格の検証項目ごとに証拠を並べる

        不合格がない場合は空文字列を返す（セクションごと省く）。
        """
        failures = self._report.failures
        if not failures:
            return ""
        lines = ["## 不合格の証拠", ""]
        for check in failures:
            lines.append(f"### {check.name}")
            lines.append("")
            for witness in check.witnesses[:MAX_LISTED]:
                lines.append(f"- `{to_plain(witness)}`")
            if len(check.witnesses) > MAX_LISTED:
                lines.append(f"- ... 他 {len(check.witnesses) - MAX_LISTED} 件")
            lines.append("")
        return "\n".join(lines)

    def _generate_audits(self) -> str:
        if not self._audits:
            return ""
        lines = [
            "## 上界の監査",
            "",
            "| 項目 | 実測値 | 上界 | 定数の実測値 | 判定 |",
            "|------|--------|------|--------------|------|",
        ]
        for audit in self._audits:
            verdict = "OK" if audit.within else "超過"
            lines.append(
                f"| {audit.name} | {audit.measured} | {audit.budget:.3f} | "
                f"{audit.constant:.3f} | {verdict} |"
            )
        return "\n".join(lines) + "\n"

    def _generate_blocks(self) -> str:
        if self._layout is None or not self._layout.blocks:
            return ""
        return f"""## ブロック構成（{self._layout.case}）

```
{self._layout.block_size_table()}
```
"""
