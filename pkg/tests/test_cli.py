"""
CLI コマンドのテスト

click.testing.CliRunner を使用してコマンドをテストする。

click は Python でコマンドラインインターフェース（CLI）を作成するための
ライブラリで、CliRunner を使うことでコマンドを実際に実行せずにテストできる。
"""

import json

import pytest
from click.testing import CliRunner

from simulembed.__main__ import (
    EXIT_COMPATIBILITY,
    EXIT_INPUT,
    EXIT_PLANARITY,
    EXIT_VERIFICATION,
    main,
)
from tests.conftest import write_input


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def input_file(tmp_workspace, two_paths_json):
    return write_input(tmp_workspace / "graphs.json", two_paths_json)


class TestMainCli:
    """メイン CLI のテスト"""

    def test_main_shows_help(self, runner):
        """--help でヘルプとサブコマンドが表示されることを確認"""
        result = runner.invoke(main, ["--help"])

        assert result.exit_code == 0
        for command in ("embed", "chains", "partition", "verify", "scale"):
            assert command in result.output

    def test_main_shows_version(self, runner):
        """--version でバージョンが表示されることを確認"""
        result = runner.invoke(main, ["--version"])

        assert result.exit_code == 0
        assert "0.1.0" in result.output


class TestEmbedCommand:
    """embed コマンドのテスト"""

    def test_embed_writes_outputs(self, runner, input_file, tmp_workspace):
        """
        埋め込みに成功すると終了コード 0 で、出力一式が書き出される
        """
        # Arrange
        out = tmp_workspace / "out"

        # Act
        result = runner.invoke(
            main, ["embed", "--input", str(input_file), "--out", str(out), "--svg"]
        )

        # Assert
        assert result.exit_code == 0, result.output
        assert "すべての検証に合格しました" in result.output
        for name in ("input.json", "run.json", "layout.json", "report.json", "report.md"):
            assert (out / name).exists(), name
        for i in range(2):
            assert (out / "embeddings" / f"graph_{i}.json").exists()
            assert (out / "uphill" / f"path_{i}.json").exists()
            assert (out / "drawings" / f"graph_{i}.json").exists()
            svg = (out / "svg" / f"graph_{i}.svg").read_text(encoding="utf-8")
            assert "<svg" in svg
        report = json.loads((out / "report.json").read_text(encoding="utf-8"))
        assert report["valid"] is True
        assert {a["name"] for a in report["audits"]} >= {"bend-bound:uphill", "bend-bound:graph"}
        assert list((out / "logs").glob("run_*.log"))

    def test_outputs_are_deterministic(self, runner, input_file, tmp_workspace):
        """同じ入力なら同じ JSON（バイト単位で同一）"""
        for name in ("a", "b"):
            out = tmp_workspace / name
            runner.invoke(main, ["embed", "--input", str(input_file), "--out", str(out)])

        for relative in ("layout.json", "drawings/graph_1.json", "report.json"):
            first = (tmp_workspace / "a" / relative).read_bytes()
            assert first == (tmp_workspace / "b" / relative).read_bytes()

    def test_no_split_option(self, runner, input_file, tmp_workspace):
        out = tmp_workspace / "out"

        result = runner.invoke(
            main, ["embed", "--input", str(input_file), "--out", str(out), "--no-split"]
        )

        assert result.exit_code == 0, result.output
        run = json.loads((out / "run.json").read_text(encoding="utf-8"))
        assert run["axis_split"] is False
        assert run["gamma"] == 4

    def test_non_planar_input(self, runner, tmp_workspace):
        """K5 を含む入力は終了コード 3 で、障害物の辺を表示する"""
        # Arrange
        edges = [[u, v] for u in range(1, 6) for v in range(u + 1, 6)]
        vertices = [[v, 1] for v in range(1, 6)]
        data = {"palette": 1, "graphs": [{"vertices": vertices, "edges": edges}]}
        path = write_input(tmp_workspace / "k5.json", data)

        # Act
        result = runner.invoke(main, ["embed", "--input", str(path), "--out", str(tmp_workspace)])

        # Assert
        assert result.exit_code == EXIT_PLANARITY
        assert "Kuratowski" in result.output

    def test_incompatible_input(self, runner, tmp_workspace, two_paths_json):
        """色ごとの頂点数が違えば終了コード 4"""
        two_paths_json["graphs"][1]["vertices"] = [[1, 1], [2, 1], [3, 2]]
        path = write_input(tmp_workspace / "bad.json", two_paths_json)

        result = runner.invoke(main, ["embed", "--input", str(path), "--out", str(tmp_workspace)])

        assert result.exit_code == EXIT_COMPATIBILITY
        assert "(色, グラフ, 基準の個数, 実際の個数)" in result.output

    def test_broken_json(self, runner, tmp_workspace):
        path = tmp_workspace / "broken.json"
        path.write_text("{not json", encoding="utf-8")

        result = runner.invoke(main, ["embed", "--input", str(path), "--out", str(tmp_workspace)])

        assert result.exit_code == EXIT_INPUT
        assert "エラー" in result.output

    def test_missing_input_option(self, runner):
        result = runner.invoke(main, ["embed"])

        assert result.exit_code == EXIT_INPUT
        assert "--input" in result.output

    def test_bad_delta(self, runner, input_file, tmp_workspace):
        result = runner.invoke(
            main, ["embed", "--input", str(input_file), "--out", str(tmp_workspace), "--delta", "2"]
        )

        assert result.exit_code == EXIT_INPUT

    def test_config_file(self, runner, input_file, tmp_workspace):
        """設定ファイルの値が使われ、コマンドライン引数が優先される"""
        # Arrange
        config_file = tmp_workspace / "config.toml"
        config_file.write_text(
            f'[run]\ninput = "{input_file.as_posix()}"\n'
            f'out = "{(tmp_workspace / "x").as_posix()}"\n',
            encoding="utf-8",
        )
        out = tmp_workspace / "y"

        # Act
        result = runner.invoke(main, ["embed", "-c", str(config_file), "--out", str(out)])

        # Assert
        assert result.exit_code == 0, result.output
        assert (out / "run.json").exists()
        assert not (tmp_workspace / "x").exists()

    def test_config_not_found(self, runner):
        result = runner.invoke(main, ["embed", "-c", "/nonexistent/config.toml"])

        assert result.exit_code == EXIT_INPUT
        assert "見つかりません" in result.output


class TestChainsCommand:
    """chains コマンドのテスト"""

    def test_chains_with_sweep(self, runner, input_file, tmp_workspace):
        out = tmp_workspace / "out"

        result = runner.invoke(
            main,
            ["chains", "--input", str(input_file), "--out", str(out), "--b", "2", "--sweep", "1,3"],
        )

        assert result.exit_code == 0, result.output
        lines = (out / "chains_sweep.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "b,groups,points,point_budget,max_bends,graph_bends"
        assert [line.split(",")[0] for line in lines[1:]] == ["1", "3"]
        assert json.loads((out / "run.json").read_text(encoding="utf-8"))["b"] == 2

    def test_chains_requires_b(self, runner, input_file, tmp_workspace):
        result = runner.invoke(
            main, ["chains", "--input", str(input_file), "--out", str(tmp_workspace)]
        )

        assert result.exit_code == EXIT_INPUT

    def test_bad_sweep(self, runner, input_file, tmp_workspace):
        result = runner.invoke(
            main,
            ["chains", "--input", str(input_file), "--out", str(tmp_workspace), "--b", "1"]
            + ["--sweep", "0,2"],
        )

        assert result.exit_code == EXIT_INPUT


class TestPartitionCommand:
    """partition コマンドのテスト"""

    def test_sequence(self, runner, tmp_workspace):
        # Arrange
        path = write_input(tmp_workspace / "seq.json", {"sequence": [5, 4, 3, 2, 1, 6, 7]})
        out = tmp_workspace / "out"

        # Act
        result = runner.invoke(
            main, ["partition", "--input", str(path), "--out", str(out), "-v"]
        )

        # Assert
        assert result.exit_code == 0, result.output
        data = json.loads((out / "partition.json").read_text(encoding="utf-8"))
        assert data["kind"] == "sequence"
        assert data["partition"]["source_length"] == 7
        assert "distinct_value_extraction" in data
        assert data["audit"]["within"] is True

    def test_tuples_with_delta(self, runner, tmp_workspace):
        path = write_input(tmp_workspace / "tuples.json", {"tuples": [[1, 2], [2, 1], [3, 3]]})
        out = tmp_workspace / "out"

        result = runner.invoke(
            main, ["partition", "--input", str(path), "--out", str(out), "--delta", "1/3"]
        )

        assert result.exit_code == 0, result.output
        data = json.loads((out / "partition.json").read_text(encoding="utf-8"))
        assert data["partition"]["delta"] == {"num": 1, "den": 9}

    def test_short_sequence(self, runner, tmp_workspace):
        """δ = 1/2 では 4 個未満の整数列は入力エラーになる"""
        path = write_input(tmp_workspace / "seq.json", {"sequence": [2, 1, 3]})

        result = runner.invoke(
            main, ["partition", "--input", str(path), "--out", str(tmp_workspace)]
        )

        assert result.exit_code == EXIT_INPUT

    def test_ragged_tuples(self, runner, tmp_workspace):
        path = write_input(tmp_workspace / "tuples.json", {"tuples": [[1, 2], [2]]})

        result = runner.invoke(
            main, ["partition", "--input", str(path), "--out", str(tmp_workspace)]
        )

        assert result.exit_code == EXIT_INPUT


class TestVerifyCommand:
    """verify コマンドのテスト"""

    def test_reverify_embed_output(self, runner, input_file, tmp_workspace):
        """embed の出力ディレクトリはそのまま再検証に合格する"""
        out = tmp_workspace / "out"
        runner.invoke(main, ["embed", "--input", str(input_file), "--out", str(out)])

        result = runner.invoke(
            main, ["verify", "--input", str(out), "--out", str(tmp_workspace / "v"), "-v"]
        )

        assert result.exit_code == 0, result.output
        data = json.loads((tmp_workspace / "v" / "verify.json").read_text(encoding="utf-8"))
        assert data["valid"] is True

    def test_reverify_chains_output(self, runner, input_file, tmp_workspace):
        out = tmp_workspace / "out"
        runner.invoke(main, ["chains", "--input", str(input_file), "--out", str(out), "--b", "1"])

        result = runner.invoke(main, ["verify", "--input", str(out)])

        assert result.exit_code == 0, result.output

    def test_tampered_drawing_fails(self, runner, input_file, tmp_workspace):
        """頂点を動かした描画は色の一致の検証に失敗し、終了コード 1"""
        # Arrange
        out = tmp_workspace / "out"
        runner.invoke(main, ["embed", "--input", str(input_file), "--out", str(out)])
        drawing_file = out / "drawings" / "graph_1.json"
        drawing = json.loads(drawing_file.read_text(encoding="utf-8"))
        drawing["vertices"][0]["at"] = [1000, 1000]
        drawing_file.write_text(json.dumps(drawing), encoding="utf-8")

        # Act
        result = runner.invoke(main, ["verify", "--input", str(out)])

        # Assert
        assert result.exit_code == EXIT_VERIFICATION
        assert "検証に失敗しました" in result.output

    def test_missing_directory(self, runner, tmp_workspace):
        result = runner.invoke(main, ["verify", "--input", str(tmp_workspace / "none")])

        assert result.exit_code == EXIT_INPUT


class TestScaleCommand:
    """scale コマンドのテスト"""

    def test_same_seed_gives_same_csv(self, runner, tmp_workspace):
        """同じ種なら scale.csv はバイト単位で同一"""
        # Arrange
        args = ["scale", "--n", "8", "--n", "12", "--k", "2", "--c", "0", "--c", "3", "--seed", "5"]

        # Act
        for name in ("a", "b"):
            result = runner.invoke(main, args + ["--out", str(tmp_workspace / name)])
            assert result.exit_code == 0, result.output

        # Assert
        first = (tmp_workspace / "a" / "scale.csv").read_bytes()
        assert first == (tmp_workspace / "b" / "scale.csv").read_bytes()
        lines = first.decode("utf-8").splitlines()
        assert lines[0].startswith("n,k,c,gamma,case")
        assert len(lines) == 1 + 4
        assert list((tmp_workspace / "a" / "cells").glob("cell_*.json"))
