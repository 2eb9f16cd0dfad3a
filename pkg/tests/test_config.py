"""
設定ファイル読み込みのテスト

config.toml からの設定読み込みと、コマンドライン引数のマージをテストする。
"""

from fractions import Fraction
from pathlib import Path

import pytest

from simulembed.config import THREADS_ENV, RunConfig, load_config, resolve_threads
from simulembed.errors import ConfigError


class TestRunConfig:
    """
    RunConfig クラスのテスト

    RunConfig は 1 回の実行の設定を保持するデータクラス。
    すべての項目にデフォルト値があり、validate() でモードごとの必須項目を確認する。
    """

    def test_default_values(self):
        """
        デフォルト値が正しく設定されることを確認
        """
        # Arrange & Act
        config = RunConfig()

        # Assert
        assert config.mode == "embed"
        assert config.delta == Fraction(1, 2)
        assert config.axis_split is True
        assert config.verify is True
        assert config.svg is False
        assert config.threads == 1
        assert config.resolved_log_dir == Path("out") / "logs"

    def test_embed_requires_input(self):
        """embed には入力ファイルが必要"""
        with pytest.raises(ConfigError):
            RunConfig(mode="embed").validate()

    def test_scale_does_not_require_input(self):
        RunConfig(mode="scale").validate()

    def test_chains_requires_b(self):
        """chains には色グループ数 b が必要"""
        config = RunConfig(mode="chains", input=Path("in.json"))

        with pytest.raises(ConfigError):
            config.validate()
        config.merged(b=2).validate()

    @pytest.mark.parametrize(
        "overrides",
        [
            {"b": 0},
            {"delta": Fraction(0)},
            {"delta": Fraction(1)},
            {"threads": 0},
            {"grid_n": (0,)},
            {"grid_c": (-1,)},
            {"mode": "draw"},
        ],
    )
    def test_out_of_range_values(self, overrides):
        """範囲外の値は ConfigError になる"""
        config = RunConfig(input=Path("in.json")).merged(**overrides)

        with pytest.raises(ConfigError):
            config.validate()

    def test_merged_keeps_values_for_none(self):
        """
        None の引数は設定ファイルの値を上書きしない

        コマンドラインで指定されなかったオプションは None で渡される。
        """
        # Arrange
        config = RunConfig(threads=4, svg=True)

        # Act
        merged = config.merged(threads=None, svg=False, out=Path("result"))

        # Assert
        assert merged.threads == 4
        assert merged.svg is False
        assert merged.out == Path("result")
        assert config.out == Path("out")  # 元の設定は変わらない

    def test_merged_rejects_unknown_keys(self):
        with pytest.raises(ConfigError):
            RunConfig().merged(colour=3)


class TestLoadConfig:
    """
    load_config 関数のテスト
    """

    def test_load_config_from_toml(self, tmp_path: Path):
        """
        TOML ファイルから設定を読み込めることを確認
        """
        # Arrange
        config_file = tmp_path / "config.toml"
        config_file.write_text(
            """
[run]
mode = "chains"
input = "graphs.json"
out = "result"
seed = 7
svg = true
threads = 3

[partition]
delta = "1/3"
axis_split = false

[chains]
b = 2

[experiment]
n = [32, 64]
k = 3
c = [0]
""",
            encoding="utf-8",
        )

        # Act
        config = load_config(config_file)

        # Assert
        assert config.mode == "chains"
        assert config.input == Path("graphs.json")
        assert config.out == Path("result")
        assert config.seed == 7
        assert config.svg is True
        assert config.threads == 3
        assert config.delta == Fraction(1, 3)
        assert config.axis_split is False
        assert config.b == 2
        assert config.grid_n == (32, 64)
        assert config.grid_k == (3,)
        assert config.grid_c == (0,)
        config.validate()

    def test_missing_sections_use_defaults(self, tmp_path: Path):
        config_file = tmp_path / "config.toml"
        config_file.write_text('[run]\ninput = "graphs.json"\n', encoding="utf-8")

        config = load_config(config_file)

        assert config.out == Path("out")
        assert config.grid_n == RunConfig().grid_n
        assert config.log_dir is None

    def test_load_config_file_not_found(self, tmp_path: Path):
        """
        設定ファイルが存在しない場合にエラーになることを確認
        """
        with pytest.raises(FileNotFoundError):
            load_config(tmp_path / "nonexistent.toml")

    def test_broken_toml(self, tmp_path: Path):
        config_file = tmp_path / "config.toml"
        config_file.write_text("[run\n", encoding="utf-8")

        with pytest.raises(ConfigError):
            load_config(config_file)

    @pytest.mark.parametrize(
        "text",
        ['[partition]\ndelta = "half"\n', '[experiment]\nn = ["64"]\n'],
    )
    def test_bad_values(self, tmp_path: Path, text):
        config_file = tmp_path / "config.toml"
        config_file.write_text(text, encoding="utf-8")

        with pytest.raises(ConfigError):
            load_config(config_file)


class TestResolveThreads:
    """
    resolve_threads 関数のテスト

    SIMULEMBED_THREADS 環境変数はワーカー数の上限として働く。
    """

    def test_without_env(self, monkeypatch):
        monkeypatch.delenv(THREADS_ENV, raising=False)

        assert resolve_threads(8) == 8
        assert resolve_threads(0) == 1

    def test_env_caps_threads(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "2")

        assert resolve_threads(8) == 2
        assert resolve_threads(1) == 1

    @pytest.mark.parametrize("raw", ["zero", "0", "-3"])
    def test_invalid_env(self, monkeypatch, raw):
        monkeypatch.setenv(THREADS_ENV, raw)

        with pytest.raises(ConfigError):
            resolve_threads(4)
