"""
Tests for settings management
"""

from pathlib import Path

import pytest

from infoloss.cli.config import SETTINGS_TEMPLATE, ConfigManager
from infoloss.core.errors import ContractViolation


class TestConfigManager:
    """Test ConfigManager functionality"""

    @pytest.fixture
    def temp_dir(self, tmp_path, monkeypatch):
        """Isolated working directory and home"""
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("HOME", str(tmp_path / "home"))
        for var in ("INFOLOSS_SEED", "INFOLOSS_THREADS", "INFOLOSS_TRIALS"):
            monkeypatch.delenv(var, raising=False)
        return tmp_path

    def test_find_settings_not_found(self, temp_dir):
        """Test when no settings file exists"""
        assert ConfigManager().find_settings() is None

    def test_find_settings_current_dir(self, temp_dir):
        """Test the project file is found first"""
        config_dir = Path("config")
        config_dir.mkdir()
        (config_dir / "infoloss.yaml").write_text("seed: 1\n")

        user_dir = Path.home() / ".config" / "infoloss"
        user_dir.mkdir(parents=True)
        (user_dir / "infoloss.yaml").write_text("seed: 2\n")

        found = ConfigManager().find_settings()
        assert found == (temp_dir / "config" / "infoloss.yaml")

    def test_find_settings_user_home(self, temp_dir):
        """Test falling back to the user file"""
        user_dir = Path.home() / ".config" / "infoloss"
        user_dir.mkdir(parents=True)
        (user_dir / "infoloss.yaml").write_text("seed: 2\n")

        manager = ConfigManager()
        assert manager.find_settings() == user_dir / "infoloss.yaml"
        assert manager.get("seed") == 2

    def test_defaults(self, temp_dir):
        """Test built-in defaults without a file"""
        manager = ConfigManager()
        assert manager.get("seed") == 20170612
        assert manager.get("trials") == 200
        assert manager.get("format") == "text"

    def test_precedence(self, temp_dir, monkeypatch):
        """Test flag > environment > file > default"""
        Path("config").mkdir()
        Path("config/infoloss.yaml").write_text("seed: 11\ntrials: 50\n")

        manager = ConfigManager()
        assert manager.get("trials") == 50
        assert manager.get("seed") == 11

        monkeypatch.setenv("INFOLOSS_SEED", "22")
        assert manager.get("seed") == "22"
        assert manager.get("seed", 33) == 33

    def test_env_var_values(self, temp_dir, monkeypatch):
        """Test ${VAR} values in the file"""
        monkeypatch.setenv("MY_TRIALS", "75")
        Path("config").mkdir()
        Path("config/infoloss.yaml").write_text("trials: ${MY_TRIALS}\n")
        assert ConfigManager().get("trials") == "75"

    def test_unknown_key(self, temp_dir):
        """Test unknown settings are refused"""
        Path("config").mkdir()
        Path("config/infoloss.yaml").write_text("output_dir: results\n")
        with pytest.raises(ContractViolation, match="output_dir"):
            ConfigManager().load_settings()

    def test_not_a_mapping(self, temp_dir):
        """Test a list at the top level is refused"""
        Path("config").mkdir()
        Path("config/infoloss.yaml").write_text("- seed\n")
        with pytest.raises(ContractViolation):
            ConfigManager().load_settings()

    def test_empty_file(self, temp_dir):
        """Test an empty file means defaults"""
        Path("config").mkdir()
        Path("config/infoloss.yaml").write_text("")
        assert ConfigManager().get("threads") == 0

    def test_init_config_project(self, temp_dir):
        """Test writing the template into ./config"""
        target = ConfigManager().init_config()
        assert target == temp_dir / "config" / "infoloss.yaml"
        assert target.read_text() == SETTINGS_TEMPLATE

    def test_init_config_user(self, temp_dir):
        """Test writing the template into the user directory"""
        target = ConfigManager().init_config(use_user_config=True)
        assert target == Path.home() / ".config" / "infoloss" / "infoloss.yaml"
        assert target.exists()

    def test_init_config_existing(self, temp_dir):
        """Test an existing file is kept unless forced"""
        manager = ConfigManager()
        target = manager.init_config()
        target.write_text("seed: 5\n")
        with pytest.raises(FileExistsError):
            manager.init_config()
        assert target.read_text() == "seed: 5\n"

        manager.init_config(force=True)
        assert target.read_text() == SETTINGS_TEMPLATE

    def test_template_loads_as_defaults(self, temp_dir):
        """Test the template parses and matches the defaults"""
        manager = ConfigManager()
        manager.init_config()
        assert manager.load_settings() == ConfigManager.DEFAULTS
