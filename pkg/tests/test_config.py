"""Flat key=value configuration loading."""
import pytest

from iwbench.config import BenchConfig, build_config, load_config, parse_config_text


class TestParse:
    def test_basic_pairs(self):
        raw = parse_config_text("lambda = 4.0\nk=12\n# comment\n\nmse_window = 21 ; inline\n")
        assert raw == {"lambda": "4.0", "k": "12", "mse_window": "21"}

    def test_rejects_bare_line(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_config_text("not a pair\n")


class TestBuild:
    def test_defaults(self):
        cfg = BenchConfig()
        assert cfg.visual.lam == 5.0
        assert cfg.visual.alpha == 0.05
        assert cfg.visual.beta == 0.15
        assert cfg.k == 15.0
        assert cfg.memory.gamma == 0.05
        assert cfg.filter.density_tau == 0.06
        assert cfg.smoothness.w_ssim == 0.5

    def test_overrides_land_in_sections(self):
        cfg = build_config({"lambda": "7", "gamma": "0.2", "density_tau": "0.1",
                            "w_ssim": "0.3", "w_mse": "0.7", "signed_cosine": "true",
                            "memory_weight_mode": "formula"})
        assert cfg.visual.lam == 7.0
        assert cfg.memory.gamma == 0.2
        assert cfg.memory.weight_mode == "formula"
        assert cfg.filter.density_tau == 0.1
        assert cfg.smoothness.w_ssim == 0.3
        assert cfg.signed_cosine is True

    def test_unknown_key(self):
        with pytest.raises(ValueError, match="unknown config key"):
            build_config({"warp_factor": "9"})

    def test_validation_runs_after_overlay(self):
        with pytest.raises(ValueError):
            build_config({"alpha": "0.5", "beta": "0.1"})

    def test_bad_boolean(self):
        with pytest.raises(ValueError, match="signed_cosine"):
            build_config({"signed_cosine": "maybe"})


class TestLoad:
    def test_file(self, tmp_path):
        path = tmp_path / "bench.cfg"
        path.write_text("k = 10\nmin_len = 50\n")
        cfg = load_config(path)
        assert cfg.k == 10.0
        assert cfg.filter.min_len == 50

    def test_env_fallback(self, tmp_path, monkeypatch):
        path = tmp_path / "bench.cfg"
        path.write_text("noise_tau = 33\n")
        monkeypatch.setenv("IWORLD_CONFIG", str(path))
        assert load_config().visual.noise_tau == 33.0

    def test_defaults_without_file(self, monkeypatch):
        monkeypatch.delenv("IWORLD_CONFIG", raising=False)
        assert load_config().visual.lam == 5.0
