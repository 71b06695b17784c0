import pytest

from compop.config import Config, load_config, parse_overrides
from compop.errors import ConfigError


def test_dump_round_trip(tmp_path):
    cfg = Config().replace(jobs=3, record_timing=True, carleson_constant=8.0)
    p = tmp_path / "c.cfg"
    p.write_text(cfg.dump())
    assert load_config(p) == cfg


def test_comments_and_errors(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("# comment\nseed = 7  # trailing\n")
    assert load_config(p).seed == 7
    p.write_text("seed=7\nnot a pair\n")
    with pytest.raises(ConfigError) as e:
        load_config(p)
    assert e.value.line == 2
    p.write_text("bogus=1\n")
    with pytest.raises(ConfigError):
        load_config(p)


def test_validation():
    with pytest.raises(ConfigError):
        parse_overrides({"boundary_grid": "1000"})
    with pytest.raises(ConfigError):
        parse_overrides({"carleson_constant": "0.5"})
    assert parse_overrides({"upper-grid": "5000"}).upper_grid == 5000
