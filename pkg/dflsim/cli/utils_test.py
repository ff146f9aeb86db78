import pathlib
from unittest.mock import MagicMock

import pytest
import typer

from dflsim.cli.utils import EXIT_CONFIG_ERROR, Arguments, _resolve_config_path


def test_resolve_config_path_exists() -> None:
    """Test when the configuration path exists directly."""
    mock_path = MagicMock(spec=pathlib.Path)
    mock_path.exists.return_value = True

    assert _resolve_config_path(mock_path) == mock_path
    mock_path.with_suffix.assert_not_called()


def test_resolve_config_path_with_suffix() -> None:
    """Test that a missing suffix is completed in .yml, .yaml, .toml, .json order."""
    mock_path = MagicMock(spec=pathlib.Path)
    mock_path.exists.return_value = False

    candidates = {suffix: MagicMock(spec=pathlib.Path) for suffix in (".yml", ".yaml", ".toml", ".json")}
    for suffix, candidate in candidates.items():
        candidate.exists.return_value = suffix == ".toml"
    mock_path.with_suffix.side_effect = lambda suffix: candidates[suffix]

    assert _resolve_config_path(mock_path) == candidates[".toml"]
    assert [c.args[0] for c in mock_path.with_suffix.call_args_list] == [".yml", ".yaml", ".toml"]


def test_resolve_config_path_not_exists(tmp_path: pathlib.Path) -> None:
    with pytest.raises(typer.Exit) as info:
        _resolve_config_path(tmp_path / "missing")

    assert info.value.exit_code == EXIT_CONFIG_ERROR


@pytest.mark.parametrize(
    ("debug", "quiet", "level"),
    [(False, False, "INFO"), (True, False, "DEBUG"), (False, True, "SUCCESS"), (True, True, "DEBUG")],
)
def test_log_level(debug: bool, quiet: bool, level: str) -> None:
    args = Arguments(
        config_path=pathlib.Path("exp.yml"),
        runs=None,
        seed=None,
        output_dir=None,
        workers=1,
        debug=debug,
        quiet=quiet,
        log_path=None,
    )
    assert args.log_level == level
