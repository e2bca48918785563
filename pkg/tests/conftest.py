"""Shared fixtures: the worked examples and an isolated configuration."""

from collections.abc import Callable
from importlib import resources
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from omega_nil import config
from omega_nil.words import (
    FreeGroupEndo,
    Substitution,
    parse_endomorphism,
    parse_substitution,
)

# The autouse config fixture is function-scoped but never mutated by examples.
settings.register_profile(
    "omega-nil", suppress_health_check=[HealthCheck.function_scoped_fixture]
)
settings.load_profile("omega-nil")


def _sample(name: str) -> str:
    return resources.files("omega_nil.samples").joinpath(name).read_text(encoding="utf-8")


@pytest.fixture(autouse=True)
def isolated_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Point the config loader at an empty directory and clear the env override.

    Returns the path of the project-level config file tests may write.
    """
    project_file = tmp_path / "omega-nil.yml"
    monkeypatch.setattr(
        config,
        "config_paths",
        lambda: [tmp_path / "user" / "omega-nil.yml", project_file],
    )
    monkeypatch.delenv(config.RAY_LIMIT_ENV, raising=False)
    return project_file


@pytest.fixture
def thue_morse() -> Substitution:
    return parse_substitution(_sample("thue-morse.sub"))


@pytest.fixture
def negative() -> Substitution:
    return parse_substitution(_sample("negative.sub"))


@pytest.fixture
def weaktest() -> Substitution:
    return parse_substitution(_sample("weaktest.sub"))


@pytest.fixture
def tedious() -> Substitution:
    return parse_substitution(_sample("tedious.sub"))


@pytest.fixture
def cyclo() -> Substitution:
    return parse_substitution(_sample("cyclo.sub"))


@pytest.fixture
def psi() -> FreeGroupEndo:
    return parse_endomorphism(_sample("psi.end"))


@pytest.fixture
def block_family() -> Callable[[int, int], Substitution]:
    """Factory for the two-parameter family ``0 -> 0^k 1, 1 -> 0^l 1``."""

    def build(k: int, l: int) -> Substitution:
        return Substitution.from_images([(0,) * k + (1,), (0,) * l + (1,)])

    return build
