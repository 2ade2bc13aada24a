import textwrap

import pytest

from core_logic.quadrature import QuadratureSettings


@pytest.fixture
def fast_settings() -> QuadratureSettings:
    """Reduced node budget for tests that only need a few digits."""
    return QuadratureSettings(n_theta=200, n_chi=1600, rel_tol=1e-4, workers=1)


@pytest.fixture
def write_run(tmp_path):
    def _write(text: str, name: str = "run.cfg"):
        path = tmp_path / name
        path.write_text(textwrap.dedent(text).lstrip(), encoding="utf-8")
        return path

    return _write
