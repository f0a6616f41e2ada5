import os
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def fixtures():
    return Path(os.environ.get("GT_SOURCE_FIXTURES", ROOT / "tests" / "fixtures"))


@pytest.fixture(scope="session")
def assets():
    built = Path(os.environ.get("GT_BUILD_FIXTURES", ROOT / "build" / "fixtures")) / "assets"
    if not built.is_dir():
        pytest.skip("generated assets missing; run the gen_fixtures test first")
    return built
