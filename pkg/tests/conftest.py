import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA_DIR = Path(__file__).parent.parent / "data" / "sdplib"


@pytest.fixture(scope="session")
def sdplib_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def theta1_path() -> Path:
    return DATA_DIR / "theta1.dat-s"
