from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def load_matrix_fixture(p: int, variant_name: str) -> np.ndarray:
    text = (FIXTURES / f"weighted_p{p}_{variant_name}.csv").read_text()
    return np.array(
        [[int(v) for v in line.split(",")] for line in text.splitlines()],
        dtype=np.int8,
    )


def load_sigma_fixture(p: int) -> str:
    return (FIXTURES / f"sigma_p{p}.tsv").read_text()
