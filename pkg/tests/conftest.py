from pathlib import Path

import numpy as np
import pytest

from termnet import EmbeddingStore

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_records_path() -> Path:
    return FIXTURES / "patents.jsonl"


@pytest.fixture(scope="session")
def small_store() -> EmbeddingStore:
    """A deterministic 40-term store with a couple of phrase tokens."""
    rng = np.random.default_rng(424242)
    terms = sorted(
        [f"term{i:02d}" for i in range(36)]
        + ["heat_pump", "gas_turbine", "wireless_charger", "flying_car"])
    vectors = rng.normal(size=(len(terms), 12)).astype(np.float32)
    return EmbeddingStore(terms, vectors, metadata={"origin": "fixture"})
