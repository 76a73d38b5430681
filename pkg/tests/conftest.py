import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for randcorp

from techatlas import BuildConfig, load_corpus
from techatlas.artifact import build_artifact

DATA_DIR = Path(__file__).parent / "data"
FIXTURE_CORPUS = DATA_DIR / "fixture_corpus.jsonl"


@pytest.fixture(scope="session")
def fixture_corpus_path() -> Path:
    return FIXTURE_CORPUS


@pytest.fixture(scope="session")
def fixture_index():
    return load_corpus(FIXTURE_CORPUS)


@pytest.fixture(scope="session")
def fixture_artifact(tmp_path_factory):
    """One artifact built from the fixture corpus, shared read-only."""
    out = tmp_path_factory.mktemp("artifact") / "fixture"
    return build_artifact(FIXTURE_CORPUS, out, BuildConfig()), out
