import json
from pathlib import Path

import pytest

from reqnet.graph import FeatureGraph

GOLDEN_DIR = Path(__file__).parent / "golden"
SAMPLE_CORPUS = (Path(__file__).parent.parent
                 / "src" / "reqnet" / "data" / "sample_corpus.csv")

# Reconstruction of the worked people-network example: a hub (chan)
# connected to five members, a second hub (sherlock) closing three
# triangles through chan, and a third hub (alex) fanning out to four
# leaves. 10 vertices, 12 edges.
PEOPLE_EDGES = {
    ("alex", "chan"): 1,
    ("chan", "steve"): 1,
    ("chan", "sherlock"): 1,
    ("andre", "chan"): 1,
    ("chan", "michael"): 1,
    ("sherlock", "steve"): 1,
    ("andre", "sherlock"): 1,
    ("michael", "sherlock"): 1,
    ("alex", "phillip"): 1,
    ("alex", "chris"): 1,
    ("alex", "jeff"): 1,
    ("alex", "james"): 1,
}


@pytest.fixture
def people_graph():
    return FeatureGraph(PEOPLE_EDGES)


@pytest.fixture(scope="session")
def shapiro_golden():
    with open(GOLDEN_DIR / "shapiro_wilk.json") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def cnm_golden():
    with open(GOLDEN_DIR / "cnm_bridge.json") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def sample_corpus_path():
    return SAMPLE_CORPUS
