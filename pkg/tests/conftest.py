import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from plentail.constraints import Belief
from plentail.sentences import parse
from plentail.worlds import conjunctive_mp_tableau, enumerate_worlds

FIXTURES = Path(__file__).parent / "fixtures"

# closed-form n=3 matrix, sentence-major; 2 marks don't care
SCHEMA3_ROWS = [
    [1, 1, 1, 1, 0],
    [1, 1, 1, 0, 2],
    [1, 1, 0, 2, 2],
    [1, 0, 1, 1, 1],
    [1, 0, 2, 2, 2],
]

# the sixteen two-valued worlds, sentence-major
MP3_ROWS = [
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1],
    [1, 1, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1],
    [1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0],
    [1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0],
]

MP3_PRIORS = (0.8, 0.7, 0.6, 0.8)


def columns(rows):
    return {tuple(col) for col in zip(*rows)}


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def mp3_sentences():
    return [parse(t) for t in ("A1", "A2", "A3", "A1 & A2 & A3 -> B", "B")]


@pytest.fixture
def mp3_full(mp3_sentences):
    return enumerate_worlds(mp3_sentences, source_count=4)


@pytest.fixture
def schema3():
    return conjunctive_mp_tableau(3)


@pytest.fixture
def mp3_beliefs():
    return [Belief.at(i, p) for i, p in enumerate(MP3_PRIORS)]
