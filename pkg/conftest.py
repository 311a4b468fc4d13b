"""Shared fixtures for the respell test suite."""

import os

import pytest

from respell.char_lm import read_word_list, train_char_lm
from respell.config import CFG, DATA_DIR
from respell.joint_sequence import train_joint_model


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running acceptance checks")


@pytest.fixture(autouse=True)
def restore_cfg():
    """Commands write the resolved settings into CFG; undo that per test."""
    saved = CFG.as_dict()
    yield
    for key, value in saved.items():
        setattr(CFG, key, value)


@pytest.fixture(autouse=True)
def no_dotenv(monkeypatch, tmp_path):
    """Keep RESPELL_* variables and stray .env files out of the tests."""
    for name in list(os.environ):
        if name.startswith("RESPELL_"):
            monkeypatch.delenv(name)
    monkeypatch.chdir(tmp_path)


@pytest.fixture(scope="session")
def data_path():
    return lambda name: os.path.join(DATA_DIR, name)


@pytest.fixture(scope="session")
def english_lm(data_path):
    return train_char_lm(read_word_list(data_path("words.txt")), order=10)


NAME_PAIRS = [
    ("Kaity", "Katie"), ("Katie", "Katie"),
    ("Sera", "Sarah"), ("Sarah", "Sarah"),
    ("Ly", "Lee"), ("Lee", "Lee"),
]


@pytest.fixture(scope="session")
def name_pairs():
    return list(NAME_PAIRS)


@pytest.fixture(scope="session")
def name_model():
    return train_joint_model(NAME_PAIRS)


@pytest.fixture(scope="session")
def identity_model():
    return train_joint_model([("a", "a"), ("b", "b"), ("ab", "ab"), ("ba", "ba")], order=2)
