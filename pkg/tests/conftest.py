import pytest

from stylodetect.lexicon import fixture_lexicon


@pytest.fixture(scope="session")
def lex():
    return fixture_lexicon()
