import hypothesis.strategies as st
import pytest

from carpetgaps.carpet import digit_set
from carpetgaps.corpus import CORPUS_NAMES, load_corpus


@pytest.fixture(scope="session")
def corpus():
    return {name: load_corpus(name) for name in CORPUS_NAMES}


@st.composite
def digit_sets(draw, max_n=5, max_m=4, max_size=8):
    m = draw(st.integers(2, max_m))
    n = draw(st.integers(m, max_n))
    pool = [(i, j) for i in range(n) for j in range(m)]
    digits = draw(st.sets(st.sampled_from(pool), min_size=2,
                          max_size=min(max_size, n * m)))
    return digit_set(n, m, digits)
