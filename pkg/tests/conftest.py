import itertools

from hypothesis import settings
from hypothesis import strategies as st

from hyperzero.hypercore import make_hypergraph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def hypergraphs(draw, s=None, min_n=1, max_n=7, max_edges=None):
    s = draw(st.integers(2, 3)) if s is None else s
    n = draw(st.integers(max(min_n, s), max_n))
    pool = list(itertools.combinations(range(n), s))
    cap = len(pool) if max_edges is None else min(max_edges, len(pool))
    chosen = draw(st.lists(st.sampled_from(pool), unique=True, max_size=cap)) if pool else []
    return make_hypergraph(s, n, chosen)
