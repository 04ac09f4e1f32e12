from hypothesis import given, strategies as st

from dendrolog.coding import code_of, decode_seq, encode_seq, pair, unpair


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_pair_round_trip(x, y):
    assert unpair(pair(x, y)) == (x, y)


def test_pair_is_a_bijection_on_a_prefix():
    seen = {pair(x, y) for x in range(40) for y in range(40) if x + y < 40}
    assert seen == set(range(40 * 41 // 2))


@given(st.lists(st.integers(0, 1000), max_size=8))
def test_sequence_code_round_trip(items):
    assert decode_seq(encode_seq(items)) == tuple(items)


@given(st.lists(st.integers(0, 50), max_size=5), st.lists(st.integers(0, 50), max_size=5))
def test_code_of_is_injective_on_tuples(a, b):
    assert (code_of(tuple(a)) == code_of(tuple(b))) == (tuple(a) == tuple(b))
