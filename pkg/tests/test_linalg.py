from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from logtrop.linalg import EchelonSpan, rank

rows = st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=7)


@settings(max_examples=60, deadline=None)
@given(rows, st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_echelon_span_matches_rank_and_reconstructs(gens, probe):
    span = EchelonSpan()
    for g in gens:
        span.add(g)
    assert len(span) == rank(gens)
    rem, used = span.reduce(probe)
    rebuilt = [Fraction(0)] * 5
    for i, c in used.items():
        rebuilt = [a + c * b for a, b in zip(rebuilt, gens[i])]
    full = [rebuilt[k] + rem.get(k, 0) for k in range(5)]
    assert full == [Fraction(x) for x in probe]
    assert (not rem) == (rank(gens + [probe]) == rank(gens))
