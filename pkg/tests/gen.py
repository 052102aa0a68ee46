"""Hypothesis generators for random well-typed terms."""

from __future__ import annotations

from hypothesis import strategies as st

from actorgame.term import NIL, Par, Recv, Send, Sum, Tick, ctx_after


@st.composite
def prefixes(draw, gamma: int):
    kinds = ["tick"]
    if gamma > 0:
        kinds += ["recv", "send"]
    kind = draw(st.sampled_from(kinds))
    if kind == "tick":
        return Tick()
    if kind == "recv":
        return Recv(draw(st.integers(1, gamma)))
    return Send(draw(st.integers(1, gamma)), draw(st.integers(1, gamma)))


@st.composite
def terms(draw, gamma: int, depth: int = 3, width: int = 2):
    """A random process well typed at context ``gamma``."""
    if depth == 0:
        return NIL
    shape = draw(st.sampled_from(["nil", "sum", "sum", "par"]))
    if shape == "nil":
        return NIL
    if shape == "par":
        return Par(
            draw(terms(gamma + 1, depth - 1, width)),
            draw(terms(gamma + 1, depth - 1, width)),
        )
    k = draw(st.integers(1, width))
    branches = []
    for _ in range(k):
        prefix = draw(prefixes(gamma))
        cont = draw(terms(ctx_after(prefix, gamma), depth - 1, width))
        branches.append((prefix, cont))
    return Sum(tuple(branches))


@st.composite
def typed_terms(draw, max_gamma: int = 2, depth: int = 3):
    gamma = draw(st.integers(0, max_gamma))
    return draw(terms(gamma, depth)), gamma
