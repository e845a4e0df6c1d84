"""Parametric model families for benchmarking.

Each family is built module by module from the text format so that the
construction below is the whole definition of the net.
"""

from __future__ import annotations

from .model import LpnSystem, ModelError
from .modelfile import parse_model

FAMILIES = ("philosophers", "ring_arbiter", "toggle_chain")


def toggle_chain_text(n: int) -> str:
    """``n`` modules ``tog0 .. tog{n-1}``; module ``i`` owns bit ``b<i>``
    (initially 0) and one marked place with a single self-loop transition
    ``flip`` assigning ``b<i> := 1 - b<i>``.  The bits are independent, so
    there are ``2**n`` reachable states."""
    lines = []
    for i in range(n):
        lines += [
            f"module tog{i}",
            f"var b{i} = 0",
            f"place on{i} marked",
            f"trans flip : {{on{i}}} -> {{on{i}}} assign b{i} := 1 - b{i}",
            "",
        ]
    return "\n".join(lines)


def philosophers_text(n: int) -> str:
    """Dining philosophers ``phil0 .. phil{n-1}`` around ``n`` forks.

    Fork ``f<i>`` is 0 when free and 1 when taken; it is shared by
    philosophers ``i`` (its left fork) and ``i-1`` (its right fork).
    Philosopher ``i`` has places ``think<i>`` (marked), ``hold<i>`` and
    ``eat<i>`` and three transitions::

        take_left  : think -> hold  guard f<i> == 0  assign f<i> := 1
        take_right : hold  -> eat   guard f<r> == 0  assign f<r> := 1
        release    : eat   -> think                  assign f<i> := 0, f<r> := 0

    with ``r = (i + 1) % n``.  The all-holding-left state is a deadlock.
    """
    lines = []
    for i in range(n):
        r = (i + 1) % n
        lines += [
            f"module phil{i}",
            f"var f{i} = 0",
            f"var f{r} = 0",
            f"place think{i} marked",
            f"place hold{i}",
            f"place eat{i}",
            f"trans take_left : {{think{i}}} -> {{hold{i}}} guard f{i} == 0 assign f{i} := 1",
            f"trans take_right : {{hold{i}}} -> {{eat{i}}} guard f{r} == 0 assign f{r} := 1",
            f"trans release : {{eat{i}}} -> {{think{i}}} assign f{i} := 0, f{r} := 0",
            "",
        ]
    return "\n".join(lines)


def ring_arbiter_text(n: int) -> str:
    """Token-ring arbiter with cells ``cell0 .. cell{n-1}``.

    All cells share ``tok`` (initially 0), the index of the cell holding
    the token.  Cell ``i`` has places ``idle<i>`` (marked), ``req<i>`` and
    ``cs<i>``::

        request : idle -> req
        enter   : req  -> cs    guard tok == i
        leave   : cs   -> idle  assign tok := (i + 1) % n
        pass    : idle -> idle  guard tok == i  assign tok := (i + 1) % n
    """
    lines = []
    for i in range(n):
        nxt = f"({i} + 1) % {n}"
        lines += [
            f"module cell{i}",
            "var tok = 0",
            f"place idle{i} marked",
            f"place req{i}",
            f"place cs{i}",
            f"trans request : {{idle{i}}} -> {{req{i}}}",
            f"trans enter : {{req{i}}} -> {{cs{i}}} guard tok == {i}",
            f"trans leave : {{cs{i}}} -> {{idle{i}}} assign tok := {nxt}",
            f"trans pass : {{idle{i}}} -> {{idle{i}}} guard tok == {i} assign tok := {nxt}",
            "",
        ]
    return "\n".join(lines)


_MIN_N = {"philosophers": 2, "ring_arbiter": 1, "toggle_chain": 1}
_TEXT = {"philosophers": philosophers_text, "ring_arbiter": ring_arbiter_text,
         "toggle_chain": toggle_chain_text}


def generate_model(family: str, n: int) -> LpnSystem:
    if family not in _TEXT:
        raise ValueError(f"unknown model family {family!r} (expected one of {', '.join(FAMILIES)})")
    if not isinstance(n, int) or n < _MIN_N[family]:
        raise ModelError(f"{family} needs N >= {_MIN_N[family]}, got {n}")
    return parse_model(_TEXT[family](n), f"{family}{n}")
