"""Line-oriented text format for LPN systems.

::

    # comment
    module <name>
    var <id> = <int>
    place <id> [marked]
    trans <id> : {<places>} -> {<places>} [guard <bool-expr>] [assign <id> := <num-expr>, ...]

A variable declared with the same name in several modules is shared; its
initial values must agree.  A transition without ``guard`` is always
guarded by ``true``.
"""

from __future__ import annotations

import re
from pathlib import Path

from .expr import (ExprSyntaxError, KEYWORDS, parse_boolean_prefix, parse_numeric_prefix,
                   to_text, variables)
from .model import TRUE, LpnModule, LpnSystem, ModelError, Transition, compose

RESERVED = KEYWORDS | {"module", "var", "place", "trans", "guard", "assign", "marked"}

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_WS = re.compile(r"[ \t]*")
_INT = re.compile(r"-?\d+")


class ModelFormatError(ModelError):
    """A model file that does not parse or does not describe a valid system."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.col = col


class _Line:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.lineno = lineno
        self.pos = 0

    def error(self, message: str, pos: int | None = None):
        p = self.pos if pos is None else pos
        return ModelFormatError(message, self.lineno, p + 1)

    def skip(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def ident(self, what: str) -> str:
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        if m.group() in RESERVED:
            raise self.error(f"{m.group()!r} is a reserved word")
        self.pos = m.end()
        return m.group()

    def keyword(self, word: str) -> bool:
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        if m and m.group() == word:
            self.pos = m.end()
            return True
        return False

    def symbol(self, sym: str, required: bool = True) -> bool:
        self.skip()
        if self.text.startswith(sym, self.pos):
            self.pos += len(sym)
            return True
        if required:
            raise self.error(f"expected {sym!r}")
        return False

    def integer(self) -> int:
        self.skip()
        m = _INT.match(self.text, self.pos)
        if not m:
            raise self.error("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def place_set(self) -> list[str]:
        self.symbol("{")
        names = []
        if self.symbol("}", required=False):
            return names
        while True:
            names.append(self.ident("place name"))
            if self.symbol("}", required=False):
                return names
            self.symbol(",")

    def expr(self, parse):
        try:
            node, end = parse(self.text, self.pos)
        except ExprSyntaxError as exc:
            raise ModelFormatError(exc.message, self.lineno, exc.pos + 1) from exc
        self.pos = end
        return node


class _ModuleDraft:
    def __init__(self, name: str, lineno: int):
        self.name = name
        self.lineno = lineno
        self.variables: dict[str, int] = {}
        self.places: list[str] = []
        self.marked: set[str] = set()
        self.transitions: list[tuple[Transition, int]] = []

    def build(self) -> LpnModule:
        places = set(self.places)
        for t, lineno in self.transitions:
            for p in sorted(t.preset | t.postset):
                if p not in places:
                    raise ModelFormatError(
                        f"transition {t.name!r} uses unknown place {p!r}", lineno)
            used = variables(t.guard)
            for v, rhs in t.assigns:
                used |= variables(rhs) | {v}
            for v in sorted(used):
                if v not in self.variables:
                    raise ModelFormatError(
                        f"transition {t.name!r} uses undeclared variable {v!r}", lineno)
        try:
            return LpnModule(self.name, self.variables, self.places, self.marked,
                             [t for t, _ in self.transitions])
        except ModelError as exc:
            raise ModelFormatError(str(exc), self.lineno) from exc


def parse_model(text: str, name: str = "model") -> LpnSystem:
    """Parse a model description into a validated :class:`LpnSystem`."""
    drafts: list[_ModuleDraft] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        line = _Line(body, lineno)
        if line.at_end():
            continue
        start = line.pos
        kw = _IDENT.match(body, line.pos)
        if kw is None:
            raise line.error("expected a declaration")
        word = kw.group()
        line.pos = kw.end()
        if word == "module":
            mname = line.ident("module name")
            if any(d.name == mname for d in drafts):
                raise line.error(f"duplicate module {mname!r}", start)
            drafts.append(_ModuleDraft(mname, lineno))
        elif word in ("var", "place", "trans"):
            if not drafts:
                raise line.error(f"{word!r} outside of a module", start)
            _declaration(word, line, drafts[-1], start)
        else:
            raise line.error(f"unknown declaration {word!r}", start)
        if not line.at_end():
            raise line.error("unexpected text")
    if not drafts:
        raise ModelFormatError("no modules")
    modules = [d.build() for d in drafts]
    try:
        return compose(modules, name)
    except ModelError as exc:
        raise ModelFormatError(str(exc)) from exc


def _declaration(word: str, line: _Line, draft: _ModuleDraft, start: int):
    if word == "var":
        v = line.ident("variable name")
        if v in draft.variables:
            raise line.error(f"duplicate variable {v!r}", start)
        line.symbol("=")
        draft.variables[v] = line.integer()
    elif word == "place":
        p = line.ident("place name")
        if p in draft.places:
            raise line.error(f"duplicate place {p!r}", start)
        draft.places.append(p)
        if line.keyword("marked"):
            draft.marked.add(p)
    else:
        tname = line.ident("transition name")
        if any(t.name == tname for t, _ in draft.transitions):
            raise line.error(f"duplicate transition {tname!r}", start)
        line.symbol(":")
        preset = line.place_set()
        line.symbol("->")
        postset = line.place_set()
        guard = TRUE
        assigns = []
        if line.keyword("guard"):
            guard = line.expr(parse_boolean_prefix)
        if line.keyword("assign"):
            while True:
                target = line.ident("variable name")
                line.symbol(":=")
                assigns.append((target, line.expr(parse_numeric_prefix)))
                if not line.symbol(",", required=False):
                    break
        if not preset or not postset:
            raise line.error(f"transition {tname!r} needs a nonempty preset and postset", start)
        draft.transitions.append(
            (Transition(tname, frozenset(preset), frozenset(postset), guard, tuple(assigns)),
             line.lineno))


def load_model(path: str | Path) -> LpnSystem:
    path = Path(path)
    return parse_model(path.read_text(), path.stem)


def format_model(system: LpnSystem) -> str:
    """Render ``system`` in the text format accepted by :func:`parse_model`."""
    out = []
    for m in system.modules:
        out.append(f"module {m.name}")
        for v, value in m.variables.items():
            out.append(f"var {v} = {value}")
        for p in m.places:
            out.append(f"place {p}" + (" marked" if p in m.initial_marking else ""))
        for t in m.transitions:
            line = (f"trans {t.name} : {{{', '.join(sorted(t.preset))}}} -> "
                    f"{{{', '.join(sorted(t.postset))}}}")
            if t.guard != TRUE:
                line += f" guard {to_text(t.guard)}"
            if t.assigns:
                line += " assign " + ", ".join(f"{v} := {to_text(e)}" for v, e in t.assigns)
            out.append(line)
        out.append("")
    return "\n".join(out)


def builtin_model_path(name: str) -> Path:
    return Path(__file__).parent / "models" / name
