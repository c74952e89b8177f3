"""A small language for 2-dimensional bordisms.

Grammar::

    program := expr EOF
    expr    := term (";" term)*
    term    := atom ("|" atom)*
    atom    := "cup" | "cap" | "pants" | "copants" | "cyl" | "swap"
             | "genus" "(" INT ")" | "(" expr ")"

``;`` composes left to right (the left bordism happens first) and ``|`` stacks
bordisms side by side, top to bottom. ``#`` starts a comment running to the
end of the line.

Programs compile to a plan of kernel operations over a chosen algebra and
``;`` becomes :func:`~frobkit.kernels.compose` in the same order. A closed
program (arity 0 -> 0) evaluates to the graded dimension of a complex of
vector spaces; an open one evaluates to a kernel.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import Algebra
from .complexes import GradedDims, homology_dims
from .errors import ArityError, BordismSyntaxError
from .kernels import (
    DEFAULT_CUTOFF,
    Kernel,
    comult_kernel,
    compose,
    counit_kernel,
    external,
    identity_kernel,
    mult_kernel,
    swap_kernel,
    unit_kernel,
)

GENERATORS = {
    "cup": (0, 1),
    "cap": (1, 0),
    "pants": (2, 1),
    "copants": (1, 2),
    "cyl": (1, 1),
    "swap": (2, 2),
}


# -- syntax tree ------------------------------------------------------------------

class Expr:
    arity: tuple[int, int]

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Gen(Expr):
    name: str

    @property
    def arity(self):
        return GENERATORS[self.name]


@dataclass(frozen=True)
class Compose(Expr):
    left: Expr
    right: Expr

    def __post_init__(self):
        if self.left.arity[1] != self.right.arity[0]:
            raise ArityError(self, self.left.arity[1], self.right.arity[0])

    @property
    def arity(self):
        return (self.left.arity[0], self.right.arity[1])


@dataclass(frozen=True)
class Tensor(Expr):
    top: Expr
    bottom: Expr

    @property
    def arity(self):
        return (self.top.arity[0] + self.bottom.arity[0], self.top.arity[1] + self.bottom.arity[1])


@dataclass(frozen=True)
class Genus(Expr):
    g: int

    @property
    def arity(self):
        return (0, 0)

    def expand(self) -> Expr:
        out: Expr = Gen("cup")
        for _ in range(self.g):
            out = Compose(Compose(out, Gen("copants")), Gen("pants"))
        return Compose(out, Gen("cap"))


# -- parsing ----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(#[^\n]*)|([a-z]+)|(\d+)|(\S))")
ATOM_START = frozenset(GENERATORS) | {"genus", "("}


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        comment, word, num, sym = m.groups()
        start = m.start(m.lastindex) if m.lastindex else m.end()
        pos = m.end()
        if comment is not None:
            continue
        if word is not None:
            toks.append(("word", word, start))
        elif num is not None:
            toks.append(("int", num, start))
        elif sym is not None:
            toks.append(("sym", sym, start))
    toks.append(("eof", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def fail(self, expected):
        kind, val, pos = self.peek()
        raise BordismSyntaxError(pos, expected, "end of input" if kind == "eof" else val)

    def take(self, value, expected=None):
        kind, val, _ = self.peek()
        if val != value or kind == "eof":
            self.fail(expected or {value})
        self.i += 1

    def program(self) -> Expr:
        e = self.expr()
        if self.peek()[0] != "eof":
            self.fail({";", "|", "end of input"})
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] == ";" and self.peek()[0] == "sym":
            self.i += 1
            e = Compose(e, self.term())
        return e

    def term(self) -> Expr:
        e = self.atom()
        while self.peek()[1] == "|" and self.peek()[0] == "sym":
            self.i += 1
            e = Tensor(e, self.atom())
        return e

    def atom(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "word" and val in GENERATORS:
            self.i += 1
            return Gen(val)
        if kind == "word" and val == "genus":
            self.i += 1
            self.take("(")
            kind, val, _ = self.peek()
            if kind != "int":
                self.fail({"INT"})
            self.i += 1
            self.take(")")
            return Genus(int(val))
        if kind == "sym" and val == "(":
            self.i += 1
            e = self.expr()
            self.take(")", {";", "|", ")"})
            return e
        self.fail(ATOM_START)


def parse(text: str) -> Expr:
    """Parse a bordism program; arity errors surface as ``ArityError``."""
    return _Parser(text).program()


def to_text(e: Expr) -> str:
    """Inverse of :func:`parse` up to whitespace and redundant parentheses."""
    if isinstance(e, Gen):
        return e.name
    if isinstance(e, Genus):
        return f"genus({e.g})"
    if isinstance(e, Compose):
        right = to_text(e.right)
        if isinstance(e.right, Compose):
            right = f"({right})"
        return f"{to_text(e.left)} ; {right}"
    if isinstance(e, Tensor):
        top, bottom = to_text(e.top), to_text(e.bottom)
        if isinstance(e.top, Compose):
            top = f"({top})"
        if isinstance(e.bottom, (Compose, Tensor)):
            bottom = f"({bottom})"
        return f"{top} | {bottom}"
    raise TypeError(f"not a bordism expression: {e!r}")


# -- compilation --------------------------------------------------------------------

def expand(e: Expr) -> Expr:
    """Replace every ``genus(g)`` node by its generator decomposition."""
    if isinstance(e, Genus):
        return e.expand()
    if isinstance(e, Compose):
        return Compose(expand(e.left), expand(e.right))
    if isinstance(e, Tensor):
        return Tensor(expand(e.top), expand(e.bottom))
    return e


def _plan(e: Expr) -> tuple:
    if isinstance(e, Gen):
        return ("gen", e.name)
    if isinstance(e, Compose):
        return ("compose", _plan(e.left), _plan(e.right))
    return ("external", _plan(e.top), _plan(e.bottom))


@dataclass(frozen=True)
class CompiledProgram:
    """``plan`` is a tree of ``("gen", name)``, ``("compose", l, r)``, ``("external", t, b)``.

    Equal subtrees are evaluated once, so the tree is effectively a DAG.
    """

    expr: Expr
    algebra: Algebra
    cutoff: int
    plan: tuple

    @property
    def closed(self) -> bool:
        return self.expr.arity == (0, 0)


def compile(expr: Expr | str, a: Algebra, cutoff: int = DEFAULT_CUTOFF) -> CompiledProgram:
    if isinstance(expr, str):
        expr = parse(expr)
    return CompiledProgram(expr, a, cutoff, _plan(expand(expr)))


def _generator(name: str, a: Algebra) -> Kernel:
    if name == "swap":
        return swap_kernel(a, a)
    return {
        "cup": unit_kernel,
        "cap": counit_kernel,
        "pants": mult_kernel,
        "copants": comult_kernel,
        "cyl": identity_kernel,
    }[name](a)


def evaluate(p: CompiledProgram) -> GradedDims | Kernel:
    memo: dict = {}

    def run(node):
        k = memo.get(node)
        if k is None:
            op = node[0]
            if op == "gen":
                k = _generator(node[1], p.algebra)
            elif op == "compose":
                k = compose(run(node[1]), run(node[2]), p.cutoff)
            else:
                k = external(run(node[1]), run(node[2]))
            memo[node] = k
        return k

    k = run(p.plan)
    if p.closed:
        return homology_dims(k.body, p.cutoff, lo=0)
    return k


def run(text: str, a: Algebra, cutoff: int = DEFAULT_CUTOFF) -> GradedDims | Kernel:
    return evaluate(compile(parse(text), a, cutoff))
