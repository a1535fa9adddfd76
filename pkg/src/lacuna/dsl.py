"""Tiny textual language naming sequences, partitions, and moduli.

Grammar (LL(1), single-token lookahead):

    expr  := ident "(" args ")"
    args  := arg ("," arg)* | <empty>
    arg   := number | ident | pair | expr
    pair  := number ":" number

Whitespace is insignificant; identifiers match [a-z_][a-z0-9_]*; numbers
are unsigned decimals with optional fraction and exponent.  parse() never
raises anything but ParseError on any input, and every error carries the
first failing offset.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import lacunary, modulus, sequences

Span = tuple[int, int]


class ParseError(Exception):
    def __init__(self, message: str, position: int, expected: list[str] | None = None):
        self.message = message
        self.position = position
        self.expected = expected or []
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {position}{detail}")


class LoweringError(Exception):
    def __init__(self, message: str, span: Span):
        self.span = span
        super().__init__(f"{message} (at {span[0]}..{span[1]})")


@dataclass(frozen=True)
class Number:
    value: float
    is_int: bool
    span: Span = field(compare=False)

    kind = "number"


@dataclass(frozen=True)
class Ident:
    name: str
    span: Span = field(compare=False)

    kind = "ident"


@dataclass(frozen=True)
class Pair:
    key: Number
    value: Number
    span: Span = field(compare=False)

    kind = "pair"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    span: Span = field(compare=False)

    kind = "call"


Ast = Call | Number | Ident | Pair

_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<number>[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?)"
    r"|(?P<ident>[a-z_][a-z0-9_]*)"
    r"|(?P<punct>[(),:])"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | ( | ) | , | : | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        if m.lastgroup == "ws":
            i = m.end()
            continue
        if m.lastgroup == "punct":
            out.append(_Token(m.group(), m.group(), i))
        else:
            out.append(_Token(m.lastgroup, m.group(), i))
        i = m.end()
    out.append(_Token("end", "", n))
    return out


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def bump(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        if self.cur.kind != kind:
            raise ParseError(f"unexpected {self._describe(self.cur)}", self.cur.pos, [what])
        return self.bump()

    @staticmethod
    def _describe(tok: _Token) -> str:
        return "end of input" if tok.kind == "end" else f"{tok.text!r}"

    def number(self) -> Number:
        tok = self.expect("number", "number")
        value = float(tok.text)
        if value == float("inf"):
            raise ParseError("number out of range", tok.pos)
        is_int = "." not in tok.text and "e" not in tok.text and "E" not in tok.text
        return Number(value=value, is_int=is_int, span=(tok.pos, tok.pos + len(tok.text)))

    def expr(self) -> Call:
        name = self.expect("ident", "identifier")
        self.expect("(", "'('")
        args: list = []
        if self.cur.kind != ")":
            args.append(self.arg())
            while self.cur.kind == ",":
                self.bump()
                args.append(self.arg())
        close = self.expect(")", "')'")
        return Call(name=name.text, args=tuple(args), span=(name.pos, close.pos + 1))

    def arg(self):
        tok = self.cur
        if tok.kind == "number":
            num = self.number()
            if self.cur.kind == ":":
                self.bump()
                val = self.number()
                return Pair(key=num, value=val, span=(num.span[0], val.span[1]))
            return num
        if tok.kind == "ident":
            nxt = self.tokens[self.i + 1]
            if nxt.kind == "(":
                return self.expr()
            self.bump()
            return Ident(name=tok.text, span=(tok.pos, tok.pos + len(tok.text)))
        raise ParseError(f"unexpected {self._describe(tok)}", tok.pos,
                         ["number", "identifier", "expression"])


def parse(text: str | bytes) -> Call:
    """Parse one expression; raises ParseError (and only ParseError) on bad input."""
    if isinstance(text, bytes):
        text = text.decode("latin-1")
    parser = _Parser(_tokenize(text))
    node = parser.expr()
    parser.expect("end", "end of input")
    return node


def unparse(ast: Ast) -> str:
    """Canonical text form; reparses to a structurally equal Ast."""
    if isinstance(ast, Number):
        return str(int(ast.value)) if ast.is_int else repr(ast.value)
    if isinstance(ast, Ident):
        return ast.name
    if isinstance(ast, Pair):
        return f"{unparse(ast.key)}:{unparse(ast.value)}"
    return f"{ast.name}({', '.join(unparse(a) for a in ast.args)})"


def pretty(ast: Ast, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(ast, Number):
        return f"{pad}number {unparse(ast)}"
    if isinstance(ast, Ident):
        return f"{pad}ident {ast.name}"
    if isinstance(ast, Pair):
        return f"{pad}pair {unparse(ast)}"
    lines = [f"{pad}call {ast.name}"]
    for a in ast.args:
        lines.append(pretty(a, indent + 1))
    return "\n".join(lines)


# --- lowering


def _need_int(node, what: str) -> int:
    if not isinstance(node, Number) or not node.is_int:
        raise LoweringError(f"{what} must be an integer literal", _span_of(node))
    return int(node.value)


def _need_number(node, what: str) -> float:
    if not isinstance(node, Number):
        raise LoweringError(f"{what} must be a number", _span_of(node))
    return node.value


def _span_of(node) -> Span:
    return getattr(node, "span", (0, 0))


def _need_partition(node) -> lacunary.LacunaryPartition:
    out = lower(node)
    if not isinstance(out, lacunary.LacunaryPartition):
        raise LoweringError("expected a partition expression", _span_of(node))
    return out


def _need_modulus(node) -> modulus.Modulus:
    out = lower(node)
    if not isinstance(out, modulus.Modulus):
        raise LoweringError("expected a modulus expression", _span_of(node))
    return out


def _arity(call: Call, n: int) -> None:
    if len(call.args) != n:
        raise LoweringError(
            f"{call.name} takes {n} argument(s), got {len(call.args)}", call.span
        )


def _lower_gcdclass(call: Call, perturbed: bool):
    if len(call.args) < 2:
        raise LoweringError(f"{call.name} needs n0 and divisor:value pairs", call.span)
    n0 = _need_int(call.args[0], "n0")
    tail = list(call.args[1:])
    decay = None
    if perturbed:
        if len(tail) < 2:
            raise LoweringError(f"{call.name} needs pairs and a trailing decay", call.span)
        decay = _need_number(tail[-1], "decay")
        tail = tail[:-1]
    table = {}
    for node in tail:
        if not isinstance(node, Pair):
            raise LoweringError("expected divisor:value pair", _span_of(node))
        d = _need_int(node.key, "divisor")
        if d in table:
            raise LoweringError(f"divisor {d} listed twice", node.span)
        table[d] = node.value.value
    try:
        div_table = sequences.DivisorTable(n0, table)
    except ValueError as exc:
        raise LoweringError(str(exc), call.span) from exc
    if perturbed:
        return sequences.perturbed_gcd_class(div_table, decay)
    return sequences.gcd_class(div_table)


def _lower(call: Call):
    name = call.name
    if name == "gcdclass":
        return _lower_gcdclass(call, perturbed=False)
    if name == "perturbed_gcdclass":
        return _lower_gcdclass(call, perturbed=True)
    if name == "block_spike":
        _arity(call, 3)
        theta = _need_partition(call.args[0])
        height = _need_number(call.args[1], "height")
        spikes = _need_int(call.args[2], "spikes_per_block")
        return sequences.block_spike(theta, height, spikes)
    if name == "explicit_list":
        if not call.args:
            raise LoweringError("explicit_list needs at least the tail value", call.span)
        vals = [_need_number(a, "value") for a in call.args]
        return sequences.explicit_list(vals[:-1], vals[-1])
    if name == "harmonic":
        _arity(call, 1)
        return sequences.harmonic_like(_need_number(call.args[0], "exponent"))
    if name == "constant":
        _arity(call, 1)
        return sequences.constant(_need_number(call.args[0], "value"))
    if name == "geometric":
        _arity(call, 3)
        return lacunary.geometric(
            _need_int(call.args[0], "k0"),
            _need_number(call.args[1], "rho"),
            _need_int(call.args[2], "R"),
        )
    if name == "points":
        return lacunary.from_points([_need_int(a, "point") for a in call.args])
    if name == "refine":
        if not call.args:
            raise LoweringError("refine needs a partition and extra points", call.span)
        theta = _need_partition(call.args[0])
        extra = [_need_int(a, "extra point") for a in call.args[1:]]
        return lacunary.refine(theta, extra).child
    if name == "identity":
        _arity(call, 0)
        return modulus.identity()
    if name == "power":
        _arity(call, 1)
        return modulus.power(_need_number(call.args[0], "p"))
    if name == "bounded":
        _arity(call, 0)
        return modulus.bounded()
    if name == "sum":
        _arity(call, 2)
        return modulus.sum_of(_need_modulus(call.args[0]), _need_modulus(call.args[1]))
    if name == "compose":
        _arity(call, 2)
        return modulus.compose(_need_modulus(call.args[0]), _need_modulus(call.args[1]))
    if name == "iterate":
        _arity(call, 2)
        return modulus.iterate(_need_modulus(call.args[0]), _need_int(call.args[1], "i"))
    raise LoweringError(
        f"unknown family {name!r}; known: {', '.join(sorted(KNOWN_FAMILIES))}", call.span
    )


KNOWN_FAMILIES = frozenset({
    "gcdclass", "perturbed_gcdclass", "block_spike", "explicit_list", "harmonic",
    "constant", "geometric", "points", "refine",
    "identity", "power", "bounded", "sum", "compose", "iterate",
})


def lower(ast: Ast):
    """Turn a parsed expression into a Sequence, LacunaryPartition, or Modulus."""
    if not isinstance(ast, Call):
        raise LoweringError("top-level form must be a call", _span_of(ast))
    try:
        return _lower(ast)
    except LoweringError:
        raise
    except ValueError as exc:
        raise LoweringError(str(exc), ast.span) from exc


def parse_and_lower(text: str):
    return lower(parse(text))
