"""
Tokenizer and recursive-descent parser for the text syntax shared by
scalars (`-1 - e`), torus elements (`2 * x1^2 x2^-1`) and commutative
polynomials (`u^2 v^2 - 1`).

The parser is generic: it evaluates the expression through a small
adapter supplied by the caller, so multiplication order is preserved for
noncommutative targets.
"""

import re
from fractions import Fraction
from typing import Callable, Generic, List, Tuple, TypeVar

from ptorder.errors import ParseError

T = TypeVar("T")

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def tokenize(text: str) -> List[Tuple[str, str]]:
    tokens: List[Tuple[str, str]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        number, name, op = m.groups()
        if number is not None:
            tokens.append(("num", number))
        elif name is not None:
            tokens.append(("name", name))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} at offset {m.start(3)} in {text!r}")
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class Adapter(Generic[T]):
    """Callbacks used by `parse_expression` to build values of type T."""

    def __init__(
        self,
        number: Callable[[Fraction], T],
        symbol: Callable[[str, int], T],
        add: Callable[[T, T], T],
        mul: Callable[[T, T], T],
        neg: Callable[[T], T],
        power: Callable[[T, int], T],
    ):
        self.number = number
        self.symbol = symbol
        self.add = add
        self.mul = mul
        self.neg = neg
        self.power = power


class _Parser(Generic[T]):
    def __init__(self, text: str, adapter: Adapter[T]):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.a = adapter

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, op: str) -> None:
        kind, value = self.take()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r} in {self.text!r}, got {value!r}")

    def parse(self) -> T:
        if not self.tokens:
            raise ParseError("empty expression")
        value = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return value

    def expr(self) -> T:
        negate = False
        kind, value = self.peek()
        if kind == "op" and value in "+-":
            self.take()
            negate = value == "-"
        acc = self.term()
        if negate:
            acc = self.a.neg(acc)
        while True:
            kind, value = self.peek()
            if kind == "op" and value in "+-":
                self.take()
                rhs = self.term()
                acc = self.a.add(acc, self.a.neg(rhs) if value == "-" else rhs)
            else:
                return acc

    def term(self) -> T:
        acc = self.factor()
        while True:
            kind, value = self.peek()
            if kind == "op" and value == "*":
                self.take()
                acc = self.a.mul(acc, self.factor())
            elif kind in ("num", "name") or (kind == "op" and value == "("):
                acc = self.a.mul(acc, self.factor())
            else:
                return acc

    def exponent(self) -> int:
        kind, value = self.peek()
        if not (kind == "op" and value == "^"):
            return 1
        self.take()
        sign = 1
        kind, value = self.peek()
        if kind == "op" and value in "+-":
            self.take()
            sign = -1 if value == "-" else 1
        elif kind == "op" and value == "(":
            self.take()
            inner = self.exponent_paren()
            self.expect(")")
            return inner
        kind, value = self.take()
        if kind != "num":
            raise ParseError(f"expected integer exponent in {self.text!r}")
        return sign * int(value)

    def exponent_paren(self) -> int:
        sign = 1
        kind, value = self.peek()
        if kind == "op" and value in "+-":
            self.take()
            sign = -1 if value == "-" else 1
        kind, value = self.take()
        if kind != "num":
            raise ParseError(f"expected integer exponent in {self.text!r}")
        return sign * int(value)

    def factor(self) -> T:
        kind, value = self.take()
        if kind == "num":
            number = Fraction(int(value))
            nkind, nvalue = self.peek()
            if nkind == "op" and nvalue == "/":
                self.take()
                dkind, dvalue = self.take()
                if dkind != "num" or int(dvalue) == 0:
                    raise ParseError(f"bad rational denominator in {self.text!r}")
                number /= int(dvalue)
            result = self.a.number(number)
            exp = self.exponent()
            return result if exp == 1 else self.a.power(result, exp)
        if kind == "name":
            return self.a.symbol(value, self.exponent())
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect(")")
            exp = self.exponent()
            return inner if exp == 1 else self.a.power(inner, exp)
        raise ParseError(f"unexpected token {value!r} in {self.text!r}")


def parse_expression(text: str, adapter: Adapter[T]) -> T:
    return _Parser(text, adapter).parse()


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def join_signed(parts: List[Tuple[bool, str]]) -> str:
    """Joins (negative, text) pairs as `a - b + c`; empty input renders as 0."""
    if not parts:
        return "0"
    out = []
    for idx, (negative, text) in enumerate(parts):
        if idx == 0:
            out.append(f"-{text}" if negative else text)
        else:
            out.append(f" - {text}" if negative else f" + {text}")
    return "".join(out)
