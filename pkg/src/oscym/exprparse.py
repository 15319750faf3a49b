"""Tiny arithmetic expression grammar for "expr" pieces.

Recursive descent over: numbers, the variable x, + - * / ^, parentheses,
and the functions sin, cos, exp, log, pow(a, b).  Expressions compile to
numpy-backed callables so piecewise evaluation stays vectorized.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import SpecError

_FUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "log": np.log,
}


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def error(self, msg):
        raise SpecError(f"{msg} at position {self.pos} in expression {self.text!r}")

    def next_number(self):
        start = self.pos
        seen_dot = seen_exp = False
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c.isdigit():
                self.pos += 1
            elif c == "." and not seen_dot and not seen_exp:
                seen_dot = True
                self.pos += 1
            elif c in "eE" and not seen_exp and self.pos > start:
                seen_exp = True
                self.pos += 1
                if self.pos < len(self.text) and self.text[self.pos] in "+-":
                    self.pos += 1
            else:
                break
        try:
            return float(self.text[start:self.pos])
        except ValueError:
            self.pos = start
            self.error("bad number")

    def next_name(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start:self.pos]

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1


def parse_expression(text: str) -> Callable:
    """Compile the expression to a callable of x (scalar or ndarray)."""
    tk = _Tokenizer(text)
    ast = _parse_sum(tk)
    if tk.peek() is not None:
        tk.error("trailing input")
    return lambda x: ast(x)


def _parse_sum(tk):
    node = _parse_term(tk)
    while tk.peek() in ("+", "-"):
        op = tk.peek()
        tk.pos += 1
        rhs = _parse_term(tk)
        if op == "+":
            node = (lambda a, b: lambda x: a(x) + b(x))(node, rhs)
        else:
            node = (lambda a, b: lambda x: a(x) - b(x))(node, rhs)
    return node


def _parse_term(tk):
    node = _parse_factor(tk)
    while tk.peek() in ("*", "/"):
        op = tk.peek()
        tk.pos += 1
        rhs = _parse_factor(tk)
        if op == "*":
            node = (lambda a, b: lambda x: a(x) * b(x))(node, rhs)
        else:
            node = (lambda a, b: lambda x: a(x) / b(x))(node, rhs)
    return node


def _parse_factor(tk):
    # unary minus binds looser than '^', so -x^2 means -(x^2)
    if tk.peek() == "-":
        tk.pos += 1
        inner = _parse_factor(tk)
        return lambda x: -inner(x)
    return _parse_power(tk)


def _parse_power(tk):
    node = _parse_primary(tk)
    if tk.peek() == "^":
        tk.pos += 1
        exponent = _parse_factor(tk)  # right associative; allows x^-2
        node = (lambda a, b: lambda x: a(x) ** b(x))(node, exponent)
    return node


def _parse_primary(tk):
    c = tk.peek()
    if c is None:
        tk.error("unexpected end of expression")
    if c == "(":
        tk.pos += 1
        node = _parse_sum(tk)
        tk.expect(")")
        return node
    if c.isdigit() or c == ".":
        value = tk.next_number()
        return lambda x, _v=value: _v if np.ndim(x) == 0 else np.full_like(
            np.asarray(x, dtype=float), _v)
    if c.isalpha():
        name = tk.next_name()
        if name == "x":
            return lambda x: np.asarray(x, dtype=float) if np.ndim(x) else float(x)
        if name == "pi":
            return lambda x: math.pi
        if name == "pow":
            tk.expect("(")
            base = _parse_sum(tk)
            tk.expect(",")
            exponent = _parse_sum(tk)
            tk.expect(")")
            return lambda x, _b=base, _e=exponent: _b(x) ** _e(x)
        if name in _FUNCS:
            fn = _FUNCS[name]
            tk.expect("(")
            arg = _parse_sum(tk)
            tk.expect(")")
            return lambda x, _f=fn, _a=arg: _f(_a(x))
        tk.error(f"unknown identifier {name!r}")
    tk.error(f"unexpected character {c!r}")
