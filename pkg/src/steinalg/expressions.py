"""Expression strings over declared elements.

Supported surface: ``+`` and ``-``, scalar multiplication with ``*``,
convolution with ``**``, involution as ``adj(...)``, and parentheses.
Scalar literals follow the coefficient grammar; in unary position a
leading minus binds to the literal's real part, matching element files.
"""

from __future__ import annotations

import re

from .algebra import AlgebraElement, convolve, involute, scale
from .errors import GroupoidParseError, ModelMismatch
from .scalars import QC

_TOKEN_SPECS = [
    ("POW", r"\*\*"),
    ("MUL", r"\*"),
    ("PLUS", r"\+"),
    ("MINUS", r"-"),
    ("LPAR", r"\("),
    ("RPAR", r"\)"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
]
_NUMBER_UNARY = re.compile(r"-?\d+(?:\.\d+)?(?:[+-]\d+(?:\.\d+)?i)?")
_NUMBER_BINARY = re.compile(r"\d+(?:\.\d+)?(?:[+-]\d+(?:\.\d+)?i)?")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    unary = True  # at the start and after any operator or '('
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        number_re = _NUMBER_UNARY if unary else _NUMBER_BINARY
        m = number_re.match(text, pos)
        if m and (unary or text[pos].isdigit()):
            tokens.append(("NUM", QC.parse(m.group(0))))
            pos = m.end()
            unary = False
            continue
        for kind, pattern in _TOKEN_SPECS:
            m = re.match(pattern, text[pos:])
            if m:
                tokens.append((kind, m.group(0)))
                pos += m.end()
                unary = kind not in ("NAME", "RPAR")
                break
        else:
            raise GroupoidParseError(f"bad character {text[pos]!r} in expression")
    return tokens


class _Parser:
    def __init__(self, tokens, env, model):
        self.tokens = tokens
        self.pos = 0
        self.env = env
        self.model = model

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("END", "")

    def take(self, kind=None):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            raise GroupoidParseError(f"expected {kind}, found {tok[1]!r}")
        self.pos += 1
        return tok

    def parse(self):
        value = self.sum()
        if self.peek()[0] != "END":
            raise GroupoidParseError(f"trailing tokens near {self.peek()[1]!r}")
        return value

    def sum(self):
        value = self.product()
        while self.peek()[0] in ("PLUS", "MINUS"):
            op = self.take()[0]
            rhs = self.product()
            value = _add(value, rhs) if op == "PLUS" else _add(value, _neg(rhs))
        return value

    def product(self):
        value = self.convolution()
        while self.peek()[0] == "MUL":
            self.take()
            rhs = self.convolution()
            value = _mul(value, rhs)
        return value

    def convolution(self):
        value = self.unary()
        while self.peek()[0] == "POW":
            self.take()
            rhs = self.unary()
            if not isinstance(value, AlgebraElement) or not isinstance(rhs, AlgebraElement):
                raise GroupoidParseError("** convolves two elements")
            value = convolve(value, rhs)
        return value

    def unary(self):
        tok = self.peek()
        if tok[0] == "MINUS":
            self.take()
            return _neg(self.unary())
        if tok[0] == "NUM":
            return self.take()[1]
        if tok[0] == "LPAR":
            self.take()
            value = self.sum()
            self.take("RPAR")
            return value
        if tok[0] == "NAME":
            name = self.take()[1]
            if name == "adj":
                self.take("LPAR")
                value = self.sum()
                self.take("RPAR")
                if isinstance(value, AlgebraElement):
                    return involute(value)
                return value.conjugate()
            if name not in self.env:
                raise GroupoidParseError(f"unknown name {name!r}")
            return self.env[name]
        raise GroupoidParseError(f"unexpected token {tok[1]!r}")


def _neg(v):
    return -v


def _add(a, b):
    if isinstance(a, AlgebraElement) != isinstance(b, AlgebraElement):
        raise GroupoidParseError("cannot add a scalar to an element")
    if isinstance(a, AlgebraElement) and a.model is not b.model:
        raise ModelMismatch("elements live over different models")
    return a + b


def _mul(a, b):
    a_el = isinstance(a, AlgebraElement)
    b_el = isinstance(b, AlgebraElement)
    if a_el and b_el:
        raise GroupoidParseError("* is scalar multiplication; use ** to convolve elements")
    if a_el:
        return scale(b, a)
    if b_el:
        return scale(a, b)
    return a * b


def evaluate_expression(text: str, element_file) -> object:
    """Evaluate an expression over an element file; returns QC or AlgebraElement.

    Names resolve to declared elements first, then to declared bisections
    as their indicator elements.
    """
    env = dict()
    for name, bis in element_file.bisections.items():
        env[name] = AlgebraElement.indicator(bis)
    env.update(element_file.elements)
    parser = _Parser(_tokenize(text), env, element_file.model)
    return parser.parse()
