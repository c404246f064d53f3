"""
Text form of polynomials.

Grammar (whitespace is insignificant, no implicit multiplication)::

    expr     := sign? term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := rational | var | '(' expr ')'
    rational := int ('/' uint)?

A leading sign is accepted at the start of an expression so that printed negative
polynomials parse back.
"""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from symred.errors import SymredError
from symred.polycore.models import Polynomial


class PolynomialSyntaxError(SymredError, ValueError):
    def __init__(self, message: str, position: int, text: str = "") -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class UnknownVariableError(PolynomialSyntaxError):
    def __init__(self, name: str, position: int, text: str = "") -> None:
        super().__init__(f"Unknown variable '{name}'", position, text)
        self.name = name


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^/()]))")


@dataclass(frozen=True)
class _Token:
    kind: str  # num | name | op | end
    value: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if match is None:
            raise PolynomialSyntaxError(f"Unexpected character {text[pos]!r}", pos, text)
        kind = match.lastgroup or "op"
        start = match.start(kind)
        tokens.append(_Token(kind, match.group(kind), start))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]) -> None:
        self._text = text
        self._tokens = _tokenize(text)
        self._pos = 0
        self._arity = len(variables)
        self._index = {name: i for i, name in enumerate(variables)}

    @property
    def _current(self) -> _Token:
        return self._tokens[self._pos]

    def _error(self, message: str) -> PolynomialSyntaxError:
        return PolynomialSyntaxError(message, self._current.position, self._text)

    def _accept(self, op: str) -> bool:
        token = self._current
        if token.kind == "op" and token.value == op:
            self._pos += 1
            return True
        return False

    def parse(self) -> Polynomial:
        if self._current.kind == "end":
            raise self._error("Empty expression")
        result = self._expr()
        if self._current.kind != "end":
            raise self._error(f"Unexpected token {self._current.value!r}")
        return result

    def _expr(self) -> Polynomial:
        negate = False
        if self._accept("-"):
            negate = True
        else:
            self._accept("+")
        result = self._term()
        if negate:
            result = -result
        while True:
            if self._accept("+"):
                result = result + self._term()
            elif self._accept("-"):
                result = result - self._term()
            else:
                return result

    def _term(self) -> Polynomial:
        result = self._factor()
        while self._accept("*"):
            result = result * self._factor()
        return result

    def _factor(self) -> Polynomial:
        base = self._base()
        if self._accept("^"):
            token = self._current
            if token.kind != "num":
                raise self._error("Expected a non-negative integer exponent")
            self._pos += 1
            return base ** int(token.value)
        return base

    def _base(self) -> Polynomial:
        token = self._current
        if token.kind == "num":
            self._pos += 1
            value = Fraction(int(token.value))
            if self._accept("/"):
                denom = self._current
                if denom.kind != "num":
                    raise self._error("Expected an integer denominator")
                if int(denom.value) == 0:
                    raise PolynomialSyntaxError("Zero denominator", denom.position, self._text)
                self._pos += 1
                value /= int(denom.value)
            return Polynomial.constant(self._arity, value)
        if token.kind == "name":
            self._pos += 1
            if token.value not in self._index:
                raise UnknownVariableError(token.value, token.position, self._text)
            return Polynomial.variable(self._arity, self._index[token.value])
        if self._accept("("):
            inner = self._expr()
            if not self._accept(")"):
                raise self._error("Expected ')'")
            return inner
        if token.kind == "end":
            raise self._error("Unexpected end of expression")
        raise self._error(f"Unexpected token {token.value!r}")


def poly_parse(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` into an exact polynomial over the named ``variables``."""
    if len(set(variables)) != len(variables):
        raise ValueError(f"Duplicate variable names in {list(variables)}")
    return _Parser(text, variables).parse()


def _format_monomial(exponent: Sequence[int], names: Sequence[str]) -> str:
    factors = []
    for name, power in zip(names, exponent, strict=True):
        if power == 1:
            factors.append(name)
        elif power > 1:
            factors.append(f"{name}^{power}")
    return "*".join(factors)


def poly_format(poly: Polynomial, names: Sequence[str]) -> str:
    """Canonical text: descending graded-lex terms, rational coefficients."""
    if len(names) != poly.arity:
        raise ValueError(f"Need {poly.arity} variable names, got {len(names)}")
    if poly.is_zero:
        return "0"
    parts: list[str] = []
    for index, (exponent, coeff) in enumerate(poly.sorted_terms()):
        magnitude = abs(coeff)
        monomial = _format_monomial(exponent, names)
        if not monomial:
            body = str(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{magnitude}*{monomial}"
        if index == 0:
            parts.append(f"-{body}" if coeff < 0 else body)
        else:
            parts.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return " ".join(parts)
