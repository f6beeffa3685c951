"""
Recursive-descent parser for the polynomial text format.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := '-' factor | primary ('^' uint)?
    primary := number | number 'i' | 'i' | var | '(' expr ')'
    var     := ('x' | 'y' | 'z') uint        # 1-based site index

Errors report the byte offset of the offending token in the UTF-8 input.
"""

import logging
import re
from typing import List, NamedTuple

from ..errors import ExponentOverflowError, PolynomialSyntaxError, SiteIndexError
from ..utils.tolerances import MAX_EXPONENT
from .sphere import SitePolynomial

logger = logging.getLogger(__name__)

TOKEN_PATTERNS = [
    ("NUMBER", r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?i?"),
    ("VAR", r"[xyz]\d+"),
    ("IMAG", r"i"),
    ("OP", r"[-+*^()]"),
    ("SPACE", r"\s+"),
]
TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_PATTERNS))
UINT_RE = re.compile(r"\d+")


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> List[Token]:
    """
    Split polynomial text into tokens.

    Raises:
        PolynomialSyntaxError: on a character no token starts with
    """
    tokens = []
    pos = 0
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        if match is None:
            char = text[pos]
            if char in "xyz":
                raise PolynomialSyntaxError(
                    f"expected a site index after {char!r}", _byte_offset(text, pos)
                )
            raise PolynomialSyntaxError(f"unexpected character {char!r}", _byte_offset(text, pos))
        kind = match.lastgroup
        if kind != "SPACE":
            tokens.append(Token(kind, match.group(), _byte_offset(text, pos)))
        pos = match.end()
    tokens.append(Token("EOF", "", _byte_offset(text, len(text))))
    return tokens


class PolynomialParser:
    """Parser for one polynomial expression over a fixed number of sites."""

    def __init__(self, text: str, sites: int):
        if sites < 1:
            raise ValueError(f"site count must be positive, got {sites}")
        self.text = text
        self.sites = sites
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.current
        if token.text != text:
            found = "end of input" if token.kind == "EOF" else repr(token.text)
            raise PolynomialSyntaxError(f"expected {text!r}, found {found}", token.offset)
        return self.advance()

    def parse(self) -> SitePolynomial:
        if self.current.kind == "EOF":
            raise PolynomialSyntaxError("empty expression", self.current.offset)
        result = self.expr()
        if self.current.kind != "EOF":
            raise PolynomialSyntaxError(f"unexpected token {self.current.text!r}", self.current.offset)
        return result

    def expr(self) -> SitePolynomial:
        result = self.term()
        while self.current.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> SitePolynomial:
        result = self.factor()
        while self.current.text == "*":
            self.advance()
            result = result * self.factor()
        return result

    def factor(self) -> SitePolynomial:
        if self.current.text == "-":
            self.advance()
            return -self.factor()
        base = self.primary()
        if self.current.text == "^":
            self.advance()
            token = self.current
            if token.kind != "NUMBER" or not UINT_RE.fullmatch(token.text):
                raise PolynomialSyntaxError("exponent must be an unsigned integer", token.offset)
            self.advance()
            exponent = int(token.text)
            if exponent > MAX_EXPONENT:
                raise ExponentOverflowError(
                    f"exponent {exponent} exceeds the cap of {MAX_EXPONENT}", token.offset
                )
            base = base ** exponent
        return base

    def primary(self) -> SitePolynomial:
        token = self.current
        if token.kind == "NUMBER":
            self.advance()
            if token.text.endswith("i"):
                return SitePolynomial.constant(self.sites, complex(0.0, float(token.text[:-1])))
            return SitePolynomial.constant(self.sites, float(token.text))
        if token.kind == "IMAG":
            self.advance()
            return SitePolynomial.constant(self.sites, 1j)
        if token.kind == "VAR":
            self.advance()
            site = int(token.text[1:])
            if site == 0:
                raise SiteIndexError("site indices are 1-based, got 0", token.offset)
            if site > self.sites:
                raise SiteIndexError(f"site index {site} exceeds {self.sites}", token.offset)
            return SitePolynomial.coordinate(self.sites, site, token.text[0])
        if token.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if token.kind == "EOF" else repr(token.text)
        raise PolynomialSyntaxError(f"expected a number, variable or '(', found {found}", token.offset)


def parse_poly(text: str, sites: int) -> SitePolynomial:
    """
    Parse polynomial text into normal form.

    Args:
        text: Expression such as "x1*y2 - 0.5*z1^2 + (1+2i)"
        sites: Number of sites d; variables carry indices 1..d

    Returns:
        The normal-form SitePolynomial

    Raises:
        PolynomialSyntaxError: with the byte offset of the failure
        SiteIndexError: when a variable's site index is 0 or exceeds sites
        ExponentOverflowError: when an exponent exceeds 64
    """
    result = PolynomialParser(text, sites).parse()
    logger.debug(f"Parsed {text!r} on {sites} site(s) into {len(result)} term(s)")
    return result
