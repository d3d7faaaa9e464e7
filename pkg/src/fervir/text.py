"""Element grammar: parser and canonical printer.

::

    element := term { ("+" | "-") term }
    term    := [ coef "*" ] sym | coef
    sym     := ("L" | "psi" | "d" | "h") "_" index | "c" | "z" | "c1" | "c2" | "c3"
    index   := ["-"] digits [ "/2" ]
    coef    := rat | "(" rat ("+" | "-") rat "*w2" ")"
    rat     := ["-"] digits [ "/" digits ]

Whitespace between tokens is ignored.  ``format_element(parse_element(t)) == t``
for every canonical ``t``.
"""
from __future__ import annotations

from fractions import Fraction

from .scalar import ScalarK, format_rational, format_scalar
from .superalg import Algebra, AlgebraError, Element, Symbol, format_index


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.column = col


# -- printing ---------------------------------------------------------------

def _coef_text(c: ScalarK) -> str:
    if c.is_rational():
        return format_rational(c.a)
    return f"({format_scalar(c)})"


def format_terms(pairs) -> str:
    """Join ``(coefficient, label)`` pairs; a ``None`` label is a bare scalar."""
    out = []
    for i, (c, label) in enumerate(pairs):
        if c.is_rational():
            neg = c.a < 0
            mag = abs(c.a)
            if label is None:
                body = format_rational(mag)
            elif mag == 1:
                body = label
            else:
                body = f"{format_rational(mag)}*{label}"
            if i == 0:
                if neg:
                    body = f"-{body}" if (label is None or mag != 1) else f"-1*{label}"
                out.append(body)
            else:
                out.append(f" {'-' if neg else '+'} {body}")
        else:
            body = _coef_text(c) if label is None else f"{_coef_text(c)}*{label}"
            out.append(body if i == 0 else f" + {body}")
    return "".join(out) if out else "0"


def format_element(x: Element) -> str:
    return format_terms((c, str(s)) for s, c in x.items_sorted())


# -- parsing ----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        raise ParseError(msg, self.text, self.pos if pos is None else pos)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, s: str) -> bool:
        self.ws()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.eat(s):
            self.error(f"expected {s!r}")

    def digits(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected digits")
        return int(self.text[start:self.pos])

    def rat(self) -> Fraction:
        self.ws()
        neg = self.text.startswith("-", self.pos)
        if neg:
            self.pos += 1
        num = self.digits()
        den = 1
        if self.text.startswith("/", self.pos):
            self.pos += 1
            at = self.pos
            den = self.digits()
            if den == 0:
                self.error("zero denominator", at)
        value = Fraction(num, den)
        return -value if neg else value

    def coef(self) -> ScalarK:
        if self.eat("("):
            a = self.rat()
            self.ws()
            if self.eat("+"):
                sign = 1
            elif self.eat("-"):
                sign = -1
            else:
                self.error("expected '+' or '-' inside coefficient")
            b = self.rat()
            self.expect("*")
            self.expect("w2")
            self.expect(")")
            return ScalarK(a, sign * b)
        return ScalarK(self.rat())

    def index(self) -> int:
        neg = self.text.startswith("-", self.pos)
        if neg:
            self.pos += 1
        n = self.digits()
        twice = 2 * n
        if self.text.startswith("/", self.pos):
            self.pos += 1
            at = self.pos
            if self.digits() != 2:
                self.error("index denominator must be 2", at)
            twice = n
        return -twice if neg else twice

    def sym(self) -> tuple[Symbol, int]:
        self.ws()
        start = self.pos
        for name in ("psi", "c1", "c2", "c3", "L", "d", "h", "c", "z"):
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                if name in ("L", "psi", "d", "h"):
                    if not self.text.startswith("_", self.pos):
                        self.error(f"expected '_' after {name}")
                    self.pos += 1
                    return Symbol(name, self.index()), start
                return Symbol(name), start
        self.error("expected a symbol")

    def starts_sym(self) -> bool:
        return self.peek() in ("L", "p", "d", "h", "c", "z")

    def term(self):
        if self.starts_sym():
            return ScalarK(1), *self.sym()
        self.ws()
        start = self.pos
        c = self.coef()
        if self.eat("*"):
            sym, at = self.sym()
            return c, sym, at
        return c, None, start


def parse_element(text: str, alg: Algebra) -> Element:
    """Parse ``text`` into a canonical element of ``alg``."""
    p = _Parser(text)
    terms: dict = {}
    sign = 1
    first = True
    while True:
        if not first:
            if p.eat("+"):
                sign = 1
            elif p.eat("-"):
                sign = -1
            elif p.peek() == "":
                break
            else:
                p.error("expected '+', '-' or end of input")
        c, sym, at = p.term()
        first = False
        c = c * sign
        if sym is None:
            if c:
                p.error("a bare nonzero scalar is not an algebra element", at)
            continue
        try:
            alg.check_symbol(sym)
        except AlgebraError as exc:
            raise ParseError(str(exc), text, at) from None
        new = terms.get(sym, ScalarK(0)) + c
        if new:
            terms[sym] = new
        else:
            terms.pop(sym, None)
    return Element._from_clean(alg, terms)


def format_index_list(twices) -> str:
    return ",".join(format_index(t) for t in twices)


def parse_index_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    out = []
    for part in text.split(","):
        p = _Parser(part.strip())
        t = p.index()
        if p.pos != len(p.text):
            p.error("trailing characters in index")
        out.append(t)
    return tuple(out)
