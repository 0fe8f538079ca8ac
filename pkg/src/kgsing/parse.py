"""Text syntax for polynomials and constraint-system documents.

Polynomial grammar (implicit multiplication is rejected)::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor | "/" number)*
    factor := ("+" | "-") factor | atom ("^" integer)?
    atom   := number | name | "(" expr ")"

Numbers are integers or decimals and are read exactly as rationals.

A document is a sequence of ``key: value`` sections::

    vars: x1, x2, x3
    params: u1              # optional family parameters (base value 0)
    g:
      x1
      x2 - 1
    h: x3 + x1^2
    point: 0, 0, 0

List sections take comma-separated entries on the header line and/or one
entry per following indented line.  ``#`` starts a comment.
"""

from dataclasses import dataclass
from fractions import Fraction
import re

from .errors import ParseError, ValidationError

_TOKEN = re.compile(r"(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S)")


def _tokenize(text, line, col0):
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        col = col0 + pos
        if m.group(1) is not None:
            out.append(("num", Fraction(m.group(1)), col))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), col))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", line, col)
            out.append((ch, ch, col))
        pos = m.end()
    out.append(("end", None, col0 + len(text)))
    return out


class PolyParser:
    """Recursive-descent parser producing a ``Poly``."""

    def __init__(self, text, names=None, tol=None, line=1, col0=1):
        self.text = text
        self.names = list(names) if names is not None else []
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self.tol = tol
        self.line = line
        self.toks = _tokenize(text, line, col0)
        self.k = 0

    def _peek(self):
        return self.toks[self.k]

    def _next(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def _error(self, msg, tok=None):
        tok = tok or self._peek()
        raise ParseError(msg, self.line, tok[2])

    def parse(self):
        if self._peek()[0] == "end":
            self._error("empty expression")
        p = self._expr()
        tok = self._peek()
        if tok[0] != "end":
            if tok[0] in ("num", "name", "("):
                self._error("implicit multiplication is not allowed; use '*'", tok)
            self._error(f"unexpected token {tok[1]!r}", tok)
        return p

    def _const(self, c):
        from .ring import Poly

        return Poly.const(len(self.names), c if self.tol is None else float(c), None, self.tol)

    def _expr(self):
        p = self._term()
        while self._peek()[0] in ("+", "-"):
            op = self._next()[0]
            q = self._term()
            p = p + q if op == "+" else p - q
        return p

    def _term(self):
        p = self._factor()
        while True:
            t = self._peek()[0]
            if t == "*":
                self._next()
                p = p * self._factor()
            elif t == "/":
                self._next()
                tok = self._peek()
                d = self._number_factor()
                if d == 0:
                    self._error("division by zero", tok)
                p = p.scale(Fraction(1) / d if self.tol is None else 1.0 / float(d))
            else:
                return p

    def _number_factor(self):
        """A divisor: a number, optionally parenthesised or raised to a power."""
        tok = self._next()
        if tok[0] == "num":
            v = tok[1]
        elif tok[0] == "(":
            sub = self._expr()
            if self._next()[0] != ")":
                self._error("expected ')'")
            if sub.degree() > 0:
                self._error("division by a non-constant expression", tok)
            v = Fraction(sub.constant_term()) if self.tol is None else sub.constant_term()
        else:
            self._error("expected a number after '/'", tok)
        if self._peek()[0] == "^":
            self._next()
            v = v ** self._exponent()
        return v

    def _exponent(self):
        tok = self._next()
        if tok[0] != "num" or tok[1].denominator != 1:
            self._error("exponent must be a non-negative integer", tok)
        return int(tok[1])

    def _factor(self):
        tok = self._peek()
        if tok[0] == "-":
            self._next()
            return -self._factor()
        if tok[0] == "+":
            self._next()
            return self._factor()
        base = self._atom()
        if self._peek()[0] == "^":
            self._next()
            base = base ** self._exponent()
        return base

    def _atom(self):
        from .ring import Poly

        tok = self._next()
        kind = tok[0]
        if kind == "num":
            return self._const(tok[1])
        if kind == "name":
            if tok[1] not in self.index:
                self._error(f"unknown variable {tok[1]!r}", tok)
            return Poly.var(len(self.names), self.index[tok[1]], None, self.tol)
        if kind == "(":
            p = self._expr()
            if self._next()[0] != ")":
                self._error("expected ')'", self.toks[self.k - 1])
            return p
        if kind == "end":
            self._error("unexpected end of expression", tok)
        self._error(f"unexpected token {tok[1]!r}", tok)


def parse_number(text, line=1, col0=1):
    """An exact rational constant such as ``-3/4`` or ``0.25``."""
    p = PolyParser(text, [], None, line, col0).parse()
    return Fraction(p.constant_term())


@dataclass(frozen=True)
class Document:
    """Parsed input document: the system plus optional family parameters."""

    system: object
    params: tuple
    family_g: tuple
    family_h: tuple

    @property
    def has_family(self):
        return bool(self.params)

    def directions(self):
        """Initial speeds d(g,h)/du_i at u = 0 in the system's variables."""
        from .ring import Poly, substitute

        n = self.system.nvars
        nb = len(self.params)
        out = []
        comps = self.family_g + self.family_h
        for b in range(nb):
            vec = []
            for c in comps:
                d = c.partial(n + b)
                images = [Poly.var(n, i, None, c.tol) for i in range(n)]
                images += [Poly.zero(n, None, c.tol)] * nb
                vec.append(substitute(d, images, None, affine=True, nvars_out=n))
            out.append(vec)
        return out


_SECTIONS = ("vars", "params", "g", "h", "point")


def _split_sections(text):
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indented = line[0] in " \t"
        m = re.match(r"^([A-Za-z_]+)\s*:(.*)$", line) if not indented else None
        if m:
            key = m.group(1)
            if key not in _SECTIONS:
                raise ParseError(f"unknown section {key!r}", lineno, 1)
            if key in sections:
                raise ParseError(f"duplicate section {key!r}", lineno, 1)
            current = key
            sections[key] = []
            rest = m.group(2)
            col = m.start(2) + 1
            for item, c in _split_items(rest, col):
                sections[key].append((item, lineno, c))
        else:
            if current is None:
                raise ParseError("content before the first section", lineno, 1)
            col = len(line) - len(line.lstrip()) + 1
            for item, c in _split_items(line, 1):
                sections[current].append((item, lineno, c))
    return sections


def _split_items(text, col0):
    out = []
    pos = 0
    for part in text.split(","):
        stripped = part.strip()
        if stripped:
            lead = len(part) - len(part.lstrip())
            out.append((stripped, col0 + pos + lead))
        pos += len(part) + 1
    return out


def parse_document(text, tol=None):
    """Parse a constraint-system document; see the module docstring."""
    from .germ import ConstraintSystem
    from .ring import Poly, substitute

    secs = _split_sections(text)
    for key in ("vars", "point"):
        if key not in secs:
            raise ValidationError(f"missing section {key!r}")
    names = [s for s, _, _ in secs["vars"]]
    params = [s for s, _, _ in secs.get("params", [])]
    for s, ln, c in secs["vars"] + secs.get("params", []):
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", s):
            raise ParseError(f"invalid variable name {s!r}", ln, c)
    if len(set(names + params)) != len(names) + len(params):
        raise ValidationError("duplicate variable or parameter names")
    allnames = names + params

    def polys(key):
        return [PolyParser(s, allnames, tol, ln, c).parse() for s, ln, c in secs.get(key, [])]

    fg, fh = polys("g"), polys("h")
    point = [parse_number(s, ln, c) for s, ln, c in secs["point"]]
    if len(point) != len(names):
        raise ValidationError(
            f"point has {len(point)} coordinates but {len(names)} variables are declared")
    n = len(names)
    nb = len(params)

    def base(p):
        images = [Poly.var(n, i, None, tol) for i in range(n)] + [Poly.zero(n, None, tol)] * nb
        return substitute(p, images, None, affine=True, nvars_out=n)

    g = [base(p) for p in fg]
    h = [base(p) for p in fh]
    pt = tuple(point) if tol is None else tuple(float(v) for v in point)
    for j, hj in enumerate(h):
        v = hj.evaluate(pt)
        if (v != 0) if tol is None else abs(v) >= tol:
            raise ValidationError(f"equality h{j + 1} does not vanish at the point (value {v})")
    system = ConstraintSystem(n, g, h, pt, tuple(names))
    return Document(system, tuple(params), tuple(fg), tuple(fh))
