"""Textual grammar for hypergeometric and Mellin-Barnes inputs.

    2F1[1/2+eps, -eps; 1+2*eps; z]        hypergeometric function
    MB[-1/4*y; [j1+j2+sigma-n/2, j1, j2, n/2-sigma]; [n/2, ...]; []; []]
    @v1200                                 named preset

Parameters are exact rationals plus rational multiples of eps; MB forms
are linear in n and the declared propagator symbols.  parse(print(x))
round-trips for every value the engine produces.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple, Union

from .errors import ParseError
from .hyper import HyperFn
from .mb import MBRepr, get_preset
from .scalars import EpsLin, LinearForm

F = Fraction

_PUNCT = ("[", "]", "(", ")", ",", ";", "+", "-", "*", "/", "@", "=")


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind          # "int" | "name" | punctuation | "end"
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str) -> List[_Token]:
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(_Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            toks.append(_Token(ch, ch, line, col))
            col += 1
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Token("end", "", line, col))
    return toks


class _LinExpr:
    """A linear expression: rational coefficients per symbol plus a constant."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs=None, const=F(0)):
        self.coeffs = dict(coeffs or {})
        self.const = const

    @classmethod
    def constant(cls, q):
        return cls({}, F(q))

    @classmethod
    def symbol(cls, name):
        return cls({name: F(1)}, F(0))

    def is_const(self):
        return not any(self.coeffs.values())

    def add(self, other, sign=1):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, F(0)) + sign * v
        return _LinExpr(out, self.const + sign * other.const)

    def scale(self, q):
        return _LinExpr({k: v * q for k, v in self.coeffs.items()}, self.const * q)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind) -> _Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"unexpected {t.text or 'end of input'!r}",
                             t.line, t.col, expected=(kind,))
        return self.next()

    def fail(self, msg, expected=()):
        t = self.peek()
        raise ParseError(msg, t.line, t.col, expected=expected)

    # linear expressions --------------------------------------------------

    def linexpr(self) -> _LinExpr:
        acc = self.linterm()
        while self.peek().kind in ("+", "-"):
            sign = 1 if self.next().kind == "+" else -1
            acc = acc.add(self.linterm(), sign)
        return acc

    def linterm(self) -> _LinExpr:
        acc = self.linunary()
        while self.peek().kind in ("*", "/"):
            op = self.next().kind
            rhs = self.linunary()
            if op == "*":
                if rhs.is_const():
                    acc = acc.scale(rhs.const)
                elif acc.is_const():
                    acc = rhs.scale(acc.const)
                else:
                    self.fail("product of two non-constant expressions")
            else:
                if not rhs.is_const() or rhs.const == 0:
                    self.fail("division requires a nonzero constant divisor")
                acc = acc.scale(1 / rhs.const)
        return acc

    def linunary(self) -> _LinExpr:
        if self.peek().kind in ("+", "-"):
            sign = 1 if self.next().kind == "+" else -1
            return self.linunary().scale(sign)
        return self.linatom()

    def linatom(self) -> _LinExpr:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return _LinExpr.constant(int(t.text))
        if t.kind == "name":
            self.next()
            return _LinExpr.symbol(t.text)
        if t.kind == "(":
            self.next()
            e = self.linexpr()
            self.expect(")")
            return e
        self.fail("expected a number, symbol, or parenthesized expression",
                  expected=("int", "name", "("))

    # structured values -----------------------------------------------------

    def epslin(self) -> EpsLin:
        t = self.peek()
        e = self.linexpr()
        bad = [k for k, v in e.coeffs.items() if k != "eps" and v != 0]
        if bad:
            raise ParseError(f"unknown symbol {bad[0]!r} in parameter "
                             "(parameters are rational + rational*eps)",
                             t.line, t.col)
        return EpsLin(e.const, e.coeffs.get("eps", F(0)))

    def linform(self) -> LinearForm:
        t = self.peek()
        e = self.linexpr()
        if e.coeffs.get("eps"):
            raise ParseError("eps is not allowed in Mellin-Barnes forms",
                             t.line, t.col)
        js = {k: v for k, v in e.coeffs.items() if k != "n" and v != 0}
        return LinearForm(e.coeffs.get("n", F(0)), js, e.const)

    def argument(self) -> Tuple[Fraction, str]:
        """kappa * var with a single symbolic variable."""
        t = self.peek()
        e = self.linexpr()
        syms = [k for k, v in e.coeffs.items() if v != 0]
        if len(syms) != 1 or e.const != 0:
            raise ParseError("argument must be (rational) * variable",
                             t.line, t.col)
        return e.coeffs[syms[0]], syms[0]

    def hyper(self) -> HyperFn:
        head = self.expect("int")
        p1 = int(head.text)
        fname = self.expect("name")
        if not (fname.text.startswith("F") and fname.text[1:].isdigit()):
            raise ParseError("expected pFq head like 2F1", fname.line, fname.col)
        p = int(fname.text[1:])
        if p1 != p + 1:
            raise ParseError(f"{p1}F{p} is not a (p+1)Fp function",
                             head.line, head.col)
        self.expect("[")
        upper = self.param_list()
        self.expect(";")
        lower = self.param_list()
        self.expect(";")
        kappa, var = self.argument()
        self.expect("]")
        if len(upper) != p1 or len(lower) != p:
            raise ParseError(
                f"arity mismatch: {p1}F{p} needs {p1} upper and {p} lower "
                f"parameters, got {len(upper)} and {len(lower)}",
                head.line, head.col)
        return HyperFn(upper, lower, kappa, var)

    def param_list(self) -> List[EpsLin]:
        if self.peek().kind == ";":
            return []
        out = [self.epslin()]
        while self.peek().kind == ",":
            self.next()
            out.append(self.epslin())
        return out

    def form_list(self) -> List[LinearForm]:
        self.expect("[")
        out = []
        if self.peek().kind != "]":
            out.append(self.linform())
            while self.peek().kind == ",":
                self.next()
                out.append(self.linform())
        self.expect("]")
        return out

    def mbrepr(self) -> MBRepr:
        head = self.expect("name")
        if head.text != "MB":
            raise ParseError("expected MB[...]", head.line, head.col)
        self.expect("[")
        kappa, var = self.argument()
        self.expect(";")
        a = self.form_list()
        self.expect(";")
        b = self.form_list()
        self.expect(";")
        c = self.form_list()
        self.expect(";")
        d = self.form_list()
        self.expect("]")
        try:
            return MBRepr(kappa, var, a, b, c, d)
        except ValueError as e:
            raise ParseError(str(e), head.line, head.col) from None

    def preset(self):
        self.expect("@")
        name = self.expect("name")
        try:
            return get_preset(name.text)
        except KeyError as e:
            raise ParseError(f"unknown preset @{name.text}", name.line, name.col) from None


def parse_input(text: str) -> Union[HyperFn, MBRepr, "DiagramPreset"]:
    """Parse a hypergeometric spec, an MB spec, or a @preset reference."""
    p = _Parser(text)
    t = p.peek()
    if t.kind == "@":
        out = p.preset()
    elif t.kind == "name" and t.text == "MB":
        out = p.mbrepr()
    elif t.kind == "int":
        out = p.hyper()
    else:
        p.fail("expected pFq[...], MB[...], or @preset", expected=("int", "name", "@"))
    end = p.peek()
    if end.kind != "end":
        raise ParseError(f"trailing input {end.text!r}", end.line, end.col)
    return out


def parse_hyper(text: str) -> HyperFn:
    out = parse_input(text)
    if not isinstance(out, HyperFn):
        raise ParseError("expected a hypergeometric function", 1, 1)
    return out


def format_mb(m: MBRepr) -> str:
    fmt = lambda fs: "[" + ", ".join(str(f) for f in fs) + "]"
    kap = str(m.kappa) if m.kappa.denominator == 1 else f"({m.kappa})"
    return (f"MB[{kap}*{m.var}; {fmt(m.a_forms)}; {fmt(m.b_forms)}; "
            f"{fmt(m.c_forms)}; {fmt(m.d_forms)}]")
