"""Text and structured forms for coefficients, elements, words and curves.

Printers and parsers round-trip exactly: parsing a printed value yields an
equal value, and printing is canonical, so equal values print identically.
The structured encoders produce JSON-ready data built from lists, strings
and integers only; canonical_json then gives byte-identical serialization
for equal values (sorted keys, fixed separators, no floats anywhere).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .coeff import (
    LaurentPoly,
    RationalFunction,
    Tokens,
    format_laurent,
    rf,
)
from .errors import ParseError
from .freealg import (
    DEFAULT_DEGREE_CAP,
    NCPolynomial,
    OperatorWord,
    TwistSystem,
    apply_operator_word,
)
from .torus import Curve, TorusElement, element_x, element_y, element_z

__all__ = [
    "format_torus", "format_nc", "format_twist_word", "format_curve",
    "parse_torus", "parse_nc", "parse_twist_word", "parse_curve",
    "laurent_data", "laurent_from_data", "rational_data",
    "rational_from_data", "torus_data", "torus_from_data", "nc_data",
    "nc_from_data", "opword_data", "opword_from_data", "curve_data",
    "curve_from_data", "certificate_data", "certificate_from_data",
    "implication_data", "implication_from_data", "canonical_json",
]


# -- printing ------------------------------------------------------------

def _abs_single(q, e: int) -> str:
    """|q|*A^e with conventional omissions, q positive."""
    if e == 0:
        return str(q)
    ap = "A" if e == 1 else f"A^{e}"
    return ap if q == 1 else f"{q}*{ap}"


def _coeff_pieces(c: RationalFunction, constant: bool):
    """Break one coefficient into signed print pieces.

    Yields (negative, body, attach) where attach marks pieces that still
    need the monomial appended.  Constant terms with polynomial
    coefficients are spliced into the sum term by term so that e.g. a
    trailing A^2 + A^-2 prints without parentheses.
    """
    num, den = c.num, c.den
    if den.is_one():
        items = sorted(num.coeffs.items(), reverse=True)
        if constant:
            for e, q in items:
                yield q < 0, _abs_single(-q if q < 0 else q, e), False
            return
        if len(items) == 1:
            e, q = items[0]
            neg = q < 0
            q = -q if neg else q
            yield neg, "" if (e == 0 and q == 1) else _abs_single(q, e), True
            return
        if items[0][1] < 0:
            yield True, f"({format_laurent(-num)})", True
        else:
            yield False, f"({format_laurent(num)})", True
        return
    neg = max(num.coeffs.items())[1] < 0
    shown = -num if neg else num
    yield neg, f"({format_laurent(shown)})/({format_laurent(den)})", not constant


def _emit(pieces) -> str:
    parts = list(pieces)
    if not parts:
        return "0"
    neg, body = parts[0]
    out = ("-" if neg else "") + body
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _signed_terms(term_pairs):
    for mono_str, coeff in term_pairs:
        for neg, body, attach in _coeff_pieces(coeff, constant=not mono_str):
            if attach and mono_str:
                body = f"{body}*{mono_str}" if body else mono_str
            yield neg, body


def _torus_mono_str(mono) -> str:
    parts = []
    for letter, e in zip("xyz", mono):
        if e == 1:
            parts.append(letter)
        elif e > 1:
            parts.append(f"{letter}^{e}")
    return "*".join(parts)


def format_torus(el: TorusElement) -> str:
    """Canonical text of a torus element, highest-degree terms first."""
    return _emit(_signed_terms(
        (_torus_mono_str(m), c) for m, c in el.terms()))


def _nc_mono_str(word) -> str:
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        parts.append(f"X{word[i]}" if j - i == 1 else f"X{word[i]}^{j - i}")
        i = j
    return "*".join(parts)


def format_nc(p: NCPolynomial) -> str:
    """Canonical text of a free-algebra element, ascending graded-lex."""
    return _emit(_signed_terms(
        (_nc_mono_str(w), c) for w, c in p.terms()))


def format_twist_word(word: OperatorWord) -> str:
    return str(word)


def format_curve(v: Curve) -> str:
    return f"{v.p},{v.q}"


# -- expression parsing ----------------------------------------------------

def _is_twist_name(v: str) -> bool:
    return len(v) > 1 and v[0] in "tT" and v[1:].isdigit()


def _parse_signed_int(tk: Tokens) -> int:
    k, v, p = tk.next()
    sign = 1
    if k == "sym" and v in "+-":
        sign = -1 if v == "-" else 1
        k, v, p = tk.next()
    if k != "num":
        raise ParseError("expected an integer", p)
    return sign * int(v)


def _parse_fraction(tk: Tokens) -> Fraction:
    val = Fraction(int(tk.expect("num")))
    if tk.peek()[:2] == ("sym", "/") and tk.pos + 1 < len(tk.toks) \
            and tk.toks[tk.pos + 1][0] == "num":
        tk.next()
        val /= int(tk.expect("num"))
    return val


class _ElementParser:
    """Sum/product/power grammar over scalars and algebra atoms.

    Subclasses provide the atom vocabulary via _primary.  Division is only
    defined when the divisor is a scalar (a constant element); powers of
    non-scalars must be non-negative.
    """

    def __init__(self, text: str):
        self.tk = Tokens(text)

    def parse(self):
        v = self._expr()
        if not self.tk.at_end():
            k, val, p = self.tk.peek()
            raise ParseError(f"unexpected trailing input {val!r}", p)
        return v

    def _expr(self):
        k, v, _ = self.tk.peek()
        negate = False
        if k == "sym" and v in "+-":
            self.tk.next()
            negate = v == "-"
        acc = self._term()
        if negate:
            acc = -acc
        while True:
            k, v, _ = self.tk.peek()
            if k == "sym" and v in "+-":
                self.tk.next()
                t = self._term()
                acc = acc - t if v == "-" else acc + t
            else:
                return acc

    def _term(self):
        acc = self._factor()
        while True:
            k, v, p = self.tk.peek()
            if k == "sym" and v == "*":
                self.tk.next()
                acc = acc * self._factor()
            elif k == "sym" and v == "/":
                self.tk.next()
                acc = acc * self._scalar_of(self._factor(), p).inverse()
            elif k == "name" or (k == "sym" and v == "("):
                acc = acc * self._factor()
            else:
                return acc

    def _factor(self):
        v = self._primary()
        if self.tk.peek()[:2] == ("sym", "^"):
            _, _, p = self.tk.next()
            n = _parse_signed_int(self.tk)
            if n < 0:
                return self._one().scale(self._scalar_of(v, p) ** n)
            v = v ** n
        return v

    def _scalar_of(self, v, pos):
        c = self._as_scalar(v)
        if c is None:
            raise ParseError("expected a scalar (constant) value here", pos)
        return c

    def _paren_expr(self):
        self.tk.expect("sym", "(")
        v = self._expr()
        self.tk.expect("sym", ")")
        return v

    def _primary(self):
        k, v, p = self.tk.peek()
        if k == "num":
            return self._one().scale(_parse_fraction(self.tk))
        if k == "name" and v == "A":
            self.tk.next()
            e = 1
            if self.tk.peek()[:2] == ("sym", "^"):
                self.tk.next()
                e = _parse_signed_int(self.tk)
            return self._one().scale(rf(LaurentPoly.monomial(e)))
        if k == "sym" and v == "(":
            return self._paren_expr()
        return self._atom()

    def _atom(self):
        k, v, p = self.tk.peek()
        raise ParseError(f"unexpected {v or 'end of input'!r}", p)


class _TorusParser(_ElementParser):
    _LETTERS = {"x": element_x, "y": element_y, "z": element_z}

    def _one(self):
        return TorusElement.one()

    def _as_scalar(self, v):
        if v.is_zero():
            return v.coefficient((0, 0, 0))
        if v.support() == [(0, 0, 0)]:
            return v.coefficient((0, 0, 0))
        return None

    def _atom(self):
        k, v, p = self.tk.peek()
        if k == "name" and v in self._LETTERS:
            self.tk.next()
            return self._LETTERS[v]()
        raise ParseError(f"unexpected {v or 'end of input'!r}", p)


class _NCParser(_ElementParser):
    def __init__(self, text, system, degree_cap):
        super().__init__(text)
        self.system = system
        self.degree_cap = degree_cap

    def _one(self):
        return self.system.one()

    def _as_scalar(self, v):
        if v.is_zero():
            return v.coefficient(())
        if v.support() == [()]:
            return v.coefficient(())
        return None

    def _twist_atom(self):
        """One t<j>[^k] token as an OperatorWord, or None."""
        k, v, _ = self.tk.peek()
        if k != "name" or not _is_twist_name(v):
            return None
        self.tk.next()
        j = int(v[1:])
        e = 1
        if self.tk.peek()[:2] == ("sym", "^"):
            self.tk.next()
            e = _parse_signed_int(self.tk)
        step = OperatorWord([(j, 1 if e > 0 else -1)])
        return step ** abs(e)

    def _twist_group(self):
        """A parenthesized all-twist group with optional power, or None."""
        if self.tk.peek()[:2] != ("sym", "("):
            return None
        save = self.tk.pos
        self.tk.next()
        word = OperatorWord.identity()
        while True:
            atom = self._twist_atom()
            if atom is None:
                break
            word = word * atom
        if not len(word) or self.tk.peek()[:2] != ("sym", ")"):
            self.tk.pos = save
            return None
        self.tk.next()
        if self.tk.peek()[:2] == ("sym", "^"):
            self.tk.next()
            word = word ** _parse_signed_int(self.tk)
        return word

    def _primary(self):
        # twist application binds tighter than products: t-atoms and
        # parenthesized all-twist groups prefix the element they act on
        word = OperatorWord.identity()
        while True:
            atom = self._twist_atom()
            if atom is None:
                atom = self._twist_group()
            if atom is None:
                break
            word = word * atom
        if len(word):
            _, _, p2 = self.tk.peek()
            operand = self._factor()
            return apply_operator_word(operand, word,
                                       degree_cap=self.degree_cap)
        return super()._primary()

    def _atom(self):
        k, v, p = self.tk.peek()
        if k == "name" and len(v) > 1 and v[0] in "xX" and v[1:].isdigit():
            self.tk.next()
            return self.system.generator(int(v[1:]))
        raise ParseError(f"unexpected {v or 'end of input'!r}", p)


def split_implication_target(text: str, system: TwistSystem):
    """Recognize targets written "<twist word> X_i - X_i".

    Returns (OperatorWord, i) when the text has exactly that shape, else
    None.  Purely syntactic: nothing is applied or evaluated, so the shape
    can be recognized even when the applied image would be enormous.
    """
    try:
        parser = _NCParser(text, system, degree_cap=0)
    except ParseError:
        return None
    tk = parser.tk
    try:
        word = OperatorWord.identity()
        while True:
            atom = parser._twist_atom()
            if atom is None:
                atom = parser._twist_group()
            if atom is None:
                break
            word = word * atom
        if not len(word):
            return None
        k, v, _ = tk.next()
        if k != "name" or len(v) < 2 or v[0] not in "xX" or not v[1:].isdigit():
            return None
        if tk.next()[:2] != ("sym", "-"):
            return None
        if tk.next()[:2] != (k, v):
            return None
        if not tk.at_end():
            return None
        system._check_index(int(v[1:]))
        return word, int(v[1:])
    except ParseError:
        return None


def parse_torus(text: str) -> TorusElement:
    """Evaluate an expression in x, y, z, A and rationals to normal form."""
    return _TorusParser(text).parse()


def parse_nc(text: str, system: TwistSystem,
             degree_cap: int = DEFAULT_DEGREE_CAP) -> NCPolynomial:
    """Evaluate an expression in X1..Xn, twist words, A and rationals."""
    return _NCParser(text, system, degree_cap).parse()


def parse_twist_word(text: str) -> OperatorWord:
    """Twist words like "t1 t2^-1"; "1" or an empty string is the identity."""
    tk = Tokens(text)
    if tk.at_end() or (len(tk.toks) == 1 and tk.peek()[:2] == ("num", "1")):
        return OperatorWord.identity()
    word = OperatorWord.identity()
    while not tk.at_end():
        if tk.peek()[:2] == ("sym", "*"):
            tk.next()
            continue
        k, v, p = tk.peek()
        if k != "name" or not _is_twist_name(v):
            raise ParseError(f"expected a twist token, found {v!r}", p)
        tk.next()
        j = int(v[1:])
        e = 1
        if tk.peek()[:2] == ("sym", "^"):
            tk.next()
            e = _parse_signed_int(tk)
        word = word * (OperatorWord([(j, 1 if e > 0 else -1)]) ** abs(e))
    return word


def parse_curve(text: str) -> Curve:
    """Curves written "p,q" with optional signs and spaces."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f"expected 'p,q', found {text!r}")
    try:
        p, q = (int(s.strip()) for s in parts)
    except ValueError:
        raise ParseError(f"expected integers in {text!r}") from None
    return Curve(p, q)


# -- structured data --------------------------------------------------------

def laurent_data(lp: LaurentPoly) -> list:
    return [[e, str(c)] for e, c in sorted(lp.coeffs.items())]


def laurent_from_data(data) -> LaurentPoly:
    return LaurentPoly({int(e): Fraction(c) for e, c in data})


def rational_data(r: RationalFunction) -> dict:
    return {"num": laurent_data(r.num), "den": laurent_data(r.den)}


def rational_from_data(data) -> RationalFunction:
    return rf(laurent_from_data(data["num"]), laurent_from_data(data["den"]))


def torus_data(el: TorusElement) -> dict:
    return {"terms": [[list(m), rational_data(c)] for m, c in el.terms()]}


def torus_from_data(data) -> TorusElement:
    return TorusElement({tuple(m): rational_from_data(c)
                         for m, c in data["terms"]})


def nc_data(p: NCPolynomial) -> dict:
    return {"system": [list(row) for row in p.system.iota],
            "terms": [[list(w), rational_data(c)] for w, c in p.terms()]}


def nc_from_data(data, system: TwistSystem | None = None) -> NCPolynomial:
    if system is None:
        system = TwistSystem(data["system"])
    return system.element({tuple(int(i) for i in w): rational_from_data(c)
                           for w, c in data["terms"]})


def opword_data(word: OperatorWord) -> list:
    return [[j, e] for j, e in word.steps]


def opword_from_data(data) -> OperatorWord:
    return OperatorWord([(int(j), int(e)) for j, e in data])


def curve_data(v: Curve) -> list:
    return [v.p, v.q]


def curve_from_data(data) -> Curve:
    p, q = data
    return Curve(int(p), int(q))


def certificate_data(entries) -> list:
    return [{"left_word": list(u), "generator_index": gi,
             "right_word": list(v), "coefficient": rational_data(c)}
            for u, gi, v, c in entries]


def certificate_from_data(data) -> list:
    return [(tuple(int(i) for i in e["left_word"]),
             int(e["generator_index"]),
             tuple(int(i) for i in e["right_word"]),
             rational_from_data(e["coefficient"]))
            for e in data]


def implication_data(proof) -> dict:
    """Serializable form of a WordImplicationProof."""
    system = None
    for _, el, _ in proof.steps:
        system = el.system
        break
    return {
        "word": opword_data(proof.word),
        "start_index": proof.start_index,
        "degree_bound": proof.degree_bound,
        "system": [list(row) for row in system.iota] if system else None,
        "base": [[list(key), certificate_data(cert)]
                 for key, cert in proof.base],
        "steps": [[[j, e], nc_data(el)["terms"], certificate_data(cert)]
                  for (j, e), el, cert in proof.steps],
        "closes": bool(proof.closes),
    }


def implication_from_data(data, system: TwistSystem | None = None):
    from .quotient import WordImplicationProof

    if system is None:
        system = TwistSystem(data["system"])
    base = tuple((tuple(int(i) for i in key), certificate_from_data(cert))
                 for key, cert in data["base"])
    steps = tuple(((int(j), int(e)),
                   nc_from_data({"terms": terms}, system),
                   certificate_from_data(cert))
                  for (j, e), terms, cert in data["steps"])
    return WordImplicationProof(opword_from_data(data["word"]),
                                int(data["start_index"]),
                                int(data["degree_bound"]),
                                base, steps, bool(data["closes"]))


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
