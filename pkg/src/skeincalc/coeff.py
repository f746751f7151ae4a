"""Exact arithmetic in Q[A^(+/-1)] and its fraction field Q(A).

A Laurent polynomial is stored as a map {exponent: coefficient} with no zero
entries; coefficients are Python ints whenever integral and Fractions
otherwise, so the common integer case runs at machine-int speed while staying
exact.  A rational function is a canonical pair num/den:

  * den is nonzero, has lowest exponent 0, and leading coefficient 1;
  * gcd(num, den) over Q[A] is trivial (computed after clearing the A-power
    so both arguments are ordinary polynomials).

Equality of canonical pairs is structural, which makes exact identity checks
(e.g. "this element is zero") plain dict comparisons.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from . import _fastpoly as fp
from .errors import DivisionByZero, ParseError

Rational = int | Fraction


def _normval(c: Rational) -> Rational:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentPoly:
    """Element of Q[A^(+/-1)]."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        d = {}
        if coeffs:
            for e, c in coeffs.items():
                c = _normval(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
                if c:
                    d[int(e)] = c
        self._c = d
        self._hash = None

    @classmethod
    def _raw(cls, d: dict) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj._c = d
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return _ZERO

    @classmethod
    def one(cls) -> "LaurentPoly":
        return _ONE

    @classmethod
    def monomial(cls, exp: int, coeff: Rational = 1) -> "LaurentPoly":
        coeff = _normval(coeff)
        return cls._raw({exp: coeff} if coeff else {})

    # -- queries ---------------------------------------------------------

    @property
    def coeffs(self) -> dict:
        return self._c

    def is_zero(self) -> bool:
        return not self._c

    def is_one(self) -> bool:
        return self._c == {0: 1}

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._c.values())

    def degree(self) -> int:
        """Highest exponent (0 for the zero polynomial)."""
        return max(self._c) if self._c else 0

    def valuation(self) -> int:
        return min(self._c) if self._c else 0

    def leading_coefficient(self) -> Rational:
        return self._c[max(self._c)] if self._c else 0

    def coefficient(self, exp: int) -> Rational:
        return self._c.get(exp, 0)

    def to_pairs(self):
        return sorted(self._c.items())

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = _as_lp(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._c)
        for e, c in other._c.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _normval(s)
            else:
                del out[e]
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._c.items()})

    def __sub__(self, other):
        other = _as_lp(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return _ZERO
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        for e in out:
            out[e] = _normval(out[e])
        return LaurentPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial; use RationalFunction")
        out = _ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, k: Rational) -> "LaurentPoly":
        k = _normval(k)
        if not k:
            return _ZERO
        return LaurentPoly._raw({e: _normval(c * k) for e, c in self._c.items()})

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by A^k."""
        if k == 0:
            return self
        return LaurentPoly._raw({e + k: c for e, c in self._c.items()})

    # -- protocol --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _as_lp(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._c.items())))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({self})"


_ZERO = LaurentPoly._raw({})
_ONE = LaurentPoly._raw({0: 1})


def _as_lp(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        x = _normval(x)
        return LaurentPoly._raw({0: x} if x else {})
    return NotImplemented


def laurent_A(exp: int = 1) -> LaurentPoly:
    """The monomial A^exp."""
    return LaurentPoly._raw({exp: 1})


def lp_from_fast(d: dict) -> LaurentPoly:
    """Wrap an {exponent: int} dict with no zero values, taking ownership."""
    return LaurentPoly._raw(d)


def rf_poly(p: LaurentPoly) -> RationalFunction:
    """The rational function p/1, skipping canonicalization."""
    return RationalFunction._make(p, _ONE)


# -- gcd machinery over Q[A] ----------------------------------------------

def _dense_int(lp: LaurentPoly) -> list[int]:
    """Dense int coefficients of a valuation-0 polynomial, rationals cleared."""
    mult = lcm(*(c.denominator for c in lp._c.values() if isinstance(c, Fraction))) \
        if any(isinstance(c, Fraction) for c in lp._c.values()) else 1
    out = [0] * (lp.degree() + 1)
    for e, c in lp._c.items():
        out[e] = int(c * mult)
    return out


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Primitive gcd over Q[A] of two polynomials with valuation 0."""
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    g = fp.gcd_dense(_dense_int(a), _dense_int(b))
    return LaurentPoly._raw({i: c for i, c in enumerate(g) if c})


def poly_div_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact quotient a / b over Q[A]; raises if the division is not exact."""
    if b.is_zero():
        raise DivisionByZero("polynomial division by zero")
    if a.is_zero():
        return _ZERO
    va, vb = a.valuation(), b.valuation()
    da = [Fraction(c) for c in _dense_fr(a)]
    db = [Fraction(c) for c in _dense_fr(b)]
    if len(da) < len(db):
        raise ValueError("division is not exact")
    q = [Fraction(0)] * (len(da) - len(db) + 1)
    lb = db[-1]
    r = list(da)
    for i in range(len(q) - 1, -1, -1):
        qc = r[i + len(db) - 1] / lb
        q[i] = qc
        if qc:
            for j, bc in enumerate(db):
                r[i + j] -= qc * bc
    if any(r):
        raise ValueError("division is not exact")
    return LaurentPoly._raw(
        {va - vb + i: _normval(c) for i, c in enumerate(q) if c}
    )


def _dense_fr(lp: LaurentPoly) -> list:
    out = [0] * (lp.degree() - lp.valuation() + 1)
    v = lp.valuation()
    for e, c in lp._c.items():
        out[e - v] = c
    return out


class RationalFunction:
    """Element of Q(A) in the canonical num/den form described above."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = _as_lp(num) if not isinstance(num, LaurentPoly) else num
        den = _as_lp(den) if not isinstance(den, LaurentPoly) else den
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RationalFunction expects polynomials or rationals")
        self.num, self.den = _canonical(num, den)
        self._hash = None

    @classmethod
    def _make(cls, num: LaurentPoly, den: LaurentPoly) -> "RationalFunction":
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        obj._hash = None
        return obj

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return RationalFunction._make(self.num + other.num, _ONE)
        return rf(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._make(-self.num, self.den)

    def __sub__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return RationalFunction._make(self.num * other.num, _ONE)
        return rf(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return rf(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def inverse(self) -> "RationalFunction":
        return rf(self.den, self.num)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = RF_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- protocol --------------------------------------------------------

    def __eq__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def __str__(self):
        return format_rational(self)

    def __repr__(self):
        return f"RationalFunction({self})"


def _canonical(num: LaurentPoly, den: LaurentPoly):
    if den.is_zero():
        raise DivisionByZero("rational function with zero denominator")
    if num.is_zero():
        return _ZERO, _ONE
    dv = den.valuation()
    if dv:
        num = num.shift(-dv)
        den = den.shift(-dv)
    nv = num.valuation()
    n0 = num.shift(-nv)
    g = poly_gcd(n0, den)
    if g.degree() > 0:
        n0 = poly_div_exact(n0, g)
        den = poly_div_exact(den, g)
    lc = den.leading_coefficient()
    if lc != 1:
        inv = Fraction(1, 1) / lc
        den = den.scale(inv)
        n0 = n0.scale(inv)
    return n0.shift(nv), den


def rf(num, den=1) -> RationalFunction:
    """Canonical rational function num/den."""
    num = num if isinstance(num, LaurentPoly) else _as_lp(num)
    den = den if isinstance(den, LaurentPoly) else _as_lp(den)
    n, d = _canonical(num, den)
    return RationalFunction._make(n, d)


def _as_rf(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, LaurentPoly):
        return RationalFunction._make(x, _ONE)
    if isinstance(x, (int, Fraction)):
        lp = _as_lp(x)
        return RationalFunction._make(lp, _ONE)
    return NotImplemented


RF_ZERO = RationalFunction._make(_ZERO, _ONE)
RF_ONE = RationalFunction._make(_ONE, _ONE)


# -- text format -----------------------------------------------------------
#
# laurent  := [sign] term (sign term)*
# term     := rational | rational "*" apower | apower
# apower   := "A" | "A^" [-] digits
# rational := digits | digits "/" digits
# ratfun   := "(" laurent ")" "/" "(" laurent ")" | laurent

def format_laurent(lp: LaurentPoly) -> str:
    if lp.is_zero():
        return "0"
    parts = []
    for e, c in sorted(lp._c.items(), reverse=True):
        neg = c < 0
        ac = -c if neg else c
        if e == 0:
            body = str(ac)
        else:
            apart = "A" if e == 1 else f"A^{e}"
            body = apart if ac == 1 else f"{ac}*{apart}"
        parts.append((neg, body))
    first_neg, first_body = parts[0]
    out = ("-" if first_neg else "") + first_body
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def format_rational(r: RationalFunction) -> str:
    if r.den.is_one():
        return format_laurent(r.num)
    return f"({format_laurent(r.num)})/({format_laurent(r.den)})"


class Tokens:
    """Tiny scanner shared by the element grammars."""

    SYMBOLS = "+-*/^(),"

    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []  # (kind, value, pos)
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.toks.append(("num", text[i:j], i))
                i = j
            elif ch.isalpha():
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("name", text[i:j], i))
                i = j
            elif ch in self.SYMBOLS:
                self.toks.append(("sym", ch, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", i)
        self.pos = 0

    def peek(self):
        if self.pos < len(self.toks):
            return self.toks[self.pos]
        return ("end", "", len(self.text))

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, kind, value=None):
        k, v, p = self.next()
        if k != kind or (value is not None and v != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {v or 'end of input'!r}", p)
        return v

    def at_end(self):
        return self.pos >= len(self.toks)


def _parse_int(tk: Tokens) -> int:
    k, v, p = tk.next()
    sign = 1
    if k == "sym" and v == "-":
        sign = -1
        k, v, p = tk.next()
    if k != "num":
        raise ParseError("expected an integer", p)
    return sign * int(v)


def _parse_rational_number(tk: Tokens) -> Fraction:
    k, v, p = tk.next()
    if k != "num":
        raise ParseError("expected a number", p)
    val = Fraction(int(v))
    if tk.peek()[:2] == ("sym", "/") and tk.pos + 1 < len(tk.toks) \
            and tk.toks[tk.pos + 1][0] == "num":
        tk.next()
        val /= int(tk.expect("num"))
    return val


def _parse_apower(tk: Tokens) -> int:
    tk.expect("name", "A")
    if tk.peek()[:2] == ("sym", "^"):
        tk.next()
        return _parse_int(tk)
    return 1


def parse_laurent_sum(tk: Tokens) -> LaurentPoly:
    acc: dict = {}
    sign = 1
    k, v, _ = tk.peek()
    if k == "sym" and v in "+-":
        tk.next()
        sign = -1 if v == "-" else 1
    while True:
        coeff = Fraction(sign)
        exp = 0
        saw_factor = False
        while True:
            k, v, p = tk.peek()
            if k == "num":
                coeff *= _parse_rational_number(tk)
                saw_factor = True
            elif k == "name" and v == "A":
                exp += _parse_apower(tk)
                saw_factor = True
            else:
                break
            if tk.peek()[:2] == ("sym", "*"):
                nxt = tk.toks[tk.pos + 1] if tk.pos + 1 < len(tk.toks) else None
                if nxt and (nxt[0] == "num" or (nxt[0] == "name" and nxt[1] == "A")):
                    tk.next()
                    continue
                break
        if not saw_factor:
            k, v, p = tk.peek()
            raise ParseError("expected a term", p)
        c = _normval(coeff)
        if c:
            e = exp
            s = acc.get(e, 0) + c
            if s:
                acc[e] = _normval(s)
            else:
                del acc[e]
        k, v, _ = tk.peek()
        if k == "sym" and v in "+-":
            tk.next()
            sign = -1 if v == "-" else 1
            continue
        break
    return LaurentPoly._raw(acc)


def parse_laurent(text: str) -> LaurentPoly:
    tk = Tokens(text)
    lp = parse_laurent_sum(tk)
    if not tk.at_end():
        k, v, p = tk.peek()
        raise ParseError(f"unexpected trailing input {v!r}", p)
    return lp


def parse_rational(text: str) -> RationalFunction:
    tk = Tokens(text)
    if tk.peek()[:2] == ("sym", "("):
        tk.next()
        num = parse_laurent_sum(tk)
        tk.expect("sym", ")")
        tk.expect("sym", "/")
        tk.expect("sym", "(")
        den = parse_laurent_sum(tk)
        tk.expect("sym", ")")
        if not tk.at_end():
            k, v, p = tk.peek()
            raise ParseError(f"unexpected trailing input {v!r}", p)
        return rf(num, den)
    lp = parse_laurent_sum(tk)
    if not tk.at_end():
        k, v, p = tk.peek()
        raise ParseError(f"unexpected trailing input {v!r}", p)
    return RationalFunction._make(lp, _ONE)
