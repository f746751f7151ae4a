"""Skein algebra of the one-holed torus and its twist symmetries.

Elements are exact Q(A)-combinations of ordered monomials x^a y^b z^c, where
x, y, z are the curves (1,0), (0,1), (1,1).  Products are computed by the
rewriting system

    y*x -> A^2*x*y - (A^3 - A^-1)*z
    z*y -> A^2*y*z - (A^3 - A^-1)*x
    z*x -> A^-2*x*z + (A - A^-3)*y

which orients the three defining A-commutator relations of the algebra.  The
module also provides the two Dehn-twist automorphisms and their action on
curve coordinates, the Euclidean twist-word construction that reaches any
primitive curve from (1,0), the boundary element, the evaluation map psi from
the two-generator free algebra, and generation witnesses.

Hot paths run on packed integer monomials with {exponent: int} coefficient
dicts; the public layer stays in exact RationalFunction arithmetic.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from . import _fastpoly as fp
from .coeff import (
    RationalFunction,
    laurent_A,
    lp_from_fast,
    parse_laurent,
    rf,
    rf_poly,
)
from .coeff import _as_rf, _ONE
from .errors import NotPrimitive, WrongSystem
from .freealg import (
    DEFAULT_DEGREE_CAP,
    NCPolynomial,
    OperatorWord,
    apply_operator_word,
    two_generator_system,
)

_B = 7
_C = 14
_MASK = (1 << _B) - 1

_RF_ZERO = rf(0)
_RF_ONE = rf(1)

# h = A^2 - A^-2 clears the denominators of every twist formula
H_POLY = parse_laurent("A^2 - A^-2")


def _pack(a: int, b: int, c: int) -> int:
    return a | (b << _B) | (c << _C)


def _unpack(m: int) -> tuple:
    return (m & _MASK, (m >> _B) & _MASK, m >> _C)


class TorusElement:
    """Exact element of the one-holed-torus skein algebra."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms=None):
        t = {}
        if terms:
            for mono, coeff in terms.items():
                a, b, c = (int(v) for v in mono)
                if a < 0 or b < 0 or c < 0:
                    raise ValueError(f"negative exponent in monomial {mono}")
                v = _as_rf(coeff)
                if v is NotImplemented:
                    raise TypeError(f"bad coefficient {coeff!r}")
                if not v.is_zero():
                    key = (a, b, c)
                    s = t.get(key)
                    v = v if s is None else s + v
                    if v.is_zero():
                        t.pop(key, None)
                    else:
                        t[key] = v
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict) -> "TorusElement":
        obj = object.__new__(cls)
        obj._t = t
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> "TorusElement":
        return cls._raw({})

    @classmethod
    def one(cls) -> "TorusElement":
        return cls._raw({(0, 0, 0): _RF_ONE})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._t

    def degree(self) -> int:
        """Largest total exponent (0 for the zero element)."""
        return max((a + b + c for a, b, c in self._t), default=0)

    def coefficient(self, mono) -> RationalFunction:
        return self._t.get(tuple(mono), _RF_ZERO)

    def terms(self):
        """Terms sorted by descending total degree, then z, x, y exponents."""
        return sorted(self._t.items(),
                      key=lambda kv: (sum(kv[0]), kv[0][2], kv[0][0], kv[0][1]),
                      reverse=True)

    def support(self):
        return [m for m, _ in self.terms()]

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TorusElement):
            c = _as_rf(other)
            if c is NotImplemented:
                return NotImplemented
            other = TorusElement._raw({(0, 0, 0): c} if not c.is_zero() else {})
        out = dict(self._t)
        for m, c in other._t.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return TorusElement._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement._raw({m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, TorusElement):
            return self + (-other)
        return self + (-_as_rf(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TorusElement):
            return t_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, TorusElement):
            return NotImplemented
        return self.scale(other)

    def scale(self, k) -> "TorusElement":
        c = _as_rf(k)
        if c is NotImplemented:
            return NotImplemented
        if c.is_zero():
            return TorusElement._raw({})
        return TorusElement._raw({m: v * c for m, v in self._t.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a skein element")
        out = TorusElement.one()
        base = self
        while k:
            if k & 1:
                out = t_mul(out, base)
            base = t_mul(base, base)
            k >>= 1
        return out

    # -- protocol --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self.terms()))
        return self._hash

    def __bool__(self):
        return bool(self._t)

    def __str__(self):
        from .fmt import format_torus
        return format_torus(self)

    def __repr__(self):
        return f"TorusElement({self})"


def element_x() -> TorusElement:
    return TorusElement._raw({(1, 0, 0): _RF_ONE})


def element_y() -> TorusElement:
    return TorusElement._raw({(0, 1, 0): _RF_ONE})


def element_z() -> TorusElement:
    return TorusElement._raw({(0, 0, 1): _RF_ONE})


def element_z_prime() -> TorusElement:
    """The curve (1,-1), resolved as A*x*y - A^2*z."""
    return TorusElement({(1, 1, 0): laurent_A(1), (0, 0, 1): -laurent_A(2)})


# -- left-multiplication rewrite tables -------------------------------------
#
# _ly[m] / _lz[m] give y*m and z*m in normal form as tuples of
# (packed monomial, {exponent: int} coefficient).  The table dicts are
# immutable by convention; consumers must copy before mutating.

_LY: dict = {}
_LZ: dict = {}


def _ly(m: int):
    res = _LY.get(m)
    if res is not None:
        return res
    if m & _MASK == 0:
        res = ((m + (1 << _B), {0: 1}),)
    else:
        rest = m - 1
        out: dict = {}
        for m2, p in _ly(rest):
            _tbl_acc(out, m2 + 1, p, 2, 1)
        for m2, p in _lz(rest):
            _tbl_acc(out, m2, p, 3, -1)
            _tbl_acc(out, m2, p, -1, 1)
        res = tuple((k, v) for k, v in out.items() if v)
    _LY[m] = res
    return res


def _lz(m: int):
    res = _LZ.get(m)
    if res is not None:
        return res
    a = m & _MASK
    b = (m >> _B) & _MASK
    if a == 0 and b == 0:
        res = ((m + (1 << _C), {0: 1}),)
    elif a > 0:
        rest = m - 1
        out: dict = {}
        for m2, p in _lz(rest):
            _tbl_acc(out, m2 + 1, p, -2, 1)
        for m2, p in _ly(rest):
            _tbl_acc(out, m2, p, 1, 1)
            _tbl_acc(out, m2, p, -3, -1)
        res = tuple((k, v) for k, v in out.items() if v)
    else:
        # z y rest: the z*rest part may produce x-monomials, so the leading
        # y must go back through the y-table rather than a plain bump
        rest = m - (1 << _B)
        out = {}
        for m2, p in _lz(rest):
            for m3, p3 in _ly(m2):
                _tbl_acc(out, m3, fp.pmul(p, p3), 2, 1)
        _tbl_acc(out, rest + 1, {0: 1}, 3, -1)
        _tbl_acc(out, rest + 1, {0: 1}, -1, 1)
        res = tuple((k, v) for k, v in out.items() if v)
    _LZ[m] = res
    return res


def _tbl_acc(out: dict, m: int, p: dict, shift: int, sign: int):
    tgt = out.get(m)
    if tgt is None:
        out[m] = {e + shift: (v if sign > 0 else -v) for e, v in p.items()}
    else:
        for e, v in p.items():
            e2 = e + shift
            s = tgt.get(e2, 0) + (v if sign > 0 else -v)
            if s:
                tgt[e2] = s
            else:
                del tgt[e2]


# -- raw (integer) element kernels -------------------------------------------

def _raw_accum(out: dict, add: dict):
    for m, v in add.items():
        tgt = out.get(m)
        if tgt is None:
            out[m] = v
        else:
            fp.paccum(tgt, v)
            if not tgt:
                del out[m]


def _raw_lmul_letter(letter: int, raw: dict) -> dict:
    """Left-multiply a raw element by x (0), y (1) or z (2)."""
    if letter == 0:
        return {m + 1: v for m, v in raw.items()}
    table = _ly if letter == 1 else _lz
    out: dict = {}
    for m, v in raw.items():
        for m2, p in table(m):
            tgt = out.get(m2)
            if tgt is None:
                out[m2] = fp.pmul(v, p)
            else:
                fp.paccum(tgt, fp.pmul(v, p))
                if not tgt:
                    del out[m2]
    return out


def _raw_mono_mul(m: int, raw: dict) -> dict:
    """Left-multiply a raw element by the monomial x^a y^b z^c."""
    a, b, c = _unpack(m)
    out = raw
    for _ in range(c):
        out = _raw_lmul_letter(2, out)
    for _ in range(b):
        out = _raw_lmul_letter(1, out)
    if a:
        out = {k + a: (v if out is not raw else dict(v)) for k, v in out.items()}
    elif out is raw:
        out = {k: dict(v) for k, v in out.items()}
    return out


def _as_raw(e: TorusElement):
    """Integer raw form {packed: {exp: int}}, or None if not integral."""
    out = {}
    for (a, b, c), v in e._t.items():
        if not (v.den.is_one() and v.num.is_integral()):
            return None
        out[_pack(a, b, c)] = dict(v.num.coeffs)
    return out


def _from_raw(raw: dict) -> TorusElement:
    return TorusElement._raw({
        _unpack(m): RationalFunction._make(lp_from_fast(v), _ONE)
        for m, v in raw.items() if v
    })


_MONO_PAIR_CACHE: dict = {}


def _mono_pair(m1: int, m2: int):
    """Normal form of the product of two monomials, memoized on the pair."""
    if m1 == 0:
        return ((m2, {0: 1}),)
    key = (m1, m2)
    cached = _MONO_PAIR_CACHE.get(key)
    if cached is not None:
        return cached
    a = m1 & _MASK
    c = m1 >> _C
    if (m1 >> _B) == 0:
        # pure x power prepends without rewriting
        res = ((m2 + a, {0: 1}),)
    else:
        # peel the rightmost letter of m1 onto m2
        if c:
            rest, table = m1 - (1 << _C), _lz
        else:
            rest, table = m1 - (1 << _B), _ly
        acc: dict = {}
        for mid, p in table(m2):
            for m3, p3 in _mono_pair(rest, mid):
                tgt = acc.get(m3)
                if tgt is None:
                    acc[m3] = fp.pmul(p, p3)
                else:
                    fp.paccum(tgt, fp.pmul(p, p3))
                    if not tgt:
                        del acc[m3]
        res = tuple(acc.items())
    if _MEMO_ENABLED:
        _MONO_PAIR_CACHE[key] = res
    return res


def t_mul(e1: TorusElement, e2: TorusElement) -> TorusElement:
    """Product in the skein algebra (concatenation plus rewriting)."""
    if not e1._t or not e2._t:
        return TorusElement._raw({})
    r1, r2 = _as_raw(e1), _as_raw(e2)
    if r1 is not None and r2 is not None:
        out: dict = {}
        if _MEMO_ENABLED:
            for m1, c1 in r1.items():
                for m2, c2 in r2.items():
                    c12 = fp.pmul(c1, c2)
                    for m3, p in _mono_pair(m1, m2):
                        tgt = out.get(m3)
                        if tgt is None:
                            out[m3] = fp.pmul(c12, p)
                        else:
                            fp.paccum(tgt, fp.pmul(c12, p))
                            if not tgt:
                                del out[m3]
        else:
            for m, c in r1.items():
                part = _raw_mono_mul(m, r2)
                for m2, v in part.items():
                    prod = fp.pmul(c, v)
                    tgt = out.get(m2)
                    if tgt is None:
                        out[m2] = prod
                    else:
                        fp.paccum(tgt, prod)
                        if not tgt:
                            del out[m2]
        return _from_raw(out)
    return _t_mul_general(e1, e2)


def _t_mul_general(e1: TorusElement, e2: TorusElement) -> TorusElement:
    out: dict = {}
    for (a, b, c), c1 in e1._t.items():
        part = {_pack(*m): v for m, v in e2._t.items()}
        cur = part
        for table, count in ((_lz, c), (_ly, b)):
            for _ in range(count):
                nxt: dict = {}
                for m, v in cur.items():
                    for m2, p in table(m):
                        _gen_acc(nxt, m2, v, p)
                cur = nxt
        if a:
            cur = {m + a: v for m, v in cur.items()}
        for m, v in cur.items():
            key = _unpack(m)
            s = out.get(key)
            add = v * c1
            s = add if s is None else s + add
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return TorusElement._raw(out)


def _gen_acc(out: dict, m: int, v: RationalFunction, p: dict):
    v = v * rf_poly(lp_from_fast(dict(p)))
    s = out.get(m)
    s = v if s is None else s + v
    if s.is_zero():
        out.pop(m, None)
    else:
        out[m] = s


# -- normal-form reduction ---------------------------------------------------

_LETTER_INDEX = {"x": 0, "y": 1, "z": 2}

# rule table for the randomized reducer: (hi, lo) -> replacement terms,
# each (letters, {exponent: int})
_RULES = {
    (1, 0): (((0, 1), {2: 1}), ((2,), {3: -1, -1: 1})),
    (2, 1): (((1, 2), {2: 1}), ((0,), {3: -1, -1: 1})),
    (2, 0): (((0, 2), {-2: 1}), ((1,), {1: 1, -3: -1})),
}


def _letters_of(word) -> tuple:
    if isinstance(word, str):
        out = []
        for ch in word:
            if ch not in _LETTER_INDEX:
                raise ValueError(f"unknown letter {ch!r}; expected x, y or z")
            out.append(_LETTER_INDEX[ch])
        return tuple(out)
    return tuple(int(l) for l in word)


def nf_reduce(terms) -> TorusElement:
    """Normal form of a sum of coefficient-weighted words over {x,y,z}.

    Words are strings like "zyx" (or letter-index sequences); the reduction
    is the deterministic right-to-left fold through the rewrite tables.
    """
    if hasattr(terms, "items"):
        terms = terms.items()
    acc: dict = {}
    int_part: dict = {}
    for word, coeff in terms:
        letters = _letters_of(word)
        c = _as_rf(coeff)
        if c is NotImplemented:
            raise TypeError(f"bad coefficient {coeff!r}")
        if c.is_zero():
            continue
        raw = {0: {0: 1}}
        for letter in reversed(letters):
            raw = _raw_lmul_letter(letter, raw)
        if c.den.is_one() and c.num.is_integral():
            base = c.num.coeffs
            for m, v in raw.items():
                tgt = int_part.get(m)
                if tgt is None:
                    int_part[m] = fp.pmul(v, base)
                else:
                    fp.paccum(tgt, fp.pmul(v, base))
        else:
            for m, v in raw.items():
                _gen_acc(acc, m, c, v)
    out = _from_raw(int_part)
    if acc:
        out = out + TorusElement._raw(
            {_unpack(m): v for m, v in acc.items() if not v.is_zero()})
    return out


def nf_reduce_random(terms, rng: random.Random, max_steps: int | None = None):
    """Normal form computed by randomly ordered single rewrite steps.

    Returns (element, steps).  Used to exercise confluence: the result must
    match nf_reduce for every ordering.
    """
    if hasattr(terms, "items"):
        terms = terms.items()
    pile: dict = {}
    for word, coeff in terms:
        letters = _letters_of(word)
        c = _as_rf(coeff)
        if c is NotImplemented:
            raise TypeError(f"bad coefficient {coeff!r}")
        if not c.is_zero():
            s = pile.get(letters)
            s = c if s is None else s + c
            if s.is_zero():
                pile.pop(letters, None)
            else:
                pile[letters] = s
    steps = 0
    while True:
        sites = []
        for w in pile:
            for i in range(len(w) - 1):
                if w[i] > w[i + 1]:
                    sites.append((w, i))
        if not sites:
            break
        sites.sort()
        w, i = sites[rng.randrange(len(sites))]
        coeff = pile.pop(w)
        for repl, poly in _RULES[(w[i], w[i + 1])]:
            nw = w[:i] + repl + w[i + 2:]
            add = coeff * rf_poly(lp_from_fast(dict(poly)))
            s = pile.get(nw)
            s = add if s is None else s + add
            if s.is_zero():
                pile.pop(nw, None)
            else:
                pile[nw] = s
        steps += 1
        if max_steps is not None and steps > max_steps:
            raise RuntimeError(f"reduction exceeded {max_steps} steps")
    out: dict = {}
    for w, c in pile.items():
        a = sum(1 for l in w if l == 0)
        b = sum(1 for l in w if l == 1)
        cz = len(w) - a - b
        key = (a, b, cz)
        s = out.get(key)
        s = c if s is None else s + c
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s
    return TorusElement._raw(out), steps


# -- memoization --------------------------------------------------------------

_MEMO_ENABLED = True
_CURVE_CACHE: dict = {}
_TWIST_MONO_CACHE: dict = {}
_BOUNDARY_CACHE: list = []


def set_memoization(enabled: bool):
    """Enable or disable result caches (curve elements, twist images)."""
    global _MEMO_ENABLED
    _MEMO_ENABLED = bool(enabled)
    if not _MEMO_ENABLED:
        clear_caches()


def clear_caches():
    _CURVE_CACHE.clear()
    _TWIST_MONO_CACHE.clear()
    _BOUNDARY_CACHE.clear()
    _MONO_PAIR_CACHE.clear()
    _LY.clear()
    _LZ.clear()


# -- Dehn twist automorphisms -------------------------------------------------
#
# Letter images, twist 1 along x and twist 2 along y:
#   t1:    x -> x,               y -> z,                z -> A^-1*x*z - A^-2*y
#   t1^-1: x -> x,               y -> A*x*y - A^2*z,    z -> y
#   t2:    x -> A*x*y - A^2*z,   y -> y,                z -> x
#   t2^-1: x -> z,               y -> y,                z -> A*y*z - A^2*x

def _twist_letter_images(j: int, eps: int) -> tuple:
    zp = {_pack(1, 1, 0): {1: 1}, _pack(0, 0, 1): {2: -1}}
    if j == 1:
        if eps == 1:
            return ({_pack(1, 0, 0): {0: 1}},
                    {_pack(0, 0, 1): {0: 1}},
                    {_pack(1, 0, 1): {-1: 1}, _pack(0, 1, 0): {-2: -1}})
        return ({_pack(1, 0, 0): {0: 1}},
                zp,
                {_pack(0, 1, 0): {0: 1}})
    if eps == 1:
        return (zp,
                {_pack(0, 1, 0): {0: 1}},
                {_pack(1, 0, 0): {0: 1}})
    return ({_pack(0, 0, 1): {0: 1}},
            {_pack(0, 1, 0): {0: 1}},
            {_pack(0, 1, 1): {1: 1}, _pack(1, 0, 0): {2: -1}})


def _twist_mono_image(j: int, eps: int, m: int) -> dict:
    """Raw image of the monomial x^a y^b z^c under the twist, memoized."""
    key = (j, eps, m)
    cached = _TWIST_MONO_CACHE.get(key) if _MEMO_ENABLED else None
    if cached is not None:
        return cached
    if m == 0:
        res = {0: {0: 1}}
    else:
        imgs = _twist_letter_images(j, eps)
        a, b, c = _unpack(m)
        if a:
            letter, rest = 0, _pack(a - 1, b, c)
        elif b:
            letter, rest = 1, _pack(0, b - 1, c)
        else:
            letter, rest = 2, _pack(0, 0, c - 1)
        tail = _twist_mono_image(j, eps, rest)
        res: dict = {}
        for mi, ci in imgs[letter].items():
            part = _raw_mono_mul(mi, tail)
            for m2, v in part.items():
                prod = fp.pmul(v, ci)
                tgt = res.get(m2)
                if tgt is None:
                    res[m2] = prod
                else:
                    fp.paccum(tgt, prod)
                    if not tgt:
                        del res[m2]
    if _MEMO_ENABLED:
        _TWIST_MONO_CACHE[key] = res
    return res


def twist_auto(j: int, eps: int, e: TorusElement) -> TorusElement:
    """Apply the Dehn-twist automorphism t_j^eps to a skein element."""
    if j not in (1, 2):
        raise ValueError(f"twist index {j} must be 1 or 2")
    if eps not in (1, -1):
        raise ValueError(f"twist exponent {eps} must be +1 or -1")
    out: dict = {}
    ints: dict = {}
    for (a, b, c), coeff in e._t.items():
        img = _twist_mono_image(j, eps, _pack(a, b, c))
        if coeff.den.is_one() and coeff.num.is_integral():
            base = coeff.num.coeffs
            for m, v in img.items():
                prod = fp.pmul(v, base)
                tgt = ints.get(m)
                if tgt is None:
                    ints[m] = prod
                else:
                    fp.paccum(tgt, prod)
        else:
            for m, v in img.items():
                _gen_acc(out, m, coeff, v)
    result = _from_raw(ints)
    if out:
        result = result + TorusElement._raw(
            {_unpack(m): v for m, v in out.items() if not v.is_zero()})
    return result


def twist_word_auto(word: OperatorWord, e: TorusElement) -> TorusElement:
    """Apply a composition of twists, leftmost step acting last."""
    out = e
    for j, eps in reversed(tuple(word)):
        out = twist_auto(j, eps, out)
    return out


# -- boundary -----------------------------------------------------------------

def boundary_element() -> TorusElement:
    """The boundary curve: A*x*y*z - A^2*z^2 - A^2*x^2 - A^-2*y^2 + A^2 + A^-2."""
    if _BOUNDARY_CACHE:
        return _BOUNDARY_CACHE[0]
    el = TorusElement({
        (1, 1, 1): laurent_A(1),
        (0, 0, 2): -laurent_A(2),
        (2, 0, 0): -laurent_A(2),
        (0, 2, 0): -laurent_A(-2),
        (0, 0, 0): parse_laurent("A^2 + A^-2"),
    })
    if _MEMO_ENABLED:
        _BOUNDARY_CACHE.append(el)
    return el


# -- curves and matrices -------------------------------------------------------

class Curve:
    """Primitive integer vector (p,q) up to sign; canonical with p>0 or (0,1)."""

    __slots__ = ("p", "q")

    def __init__(self, p: int, q: int):
        p, q = int(p), int(q)
        if gcd(p, q) != 1:
            raise NotPrimitive(f"({p},{q}) is not primitive: gcd = {gcd(p, q)}")
        if p < 0 or (p == 0 and q < 0):
            p, q = -p, -q
        self.p, self.q = p, q

    def __eq__(self, other):
        if not isinstance(other, Curve):
            return NotImplemented
        return (self.p, self.q) == (other.p, other.q)

    def __hash__(self):
        return hash((self.p, self.q))

    def __str__(self):
        return f"{self.p},{self.q}"

    def __repr__(self):
        return f"Curve({self.p},{self.q})"


def intersection(u: Curve, v: Curve) -> int:
    """Geometric intersection number |p*s - q*r|."""
    return abs(u.p * v.q - u.q * v.p)


def twist_matrix(j: int, eps: int = 1) -> tuple:
    """Integer matrix of the twist action on curve coordinates."""
    if j == 1:
        return ((1, eps), (0, 1))
    if j == 2:
        return ((1, 0), (-eps, 1))
    raise ValueError(f"twist index {j} must be 1 or 2")


def curve_matrix_action(j: int, eps: int, v: Curve) -> Curve:
    (a, b), (c, d) = twist_matrix(j, eps)
    return Curve(a * v.p + b * v.q, c * v.p + d * v.q)


def curve_word_action(word: OperatorWord, v: Curve) -> Curve:
    out = v
    for j, eps in reversed(tuple(word)):
        out = curve_matrix_action(j, eps, out)
    return out


def euclid_twist_word(v: Curve) -> OperatorWord:
    """A twist word sending (1,0) to v, found by Euclidean descent on (p,q)."""
    p, q = v.p, v.q
    steps = []
    while (p, q) != (1, 0):
        if p == 0:
            # (0,1): reached from (1,1) by the inverse x-twist
            steps.append((1, -1))
            p, q = p + q, q
        elif abs(q) >= abs(p):
            if abs(q - p) <= abs(q + p):
                steps.append((2, -1))
                q = q - p
            else:
                steps.append((2, 1))
                q = q + p
        else:
            if abs(p - q) <= abs(p + q):
                steps.append((1, 1))
                p = p - q
            else:
                steps.append((1, -1))
                p = p + q
    return OperatorWord(steps)


def curve_element(v: Curve, word: OperatorWord | None = None) -> TorusElement:
    """The skein element of a primitive curve, computed by twist replay.

    With the default word the Euclidean twist word is used and the result is
    memoized; passing an explicit word disables the cache (used by the
    path-independence checks).
    """
    if word is None:
        if _MEMO_ENABLED and (v.p, v.q) in _CURVE_CACHE:
            return _CURVE_CACHE[(v.p, v.q)]
        word = euclid_twist_word(v)
        out = twist_word_auto(word, element_x())
        if _MEMO_ENABLED:
            _CURVE_CACHE[(v.p, v.q)] = out
        return out
    return twist_word_auto(word, element_x())


# -- psi: evaluation of the free algebra --------------------------------------

def _check_torus_system(p: NCPolynomial):
    sys2 = two_generator_system()
    if p.system != sys2:
        raise WrongSystem(
            "psi is defined on the two-generator system with one intersection")


def _rf_over_hpow(num: dict, d: int) -> RationalFunction:
    """Exact value of (num as Laurent) / h^d with h = A^2 - A^-2."""
    if not num:
        return _RF_ZERO
    if d == 0:
        return RationalFunction._make(lp_from_fast(dict(num)), _ONE)
    # h^d = A^-2d (A^4-1)^d
    num = {e + 2 * d: v for e, v in num.items()}
    h4 = {4: 1, 0: -1}
    rem = d
    while rem > 0:
        q = fp.div_exact(num, h4)
        if q is None:
            break
        num = q
        rem -= 1
    if rem == 0:
        return RationalFunction._make(lp_from_fast(num), _ONE)
    # strip residual factors of A^4 - 1 = (A-1)(A+1)(A^2+1)
    den = _ONE
    for factor, mult in (({1: 1, 0: -1}, rem), ({1: 1, 0: 1}, rem),
                         ({2: 1, 0: 1}, rem)):
        left = mult
        while left > 0:
            q = fp.div_exact(num, factor)
            if q is None:
                break
            num = q
            left -= 1
        if left:
            fpoly = lp_from_fast(dict(factor))
            den = den * (fpoly ** left)
    if den.is_one():
        return RationalFunction._make(lp_from_fast(num), _ONE)
    lp = lp_from_fast(num)
    lc = den.leading_coefficient()
    if lc != 1:
        inv = Fraction(1, 1) / lc
        den = den.scale(inv)
        lp = lp.scale(inv)
    return RationalFunction._make(lp, den)


def _psi_slice_int(words: list, coeffs: dict) -> dict:
    """Horner evaluation of one homogeneous slice, h-powers deferred.

    words is a sorted list of equal-length tuples over {1,2}; the return is
    h^d * psi(slice) as a raw element (letter 1 contributes x, letter 2
    contributes y, each true image being that letter over h).
    """
    d = len(words[0])
    if d == 0:
        return {0: dict(coeffs[()])}
    stack = [dict() for _ in range(d + 1)]
    prev = None
    for w in words:
        if prev is not None:
            common = 0
            for a, b in zip(prev, w):
                if a != b:
                    break
                common += 1
            for k in range(d, common, -1):
                child = stack[k]
                if child:
                    _raw_accum(stack[k - 1],
                               _raw_lmul_letter(prev[k - 1] - 1, child))
                    stack[k] = {}
        leaf = stack[d]
        base = coeffs[w]
        tgt = leaf.get(0)
        if tgt is None:
            leaf[0] = dict(base)
        else:
            fp.paccum(tgt, base)
        prev = w
    for k in range(d, 0, -1):
        child = stack[k]
        if child:
            _raw_accum(stack[k - 1], _raw_lmul_letter(prev[k - 1] - 1, child))
    return stack[0]


def psi(p: NCPolynomial) -> TorusElement:
    """Algebra homomorphism sending X1 to x/(A^2-A^-2) and X2 to y/(A^2-A^-2)."""
    _check_torus_system(p)
    if p.is_zero():
        return TorusElement.zero()
    if all(c.den.is_one() and c.num.is_integral() for c in p._t.values()):
        slices: dict = {}
        for w, c in p._t.items():
            slices.setdefault(len(w), {})[w] = c.num.coeffs
        acc: dict = {}
        for d in sorted(slices):
            coeffs = slices[d]
            raw = _psi_slice_int(sorted(coeffs), coeffs)
            for m, v in raw.items():
                if not v:
                    continue
                val = _rf_over_hpow(v, d)
                if val.is_zero():
                    continue
                key = _unpack(m)
                s = acc.get(key)
                s = val if s is None else s + val
                if s.is_zero():
                    acc.pop(key, None)
                else:
                    acc[key] = s
        return TorusElement._raw(acc)
    return _psi_general(p)


def _psi_general(p: NCPolynomial) -> TorusElement:
    h_inv = rf(1, H_POLY)
    images = {1: element_x().scale(h_inv), 2: element_y().scale(h_inv)}
    acc = TorusElement.zero()
    for w, c in p.terms():
        val = TorusElement.one()
        for letter in reversed(w):
            val = t_mul(images[letter], val)
        acc = acc + val.scale(c)
    return acc


# -- witnesses -----------------------------------------------------------------

def witness(v: Curve, degree_cap: int = DEFAULT_DEGREE_CAP) -> NCPolynomial:
    """Free-algebra polynomial whose psi-image is curve_element(v)/(A^2-A^-2)."""
    sys2 = two_generator_system()
    word = euclid_twist_word(v)
    return apply_operator_word(sys2.generator(1), word, degree_cap=degree_cap)


def witness_boundary(degree_cap: int = DEFAULT_DEGREE_CAP) -> NCPolynomial:
    """Free-algebra polynomial whose psi-image is exactly the boundary element.

    Assembled as h^2*W'*W - A^2 h^2 X1^2 - A^-2 h^2 X2^2 + (A^2 + A^-2) with
    W, W' the witnesses of the curves (1,1) and (1,-1) and h = A^2 - A^-2,
    mirroring how the boundary resolves through z'*z.
    """
    sys2 = two_generator_system()
    w_z = witness(Curve(1, 1), degree_cap=degree_cap)
    w_zp = witness(Curve(1, -1), degree_cap=degree_cap)
    h2 = H_POLY * H_POLY
    x1, x2 = sys2.generator(1), sys2.generator(2)
    return ((w_zp * w_z).scale(h2)
            - (x1 * x1).scale(h2 * laurent_A(2))
            - (x2 * x2).scale(h2 * laurent_A(-2))
            + sys2.one().scale(parse_laurent("A^2 + A^-2")))


def equivariance_check(word: OperatorWord, p: NCPolynomial,
                       degree_cap: int = DEFAULT_DEGREE_CAP) -> bool:
    """Check psi(word applied to p) == twist replay of word applied to psi(p)."""
    _check_torus_system(p)
    lhs = psi(apply_operator_word(p, word, degree_cap=degree_cap))
    rhs = twist_word_auto(word, psi(p))
    return lhs == rhs
