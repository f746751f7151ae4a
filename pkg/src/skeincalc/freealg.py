"""Free noncommutative algebra over Q(A) with Dehn-twist operators.

Generators are indexed 1..n and carry a symmetric {0,1} intersection matrix.
The twist operator T_j^e is the algebra endomorphism fixing every generator
that the j-th one does not intersect and sending an intersecting X_k to
e*(A^e X_j X_k - A^-e X_k X_j).  Operator words compose these maps with the
leftmost step acting last, and the relator families built from a group
presentation are the generators of the defining ideal of the quotient
algebra.

Twist images double the degree of intersecting letters, so every operator
application takes a degree cap (default 16) and fails loudly instead of
truncating.
"""

from __future__ import annotations

from fractions import Fraction

from . import _fastpoly as fp
from .coeff import LaurentPoly, RationalFunction, laurent_A
from .coeff import _as_rf, _ONE  # package-internal fast constructors
from .errors import DegreeTooHigh, InvalidIndex, MixedSystems

DEFAULT_DEGREE_CAP = 16

Word = tuple


class TwistSystem:
    """Generator index set with a symmetric {0,1} intersection matrix."""

    __slots__ = ("n", "iota")

    def __init__(self, iota):
        rows = tuple(tuple(int(v) for v in row) for row in iota)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("intersection matrix must be square")
            for j, v in enumerate(row):
                if v not in (0, 1):
                    raise ValueError(
                        f"intersection number {v} at ({i + 1},{j + 1}) is not 0 or 1"
                    )
                if v != rows[j][i]:
                    raise ValueError("intersection matrix must be symmetric")
            if row[i] != 0:
                raise ValueError("intersection matrix must have zero diagonal")
        self.n = n
        self.iota = rows

    def intersection(self, i: int, j: int) -> int:
        self._check_index(i)
        self._check_index(j)
        return self.iota[i - 1][j - 1]

    def _check_index(self, i: int):
        if not (isinstance(i, int) and 1 <= i <= self.n):
            raise InvalidIndex(f"generator index {i} not in 1..{self.n}")

    def generator(self, i: int) -> "NCPolynomial":
        self._check_index(i)
        return NCPolynomial._raw(self, {(i,): _RF_ONE})

    def generators(self) -> list:
        return [self.generator(i) for i in range(1, self.n + 1)]

    def one(self) -> "NCPolynomial":
        return NCPolynomial._raw(self, {(): _RF_ONE})

    def zero(self) -> "NCPolynomial":
        return NCPolynomial._raw(self, {})

    def element(self, terms: dict) -> "NCPolynomial":
        return NCPolynomial(self, terms)

    def __eq__(self, other):
        if not isinstance(other, TwistSystem):
            return NotImplemented
        return self.iota == other.iota

    def __hash__(self):
        return hash(self.iota)

    def __repr__(self):
        return f"TwistSystem(n={self.n})"


def two_generator_system() -> TwistSystem:
    """The two-generator system with one intersection: a meridian/longitude pair."""
    return TwistSystem(((0, 1), (1, 0)))


_RF_ONE = RationalFunction._make(_ONE, _ONE)


def _check_same(a: "NCPolynomial", b: "NCPolynomial"):
    if a.system is not b.system and a.system != b.system:
        raise MixedSystems("operands live over different twist systems")


class NCPolynomial:
    """Finite Q(A)-linear combination of words in the generators."""

    __slots__ = ("system", "_t", "_hash")

    def __init__(self, system: TwistSystem, terms=None):
        t = {}
        if terms:
            for word, coeff in terms.items():
                word = tuple(int(l) for l in word)
                for letter in word:
                    system._check_index(letter)
                c = _as_rf(coeff)
                if c is NotImplemented:
                    raise TypeError(f"bad coefficient {coeff!r}")
                if not c.is_zero():
                    t[word] = t[word] + c if word in t else c
        self.system = system
        self._t = {w: c for w, c in t.items() if not c.is_zero()}
        self._hash = None

    @classmethod
    def _raw(cls, system: TwistSystem, t: dict) -> "NCPolynomial":
        obj = object.__new__(cls)
        obj.system = system
        obj._t = t
        obj._hash = None
        return obj

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._t

    def degree(self) -> int:
        """Length of the longest word (0 for the zero polynomial)."""
        return max(map(len, self._t)) if self._t else 0

    def coefficient(self, word) -> RationalFunction:
        return self._t.get(tuple(word), _RF_ZERO)

    def terms(self):
        """Term list in ascending graded-lex word order."""
        return sorted(self._t.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def support(self):
        return sorted(self._t, key=lambda w: (len(w), w))

    def leading_word(self) -> Word:
        """Greatest word in graded-lex order (errors on zero)."""
        if not self._t:
            raise ValueError("zero polynomial has no leading word")
        return max(self._t, key=lambda w: (len(w), w))

    def is_homogeneous(self) -> bool:
        lengths = {len(w) for w in self._t}
        return len(lengths) <= 1

    def abelianized(self) -> dict:
        """Commutative image: map from letter-count tuple to coefficient."""
        out: dict = {}
        for w, c in self._t.items():
            key = letter_counts(w, self.system.n)
            s = out.get(key, _RF_ZERO) + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return out

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, NCPolynomial):
            _check_same(self, other)
            out = dict(self._t)
            for w, c in other._t.items():
                s = out.get(w)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(w, None)
                else:
                    out[w] = s
            return NCPolynomial._raw(self.system, out)
        c = _as_rf(other)
        if c is NotImplemented:
            return NotImplemented
        return self + NCPolynomial._raw(self.system, {(): c} if not c.is_zero() else {})

    __radd__ = __add__

    def __neg__(self):
        return NCPolynomial._raw(self.system, {w: -c for w, c in self._t.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, NCPolynomial) else -_ensure_rf(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NCPolynomial):
            _check_same(self, other)
            out: dict = {}
            for w1, c1 in self._t.items():
                for w2, c2 in other._t.items():
                    w = w1 + w2
                    c = c1 * c2
                    s = out.get(w)
                    s = c if s is None else s + c
                    if s.is_zero():
                        out.pop(w, None)
                    else:
                        out[w] = s
            return NCPolynomial._raw(self.system, out)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, NCPolynomial):
            return NotImplemented
        return self.scale(other)

    def scale(self, k) -> "NCPolynomial":
        c = _as_rf(k)
        if c is NotImplemented:
            return NotImplemented
        if c.is_zero():
            return NCPolynomial._raw(self.system, {})
        return NCPolynomial._raw(self.system, {w: v * c for w, v in self._t.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a noncommutative polynomial")
        out = self.system.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- protocol --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return self.system == other.system and self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.system, tuple(self.terms())))
        return self._hash

    def __bool__(self):
        return bool(self._t)

    def __str__(self):
        from .fmt import format_nc
        return format_nc(self)

    def __repr__(self):
        return f"NCPolynomial({self})"


_RF_ZERO = RationalFunction._make(LaurentPoly.zero(), _ONE)


def _ensure_rf(x):
    c = _as_rf(x)
    if c is NotImplemented:
        raise TypeError(f"cannot coerce {x!r} to a scalar")
    return c


def letter_counts(word: Word, n: int) -> tuple:
    counts = [0] * n
    for letter in word:
        counts[letter - 1] += 1
    return tuple(counts)


def a_commutator(p: NCPolynomial, q: NCPolynomial) -> NCPolynomial:
    """The deformed bracket [p,q]_A = A*p*q - A^-1*q*p."""
    _check_same(p, q)
    A = laurent_A(1)
    Ainv = laurent_A(-1)
    return (p * q).scale(A) - (q * p).scale(Ainv)


class OperatorWord:
    """Composition of twist operators; the leftmost step acts last."""

    __slots__ = ("steps",)

    def __init__(self, steps=()):
        norm = []
        for j, eps in steps:
            j = int(j)
            eps = int(eps)
            if eps not in (1, -1):
                raise ValueError(f"twist exponent {eps} must be +1 or -1")
            norm.append((j, eps))
        self.steps = tuple(norm)

    @classmethod
    def identity(cls) -> "OperatorWord":
        return cls(())

    def __mul__(self, other: "OperatorWord") -> "OperatorWord":
        if not isinstance(other, OperatorWord):
            return NotImplemented
        return OperatorWord(self.steps + other.steps)

    def inverse(self) -> "OperatorWord":
        return OperatorWord(tuple((j, -e) for j, e in reversed(self.steps)))

    def __pow__(self, k: int) -> "OperatorWord":
        if k < 0:
            return self.inverse() ** (-k)
        return OperatorWord(self.steps * k)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __eq__(self, other):
        if not isinstance(other, OperatorWord):
            return NotImplemented
        return self.steps == other.steps

    def __hash__(self):
        return hash(self.steps)

    def __str__(self):
        if not self.steps:
            return "1"
        return " ".join(f"t{j}" if e == 1 else f"t{j}^-1" for j, e in self.steps)

    def __repr__(self):
        return f"OperatorWord({self})"


class Presentation:
    """Twist system together with operator words that are relators (= 1) of the group."""

    __slots__ = ("system", "relators")

    def __init__(self, system: TwistSystem, relators=()):
        rel = []
        for w in relators:
            if not isinstance(w, OperatorWord):
                w = OperatorWord(w)
            for j, _ in w.steps:
                system._check_index(j)
            rel.append(w)
        self.system = system
        self.relators = tuple(rel)

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return self.system == other.system and self.relators == other.relators

    def __repr__(self):
        return f"Presentation(n={self.system.n}, relators={len(self.relators)})"


def torus_mcg_presentation() -> Presentation:
    """Mapping-class-group presentation for the one-holed torus.

    Two twist generators subject to the braid relator (written so that it
    spells t2^-1 t1^-1 t2^-1 t1 t2 t1) and the square of the half-turn word
    t1 t2 t1, which acts trivially on curves.
    """
    braid = OperatorWord([(2, -1), (1, -1), (2, -1), (1, 1), (2, 1), (1, 1)])
    half_turn = OperatorWord([(1, 1), (2, 1), (1, 1)])
    return Presentation(two_generator_system(), (braid, half_turn * half_turn))


def _validate_twist_args(system: TwistSystem, j: int, eps: int):
    system._check_index(j)
    if eps not in (1, -1):
        raise ValueError(f"twist exponent {eps} must be +1 or -1")


def apply_twist(p: NCPolynomial, j: int, eps: int = 1,
                degree_cap: int = DEFAULT_DEGREE_CAP) -> NCPolynomial:
    """Apply the twist endomorphism T_j^eps to p.

    Raises DegreeTooHigh when the image of some word of p would exceed
    degree_cap (the image degree is exact: within one word no cancellation
    can remove the top-degree part).
    """
    system = p.system
    _validate_twist_args(system, j, eps)
    if not p._t:
        return p
    row = system.iota[j - 1]
    growth = [2 if row[k] else 1 for k in range(system.n)]
    for w in p._t:
        d = sum(growth[l - 1] for l in w)
        if d > degree_cap:
            raise DegreeTooHigh(d, degree_cap, "twist image degree")

    if all(c.den.is_one() and c.num.is_integral() for c in p._t.values()):
        return NCPolynomial._raw(system, _twist_int(system, row, j, eps, p._t))
    return NCPolynomial._raw(system, _twist_general(system, row, j, eps, p._t))


def _letter_pieces(row, j, eps, n):
    """Image of each generator as (word, A-exponent, sign) monomial pieces."""
    pieces = []
    for k in range(1, n + 1):
        if row[k - 1] == 0:
            pieces.append((((k,), 0, 1),))
        elif eps == 1:
            pieces.append((((j, k), 1, 1), ((k, j), -1, -1)))
        else:
            pieces.append((((k, j), 1, 1), ((j, k), -1, -1)))
    return pieces


def _twist_int(system, row, j, eps, terms):
    pieces = _letter_pieces(row, j, eps, system.n)
    out: dict = {}
    for word, coeff in terms.items():
        partial = {(): {0: 1}}
        for letter in word:
            nxt: dict = {}
            for piece_word, shift, sign in pieces[letter - 1]:
                for w1, c1 in partial.items():
                    w = w1 + piece_word
                    if sign > 0:
                        c = {e + shift: v for e, v in c1.items()}
                    else:
                        c = {e + shift: -v for e, v in c1.items()}
                    tgt = nxt.get(w)
                    if tgt is None:
                        nxt[w] = c
                    else:
                        fp.paccum(tgt, c)
            partial = {w: c for w, c in nxt.items() if c}
        base = coeff.num.coeffs
        for w, c in partial.items():
            tgt = out.get(w)
            if tgt is None:
                out[w] = fp.pmul(c, base)
            else:
                fp.paccum(tgt, fp.pmul(c, base))
    from .coeff import lp_from_fast
    return {
        w: RationalFunction._make(lp_from_fast(c), _ONE)
        for w, c in out.items() if c
    }


def _twist_general(system, row, j, eps, terms):
    pieces = _letter_pieces(row, j, eps, system.n)
    rf_pieces = []
    for plist in pieces:
        rf_pieces.append(tuple(
            (w, _as_rf(LaurentPoly.monomial(shift, sign)))
            for w, shift, sign in plist
        ))
    out: dict = {}
    for word, coeff in terms.items():
        partial = {(): _RF_ONE}
        for letter in word:
            nxt: dict = {}
            for piece_word, pc in rf_pieces[letter - 1]:
                for w1, c1 in partial.items():
                    w = w1 + piece_word
                    c = c1 * pc
                    s = nxt.get(w)
                    s = c if s is None else s + c
                    nxt[w] = s
            partial = {w: c for w, c in nxt.items() if not c.is_zero()}
        for w, c in partial.items():
            s = out.get(w)
            s = c * coeff if s is None else s + c * coeff
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
    return out


def predicted_image_degrees(system: TwistSystem, word: OperatorWord,
                            p: NCPolynomial) -> list:
    """Exact degree of the image of each word of p under the operator word."""
    n = system.n
    out = []
    for w in p._t:
        v = list(letter_counts(w, n))
        for j, _eps in reversed(word.steps):
            row = system.iota[j - 1]
            v[j - 1] += sum(v[k] for k in range(n) if row[k])
        out.append(sum(v))
    return out


def apply_operator_word(p: NCPolynomial, word: OperatorWord,
                        degree_cap: int = DEFAULT_DEGREE_CAP) -> NCPolynomial:
    """Apply a composition of twists to p, leftmost step acting last."""
    system = p.system
    if not isinstance(word, OperatorWord):
        word = OperatorWord(word)
    for j, eps in word.steps:
        _validate_twist_args(system, j, eps)
    if not word.steps or p.is_zero():
        return p
    for d in predicted_image_degrees(system, word, p):
        if d > degree_cap:
            raise DegreeTooHigh(d, degree_cap, "operator-word image degree")
    out = p
    for j, eps in reversed(word.steps):
        out = apply_twist(out, j, eps, degree_cap=degree_cap)
    return out


def relator_elements(pres: Presentation,
                     degree_cap: int = DEFAULT_DEGREE_CAP) -> list:
    """Generators of the defining ideal, in a fixed deterministic order.

    Three families: relator-word images R(T)X_i - X_i, the inverse-pair
    images T_j T_j^-1 X_i - X_i, and commutators of non-intersecting
    generators.  Elements that are identically zero are omitted.
    """
    system = pres.system
    out = []
    for word in pres.relators:
        for i in range(1, system.n + 1):
            x = system.generator(i)
            el = apply_operator_word(x, word, degree_cap=degree_cap) - x
            if not el.is_zero():
                out.append(el)
    for i in range(1, system.n + 1):
        for j in range(1, system.n + 1):
            x = system.generator(i)
            el = apply_twist(apply_twist(x, j, -1, degree_cap=degree_cap),
                             j, 1, degree_cap=degree_cap) - x
            if not el.is_zero():
                out.append(el)
    for i in range(1, system.n + 1):
        for j in range(i + 1, system.n + 1):
            if system.iota[i - 1][j - 1] == 0:
                xi, xj = system.generator(i), system.generator(j)
                el = xi * xj - xj * xi
                if not el.is_zero():
                    out.append(el)
    return out


def coxeter_relators(degree_cap: int = DEFAULT_DEGREE_CAP) -> list:
    """The two inverse-pair relator elements of the two-generator system.

    These are [[X_j,X_i]_A,X_j]_A - X_i for (j,i) in {(2,1),(1,2)}; they
    generate the defining ideal of the one-holed-torus model.
    """
    return relator_elements(Presentation(two_generator_system(), ()),
                            degree_cap=degree_cap)


def free_identity_check(system: TwistSystem | None = None) -> bool:
    """Check [X2,[X1,X2]_A]_A == [[X2,X1]_A,X2]_A in the free algebra."""
    if system is None:
        system = two_generator_system()
    x1, x2 = system.generator(1), system.generator(2)
    lhs = a_commutator(x2, a_commutator(x1, x2))
    rhs = a_commutator(a_commutator(x2, x1), x2)
    return lhs == rhs
