"""Tests for text and structured serialization round trips."""

from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from skeincalc.coeff import LaurentPoly, laurent_A, rf
from skeincalc.errors import DegreeTooHigh, NotPrimitive, ParseError
from skeincalc.fmt import (
    canonical_json,
    certificate_data,
    certificate_from_data,
    curve_data,
    curve_from_data,
    format_curve,
    format_nc,
    format_torus,
    format_twist_word,
    implication_data,
    implication_from_data,
    laurent_data,
    laurent_from_data,
    nc_data,
    nc_from_data,
    opword_data,
    opword_from_data,
    parse_curve,
    parse_nc,
    parse_torus,
    parse_twist_word,
    rational_data,
    rational_from_data,
    torus_data,
    torus_from_data,
)
from skeincalc.freealg import (
    OperatorWord,
    a_commutator,
    apply_operator_word,
    apply_twist,
    coxeter_relators,
    torus_mcg_presentation,
    two_generator_system,
)
from skeincalc.quotient import (
    build_span,
    flat_certificate,
    member,
    prove_word_implication,
    verify_word_implication,
)
from skeincalc.torus import (
    Curve,
    TorusElement,
    boundary_element,
    element_x,
    element_y,
    element_z,
    witness,
)

A = laurent_A()
SYS2 = two_generator_system()
X1, X2 = SYS2.generator(1), SYS2.generator(2)


def random_torus(rng, max_deg=2, nterms=3):
    t = {}
    for _ in range(rng.randrange(1, nterms + 1)):
        mono = tuple(rng.randrange(max_deg + 1) for _ in range(3))
        num = LaurentPoly({rng.randrange(-3, 4): rng.randrange(-4, 5)
                           for _ in range(rng.randrange(1, 3))})
        if num.is_zero():
            continue
        if rng.random() < 0.3:
            c = rf(num, laurent_A(2) - 1)
        else:
            c = rf(num)
        t[mono] = c
    return TorusElement(t)


def random_nc(rng, max_terms=4, max_len=3):
    t = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        word = tuple(rng.randrange(1, 3) for _ in range(rng.randrange(max_len + 1)))
        num = LaurentPoly({rng.randrange(-3, 4): rng.randrange(-4, 5)})
        if num.is_zero():
            continue
        den = laurent_A(4) - 1 if rng.random() < 0.3 else LaurentPoly.one()
        t[word] = rf(num, den)
    return SYS2.element(t)


# -- torus element text -------------------------------------------------------

def test_format_torus_pinned():
    assert format_torus(boundary_element()) == \
        "A*x*y*z - A^2*z^2 - A^2*x^2 - A^-2*y^2 + A^2 + A^-2"
    assert format_torus(element_y() * element_x()) == \
        "A^2*x*y - (A^3 - A^-1)*z"
    assert format_torus(element_x() * element_y()) == "x*y"
    assert format_torus(TorusElement.zero()) == "0"
    assert format_torus(TorusElement.one()) == "1"
    assert format_torus(-TorusElement.one()) == "-1"
    assert format_torus(element_z().scale(-1)) == "-z"
    assert format_torus(element_x().scale(Fraction(3, 2))) == "3/2*x"
    assert format_torus(element_x() ** 2 - element_y() + 7) == \
        "x^2 - y + 7"
    assert format_torus(element_x().scale(rf(A, A ** 2 - 1))) == \
        "(A)/(A^2 - 1)*x"
    assert format_torus(element_x().scale(rf(-A, A ** 2 - 1))) == \
        "-(A)/(A^2 - 1)*x"


def test_parse_torus_products_are_normal_forms():
    x, y, z = element_x(), element_y(), element_z()
    assert parse_torus("y*x") == y * x
    assert parse_torus("z*y*x") == z * (y * x)
    assert parse_torus("x^3*z") == x ** 3 * z
    assert parse_torus("(x + y)*z - z*x") == (x + y) * z - z * x
    assert parse_torus("-x + 2*y") == y.scale(2) - x
    assert parse_torus("x y") == x * y
    assert parse_torus("A^-2*y^2") == (y * y).scale(laurent_A(-2))
    assert parse_torus("x/2") == x.scale(Fraction(1, 2))
    assert parse_torus("x/(A^2)") == x.scale(laurent_A(-2))
    assert parse_torus("3/2") == TorusElement.one().scale(Fraction(3, 2))
    assert parse_torus("(A^2 - A^-2)^-1 * x") == \
        x.scale(rf(1, A ** 2 - laurent_A(-2)))


def test_parse_torus_errors():
    for bad in ("", "x +", "q", "x ^", "x * *", "(x", "x)", "x^y"):
        with pytest.raises(ParseError):
            parse_torus(bad)
    with pytest.raises(ParseError):
        parse_torus("x / y")  # divisor is not a scalar
    with pytest.raises(ParseError):
        parse_torus("y^-1")  # negative power of a non-scalar


def test_torus_text_round_trip():
    rng = random.Random(123)
    for trial in range(60):
        el = random_torus(rng)
        text = format_torus(el)
        back = parse_torus(text)
        assert back == el, text
        # printing is canonical: a second pass is a fixed point
        assert format_torus(back) == text


# -- free algebra text --------------------------------------------------------

def test_format_nc_pinned():
    w = witness(Curve(1, 1))
    assert format_nc(w) == "A*X1*X2 - A^-1*X2*X1"
    assert format_nc(X1) == "X1"
    assert format_nc(X1 * X1 * X2) == "X1^2*X2"
    assert format_nc(SYS2.zero()) == "0"
    assert format_nc(SYS2.one() - SYS2.one().scale(2)) == "-1"
    # ascending graded-lex: constants, then X1, X2, then longer words
    p = X2 * X1 + X1 * X2 + X2 + SYS2.one()
    assert format_nc(p) == "1 + X2 + X1*X2 + X2*X1"


def test_parse_nc_words_and_twists():
    assert parse_nc("A*X1*X2 - A^-1*X2*X1", SYS2) == a_commutator(X1, X2)
    assert parse_nc("X1^2 X2", SYS2) == X1 * X1 * X2
    assert parse_nc("T1 X2", SYS2) == apply_twist(X2, 1, 1)
    assert parse_nc("t1^-1 t1 X1", SYS2) == X1
    assert parse_nc("(T1 T2)^-1 X1", SYS2) == \
        apply_operator_word(X1, OperatorWord([(2, -1), (1, -1)]))
    center = torus_mcg_presentation().relators[1]
    target = apply_operator_word(X1, center, degree_cap=24) - X1
    assert parse_nc("(T1 T2 T1)^2 X1 - X1", SYS2, degree_cap=24) == target
    # application binds to the next factor only
    assert parse_nc("T1 X2 * X1", SYS2) == apply_twist(X2, 1, 1) * X1


def test_parse_nc_errors():
    with pytest.raises(ParseError):
        parse_nc("T1", SYS2)  # twist word with nothing to act on
    with pytest.raises(ParseError):
        parse_nc("T1 + X1", SYS2)
    with pytest.raises(ParseError):
        parse_nc("X1 ^", SYS2)
    with pytest.raises(DegreeTooHigh):
        parse_nc("(T1 T2 T1)^2 X1", SYS2, degree_cap=9)


def test_nc_text_round_trip():
    rng = random.Random(456)
    for trial in range(60):
        p = random_nc(rng)
        text = format_nc(p)
        back = parse_nc(text, SYS2)
        assert back == p, text
        assert format_nc(back) == text


# -- twist words and curves ---------------------------------------------------

def test_twist_word_text():
    w = parse_twist_word("t1 t2^-1")
    assert w == OperatorWord([(1, 1), (2, -1)])
    assert format_twist_word(w) == "t1 t2^-1"
    assert parse_twist_word("T1 T2^-1") == w
    assert parse_twist_word("t2^3") == OperatorWord([(2, 1)] * 3)
    assert parse_twist_word("1") == OperatorWord.identity()
    assert parse_twist_word("") == OperatorWord.identity()
    assert format_twist_word(OperatorWord.identity()) == "1"
    assert parse_twist_word(format_twist_word(w)) == w
    with pytest.raises(ParseError):
        parse_twist_word("t1 x2")
    with pytest.raises(ParseError):
        parse_twist_word("tt")


def test_curve_text():
    assert parse_curve("1,1") == Curve(1, 1)
    assert parse_curve(" -3 , 5 ") == Curve(-3, 5)
    assert format_curve(Curve(-3, 5)) == "3,-5"
    assert parse_curve(format_curve(Curve(-3, 5))) == Curve(-3, 5)
    with pytest.raises(ParseError):
        parse_curve("1")
    with pytest.raises(ParseError):
        parse_curve("a,b")
    with pytest.raises(NotPrimitive):
        parse_curve("4,6")


# -- structured data ----------------------------------------------------------

def test_scalar_data_round_trip():
    rng = random.Random(789)
    for trial in range(40):
        lp = LaurentPoly({rng.randrange(-5, 6): Fraction(rng.randrange(-9, 10),
                                                         rng.randrange(1, 5))
                          for _ in range(rng.randrange(3))})
        assert laurent_from_data(laurent_data(lp)) == lp
        r = rf(lp, A ** 2 - 1) if lp else rf(0)
        assert rational_from_data(rational_data(r)) == r


def test_element_data_round_trip():
    rng = random.Random(1011)
    for trial in range(30):
        el = random_torus(rng)
        assert torus_from_data(torus_data(el)) == el
        p = random_nc(rng)
        assert nc_from_data(nc_data(p)) == p
        assert nc_from_data(nc_data(p), SYS2) == p
    w = OperatorWord([(1, 1), (2, -1), (1, -1)])
    assert opword_from_data(opword_data(w)) == w
    assert curve_from_data(curve_data(Curve(3, -5))) == Curve(3, -5)


def test_canonical_json_is_byte_stable():
    el = boundary_element()
    s1 = canonical_json(torus_data(el))
    # a structurally different construction of the same value
    el2 = parse_torus(format_torus(el)) + element_x() - element_x()
    s2 = canonical_json(torus_data(el2))
    assert s1 == s2
    # parse -> re-serialize reproduces the bytes exactly
    assert canonical_json(json.loads(s1)) == s1
    assert "\n" not in s1 and " " not in s1


def test_certificate_data_round_trip():
    gens = coxeter_relators()
    span = build_span(gens, 5)
    p = gens[0] * X2 - X1 * gens[1]
    res = member(p, span)
    assert res.is_member
    data = certificate_data(res.certificate)
    back = certificate_from_data(data)
    assert back == res.certificate
    for entry in data:
        assert set(entry) == {"left_word", "generator_index",
                              "right_word", "coefficient"}
    s = canonical_json(data)
    assert canonical_json(json.loads(s)) == s


def test_implication_data_round_trip():
    gens = coxeter_relators()
    span = build_span(gens, 5)
    word = torus_mcg_presentation().relators[1]
    proof = prove_word_implication(word, 1, gens, span=span)
    data = implication_data(proof)
    loaded = implication_from_data(data)
    assert loaded.closes
    assert loaded.word == proof.word
    assert loaded.start_index == proof.start_index
    assert verify_word_implication(loaded, gens)
    assert flat_certificate(loaded, gens) == flat_certificate(proof, gens)
    s = canonical_json(data)
    assert canonical_json(json.loads(s)) == s
