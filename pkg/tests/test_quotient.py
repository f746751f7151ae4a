"""Tests for bounded-degree ideal membership and certified implications."""

from __future__ import annotations

import itertools
import random

import pytest

from skeincalc.coeff import RF_ZERO, laurent_A, rf
from skeincalc.errors import (
    BudgetExceeded,
    DegreeTooHigh,
    InvalidIndex,
    MixedSystems,
    WrongSystem,
)
from skeincalc.freealg import (
    NCPolynomial,
    OperatorWord,
    TwistSystem,
    apply_operator_word,
    coxeter_relators,
    torus_mcg_presentation,
    two_generator_system,
)
from skeincalc.quotient import (
    IdealSpan,
    WordImplicationProof,
    build_span,
    expand_certificate,
    flat_certificate,
    member,
    prove_word_implication,
    reduce,
    verify_certificate,
    verify_word_implication,
)

A = laurent_A()
Ainv = laurent_A(-1)

SYS2 = two_generator_system()
X1 = SYS2.generator(1)
X2 = SYS2.generator(2)


# -- independent oracle -------------------------------------------------------
#
# Straightforward dense elimination over Q(A).  Pivots are chosen as the
# minimal word in plain graded-lex order and rows are processed in input
# order, so the oracle shares neither the pivot strategy nor the sparsity
# heuristics of the implementation; only the rank (an order-independent
# quantity) is compared.

def _min_word(row):
    return min(row, key=lambda w: (len(w), w))


def oracle_rank(rows):
    pivots = {}
    for row in rows:
        row = dict(row)
        while row:
            w = _min_word(row)
            if w not in pivots:
                inv = row[w].inverse()
                pivots[w] = {u: c * inv for u, c in row.items()}
                break
            lam = row[w]
            for u, c in pivots[w].items():
                s = row.get(u, RF_ZERO) - lam * c
                if s.is_zero():
                    row.pop(u, None)
                else:
                    row[u] = s
    return len(pivots)


def oracle_product_rows(gens, degree):
    """Every row {word: coeff} of u*g*v with deg(u)+deg(g)+deg(v) <= degree."""
    n = gens[0].system.n
    rows = []
    for g in gens:
        rest = degree - g.degree()
        terms = g.terms()
        for lu in range(rest + 1):
            for lv in range(rest - lu + 1):
                for u in itertools.product(range(1, n + 1), repeat=lu):
                    for v in itertools.product(range(1, n + 1), repeat=lv):
                        rows.append({u + w + v: c for w, c in terms})
    return rows


def oracle_is_member(p, gens, degree):
    rows = oracle_product_rows(gens, degree)
    base = oracle_rank(rows)
    return oracle_rank(rows + [dict(p.terms())]) == base


def random_nc(rng, system, max_terms=4, max_len=3):
    t = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        word = tuple(rng.randrange(1, system.n + 1)
                     for _ in range(rng.randrange(max_len + 1)))
        c = rng.randrange(-4, 5)
        t[word] = t.get(word, 0) + c
    return system.element({w: c for w, c in t.items() if c})


def random_member(rng, gens, degree):
    """A random honest combination sum c * u * g * v inside the bound."""
    system = gens[0].system
    out = system.zero()
    for _ in range(rng.randrange(1, 4)):
        g = rng.choice(gens)
        rest = degree - g.degree()
        lu = rng.randrange(rest + 1)
        lv = rng.randrange(rest - lu + 1)
        u = tuple(rng.randrange(1, system.n + 1) for _ in range(lu))
        v = tuple(rng.randrange(1, system.n + 1) for _ in range(lv))
        c = rng.randrange(-3, 4) or 1
        out = out + (system.element({u: c}) * g * system.element({v: 1}))
    return out


_SPAN_CACHE = {}


def coxeter_span(degree):
    if degree not in _SPAN_CACHE:
        _SPAN_CACHE[degree] = build_span(coxeter_relators(), degree)
    return _SPAN_CACHE[degree]


# -- span construction --------------------------------------------------------

def test_span_single_generator():
    span = build_span([X1], 2)
    assert span.dimension == 4
    basis = span.basis()
    assert basis == [X1, X1 * X1, X1 * X2, X2 * X1]
    certs = span.basis_certificates()
    words = [[(u, gi, v) for (u, gi, v), _ in cert] for cert in certs]
    assert words == [[((), 0, ())], [((), 0, (1,))],
                     [((), 0, (2,))], [((2,), 0, ())]]
    for b, cert in zip(basis, certs):
        entries = [(u, gi, v, c) for (u, gi, v), c in cert]
        assert expand_certificate(SYS2, [X1], entries) == b


def test_span_single_generator_dimension_formula():
    # monomial generator: the slice is spanned by the words of length <= d
    # that contain the letter at least once
    for d in range(1, 6):
        span = build_span([X1], d)
        assert span.dimension == (2 ** (d + 1) - 1) - (d + 1)


def test_span_commutator_reduce():
    c = X1 * X2 - X2 * X1
    span = build_span([c], 2)
    assert span.dimension == 1
    # basis rows are monic in their leading word, here X2*X1
    assert span.basis() == [X2 * X1 - X1 * X2]
    r = reduce(X2 * X1, span)
    assert r == X1 * X2
    r2, cert = reduce(X2 * X1, span, with_certificate=True)
    assert r2 == r
    assert cert == [((), 0, (), rf(-1))]
    assert verify_certificate(X2 * X1 - r, [c], cert)
    # a word untouched by the pivot passes through unchanged
    assert reduce(X1 * X2, span) == X1 * X2
    res = member(c, span)
    assert res.is_member
    assert res.remainder.is_zero()
    assert verify_certificate(c, [c], res.certificate)


def test_span_dimension_matches_oracle():
    rng = random.Random(20260814)
    for trial in range(12):
        ngens = rng.randrange(1, 3)
        gens = []
        while len(gens) < ngens:
            g = random_nc(rng, SYS2, max_terms=3, max_len=2)
            if not g.is_zero():
                gens.append(g)
        degree = max(g.degree() for g in gens) + rng.randrange(2)
        span = build_span(gens, degree)
        assert span.dimension == oracle_rank(oracle_product_rows(gens, degree))


def test_member_matches_oracle():
    rng = random.Random(4217)
    gens = [X1 * X2 - X2 * X1 + X1, X2 * X2 - X1]
    degree = 4
    span = build_span(gens, degree)
    hits = misses = 0
    for trial in range(20):
        if rng.random() < 0.5:
            p = random_member(rng, gens, degree)
        else:
            p = random_nc(rng, SYS2, max_terms=3, max_len=degree)
        res = member(p, span)
        assert res.is_member == oracle_is_member(p, gens, degree)
        if res.is_member:
            hits += 1
            assert verify_certificate(p, gens, res.certificate)
        else:
            misses += 1
            assert not res.remainder.is_zero()
            assert reduce(p, span) == res.remainder
    assert hits and misses


def test_commutator_ideal_is_abelianization_kernel():
    # the commutator generator is multihomogeneous, so a polynomial of
    # degree <= d lies in the slice exactly when its abelianization vanishes
    c = X1 * X2 - X2 * X1
    degree = 4
    span = build_span([c], degree)
    assert span.dimension == (2 ** (degree + 1) - 1) - 15
    rng = random.Random(99)
    for trial in range(25):
        p = random_nc(rng, SYS2, max_terms=4, max_len=degree)
        if trial % 2 == 0:
            # symmetrising every word kills the abelianization of the gap
            t = {}
            for w, coeff in p.terms():
                s = tuple(sorted(w))
                t[s] = t.get(s, RF_ZERO) + coeff
            p = p - SYS2.element({w: coeff for w, coeff in t.items()
                                  if not coeff.is_zero()})
        expected = all(v.is_zero() for v in p.abelianized().values())
        assert member(p, span).is_member == expected


def test_coxeter_span_dimensions():
    assert coxeter_span(5).dimension == 29
    assert coxeter_span(6).dimension == 77
    assert coxeter_span(7).dimension == 185
    assert coxeter_span(8).dimension == 416


def test_basis_is_reduced_echelon():
    span = coxeter_span(5)
    basis = span.basis()
    leads = [b.leading_word() for b in basis]
    assert leads == sorted(leads, key=lambda w: (len(w), w))
    assert len(set(leads)) == len(leads)
    lead_set = set(leads)
    for b in basis:
        assert b.coefficient(b.leading_word()).is_one()
        for w, _ in b.terms():
            # no other basis leading word appears anywhere
            assert w == b.leading_word() or w not in lead_set
    for b, cert in zip(basis, span.basis_certificates()):
        entries = [(u, gi, v, c) for (u, gi, v), c in cert]
        assert expand_certificate(SYS2, span.generators, entries) == b


def test_reduce_is_idempotent_and_linear():
    span = coxeter_span(5)
    rng = random.Random(7)
    for trial in range(15):
        p = random_nc(rng, SYS2, max_terms=4, max_len=5)
        q = random_nc(rng, SYS2, max_terms=4, max_len=5)
        rp, rq = reduce(p, span), reduce(q, span)
        assert reduce(rp, span) == rp
        assert reduce(p + q, span) == rp + rq
        assert reduce(p.scale(A) - q.scale(3), span) == rp.scale(A) - rq.scale(3)
        rem, cert = reduce(p, span, with_certificate=True)
        assert rem == rp
        assert verify_certificate(p - rem, span.generators, cert)


def test_member_monotone_in_degree():
    rng = random.Random(31)
    gens = coxeter_relators()
    for trial in range(10):
        p = random_member(rng, gens, 5)
        if p.is_zero():
            continue
        assert member(p, coxeter_span(5)).is_member
        for d in (6, 7):
            res = member(p, coxeter_span(d))
            assert res.is_member
            assert verify_certificate(p, gens, res.certificate)


def test_build_determinism_and_basis_uniqueness():
    gens = coxeter_relators()
    s1 = build_span(gens, 5)
    s2 = build_span(gens, 5)
    assert s1.dimension == s2.dimension
    assert s1.basis() == s2.basis()
    assert s1.basis_certificates() == s2.basis_certificates()
    # the reduced basis depends only on the row space, not generator order
    s3 = build_span(tuple(reversed(gens)), 5)
    assert s3.basis() == s1.basis()


def test_build_span_input_errors():
    with pytest.raises(ValueError):
        build_span([], 3)
    with pytest.raises(ValueError):
        build_span([X1, SYS2.zero()], 3)
    other = TwistSystem([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    with pytest.raises(MixedSystems):
        build_span([X1, other.generator(1)], 3)
    with pytest.raises(DegreeTooHigh) as ei:
        build_span([X1 * X2 * X1], 2)
    assert ei.value.degree == 3 and ei.value.bound == 2
    with pytest.raises(BudgetExceeded) as ei:
        build_span([X1], 25, budget=1000)
    assert ei.value.needed == 2 ** 26 - 1
    assert ei.value.budget == 1000


def test_reduce_input_errors():
    span = build_span([X1], 2)
    with pytest.raises(DegreeTooHigh):
        reduce(X1 * X2 * X1, span)
    with pytest.raises(DegreeTooHigh):
        member(X2 ** 3, span)
    other = TwistSystem([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    with pytest.raises(WrongSystem):
        reduce(other.generator(2), span)


# -- certified implications between relations ---------------------------------

def test_word_implications_close():
    pres = torus_mcg_presentation()
    gens = coxeter_relators()
    span = coxeter_span(5)
    for word in pres.relators:
        for i in (1, 2):
            proof = prove_word_implication(word, i, gens, span=span)
            assert proof.closes
            assert proof.degree_bound == 5
            assert len(proof.steps) == len(word)
            # the walk stays at low degree even though the one-shot image
            # of the whole word would not fit in the span
            for _, reduced, _ in proof.steps:
                assert reduced.degree() <= 2
            assert verify_word_implication(proof, gens)


def test_word_implication_direct_image_would_overflow():
    # the full center-word image of X1 needs degree 11, which is the point
    # of walking one twist at a time
    pres = torus_mcg_presentation()
    center = pres.relators[1]
    with pytest.raises(DegreeTooHigh):
        apply_operator_word(X1, center, degree_cap=9)


def test_word_implication_open_chain():
    gens = coxeter_relators()
    proof = prove_word_implication(OperatorWord([(1, 1)]), 2, gens,
                                   span=coxeter_span(5))
    assert not proof.closes
    assert not verify_word_implication(proof, gens)
    # a single twist does not move its own curve
    fixed = prove_word_implication(OperatorWord([(1, 1)]), 1, gens,
                                   span=coxeter_span(5))
    assert fixed.closes


def test_word_implication_rejects_tampering():
    pres = torus_mcg_presentation()
    gens = coxeter_relators()
    span = coxeter_span(5)
    braid = pres.relators[0]
    proof = prove_word_implication(braid, 1, gens, span=span)
    assert verify_word_implication(proof, gens)

    # missing base fact
    bad = WordImplicationProof(proof.word, 1, proof.degree_bound,
                               proof.base[:-1], proof.steps, True)
    assert not verify_word_implication(bad, gens)

    # steps in the wrong order
    bad = WordImplicationProof(proof.word, 1, proof.degree_bound,
                               proof.base, tuple(reversed(proof.steps)), True)
    assert not verify_word_implication(bad, gens)

    # a step claiming a wrong reduced element
    (j, eps), _, cert = proof.steps[0]
    forged = (((j, eps), X2 * X2, cert),) + proof.steps[1:]
    bad = WordImplicationProof(proof.word, 1, proof.degree_bound,
                               proof.base, forged, True)
    assert not verify_word_implication(bad, gens)

    # a corrupted base certificate
    (key, cert0), rest = proof.base[0], proof.base[1:]
    forged_cert = [(u, gi, v, c * rf(2)) for u, gi, v, c in cert0]
    bad = WordImplicationProof(proof.word, 1, proof.degree_bound,
                               ((key, forged_cert),) + rest, proof.steps, True)
    assert not verify_word_implication(bad, gens)

    # an honest chain with a dishonest closes flag
    bad = WordImplicationProof(proof.word, 1, proof.degree_bound,
                               proof.base, proof.steps, False)
    assert not verify_word_implication(bad, gens)


def test_flat_certificate_expands_exactly():
    pres = torus_mcg_presentation()
    gens = coxeter_relators()
    span = coxeter_span(5)
    for word in pres.relators:
        for i in (1, 2):
            proof = prove_word_implication(word, i, gens, span=span)
            entries = flat_certificate(proof, gens)
            target = apply_operator_word(SYS2.generator(i), word,
                                         degree_cap=40) - SYS2.generator(i)
            # the expansion reaches far beyond the span degree, yet every
            # elimination that produced it happened at degree <= 5
            assert target.degree() > span.degree_bound
            assert expand_certificate(SYS2, gens, entries) == target
            assert verify_certificate(target, gens, entries)
            assert entries == flat_certificate(proof, gens)


def test_flat_certificate_requires_closed_chain():
    gens = coxeter_relators()
    proof = prove_word_implication(OperatorWord([(1, 1)]), 2, gens,
                                   span=coxeter_span(5))
    with pytest.raises(ValueError):
        flat_certificate(proof, gens)


def test_word_implication_errors():
    gens = coxeter_relators()
    with pytest.raises(InvalidIndex):
        prove_word_implication(OperatorWord([(1, 1)]), 3, gens,
                               span=coxeter_span(5))
    # generators whose twist images escape the ideal are refused
    with pytest.raises(ValueError):
        prove_word_implication(OperatorWord([(1, 1)]), 1,
                               [X2 - SYS2.one()], degree=4)
