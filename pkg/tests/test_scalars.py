import random
from fractions import Fraction

from wbq import scalars
from wbq.scalars import (
    FieldSpec, INFINITY, delta, flip, from_fraction, is_zero, monomial, one,
    parse_scalar, q_elem, quantum_characteristic, quantum_factorial,
    quantum_integer, rho_elem, specialize, to_text, zero, normalize,
    constant_value,
)
from wbq.errors import DenominatorVanishes

GEN = FieldSpec.generic()

SAMPLE_SPECS = [
    FieldSpec.generic(),
    FieldSpec.qpower(0),
    FieldSpec.qpower(3),
    FieldSpec.qpower(-2),
    FieldSpec.cyclotomic(4, 0),
    FieldSpec.cyclotomic(4, 1),
    FieldSpec.cyclotomic(3, 2),
    FieldSpec.cyclotomic(7, 1),
    FieldSpec.cyclotomic(12, 5),
    FieldSpec.cyclotomic(4, "free"),
    FieldSpec.cyclotomic(3, "free"),
]


def random_scalar(spec, rng, allow_frac=True):
    x = zero(spec)
    for _ in range(rng.randint(1, 3)):
        c = Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2, 3]))
        x = x + monomial(spec, c, rng.randint(-3, 3), rng.randint(-2, 2))
    if allow_frac and rng.random() < 0.5:
        y = zero(spec)
        for _ in range(rng.randint(1, 2)):
            y = y + monomial(spec, rng.randint(-3, 3), rng.randint(-2, 2), rng.randint(-1, 1))
        if not is_zero(y):
            x = x / y
    return x


def test_quantum_integer_examples():
    # [1] = 1 and [2] = q + q^-1 in every field
    assert quantum_integer(1, GEN) == one(GEN)
    q = q_elem(GEN)
    qinv = monomial(GEN, 1, -1, 0)
    assert quantum_integer(2, GEN) == q + qinv
    assert to_text(quantum_integer(2, GEN)) == "(q^2 + 1)/(q)"
    assert quantum_integer(0, GEN) == zero(GEN)
    # [-l] = -[l]
    assert quantum_integer(-3, GEN) == -quantum_integer(3, GEN)


def test_quantum_integer_vanishes_at_quantum_characteristic():
    for spec in (FieldSpec.cyclotomic(4, 0), FieldSpec.cyclotomic(3, 0),
                 FieldSpec.cyclotomic(6, 0), FieldSpec.cyclotomic(5, 0),
                 FieldSpec.cyclotomic(7, 0), FieldSpec.cyclotomic(12, 0)):
        e = quantum_characteristic(spec)
        assert is_zero(quantum_integer(e, spec))
        for ell in range(1, e):
            assert not is_zero(quantum_integer(ell, spec))


def test_quantum_characteristic():
    assert quantum_characteristic(FieldSpec.generic()) == INFINITY
    assert quantum_characteristic(FieldSpec.qpower(5)) == INFINITY
    # e is the order of q^2: m odd -> m, m even -> m/2
    assert quantum_characteristic(FieldSpec.cyclotomic(6, 0)) == 3
    assert quantum_characteristic(FieldSpec.cyclotomic(5, 0)) == 5
    assert quantum_characteristic(FieldSpec.cyclotomic(4, 0)) == 2
    assert quantum_characteristic(FieldSpec.cyclotomic(3, 0)) == 3
    assert quantum_characteristic(FieldSpec.cyclotomic(7, 0)) == 7
    assert quantum_characteristic(FieldSpec.cyclotomic(11, 0)) == 11
    assert quantum_characteristic(FieldSpec.cyclotomic(12, 0)) == 6


def test_delta_examples():
    # delta = 0 whenever rho^2 = 1
    assert is_zero(delta(FieldSpec.cyclotomic(4, 0)))
    assert is_zero(delta(FieldSpec.cyclotomic(4, 2)))  # rho = -1
    assert is_zero(delta(FieldSpec.qpower(0)))
    # delta at rho = q^a equals [a] (checked by exact expansion)
    for a in range(1, 7):
        spec = FieldSpec.qpower(a)
        assert delta(spec) == quantum_integer(a, spec)
        nspec = FieldSpec.qpower(-a)
        assert delta(nspec) == quantum_integer(-a, nspec)
    # generic delta is the symbolic fraction
    d = delta(GEN)
    num = rho_elem(GEN) - monomial(GEN, 1, 0, -1)
    den = q_elem(GEN) - monomial(GEN, 1, -1, 0)
    assert d * den == num


def test_field_axioms_random():
    rng = random.Random(20260815)
    for spec in SAMPLE_SPECS:
        for _ in range(8):
            a = random_scalar(spec, rng)
            b = random_scalar(spec, rng)
            c = random_scalar(spec, rng)
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a - a == zero(spec)
            if not is_zero(a):
                assert a / a == one(spec)
                assert a * (one(spec) / a) == one(spec)


def test_normalization_idempotent():
    rng = random.Random(7)
    for spec in SAMPLE_SPECS:
        for _ in range(5):
            x = random_scalar(spec, rng)
            assert normalize(x) == x
            assert to_text(normalize(x)) == to_text(x)


def test_serialization_round_trip():
    rng = random.Random(99)
    for spec in SAMPLE_SPECS:
        for _ in range(10):
            x = random_scalar(spec, rng)
            s = to_text(x)
            y = parse_scalar(s, spec)
            assert y == x, (s, to_text(y))
            assert to_text(y) == s


def test_specialize_quantum_integers_compatible():
    targets = [FieldSpec.qpower(0), FieldSpec.qpower(3), FieldSpec.qpower(-1),
               FieldSpec.cyclotomic(4, 0), FieldSpec.cyclotomic(3, 1),
               FieldSpec.cyclotomic(7, 2), FieldSpec.cyclotomic(12, 0),
               FieldSpec.cyclotomic(4, "free"), FieldSpec.cyclotomic(3, "free")]
    for ell in range(0, 11):
        x = quantum_integer(ell, GEN)
        for t in targets:
            assert specialize(x, t) == quantum_integer(ell, t)


def test_specialize_delta_and_constants():
    t = FieldSpec.qpower(3)
    assert specialize(delta(GEN), t) == quantum_integer(3, t)
    for t in (FieldSpec.qpower(2), FieldSpec.cyclotomic(5, 1), FieldSpec.cyclotomic(4, "free")):
        assert specialize(one(GEN), t) == one(t)
        assert specialize(from_fraction(Fraction(-7, 2), GEN), t) == from_fraction(Fraction(-7, 2), t)
        assert specialize(delta(GEN), t) == delta(t)


def test_specialize_denominator_vanishes():
    x = one(GEN) / (rho_elem(GEN) - q_elem(GEN))
    hit = False
    try:
        specialize(x, FieldSpec.qpower(1))
    except DenominatorVanishes:
        hit = True
    assert hit
    # but the same element specializes fine when rho != q
    assert not is_zero(specialize(x, FieldSpec.qpower(2)))


def test_quantum_factorial_nonzero_iff_small():
    specs = [FieldSpec.generic(), FieldSpec.qpower(1), FieldSpec.cyclotomic(4, 0),
             FieldSpec.cyclotomic(3, 0), FieldSpec.cyclotomic(6, 1),
             FieldSpec.cyclotomic(7, 0), FieldSpec.cyclotomic(12, 3)]
    for spec in specs:
        e = quantum_characteristic(spec)
        for ell in range(0, 11):
            nonzero = not is_zero(quantum_factorial(ell, spec))
            assert nonzero == (ell < e or ell <= 1)


def test_flip_is_field_automorphism():
    rng = random.Random(5)
    for spec in SAMPLE_SPECS:
        for _ in range(5):
            a = random_scalar(spec, rng)
            b = random_scalar(spec, rng)
            assert flip(a + b) == flip(a) + flip(b)
            assert flip(a * b) == flip(a) * flip(b)
            assert flip(flip(a)) == a
        assert flip(q_elem(spec)) == monomial(spec, 1, -1, 0)
        assert flip(rho_elem(spec)) == monomial(spec, 1, 0, -1)


def test_constant_value():
    for spec in SAMPLE_SPECS:
        assert constant_value(from_fraction(Fraction(5, 3), spec)) == Fraction(5, 3)
        assert constant_value(zero(spec)) == Fraction(0)
        assert constant_value(q_elem(spec) + one(spec)) is None or spec.kind == "cyclo"
    # q + 1 in a cyclotomic field is a genuine non-rational constant
    assert constant_value(q_elem(FieldSpec.cyclotomic(4, 0)) + one(FieldSpec.cyclotomic(4, 0))) is None


def test_field_spec_strings():
    cases = ["generic", "qpow:3", "qpow:-2", "cyclo:4,rho=zeta^0",
             "cyclo:7,rho=zeta^2", "cyclo:3,rho=free"]
    for s in cases:
        spec = FieldSpec.from_string(s)
        assert spec.to_string() == s
        assert FieldSpec.from_string(spec.to_string()) == spec
    bad = False
    try:
        FieldSpec.cyclotomic(2, 0)
    except ValueError:
        bad = True
    assert bad
