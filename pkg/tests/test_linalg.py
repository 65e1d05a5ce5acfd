"""Tests for the exact linear algebra layer."""

from fractions import Fraction

from wbq.linalg import (
    FieldContext,
    RationalPointContext,
    SpanTracker,
    invert_square,
    kernel_basis,
    mat_mul,
    mat_vec,
    modp_rank,
    modp_rank_robust,
    rank,
    rref,
    select_pivot_rows,
)
from wbq.scalars import FieldSpec, quantum_integer


def _fc():
    return FieldContext(FieldSpec.generic())


def _rows(ctx, data):
    return [[ctx.from_fraction(Fraction(x)) for x in row] for row in data]


def test_rref_and_rank():
    ctx = _fc()
    rows = _rows(ctx, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    pivots, reduced = rref(ctx, rows)
    assert pivots == [0, 1]
    assert rank(ctx, rows) == 2
    # pivot columns reduced to identity pattern
    for k, (row, col) in enumerate(zip(reduced, pivots)):
        assert ctx.eq(row[col], ctx.one())
        for other in range(len(reduced)):
            if other != k:
                assert ctx.is_zero(reduced[other][col])
    # a q-dependent matrix: [[q, 1], [q^2, q]] has rank 1
    q = ctx.from_monomial(1, 1)
    rows2 = [[q, ctx.one()], [ctx.mul(q, q), q]]
    assert rank(ctx, rows2) == 1


def test_kernel_basis_is_canonical():
    ctx = _fc()
    rows = _rows(ctx, [[1, 1, 0, 2], [0, 0, 1, 3]])
    basis = kernel_basis(ctx, rows, 4)
    assert len(basis) == 2
    # free columns are 1 and 3; each basis vector has a one there and a
    # zero at the other free column
    v1, v3 = basis
    assert ctx.eq(v1[1], ctx.one()) and ctx.is_zero(v1[3])
    assert ctx.eq(v3[3], ctx.one()) and ctx.is_zero(v3[1])
    for vec in basis:
        for row in rows:
            acc = ctx.zero()
            for a, b in zip(row, vec):
                acc = ctx.add(acc, ctx.mul(a, b))
            assert ctx.is_zero(acc)


def test_invert_square():
    ctx = _fc()
    q = ctx.from_monomial(1, 1)
    mat = [[q, ctx.one()], [ctx.zero(), q]]
    inv = invert_square(ctx, mat)
    prod = mat_mul(ctx, mat, inv)
    assert ctx.eq(prod[0][0], ctx.one()) and ctx.eq(prod[1][1], ctx.one())
    assert ctx.is_zero(prod[0][1]) and ctx.is_zero(prod[1][0])
    singular = _rows(ctx, [[1, 2], [2, 4]])
    assert invert_square(ctx, singular) is None


def test_select_pivot_rows():
    ctx = _fc()
    rows = _rows(ctx, [[0, 0], [1, 1], [2, 2], [0, 5]])
    chosen = select_pivot_rows(ctx, rows, 2)
    assert chosen == [1, 3]
    try:
        select_pivot_rows(ctx, _rows(ctx, [[1, 1], [2, 2]]), 2)
        failed = False
    except ValueError:
        failed = True
    assert failed


def test_span_tracker_expressions():
    ctx = _fc()
    tracker = SpanTracker(ctx, 3)
    a = _rows(ctx, [[1, 2, 0]])[0]
    b = _rows(ctx, [[0, 1, 1]])[0]
    c = _rows(ctx, [[1, 3, 1]])[0]  # a + b
    assert tracker.insert(a) is True
    assert tracker.insert(b) is True
    assert tracker.insert(c) is False
    combo = tracker.express(_rows(ctx, [[2, 5, 1]])[0])  # 2a + b
    assert combo is not None
    assert ctx.eq(combo[0], ctx.from_fraction(2))
    assert ctx.eq(combo[1], ctx.one())
    assert 2 not in combo
    outside = tracker.express(_rows(ctx, [[0, 0, 1]])[0])
    assert outside is None
    assert tracker.rank == 2


def test_rational_point_context():
    ctx = RationalPointContext(3, 2)  # q = 3, rho = 9
    assert ctx.eq(ctx.from_monomial(1, 1, 0), ctx.from_fraction(3))
    assert ctx.eq(ctx.from_monomial(1, 0, 1), ctx.from_fraction(9))
    assert ctx.eq(ctx.from_monomial(2, -1, 1), ctx.from_fraction(6))
    # evaluating a Generic scalar: [2] = q + q^{-1} -> 10/3 at q = 3
    two = quantum_integer(2, FieldSpec.generic())
    assert ctx.eq(ctx.from_generic(two), ctx.from_fraction(Fraction(10, 3)))
    bad = 0
    for t in (0, 1, -1):
        try:
            RationalPointContext(t, 2)
        except ValueError:
            bad += 1
    assert bad == 3


def test_modp_rank():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert modp_rank(rows) == 2
    rows_frac = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(2, 1)]]
    assert modp_rank_robust(rows_frac) == 2
    rank_one = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(1, 1)]]
    assert modp_rank_robust(rank_one) == 1
    assert modp_rank([[0, 0], [0, 0]]) == 0


def test_mat_vec():
    ctx = _fc()
    mat = _rows(ctx, [[1, 2], [0, 1]])
    vec = _rows(ctx, [[3, 4]])[0]
    out = mat_vec(ctx, mat, vec)
    assert ctx.eq(out[0], ctx.from_fraction(11))
    assert ctx.eq(out[1], ctx.from_fraction(4))
