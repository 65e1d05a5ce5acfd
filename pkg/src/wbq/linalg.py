"""Exact linear algebra over pluggable coefficient domains.

A *context* packages the arithmetic of one exact coefficient domain.  Two
domains are used throughout the package: elements of a ``FieldSpec`` field
(``FieldContext``) and plain rational numbers obtained by evaluating ``q``
and ``rho`` at an integer point (``RationalPointContext``).  Every routine
in this module is plain Gaussian elimination with exact arithmetic and
deterministic pivot choices, so all outputs are reproducible.

Vectors are dense Python lists of context elements; matrices are lists of
such rows.
"""

from fractions import Fraction

from . import scalars

try:  # gmpy2 rationals are markedly faster than Fraction when available
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    _mpq = Fraction


def _as_ratio(value):
    """Return (numerator, denominator) ints for a rational-like value."""
    if isinstance(value, int):
        return value, 1
    return int(value.numerator), int(value.denominator)


class FieldContext:
    """Arithmetic of ``Scalar`` elements over a fixed ``FieldSpec``."""

    __slots__ = ("spec",)

    def __init__(self, spec):
        self.spec = spec

    def zero(self):
        return scalars.zero(self.spec)

    def one(self):
        return scalars.one(self.spec)

    def from_monomial(self, c, qexp=0, rhoexp=0):
        return scalars.monomial(self.spec, c, qexp, rhoexp)

    def from_fraction(self, c):
        return scalars.from_fraction(c, self.spec)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def div(self, x, y):
        return x / y

    def is_zero(self, x):
        return scalars.is_zero(x)

    def eq(self, x, y):
        return x == y

    def from_generic(self, x):
        """Map a Scalar over the Generic field into this field."""
        if x.spec == self.spec:
            return x
        return scalars.specialize(x, self.spec)


class RationalPointContext:
    """Exact rational arithmetic at ``q = t`` and ``rho = t**rho_exp``.

    ``t`` must be a nonzero rational with ``t**2 != 1`` so that every
    admissible denominator stays invertible.
    """

    __slots__ = ("qval", "rhoexp", "_qpowers")

    def __init__(self, t, rho_exp):
        num, den = _as_ratio(Fraction(t) if not isinstance(t, int) else t)
        self.qval = _mpq(num, den)
        if self.qval == 0 or self.qval * self.qval == 1:
            raise ValueError("evaluation point must satisfy t != 0, t^2 != 1")
        self.rhoexp = int(rho_exp)
        self._qpowers = {0: _mpq(1), 1: self.qval}

    def _qpow(self, k):
        cache = self._qpowers
        val = cache.get(k)
        if val is None:
            if k > 0:
                val = cache[k - 1] if (k - 1) in cache else self.qval ** (k - 1)
                val = val * self.qval
            else:
                val = 1 / self._qpow(-k)
            cache[k] = val
        return val

    def zero(self):
        return _mpq(0)

    def one(self):
        return _mpq(1)

    def from_monomial(self, c, qexp=0, rhoexp=0):
        num, den = _as_ratio(c)
        return _mpq(num, den) * self._qpow(qexp + self.rhoexp * rhoexp)

    def from_fraction(self, c):
        num, den = _as_ratio(c)
        return _mpq(num, den)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def div(self, x, y):
        return x / y

    def is_zero(self, x):
        return x == 0

    def eq(self, x, y):
        return x == y

    def from_generic(self, x):
        """Evaluate a Scalar over the Generic field at this point."""
        num = self._eval_poly(x.rep.numer)
        den = self._eval_poly(x.rep.denom)
        if den == 0:
            from .errors import DenominatorVanishes

            raise DenominatorVanishes(
                "denominator vanishes at q=%s, rho=q^%d" % (self.qval, self.rhoexp)
            )
        return num / den

    def _eval_poly(self, poly):
        total = _mpq(0)
        for (eq, er), coeff in poly.terms():
            num, den = _as_ratio(coeff)
            total += _mpq(num, den) * self._qpow(eq + self.rhoexp * er)
        return total


def vec_zero(ctx, dim):
    z = ctx.zero()
    return [z] * dim


def vec_add(ctx, u, v):
    return [ctx.add(a, b) for a, b in zip(u, v)]


def vec_sub(ctx, u, v):
    return [ctx.sub(a, b) for a, b in zip(u, v)]


def vec_scale(ctx, c, u):
    return [ctx.mul(c, a) for a in u]


def vec_is_zero(ctx, u):
    return all(ctx.is_zero(a) for a in u)


def rref(ctx, rows):
    """Reduced row echelon form.

    Returns ``(pivot_cols, reduced_rows)`` where the reduced rows are
    nonzero, have leading entry one, and pivot columns are cleared in all
    other rows.  The input rows are not modified.
    """
    work = [list(row) for row in rows]
    ncols = len(work[0]) if work else 0
    pivot_cols = []
    reduced = []
    for col in range(ncols):
        pivot = None
        for idx, row in enumerate(work):
            if not ctx.is_zero(row[col]):
                pivot = idx
                break
        if pivot is None:
            continue
        row = work.pop(pivot)
        inv = ctx.div(ctx.one(), row[col])
        row = [ctx.mul(inv, a) for a in row]
        for other in work:
            c = other[col]
            if not ctx.is_zero(c):
                for j in range(col, ncols):
                    other[j] = ctx.sub(other[j], ctx.mul(c, row[j]))
        for other in reduced:
            c = other[col]
            if not ctx.is_zero(c):
                for j in range(col, ncols):
                    other[j] = ctx.sub(other[j], ctx.mul(c, row[j]))
        reduced.append(row)
        pivot_cols.append(col)
        work = [r for r in work if not vec_is_zero(ctx, r)]
    return pivot_cols, reduced


def rank(ctx, rows):
    return len(rref(ctx, rows)[0])


def kernel_basis(ctx, rows, dim):
    """Reduced-echelon basis of ``{v : M v = 0}`` for the rows of ``M``.

    Basis vectors are indexed by the free columns in increasing order; the
    vector for free column ``f`` has entry one at ``f`` and zeros at every
    other free column, which makes the output canonical.
    """
    pivot_cols, reduced = rref(ctx, rows)
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(dim):
        if free in pivot_set:
            continue
        vec = vec_zero(ctx, dim)
        vec[free] = ctx.one()
        for prow, pcol in zip(reduced, pivot_cols):
            if not ctx.is_zero(prow[free]):
                vec[pcol] = ctx.neg(prow[free])
        basis.append(vec)
    return basis


def invert_square(ctx, matrix):
    """Inverse of a square matrix, or None when the matrix is singular."""
    n = len(matrix)
    zero = ctx.zero()
    one = ctx.one()
    work = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise ValueError("matrix is not square")
        aug = list(row) + [zero] * n
        aug[n + i] = one
        work.append(aug)
    for col in range(n):
        pivot = None
        for idx in range(col, n):
            if not ctx.is_zero(work[idx][col]):
                pivot = idx
                break
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        inv = ctx.div(one, work[col][col])
        work[col] = [ctx.mul(inv, a) for a in work[col]]
        for idx in range(n):
            if idx == col:
                continue
            c = work[idx][col]
            if not ctx.is_zero(c):
                row = work[idx]
                prow = work[col]
                work[idx] = [ctx.sub(a, ctx.mul(c, b)) for a, b in zip(row, prow)]
    return [row[n:] for row in work]


def mat_vec(ctx, matrix, vec):
    out = []
    for row in matrix:
        acc = ctx.zero()
        for a, b in zip(row, vec):
            if not ctx.is_zero(a) and not ctx.is_zero(b):
                acc = ctx.add(acc, ctx.mul(a, b))
        out.append(acc)
    return out


def mat_mul(ctx, a, b):
    bt = list(zip(*b))
    out = []
    for row in a:
        orow = []
        for col in bt:
            acc = ctx.zero()
            for x, y in zip(row, col):
                if not ctx.is_zero(x) and not ctx.is_zero(y):
                    acc = ctx.add(acc, ctx.mul(x, y))
            orow.append(acc)
        out.append(orow)
    return out


def select_pivot_rows(ctx, rows, ncols):
    """Indices of ``ncols`` rows forming an invertible square submatrix.

    Greedy left-to-right column elimination with first-nonzero pivot
    selection, so the choice is deterministic.  Raises ``ValueError`` when
    the rows do not have full column rank.
    """
    work = {i: list(row) for i, row in enumerate(rows)}
    chosen = []
    for col in range(ncols):
        pivot = None
        for idx in sorted(work):
            if not ctx.is_zero(work[idx][col]):
                pivot = idx
                break
        if pivot is None:
            raise ValueError("rows do not have full column rank")
        chosen.append(pivot)
        prow = work.pop(pivot)
        inv = ctx.div(ctx.one(), prow[col])
        prow = [ctx.mul(inv, a) for a in prow]
        for idx, row in work.items():
            c = row[col]
            if not ctx.is_zero(c):
                work[idx] = [ctx.sub(a, ctx.mul(c, b)) for a, b in zip(row, prow)]
    return chosen


class SpanTracker:
    """Incremental reduced echelon with expressions over inserted vectors.

    Each accepted vector is remembered, and any later vector inside the
    span can be written exactly as a combination of the accepted ones.
    """

    __slots__ = ("ctx", "dim", "rows", "pivots", "exprs", "count")

    def __init__(self, ctx, dim):
        self.ctx = ctx
        self.dim = dim
        self.rows = []
        self.pivots = []
        self.exprs = []
        self.count = 0

    @property
    def rank(self):
        return len(self.rows)

    def _reduce(self, vec):
        ctx = self.ctx
        vec = list(vec)
        combo = {}
        for row, pivot, expr in zip(self.rows, self.pivots, self.exprs):
            c = vec[pivot]
            if ctx.is_zero(c):
                continue
            for j in range(self.dim):
                if not ctx.is_zero(row[j]):
                    vec[j] = ctx.sub(vec[j], ctx.mul(c, row[j]))
            for k, e in expr.items():
                prev = combo.get(k, ctx.zero())
                combo[k] = ctx.add(prev, ctx.mul(c, e))
        return vec, combo

    def insert(self, vec):
        """Insert a raw vector; returns True when it enlarged the span."""
        ctx = self.ctx
        index = self.count
        self.count += 1
        residual, combo = self._reduce(vec)
        pivot = None
        for j in range(self.dim):
            if not ctx.is_zero(residual[j]):
                pivot = j
                break
        if pivot is None:
            return False
        expr = {index: ctx.one()}
        for k, e in combo.items():
            if not ctx.is_zero(e):
                expr[k] = ctx.neg(e)
        inv = ctx.div(ctx.one(), residual[pivot])
        residual = [ctx.mul(inv, a) for a in residual]
        expr = {k: ctx.mul(inv, e) for k, e in expr.items()}
        for row, rexpr in zip(self.rows, self.exprs):
            c = row[pivot]
            if ctx.is_zero(c):
                continue
            for j in range(self.dim):
                if not ctx.is_zero(residual[j]):
                    row[j] = ctx.sub(row[j], ctx.mul(c, residual[j]))
            for k, e in expr.items():
                prev = rexpr.get(k, ctx.zero())
                rexpr[k] = ctx.sub(prev, ctx.mul(c, e))
        self.rows.append(residual)
        self.pivots.append(pivot)
        self.exprs.append(expr)
        return True

    def express(self, vec):
        """Coefficients over inserted vectors, or None if outside the span.

        Returns a dict mapping insertion index (0-based, counting every
        ``insert`` call whether or not it enlarged the span) to a nonzero
        coefficient.
        """
        ctx = self.ctx
        residual, combo = self._reduce(vec)
        if not vec_is_zero(ctx, residual):
            return None
        return {k: e for k, e in combo.items() if not ctx.is_zero(e)}


_MODP_PRIMES = (2147483647, 2147483629, 2147483587)


def modp_rank(rows, prime=None):
    """Rank of a rational matrix modulo a large prime (numpy elimination).

    This is a one-sided certificate: the modular rank never exceeds the
    true rank.  Entries may be ints, Fractions, or gmpy2 rationals; a
    denominator divisible by the prime raises ValueError so the caller can
    retry with the next prime in ``_MODP_PRIMES``.
    """
    import numpy

    if not rows:
        return 0
    p = int(prime) if prime is not None else _MODP_PRIMES[0]
    mat = numpy.zeros((len(rows), len(rows[0])), dtype=numpy.int64)
    for i, row in enumerate(rows):
        for j, val in enumerate(row):
            num, den = _as_ratio(val)
            den %= p
            if den == 0:
                raise ValueError("prime divides a denominator")
            mat[i, j] = (num % p) * pow(den, p - 2, p) % p
    nrows, ncols = mat.shape
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        nz = numpy.nonzero(mat[r:, col])[0]
        if nz.size == 0:
            continue
        pivot = r + int(nz[0])
        if pivot != r:
            mat[[r, pivot]] = mat[[pivot, r]]
        inv = pow(int(mat[r, col]), p - 2, p)
        mat[r, col:] = (mat[r, col:] * inv) % p
        below = mat[r + 1 :, col]
        nzmask = below != 0
        if nzmask.any():
            factors = below[nzmask].reshape(-1, 1)
            block = mat[r + 1 :, col:][nzmask]
            mat[r + 1 :, col:][nzmask] = (block - factors * mat[r, col:]) % p
        r += 1
    return r


def modp_rank_robust(rows):
    """modp_rank, retrying across the prime list on bad denominators."""
    last = None
    for p in _MODP_PRIMES:
        try:
            return modp_rank(rows, p)
        except ValueError as exc:
            last = exc
    raise last


# ---------------------------------------------------------------------------
# rational interpolation helpers
#
# Laurent polynomials in one variable are dicts {exponent: rational}; zero
# coefficients are never stored.  All arithmetic is exact.
# ---------------------------------------------------------------------------

def laurent_eval(poly, t):
    """Evaluate a Laurent dict at the nonzero rational point t."""
    total = 0
    for e, c in poly.items():
        if e >= 0:
            total += c * t ** e
        else:
            total += c / t ** (-e)
    return total


def laurent_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            c = out.get(e, 0) + ca * cb
            if c:
                out[e] = c
            elif e in out:
                del out[e]
    return out


def laurent_pow(base, k):
    out = {0: Fraction(1)}
    for _ in range(k):
        out = laurent_mul(out, base)
    return out


def laurent_try_div(a, b):
    """Exact Laurent division a / b, or None when the division is inexact."""
    if not b:
        raise ZeroDivisionError("Laurent division by zero")
    if not a:
        return {}
    sa, sb = min(a), min(b)
    pa = {e - sa: c for e, c in a.items()}
    pb = {e - sb: c for e, c in b.items()}
    db = max(pb)
    lead = pb[db]
    quo = {}
    rem = dict(pa)
    while rem:
        dr = max(rem)
        if dr < db:
            return None
        shift = dr - db
        factor = rem[dr] / lead
        quo[shift] = factor
        for e, c in pb.items():
            ee = e + shift
            val = rem.get(ee, 0) - factor * c
            if val:
                rem[ee] = val
            elif ee in rem:
                del rem[ee]
    return {e + sa - sb: c for e, c in quo.items()}


def lagrange_poly(xs, ys):
    """Dense coefficients (ascending degree) of the unique polynomial of
    degree < len(xs) through the points (xs[i], ys[i])."""
    npts = len(xs)
    if len(ys) != npts:
        raise ValueError("point/value length mismatch")
    coeffs = [Fraction(0)] * npts
    for i in range(npts):
        # numerator polynomial prod_{j != i} (x - x_j), built incrementally
        basis = [Fraction(1)]
        denom = 1
        for j in range(npts):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom = denom * (xs[i] - xs[j])
        scale = ys[i] / denom
        if scale:
            for k in range(len(basis)):
                if basis[k]:
                    coeffs[k] += scale * basis[k]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def poly_eval(coeffs, t):
    total = 0
    for c in reversed(coeffs):
        total = total * t + c
    return total
