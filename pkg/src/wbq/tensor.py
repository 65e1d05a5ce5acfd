"""Mixed tensor space with its two commuting exact actions.

The space has basis ``v_{i|j}`` indexed by tuples ``i`` in {1..n}^r and
``j`` in {1..n}^s, realized as sparse mappings from index tuples to exact
coefficients.  The diagram algebra acts on the right by ``act_generator``
and ``act_word``; the quantum enveloping algebra of gl_n acts on the left
by ``act_E``, ``act_F``, ``act_K`` and the divided powers.  The right
action is implemented in the convention whose braid eigenvalues are
``q^{-1}`` and ``-q``; words written in the presentation convention (braid
eigenvalues ``q`` and ``-q^{-1}``) are translated by inverting ``q`` and
``rho`` in their coefficients, which is a ring isomorphism between the two
presentations.

Index tuples list ``i_1..i_r`` then ``j_1..j_s``.  Physically the slots of
the tensor product run ``v_{i_r}, ..., v_{i_1}, w_{j_1}, ..., w_{j_s}``
from left to right; the left action applies coproduct twists in that
physical order.
"""

from fractions import Fraction
from itertools import product

from . import scalars
from .combinat import conjugate
from .errors import IndexOutOfRange, IntegralityViolation, RankTooSmall
from .linalg import FieldContext, RationalPointContext, kernel_basis
from .words import WordElement, d_letters, young_symmetrizer

_GENERIC_SPEC = scalars.FieldSpec.generic()
_GENERIC_CTX = FieldContext(_GENERIC_SPEC)


def spec_matches_rho(spec, n):
    """Whether the field identifies rho with q**n."""
    if spec.kind == "generic":
        return False
    if spec.kind == "qpow":
        return spec.a == n
    if spec.rho_kind == "free":
        return False
    return (spec.rho_a - n) % spec.m == 0


def _check_field(ctx, n):
    if isinstance(ctx, RationalPointContext):
        if ctx.rhoexp != n:
            raise ValueError(
                "evaluation point sets rho = q^%d but the tensor space "
                "needs rho = q^%d" % (ctx.rhoexp, n)
            )
    elif not spec_matches_rho(ctx.spec, n):
        raise ValueError(
            "field %s does not identify rho with q^%d"
            % (scalars.FieldSpec.to_string(ctx.spec), n)
        )


class TensorVector:
    """Sparse vector in the mixed tensor space over a coefficient context."""

    __slots__ = ("ctx", "entries")

    def __init__(self, ctx, entries=None):
        self.ctx = ctx
        self.entries = entries if entries is not None else {}

    @classmethod
    def zero(cls, ctx):
        return cls(ctx)

    @classmethod
    def basis(cls, ctx, idx):
        return cls(ctx, {tuple(idx): ctx.one()})

    def add(self, other):
        out = dict(self.entries)
        for idx, val in other.entries.items():
            _accum(self.ctx, out, idx, val)
        return TensorVector(self.ctx, out)

    def sub(self, other):
        out = dict(self.entries)
        for idx, val in other.entries.items():
            _accum(self.ctx, out, idx, self.ctx.neg(val))
        return TensorVector(self.ctx, out)

    def scale(self, c):
        if self.ctx.is_zero(c):
            return TensorVector(self.ctx)
        return TensorVector(
            self.ctx, {idx: self.ctx.mul(c, val) for idx, val in self.entries.items()}
        )

    def is_zero(self):
        return not self.entries

    def items(self):
        return sorted(self.entries.items())

    def coefficient(self, idx):
        return self.entries.get(tuple(idx), self.ctx.zero())

    def __eq__(self, other):
        if not isinstance(other, TensorVector):
            return NotImplemented
        keys = set(self.entries) | set(other.entries)
        for idx in keys:
            a = self.entries.get(idx)
            b = other.entries.get(idx)
            if a is None:
                if not self.ctx.is_zero(b):
                    return False
            elif b is None:
                if not self.ctx.is_zero(a):
                    return False
            elif not self.ctx.eq(a, b):
                return False
        return True

    __hash__ = None

    def __repr__(self):
        parts = []
        for idx, val in self.items():
            parts.append("%r: %r" % (idx, val))
        return "TensorVector{%s}" % ", ".join(parts)


def _accum(ctx, table, idx, val):
    if ctx.is_zero(val):
        return
    cur = table.get(idx)
    if cur is None:
        table[idx] = val
    else:
        new = ctx.add(cur, val)
        if ctx.is_zero(new):
            del table[idx]
        else:
            table[idx] = new


def weight_of_index(idx, n, r, s):
    """Weight of a basis index: +1 per left entry, -1 per right entry."""
    wt = [0] * n
    for a in idx[:r]:
        wt[a - 1] += 1
    for b in idx[r:]:
        wt[b - 1] -= 1
    return tuple(wt)


_WEIGHT_SPACES = {}


def weight_space(wt, n, r, s):
    """All basis index tuples of the given weight, in lexicographic order."""
    key = (n, r, s)
    table = _WEIGHT_SPACES.get(key)
    if table is None:
        table = {}
        for idx in product(range(1, n + 1), repeat=r + s):
            table.setdefault(weight_of_index(idx, n, r, s), []).append(idx)
        _WEIGHT_SPACES[key] = table
    return list(table.get(tuple(wt), ()))


def _letter_constants(ctx):
    qinv = ctx.from_monomial(1, -1)
    qpos = ctx.from_monomial(1, 1)
    desc = ctx.sub(qinv, qpos)  # q^{-1} - q
    shift = ctx.sub(qpos, qinv)  # q - q^{-1}
    return qinv, desc, shift


def act_generator(v, x, n, r, s):
    """Right action of one generator (or inverse generator) letter.

    ``x`` is a letter tuple: ("e",), ("g", k), ("gs", k), ("gi", k) or
    ("gsi", k).  Inverse letters are obtained from the quadratic relation,
    which gives g^{-1} = g + (q - q^{-1}) in this convention.
    """
    ctx = v.ctx
    _check_field(ctx, n)
    kind = x[0]
    qinv, desc, shift = _letter_constants(ctx)
    out = {}
    if kind in ("g", "gi"):
        k = x[1]
        if not 1 <= k <= r - 1:
            raise IndexOutOfRange("g_%d needs 1 <= %d <= r-1 = %d" % (k, k, r - 1))
        for idx, coeff in v.entries.items():
            a, b = idx[k - 1], idx[k]
            if a == b:
                _accum(ctx, out, idx, ctx.mul(coeff, qinv))
            else:
                # The left factors are written in reversed slot order, so the
                # ascending case picks up the correction term here.
                swapped = idx[: k - 1] + (b, a) + idx[k + 1 :]
                _accum(ctx, out, swapped, coeff)
                if a < b:
                    _accum(ctx, out, idx, ctx.mul(coeff, desc))
            if kind == "gi":
                _accum(ctx, out, idx, ctx.mul(coeff, shift))
    elif kind in ("gs", "gsi"):
        k = x[1]
        if not 1 <= k <= s - 1:
            raise IndexOutOfRange("g*_%d needs 1 <= %d <= s-1 = %d" % (k, k, s - 1))
        p = r + k - 1
        for idx, coeff in v.entries.items():
            a, b = idx[p], idx[p + 1]
            if a == b:
                _accum(ctx, out, idx, ctx.mul(coeff, qinv))
            else:
                swapped = idx[:p] + (b, a) + idx[p + 2 :]
                _accum(ctx, out, swapped, coeff)
                if a < b:
                    _accum(ctx, out, idx, ctx.mul(coeff, desc))
            if kind == "gsi":
                _accum(ctx, out, idx, ctx.mul(coeff, shift))
    elif kind == "e":
        if r < 1 or s < 1:
            raise IndexOutOfRange("e_1 needs r >= 1 and s >= 1")
        for idx, coeff in v.entries.items():
            if idx[0] != idx[r]:
                continue
            c = ctx.mul(coeff, ctx.from_monomial(1, -n - 1 + 2 * idx[0]))
            middle = idx[1:r]
            tail = idx[r + 1 :]
            for t in range(1, n + 1):
                _accum(ctx, out, (t,) + middle + (t,) + tail, c)
    else:
        raise IndexOutOfRange("unknown generator letter %r" % (x,))
    return TensorVector(ctx, out)


def act_letters(v, letters, n, r, s):
    """Apply a product of letters left to right (right action)."""
    for letter in letters:
        v = act_generator(v, letter, n, r, s)
    return v


def _element_terms(ctx, element, flip):
    """Normalize an algebra element into (ctx coefficient, word) pairs."""
    if isinstance(element, WordElement):
        wel = element.flipped() if flip else element
        return [
            (ctx.from_monomial(c, a, b), word)
            for word, c, a, b in wel.monomials()
        ]
    if isinstance(element, tuple):
        return [(ctx.one(), element)]
    out = []
    for coeff, word in element:
        if isinstance(coeff, scalars.Scalar):
            if not isinstance(ctx, FieldContext) or coeff.spec != ctx.spec:
                raise ValueError("scalar coefficient over the wrong field")
            out.append((scalars.flip(coeff) if flip else coeff, tuple(word)))
        else:
            c, a, b = coeff
            if flip:
                a, b = -a, -b
            out.append((ctx.from_monomial(c, a, b), tuple(word)))
    return out


def act_word(v, element, n, r, s, convention="presentation"):
    """Right action of a linear combination of generator words.

    ``element`` may be a ``WordElement``, a bare word (tuple of letters,
    coefficient one), or a list of ``(coefficient, word)`` pairs where each
    coefficient is a monomial triple ``(c, qexp, rhoexp)`` or a ``Scalar``.
    With the default presentation convention, coefficients are rewritten by
    q -> q^{-1}, rho -> rho^{-1} before the action is applied.
    """
    if convention not in ("presentation", "dds"):
        raise ValueError("unknown convention %r" % (convention,))
    ctx = v.ctx
    _check_field(ctx, n)
    out = TensorVector(ctx)
    for coeff, word in _element_terms(ctx, element, convention == "presentation"):
        if ctx.is_zero(coeff):
            continue
        out = out.add(act_letters(v, word, n, r, s).scale(coeff))
    return out


def _slot_pairings(idx, n, r, s, i):
    """Per physical slot, the pairing of alpha_i with the slot weight."""
    vals = []
    for p in range(1, r + 1):
        j = idx[r - p]
        vals.append((1 if j == i else 0) - (1 if j == i + 1 else 0))
    for p in range(r + 1, r + s + 1):
        j = idx[p - 1]
        vals.append((1 if j == i + 1 else 0) - (1 if j == i else 0))
    return vals


def act_E(v, i, n, r, s):
    """Left action of the raising generator E_i (weight goes up by alpha_i)."""
    if not 1 <= i <= n - 1:
        raise IndexOutOfRange("E_%d needs 1 <= %d <= n-1 = %d" % (i, i, n - 1))
    ctx = v.ctx
    out = {}
    for idx, coeff in v.entries.items():
        vals = _slot_pairings(idx, n, r, s, i)
        suffix = 0
        suffixes = [0] * (r + s)
        for p in range(r + s - 1, -1, -1):
            suffixes[p] = suffix
            suffix += vals[p]
        for p in range(r + s):
            twist = -suffixes[p]
            if p < r:
                pos = r - 1 - p
                if idx[pos] != i + 1:
                    continue
                new = idx[:pos] + (i,) + idx[pos + 1 :]
                c = ctx.mul(coeff, ctx.from_monomial(1, twist))
            else:
                pos = p
                if idx[pos] != i:
                    continue
                new = idx[:pos] + (i + 1,) + idx[pos + 1 :]
                c = ctx.mul(coeff, ctx.from_monomial(-1, twist - 1))
            _accum(ctx, out, new, c)
    return TensorVector(ctx, out)


def act_F(v, i, n, r, s):
    """Left action of the lowering generator F_i (weight drops by alpha_i)."""
    if not 1 <= i <= n - 1:
        raise IndexOutOfRange("F_%d needs 1 <= %d <= n-1 = %d" % (i, i, n - 1))
    ctx = v.ctx
    out = {}
    for idx, coeff in v.entries.items():
        vals = _slot_pairings(idx, n, r, s, i)
        prefix = 0
        for p in range(r + s):
            twist = prefix
            prefix += vals[p]
            if p < r:
                pos = r - 1 - p
                if idx[pos] != i:
                    continue
                new = idx[:pos] + (i + 1,) + idx[pos + 1 :]
                c = ctx.mul(coeff, ctx.from_monomial(1, twist))
            else:
                pos = p
                if idx[pos] != i + 1:
                    continue
                new = idx[:pos] + (i,) + idx[pos + 1 :]
                c = ctx.mul(coeff, ctx.from_monomial(-1, twist + 1))
            _accum(ctx, out, new, c)
    return TensorVector(ctx, out)


def act_K(v, h, n, r, s):
    """Left action of the torus element q^h.

    ``h`` is either an integer coordinate (1-based: q^{h_i} scales a weight
    vector by q^{weight_i}) or an integer tuple of length n pairing with the
    full weight.
    """
    ctx = v.ctx
    out = {}
    for idx, coeff in v.entries.items():
        wt = weight_of_index(idx, n, r, s)
        if isinstance(h, int):
            if not 1 <= h <= n:
                raise IndexOutOfRange("q^h coordinate %d out of range" % h)
            exp = wt[h - 1]
        else:
            if len(h) != n:
                raise IndexOutOfRange("torus tuple must have length n")
            exp = sum(a * b for a, b in zip(h, wt))
        _accum(ctx, out, idx, ctx.mul(coeff, ctx.from_monomial(1, exp)))
    return TensorVector(ctx, out)


_DP_CACHE = {}


def _assert_laurent(x):
    """Check that a Generic-field scalar lies in Z[q, q^{-1}]."""
    rep = x.rep
    dterms = rep.denom.terms()
    if len(dterms) != 1:
        raise IntegralityViolation("denominator %s is not a monomial" % rep.denom)
    (deq, der), dc = dterms[0]
    if der != 0:
        raise IntegralityViolation("denominator involves rho")
    dfrac = Fraction(int(dc.numerator), int(dc.denominator))
    for (neq, ner), nc in rep.numer.terms():
        if ner != 0:
            raise IntegralityViolation("numerator involves rho")
        val = Fraction(int(nc.numerator), int(nc.denominator)) / dfrac
        if val.denominator != 1:
            raise IntegralityViolation("entry %s is not integral" % x)


def _divided_power_table(n, r, s, i, ell, wt):
    key = (n, r, s, i, ell, wt)
    table = _DP_CACHE.get(key)
    if table is not None:
        return table
    qfact = scalars.quantum_factorial(ell, _GENERIC_SPEC)
    table = {}
    for src in weight_space(wt, n, r, s):
        vec = TensorVector.basis(_GENERIC_CTX, src)
        for _ in range(ell):
            vec = act_E(vec, i, n, r, s)
        row = []
        for tgt, val in vec.items():
            quo = val / qfact
            _assert_laurent(quo)
            row.append((tgt, quo))
        table[src] = row
    _DP_CACHE[key] = table
    return table


def act_divided_power(v, i, ell, n, r, s):
    """Left action of the divided power E_i^{(ell)} = E_i^ell / [ell]!.

    The matrix of E_i^ell is built once over the Generic field on each
    weight space, each entry is divided exactly by the quantum factorial,
    the quotient is checked to be a Laurent polynomial with integer
    coefficients (``IntegralityViolation`` otherwise), and only then is it
    mapped into the coefficient domain of ``v``.  This is what makes the
    operator meaningful at roots of unity where [ell]! vanishes.
    """
    if not 1 <= i <= n - 1:
        raise IndexOutOfRange("E_%d needs 1 <= %d <= n-1 = %d" % (i, i, n - 1))
    if ell < 0:
        raise IndexOutOfRange("divided power exponent must be nonnegative")
    if ell == 0:
        return TensorVector(v.ctx, dict(v.entries))
    if ell == 1:
        return act_E(v, i, n, r, s)
    ctx = v.ctx
    groups = {}
    for idx, coeff in v.entries.items():
        groups.setdefault(weight_of_index(idx, n, r, s), []).append((idx, coeff))
    out = {}
    for wt, pairs in groups.items():
        table = _divided_power_table(n, r, s, i, ell, wt)
        for idx, coeff in pairs:
            for tgt, gval in table[idx]:
                _accum(ctx, out, tgt, ctx.mul(coeff, ctx.from_generic(gval)))
    return TensorVector(ctx, out)


def singular_space(wt, n, r, s, ell_max=None, spec=None):
    """Reduced-echelon basis of the joint kernel of all divided powers.

    A vector is singular when every E_i^{(ell)} with 1 <= ell <= ell_max
    kills it.  Over a field of characteristic-zero Laurent series this is
    the kernel of the E_i alone, but at roots of unity the higher divided
    powers impose genuinely new conditions.
    """
    wt = tuple(wt)
    if ell_max is None:
        ell_max = r + s
    ctx = FieldContext(spec if spec is not None else _GENERIC_SPEC)
    sources = weight_space(wt, n, r, s)
    if not sources:
        return []
    rows_by_key = {}
    zero_row = None
    for spos, src in enumerate(sources):
        base = TensorVector.basis(ctx, src)
        for i in range(1, n):
            for ell in range(1, ell_max + 1):
                image = act_divided_power(base, i, ell, n, r, s)
                for tgt, val in image.entries.items():
                    key = (i, ell, tgt)
                    row = rows_by_key.get(key)
                    if row is None:
                        if zero_row is None:
                            zero_row = [ctx.zero()] * len(sources)
                        row = list(zero_row)
                        rows_by_key[key] = row
                    row[spos] = val
    rows = [rows_by_key[key] for key in sorted(rows_by_key)]
    basis = kernel_basis(ctx, rows, len(sources)) if rows else []
    if not rows:
        basis = [
            [ctx.one() if k == j else ctx.zero() for k in range(len(sources))]
            for j in range(len(sources))
        ]
    out = []
    for vec in basis:
        entries = {}
        for pos, val in enumerate(vec):
            if not ctx.is_zero(val):
                entries[sources[pos]] = val
        out.append(TensorVector(ctx, entries))
    return out


def seed_vector(label, n, ctx=None):
    """The distinguished weight vector the singular vectors grow from.

    For a label with f contractions and bipartition (lambda1, lambda2) of
    (r - f, s - f), this is the sum over all kappa in {1..n}^f of the basis
    vector whose left index is (kappa, i-part) and right index is
    (kappa, j-part), where the parts are the column-reading sequences of
    the conjugate components.
    """
    f = label.f
    r = f + sum(label.lam1)
    s = f + sum(label.lam2)
    if n < r + s:
        raise RankTooSmall("need n >= r + s = %d, got %d" % (r + s, n))
    if ctx is None:
        ctx = FieldContext(scalars.FieldSpec.qpower(n))
    alpha = conjugate(label.lam1)
    beta = conjugate(label.lam2)
    i_part = []
    for k in range(r - f, 0, -1):
        ak = alpha[k - 1] if k - 1 < len(alpha) else 0
        i_part.extend(range(ak, 0, -1))
    j_part = []
    for k in range(1, s - f + 1):
        bk = beta[k - 1] if k - 1 < len(beta) else 0
        j_part.extend(range(n, n - bk, -1))
    i_part = tuple(i_part)
    j_part = tuple(j_part)
    entries = {}
    one = ctx.one()
    for kappa in product(range(1, n + 1), repeat=f):
        entries[kappa + i_part + kappa + j_part] = one
    return TensorVector(ctx, entries)


def singular_vector(label, t, d, n, spec=None):
    """The singular vector attached to (label, standard tableau, coset rep).

    ``t`` must be a standard bipartition tableau whose shape is the
    componentwise conjugate of the label's bipartition, and ``d`` a coset
    representative with the same number of contractions.  The vector is the
    seed vector multiplied on the right by n_{lambda'} g_{d(t)} g_d, and
    has weight ``phi_map(label, n)``.
    """
    f = label.f
    r = f + sum(label.lam1)
    s = f + sum(label.lam2)
    if n < r + s:
        raise RankTooSmall("need n >= r + s = %d, got %d" % (r + s, n))
    conj_pair = (conjugate(label.lam1), conjugate(label.lam2))
    if t.shape() != conj_pair or t.f != f:
        raise ValueError("tableau shape must be the conjugate bipartition")
    if d.f != f:
        raise ValueError("coset representative has the wrong contraction count")
    if spec is None:
        spec = scalars.FieldSpec.qpower(n)
    ctx = FieldContext(spec)
    base = seed_vector(label, n, ctx)
    element = young_symmetrizer(conj_pair, f, sign=True)
    element = element * WordElement.from_word(d_letters(t))
    element = element * WordElement.from_word(d.word)
    return act_word(base, element, n, r, s, convention="presentation")


def _form_exponent(idx, n, r, s):
    jsum = sum(idx[r:])
    counts = [0] * (n + 1)
    for a in idx[:r]:
        counts[a] += 1
    jcounts = [0] * (n + 1)
    for b in idx[r:]:
        jcounts[b] += 1
    total = r + s * (n - 1)
    beta = total * (total - 1) // 2
    for value in range(1, n + 1):
        c = counts[value] + (s - jcounts[value])
        beta -= c * (c - 1) // 2
    return 2 * jsum + beta


def contravariant_form(x, y, n, r, s):
    """The diagonal contravariant form on the mixed tensor space.

    Basis vectors are orthogonal and ``(v_{i|j}, v_{i|j})`` is ``q`` raised
    to ``2(j_1 + ... + j_s)`` plus the number of unequal pairs in the
    concatenation of ``i`` with the complements of the ``j`` entries.  The
    form is symmetric and contravariant for the right action with respect
    to the word-reversing anti-involution.
    """
    ctx = x.ctx
    if ctx is not y.ctx:
        if isinstance(ctx, FieldContext) and isinstance(y.ctx, FieldContext):
            if ctx.spec != y.ctx.spec:
                raise ValueError("vectors live over different fields")
        else:
            raise ValueError("vectors live over different contexts")
    total = ctx.zero()
    for idx, val in x.entries.items():
        other = y.entries.get(idx)
        if other is None or ctx.is_zero(other):
            continue
        weight = ctx.from_monomial(1, _form_exponent(idx, n, r, s))
        total = ctx.add(total, ctx.mul(ctx.mul(val, other), weight))
    return total
