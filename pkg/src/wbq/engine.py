"""Expansion in the cellular basis and exact structure constants.

The algebra acts on the mixed tensor space with rho tied to q^n, and for
n >= r+s that action is faithful, so an element is pinned down by its images
on a few seed vectors.  ``CoordinateSystem`` stores the images of all (r+s)!
cellular basis words on such a seed family together with an exact solver;
``expand`` writes any element in the cellular basis with an exactly-zero
residual.

Structure constants come in two flavours.  ``mode="generic"`` produces the
multiplication table over the two-parameter ground field: the table is
computed at the chain of specializations rho = q^n (n = r+s, ..., r+s+2D),
Lagrange-interpolated in rho with a stability check at one extra sample,
with every per-sample table itself obtained from exact rational evaluations
at integer values of q followed by adaptive interpolation in q.  The
assembled table is then certified symbolically: all defining relations hold
as matrix identities, every basis word re-expands to its own indicator
vector, the table is triangular with respect to the cell order, compatible
with the reversal anti-involution, and all denominators are powers of
(q - q^{-1}) times integers.  Specialized tables are obtained either by
specializing a generic table or, for q-power fields with a large enough
exponent, directly from a coordinate system over that field.

One convention matters for reading this module: solving inside the tensor
model produces coefficients with q and rho inverted (the action routes
every element through the coefficient flip (q, rho) -> (q^{-1}, rho^{-1})),
so all internal matrices live in that flipped model and the inversion is
undone exactly once, at the public boundary.  Numeric (rational-point)
systems cannot undo it and return flipped-model coefficients; they are only
used inside the interpolation pipeline and for rank certificates, where
this does not matter.
"""

import itertools
import json
import os
import random
import tempfile
from fractions import Fraction

from . import combinat, linalg, scalars, words
from .errors import (
    InterpolationUnstable,
    NotInSpan,
    OracleMismatch,
    RankCertificationFailed,
)
from .linalg import FieldContext, RationalPointContext
from .scalars import FieldSpec
from .tensor import TensorVector, act_letters, act_word, weight_of_index, weight_space

FORMAT_VERSION = 1


# ---------------------------------------------------------------------------
# element constructors
# ---------------------------------------------------------------------------

def young_symmetrizer_word(pair, f=0, sign=True):
    """The (anti)symmetrizer n_lambda (sign=True) or m_lambda (sign=False)
    of a bipartition, shifted past the first f strands."""
    return words.young_symmetrizer(pair, f, sign=sign)


def e_word(f):
    """The product e_1 e_2 ... e_f as a word element (1 for f = 0)."""
    return words.WordElement.from_word(words.e_power_letters(f))


def e_ij_word(i, j):
    """The conjugated contraction e_{i,j}."""
    return words.WordElement.from_word(words.e_ij_letters(i, j))


def sigma(x):
    """The anti-involution fixing all generators (reverses every word)."""
    return x.sigma()


_BASIS_MEMO = {}


def cell_basis(r, s):
    """Memoized canonical cellular basis of B_{r,s}."""
    key = (r, s)
    if key not in _BASIS_MEMO:
        _BASIS_MEMO[key] = tuple(words.cell_basis(r, s))
    return _BASIS_MEMO[key]


def generator_letters(r, s):
    """The generating letters e_1, g_1..g_{r-1}, g*_1..g*_{s-1}."""
    out = [words.E1]
    for i in range(1, r):
        out.append(("g", i))
    for j in range(1, s):
        out.append(("gs", j))
    return out


def _letter_key(letter):
    if letter == words.E1:
        return "e"
    return "%s%d" % (letter[0], letter[1])


# ---------------------------------------------------------------------------
# rational evaluation of symbolic scalars (for rank certificates)
# ---------------------------------------------------------------------------

def _rational_value(ctx, value, t):
    """Evaluate a coordinate entry at q = t, as an exact rational."""
    if isinstance(ctx, RationalPointContext):
        return value
    spec = ctx.spec
    if spec.kind != "qpow":
        raise ValueError("rank certificates need q transcendental or numeric")
    tq = Fraction(t)

    def side(poly):
        total = Fraction(0)
        for mono, coeff in poly.terms():
            c = Fraction(int(coeff.numerator), int(coeff.denominator))
            total += c * tq ** mono[0]
        return total

    den = side(value.rep.denom)
    if den == 0:
        raise ZeroDivisionError("denominator vanishes at the sample point")
    return side(value.rep.numer) / den


# ---------------------------------------------------------------------------
# coordinate systems
# ---------------------------------------------------------------------------

class CoordinateSystem:
    """Images of every cellular basis word on a fixed seed family.

    ``rows[a]`` is the flattened coordinate vector of basis word ``a``; the
    rank certificate guarantees the rows are linearly independent, so the
    pivot-column square is invertible and expansion coefficients are unique.
    """

    __slots__ = (
        "r", "s", "n", "ctx", "basis", "support", "seeds", "tensor_images",
        "rows", "rank", "pivots", "pivot_inverse", "_letter_mats", "_word_mats",
    )

    def __init__(self, r, s, n, ctx, basis, support, seeds, tensor_images,
                 rows, rank, pivots, pivot_inverse):
        self.r = r
        self.s = s
        self.n = n
        self.ctx = ctx
        self.basis = basis
        self.support = support
        self.seeds = seeds
        self.tensor_images = tensor_images
        self.rows = rows
        self.rank = rank
        self.pivots = pivots
        self.pivot_inverse = pivot_inverse
        self._letter_mats = {}
        self._word_mats = {(): None}

    @classmethod
    def build(cls, r, s, seed=0, ctx=None, n=None, support=None,
              max_seeds=4, require_full=True, pivot_hint=None):
        """Build the coordinate system at rho = q^n (default n = r+s).

        Seed vectors have dense small random integer coefficients on
        ``support`` (all of the tensor space by default) and are drawn
        deterministically from ``seed``; more seeds are adjoined (up to
        ``max_seeds``) until the exact rank reaches (r+s)!.
        """
        n = (r + s) if n is None else n
        if ctx is None:
            ctx = FieldContext(FieldSpec.qpower(n))
        basis = cell_basis(r, s)
        nbasis = len(basis)
        if support is None:
            size = n ** (r + s)
            if size > 300000:
                raise ValueError("dense seeds too large at n=%d" % n)
            support = [idx for idx in
                       itertools.product(range(1, n + 1), repeat=r + s)]
        support = list(support)
        rng = random.Random("coords:%d:%d:%d:%r" % (r, s, n, seed))
        seeds = []
        tensor_images = []
        rows = None
        rank = 0
        for _ in range(max_seeds):
            vec = TensorVector(
                ctx, {idx: ctx.from_monomial(rng.randint(1, 9)) for idx in support})
            seeds.append(vec)
            new_cols = [act_word(vec, rec.element, n, r, s) for rec in basis]
            if rows is None:
                tensor_images = [[img] for img in new_cols]
                rows = [cls._flatten(ctx, [img], support) for img in new_cols]
            else:
                for a in range(nbasis):
                    tensor_images[a].append(new_cols[a])
                    rows[a].extend(cls._flatten(ctx, [new_cols[a]], support))
            rank = cls._certified_rank(ctx, rows)
            if rank == nbasis:
                break
        if rank < nbasis and require_full:
            raise RankCertificationFailed(
                "rank %d < %d with %d seeds at (r,s,n)=(%d,%d,%d)"
                % (rank, nbasis, len(seeds), r, s, n))
        pivots = None
        pivot_inverse = None
        if rank == nbasis:
            pivots, pivot_inverse = cls._solver_data(ctx, rows, pivot_hint)
        return cls(r, s, n, ctx, basis, support, seeds, tensor_images,
                   rows, rank, pivots, pivot_inverse)

    @staticmethod
    def _flatten(ctx, images, support):
        out = []
        for img in images:
            entries = img.entries
            zero = ctx.zero()
            for idx in support:
                out.append(entries.get(idx, zero))
        return out

    @staticmethod
    def _certified_rank(ctx, rows):
        """Exact lower-bound certificate: a modular rank at a rational point
        never exceeds the true rank, and the row count bounds it above."""
        last = 0
        for t in (2, 3, 5):
            try:
                numeric = [[_rational_value(ctx, v, t) for v in row]
                           for row in rows]
            except ZeroDivisionError:
                continue
            last = max(last, linalg.modp_rank_robust(numeric))
            if last == len(rows):
                return last
        return last

    @staticmethod
    def _solver_data(ctx, rows, pivot_hint):
        nbasis = len(rows)
        if pivot_hint is not None and len(pivot_hint) == nbasis:
            square = [[row[p] for p in pivot_hint] for row in rows]
            inv = linalg.invert_square(ctx, square)
            if inv is not None:
                return list(pivot_hint), inv
        if isinstance(ctx, RationalPointContext):
            pivots, _ = linalg.rref(ctx, [list(row) for row in rows])
            pivots = list(pivots[:nbasis])
            square = [[row[p] for p in pivots] for row in rows]
            inv = linalg.invert_square(ctx, square)
            if inv is None:
                raise RankCertificationFailed("pivot square unexpectedly singular")
            return pivots, inv
        for t in (2, 3, 5):
            try:
                numeric = [[_rational_value(ctx, v, t) for v in row]
                           for row in rows]
            except ZeroDivisionError:
                continue
            point = RationalPointContext(t, 0)
            pivots, _ = linalg.rref(point, numeric)
            pivots = list(pivots[:nbasis])
            square = [[row[p] for p in pivots] for row in rows]
            inv = linalg.invert_square(ctx, square)
            if inv is not None:
                return pivots, inv
        raise RankCertificationFailed("no invertible pivot square was found")

    # -- solving ----------------------------------------------------------

    def _solve(self, coords, check=True):
        """Raw expansion in the flipped model (no boundary inversion)."""
        if self.pivots is None:
            raise RankCertificationFailed("system was built without full rank")
        ctx = self.ctx
        xp = [coords[p] for p in self.pivots]
        d = []
        for j in range(len(xp)):
            acc = ctx.zero()
            for i in range(len(xp)):
                acc = ctx.add(acc, ctx.mul(xp[i], self.pivot_inverse[i][j]))
            d.append(acc)
        if check:
            for pos in range(len(coords)):
                acc = ctx.zero()
                for a in range(len(d)):
                    if not ctx.is_zero(d[a]):
                        acc = ctx.add(acc, ctx.mul(d[a], self.rows[a][pos]))
                if not ctx.eq(acc, coords[pos]):
                    raise NotInSpan("residual is nonzero at coordinate %d" % pos)
        return d

    def coordinates(self, element):
        """Flattened coordinate vector of a word element on the seed family."""
        images = [act_word(vec, element, self.n, self.r, self.s)
                  for vec in self.seeds]
        out = []
        zero = self.ctx.zero()
        for img in images:
            entries = img.entries
            for idx in self.support:
                out.append(entries.get(idx, zero))
        return out

    def expand(self, x, check=True):
        """Coefficients of ``x`` over the cellular basis (exact; the residual
        must vanish identically, otherwise ``NotInSpan`` is raised).

        ``x`` is a word element or an already-computed coordinate vector.
        On a symbolic system the coefficients are returned in the ground
        field itself; a numeric system returns flipped-model rationals.
        """
        coords = self.coordinates(x) if isinstance(x, words.WordElement) else x
        d = self._solve(coords, check=check)
        if isinstance(self.ctx, RationalPointContext):
            return d
        return [scalars.flip(v) for v in d]

    # -- right-multiplication matrices in the flipped model ----------------

    def letter_matrix(self, letter):
        """Matrix of right multiplication by one generator letter, acting on
        flipped-model coefficient columns (entry [c][a]: coefficient of basis
        word c in C_a * letter)."""
        if letter in self._letter_mats:
            return self._letter_mats[letter]
        nbasis = len(self.basis)
        cols = []
        for a in range(nbasis):
            images = [act_letters(img, [letter], self.n, self.r, self.s)
                      for img in self.tensor_images[a]]
            coords = self._flatten(self.ctx, images, self.support)
            cols.append(self._solve(coords, check=False))
        mat = [[cols[a][c] for a in range(nbasis)] for c in range(nbasis)]
        self._letter_mats[letter] = mat
        return mat

    def _word_matrix(self, word):
        if word in self._word_mats:
            return self._word_mats[word]
        prefix = self._word_matrix(word[:-1])
        last = self.letter_matrix(word[-1])
        mat = last if prefix is None else linalg.mat_mul(self.ctx, last, prefix)
        self._word_mats[word] = mat
        return mat

    def element_matrix(self, element):
        """Right-multiplication matrix of a word element (flipped model)."""
        ctx = self.ctx
        nbasis = len(self.basis)
        total = [[ctx.zero()] * nbasis for _ in range(nbasis)]
        for word, c, qe, re in element.monomials():
            coeff = ctx.from_monomial(c, -qe, -re)
            mat = self._word_matrix(word)
            if mat is None:
                for i in range(nbasis):
                    total[i][i] = ctx.add(total[i][i], coeff)
                continue
            for i in range(nbasis):
                row = mat[i]
                trow = total[i]
                for j in range(nbasis):
                    if not ctx.is_zero(row[j]):
                        trow[j] = ctx.add(trow[j], ctx.mul(coeff, row[j]))
        return total


def build_coordinates(r, s, seed=0, spec=None, n=None, max_seeds=4):
    """Public front door: coordinate system at QPower(n) (n = r+s by default)
    or at a supplied specialization of it."""
    if spec is None:
        ctx = None
    elif isinstance(spec, (FieldContext, RationalPointContext)):
        ctx = spec
    else:
        if isinstance(spec, str):
            spec = FieldSpec.from_string(spec)
        ctx = FieldContext(spec)
    return CoordinateSystem.build(r, s, seed=seed, ctx=ctx, n=n,
                                  max_seeds=max_seeds)


# ---------------------------------------------------------------------------
# structure-constant tables
# ---------------------------------------------------------------------------

class ConstantsTable:
    """Shared behaviour of generic and specialized multiplication tables.

    ``product(a, b)`` returns the expansion of C_a * C_b as a sparse dict
    {c: scalar}; ``generator_expansion(key)`` and ``unit_expansion()`` give
    the cellular expansions of the generators and of 1.
    """

    def __init__(self, r, s, spec, seed, depth):
        self.r = r
        self.s = s
        self.spec = spec
        self.seed = seed
        self.depth = depth
        self.basis = cell_basis(r, s)
        self.ctx = FieldContext(spec)
        self._letter_mats = {}
        self._word_mats = {(): None}

    # subclasses implement product / generator_expansion / unit_expansion

    @property
    def size(self):
        return len(self.basis)

    def label_layout(self):
        """List of (label, start position, cell dimension) in basis order."""
        if getattr(self, "_layout", None) is None:
            out = []
            start = 0
            for label in combinat.enumerate_labels(self.r, self.s):
                d = combinat.cell_dimension(label, self.r, self.s)
                out.append((label, start, d))
                start += d * d
            self._layout = out
        return self._layout

    def sigma_position(self, a):
        """Position of the image of basis word ``a`` under the reversal
        anti-involution: the same label with row and column swapped."""
        for label, start, dim in self.label_layout():
            if start <= a < start + dim * dim:
                i, j = divmod(a - start, dim)
                return start + j * dim + i
        raise IndexError("basis position %d out of range" % a)

    # -- right multiplication in cellular coordinates ----------------------

    def letter_right_matrix(self, letter):
        """Right multiplication by a generator letter on coefficient columns
        (entry [c][a]), assembled from the table and generator expansions."""
        if letter in self._letter_mats:
            return self._letter_mats[letter]
        ctx = self.ctx
        nbasis = self.size
        if letter[0] in ("gi", "gsi"):
            base = self.letter_right_matrix((letter[0][:-1], letter[1]))
            shift = ctx.sub(ctx.from_monomial(1, 1, 0), ctx.from_monomial(1, -1, 0))
            mat = [[ctx.sub(base[c][a], shift) if a == c else base[c][a]
                    for a in range(nbasis)] for c in range(nbasis)]
        else:
            gen = self.generator_expansion(_letter_key(letter))
            mat = [[ctx.zero()] * nbasis for _ in range(nbasis)]
            for b, coeff in gen.items():
                if ctx.is_zero(coeff):
                    continue
                for a in range(nbasis):
                    for c, val in self.product(a, b).items():
                        mat[c][a] = ctx.add(mat[c][a], ctx.mul(coeff, val))
        self._letter_mats[letter] = mat
        return mat

    def _word_right_matrix(self, word):
        if word in self._word_mats:
            return self._word_mats[word]
        prefix = self._word_right_matrix(word[:-1])
        last = self.letter_right_matrix(word[-1])
        mat = last if prefix is None else linalg.mat_mul(self.ctx, last, prefix)
        self._word_mats[word] = mat
        return mat

    def element_right_matrix(self, element):
        """Right-multiplication matrix of any word element over this table."""
        ctx = self.ctx
        nbasis = self.size
        total = [[ctx.zero()] * nbasis for _ in range(nbasis)]
        for word, c, qe, re in element.monomials():
            coeff = ctx.from_monomial(c, qe, re)
            mat = self._word_right_matrix(word)
            if mat is None:
                for i in range(nbasis):
                    total[i][i] = ctx.add(total[i][i], coeff)
                continue
            for i in range(nbasis):
                row = mat[i]
                trow = total[i]
                for j in range(nbasis):
                    if not ctx.is_zero(row[j]):
                        trow[j] = ctx.add(trow[j], ctx.mul(coeff, row[j]))
        return total

    def expand_word_element(self, element):
        """Expansion of an arbitrary word element in the cellular basis,
        through the unit expansion."""
        ctx = self.ctx
        mat = self.element_right_matrix(element)
        unit = self.unit_expansion()
        out = []
        for c in range(self.size):
            acc = ctx.zero()
            for a, val in unit.items():
                acc = ctx.add(acc, ctx.mul(mat[c][a], val))
            out.append(acc)
        return out

    # -- certification checks ----------------------------------------------

    def check_sigma_symmetry(self):
        """sigma(C_a C_b) = sigma(C_b) sigma(C_a) entrywise on the table."""
        ctx = self.ctx
        perm = [self.sigma_position(a) for a in range(self.size)]
        for a in range(self.size):
            for b in range(self.size):
                left = self.product(a, b)
                right = self.product(perm[b], perm[a])
                keys = set(left) | set(perm[c] for c in right)
                for c in keys:
                    lv = left.get(c, ctx.zero())
                    rv = right.get(perm[c], ctx.zero())
                    if not ctx.eq(lv, rv):
                        raise OracleMismatch(
                            "reversal symmetry fails at (%d,%d,%d)" % (a, b, c))

    def check_triangularity(self):
        """Products stay in the same cell layer with the left index frozen,
        plus strictly higher layers."""
        for a in range(self.size):
            rec_a = self.basis[a]
            for b in range(self.size):
                for c, val in self.product(a, b).items():
                    if self.ctx.is_zero(val):
                        continue
                    rec_c = self.basis[c]
                    order = combinat.label_order(rec_c.label, rec_a.label)
                    if order == "eq":
                        if rec_c.left != rec_a.left:
                            raise OracleMismatch(
                                "left index moved inside layer at (%d,%d,%d)"
                                % (a, b, c))
                    elif order != "gt":
                        raise OracleMismatch(
                            "product escapes below its layer at (%d,%d,%d)"
                            % (a, b, c))

    def check_relations(self):
        """Every defining relation holds as a matrix identity on columns."""
        ctx = self.ctx
        for name, lhs, rhs in words.presentation_relations(self.r, self.s):
            lmat = self.element_right_matrix(lhs)
            rmat = self.element_right_matrix(rhs)
            for i in range(self.size):
                for j in range(self.size):
                    if not ctx.eq(lmat[i][j], rmat[i][j]):
                        raise OracleMismatch("relation %s fails on the table"
                                             % name)

    def check_unit_expansions(self):
        """Re-expanding every basis word through the table must return its
        own indicator vector."""
        ctx = self.ctx
        for a in range(self.size):
            vec = self.expand_word_element(self.basis[a].element)
            for c in range(self.size):
                want = ctx.one() if c == a else ctx.zero()
                if not ctx.eq(vec[c], want):
                    raise OracleMismatch(
                        "basis word %d does not re-expand to itself" % a)


class StructureConstants(ConstantsTable):
    """Fully materialized table (generic or directly-computed specialized)."""

    def __init__(self, r, s, spec, seed, depth, products, generators, unit):
        ConstantsTable.__init__(self, r, s, spec, seed, depth)
        self._products = products
        self._generators = generators
        self._unit = unit

    def product(self, a, b):
        return self._products.get((a, b), {})

    def generator_expansion(self, key):
        return self._generators[key]

    def unit_expansion(self):
        return self._unit

    def specialize(self, spec):
        """A lazily specialized view of a generic table."""
        if isinstance(spec, str):
            spec = FieldSpec.from_string(spec)
        if self.spec.kind != "generic":
            raise ValueError("only generic tables can be specialized")
        if spec.kind == "generic":
            return self
        return SpecializedConstants(self, spec)

    def check_denominators(self):
        """Every coefficient is integral away from q - q^{-1}: denominators
        are integer multiples of q^A (q^2-1)^K (a purely syntactic check on
        the two-parameter representation, so generic tables only)."""
        if self.spec.kind != "generic":
            return
        for value in self._iter_values():
            _check_denominator_shape(value)

    def _iter_values(self):
        for vec in self._products.values():
            for value in vec.values():
                yield value
        for vec in self._generators.values():
            for value in vec.values():
                yield value
        for value in self._unit.values():
            yield value

    def certify(self):
        self.check_denominators()
        self.check_sigma_symmetry()
        self.check_triangularity()
        self.check_relations()
        self.check_unit_expansions()

    # -- serialization ------------------------------------------------------

    def to_json_dict(self):
        def encode_vec(vec):
            out = {}
            for c in sorted(vec):
                if not scalars.is_zero(vec[c]):
                    out[str(c)] = _encode_scalar(vec[c])
            return out

        products = {}
        for (a, b) in sorted(self._products):
            vec = encode_vec(self._products[(a, b)])
            if vec:
                products["%d,%d" % (a, b)] = vec
        return {
            "format_version": FORMAT_VERSION,
            "r": self.r,
            "s": self.s,
            "mode": self.spec.to_string(),
            "seed": self.seed,
            "D": self.depth,
            "size": self.size,
            "generators": {k: encode_vec(v)
                           for k, v in sorted(self._generators.items())},
            "one": encode_vec(self._unit),
            "products": products,
        }

    @classmethod
    def from_json_dict(cls, data):
        if data.get("format_version") != FORMAT_VERSION:
            raise ValueError("unsupported table format %r"
                             % data.get("format_version"))
        spec = FieldSpec.from_string(data["mode"])
        r, s = data["r"], data["s"]

        def decode_vec(obj):
            return {int(c): _decode_scalar(v, spec) for c, v in obj.items()}

        products = {}
        for key, vec in data["products"].items():
            a, b = key.split(",")
            products[(int(a), int(b))] = decode_vec(vec)
        generators = {k: decode_vec(v) for k, v in data["generators"].items()}
        unit = decode_vec(data["one"])
        table = cls(r, s, spec, data["seed"], data["D"],
                    products, generators, unit)
        if len(table.basis) != data["size"]:
            raise ValueError("basis size mismatch in stored table")
        return table


class SpecializedConstants(ConstantsTable):
    """Entrywise specialization of a generic table, memoized lazily."""

    def __init__(self, parent, spec):
        ConstantsTable.__init__(self, parent.r, parent.s, spec,
                                parent.seed, parent.depth)
        self.parent = parent
        self._product_memo = {}
        self._generator_memo = {}
        self._unit_memo = None

    def _map_vec(self, vec):
        out = {}
        for c, value in vec.items():
            image = scalars.specialize(value, self.spec)
            if not scalars.is_zero(image):
                out[c] = image
        return out

    def product(self, a, b):
        key = (a, b)
        if key not in self._product_memo:
            self._product_memo[key] = self._map_vec(self.parent.product(a, b))
        return self._product_memo[key]

    def generator_expansion(self, key):
        if key not in self._generator_memo:
            self._generator_memo[key] = self._map_vec(
                self.parent.generator_expansion(key))
        return self._generator_memo[key]

    def unit_expansion(self):
        if self._unit_memo is None:
            self._unit_memo = self._map_vec(self.parent.unit_expansion())
        return self._unit_memo


def _check_denominator_shape(value):
    num, den = scalars.generic_terms(value)
    del num
    qexps = sorted(e for e, _, c in den)
    rexps = set(re for _, re, _ in den)
    if rexps != {den[0][1]}:
        raise OracleMismatch("denominator involves rho")
    lo = qexps[0]
    span = qexps[-1] - lo
    if span % 2 != 0:
        raise OracleMismatch("denominator is not a power of q^2 - 1")
    k = span // 2
    by_exp = {e - lo: c for e, _, c in den}
    lead = by_exp.get(span)
    if lead is None:
        raise OracleMismatch("denominator missing its leading term")
    for i in range(k + 1):
        want = lead * _binomial(k, i) * (-1) ** i
        have = by_exp.get(span - 2 * i, Fraction(0))
        if have != want:
            raise OracleMismatch("denominator is not c*q^A*(q^2-1)^K")
    for e in qexps:
        if (e - lo) % 2 != 0:
            raise OracleMismatch("denominator has stray odd q powers")


def _binomial(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def _encode_scalar(x):
    num, den = scalars.generic_terms(x)
    return [[[qe, re, str(c)] for qe, re, c in num],
            [[qe, re, str(c)] for qe, re, c in den]]


def _decode_scalar(obj, spec):
    num = [(qe, re, Fraction(c)) for qe, re, c in obj[0]]
    den = [(qe, re, Fraction(c)) for qe, re, c in obj[1]]
    value = scalars.generic_from_terms(num, den)
    if spec.kind == "generic":
        return value
    return scalars.specialize(value, spec)


# ---------------------------------------------------------------------------
# the interpolation pipeline (generic mode)
# ---------------------------------------------------------------------------

def _support_indices(n, r, s):
    base = tuple(range(1, r + 1)) + tuple(range(1, s + 1))
    wt = weight_of_index(base, n, r, s)
    return weight_space(wt, n, r, s)

def _node_expansions(r, s, n, t, seed, pivot_hints):
    """All flipped-model expansions at the sample point (q, rho) = (t, t^n):
    the unit, every generator, and every product of two basis words."""
    ctx = RationalPointContext(t, n)
    support = _support_indices(n, r, s)
    try:
        system = CoordinateSystem.build(
            r, s, seed=seed, ctx=ctx, n=n, support=support,
            pivot_hint=pivot_hints.get(n))
    except RankCertificationFailed:
        system = CoordinateSystem.build(r, s, seed=seed, ctx=ctx, n=n)
    pivot_hints[n] = system.pivots
    nbasis = len(system.basis)
    out = {}

    def store(key, vec):
        entries = {c: vec[c] for c in range(nbasis) if vec[c]}
        out[key] = entries

    seeds_coords = system._flatten(ctx, system.seeds, system.support)
    store(("one",), system._solve(seeds_coords, check=False))
    for letter in generator_letters(r, s):
        mat = system.letter_matrix(letter)
        unit = out[("one",)]
        col = []
        for c in range(nbasis):
            acc = 0
            for a, uval in unit.items():
                if mat[c][a]:
                    acc += mat[c][a] * uval
            col.append(acc)
        store(("gen", _letter_key(letter)), col)
    for b in range(nbasis):
        mat = system.element_matrix(system.basis[b].element)
        for a in range(nbasis):
            entries = {c: mat[c][a] for c in range(nbasis) if mat[c][a]}
            if entries:
                out[("p", a, b)] = entries
    return out


def _stage_one(values_by_node, nodes, stab_node, t, depth):
    """Interpolate the rho-dependence at one q-point: Laurent window
    [-depth, depth], checked against the extra stabilization node."""
    xs = [Fraction(t) ** n for n in nodes]
    x_stab = Fraction(t) ** stab_node
    keys = set()
    for table in values_by_node.values():
        keys.update((key, c) for key, vec in table.items() for c in vec)
    out = {}
    for key, c in keys:
        vals = [Fraction(values_by_node[n].get(key, {}).get(c, 0))
                for n in nodes]
        stab_val = Fraction(values_by_node[stab_node].get(key, {}).get(c, 0))
        if not any(vals) and not stab_val:
            continue
        ys = [vals[i] * xs[i] ** depth for i in range(len(nodes))]
        coeffs = linalg.lagrange_poly(xs, ys)
        if linalg.poly_eval(coeffs, x_stab) != stab_val * x_stab ** depth:
            raise InterpolationUnstable(
                "rho window [-%d, %d] too small at q=%d" % (depth, depth, t))
        for k, coeff in enumerate(coeffs):
            if coeff:
                out.setdefault((key, c), {})[k - depth] = coeff
    return out


def _build_generic_attempt(r, s, seed, depth, progress):
    nodes = [r + s + k for k in range(2 * depth + 1)]
    stab_node = r + s + 2 * depth + 1
    all_nodes = nodes + [stab_node]
    kmax = depth
    pivot_hints = {}
    rho_data = {}         # (key, c) -> {rho_exp -> {t -> value}}
    accepted = {}         # (key, c) -> {rho_exp -> laurent dict}
    ts = []
    next_t = 2
    qdiff_pow = linalg.laurent_pow({1: Fraction(1), -1: Fraction(-1)}, kmax)

    def add_point():
        nonlocal next_t
        t = next_t
        next_t += 1
        if progress:
            progress("sampling q=%d (rho=q^%d..q^%d)" % (t, nodes[0], stab_node))
        tables = {n: _node_expansions(r, s, n, t, seed, pivot_hints)
                  for n in all_nodes}
        stage = _stage_one(tables, nodes, stab_node, t, depth)
        for (key, c), kdict in stage.items():
            slot = rho_data.setdefault((key, c), {})
            for k, val in kdict.items():
                slot.setdefault(k, {})[t] = val
        ts.append(t)

    for _ in range(9):
        add_point()
    while True:
        pending = []
        for entry, kdict in rho_data.items():
            got = accepted.get(entry, {})
            for k in kdict:
                if k not in got:
                    pending.append((entry, k))
        if not pending:
            break
        if len(ts) >= 64:
            raise InterpolationUnstable(
                "q-interpolation failed to stabilize for %d coefficients"
                % len(pending))
        for _ in range(4):
            add_point()
        fit_ts, check_ts = ts[:-3], ts[-3:]
        guard = (len(fit_ts) - 1) // 2
        for entry, k in pending:
            tvals = rho_data[entry][k]
            ws = {t: Fraction(tvals.get(t, 0)) *
                  linalg.laurent_eval(qdiff_pow, Fraction(t))
                  for t in ts}
            xs = [Fraction(t) for t in fit_ts]
            ys = [ws[t] * Fraction(t) ** guard for t in fit_ts]
            coeffs = linalg.lagrange_poly(xs, ys)
            cand = {e - guard: c for e, c in enumerate(coeffs) if c}
            ok = all(linalg.laurent_eval(cand, Fraction(t)) == ws[t]
                     for t in check_ts)
            if ok:
                accepted.setdefault(entry, {})[k] = cand

    # assemble, undoing the coefficient flip: (q, rho) -> (q^{-1}, rho^{-1})
    values = {}
    qdiff_terms = [(kmax - 2 * i, 0, Fraction((-1) ** i) * _binomial(kmax, i))
                   for i in range(kmax + 1)]
    for (key, c), kdict in accepted.items():
        num_terms = []
        for k, laur in kdict.items():
            sign = Fraction((-1) ** kmax)
            for e, coeff in laur.items():
                num_terms.append((-e, -k, sign * coeff))
        if not num_terms:
            continue
        value = scalars.generic_from_terms(num_terms, qdiff_terms)
        if not scalars.is_zero(value):
            values.setdefault(key, {})[c] = value

    products = {}
    generators = {}
    unit = values.get(("one",), {})
    for key, vec in values.items():
        if key[0] == "p":
            products[(key[1], key[2])] = vec
        elif key[0] == "gen":
            generators[key[1]] = vec
    for letter in generator_letters(r, s):
        generators.setdefault(_letter_key(letter), {})
    table = StructureConstants(r, s, FieldSpec.generic(), seed, depth,
                               products, generators, unit)
    if progress:
        progress("certifying the interpolated table")
    try:
        table.certify()
    except OracleMismatch as exc:
        raise InterpolationUnstable("certification rejected the table: %s"
                                    % exc)
    return table


def build_generic_table(r, s, seed=0, depth=None, progress=None):
    """Compute the generic multiplication table, doubling the rho window
    once if the stability checks reject the first attempt."""
    depth = depth if depth is not None else 2 * min(r, s) + 2
    try:
        return _build_generic_attempt(r, s, seed, depth, progress)
    except InterpolationUnstable:
        return _build_generic_attempt(r, s, seed, 2 * depth, progress)


# ---------------------------------------------------------------------------
# direct specialized computation (q-power fields, no interpolation)
# ---------------------------------------------------------------------------

def direct_structure_constants(r, s, spec, seed=0):
    """Table over QPower(a), a >= r+s, straight from a coordinate system."""
    if isinstance(spec, str):
        spec = FieldSpec.from_string(spec)
    if spec.kind != "qpow" or spec.a < r + s:
        raise ValueError("direct computation needs rho = q^a with a >= r+s")
    system = CoordinateSystem.build(r, s, seed=seed,
                                    ctx=FieldContext(spec), n=spec.a)
    nbasis = len(system.basis)
    products = {}
    for b in range(nbasis):
        mat = system.element_matrix(system.basis[b].element)
        for a in range(nbasis):
            vec = {}
            for c in range(nbasis):
                if not scalars.is_zero(mat[c][a]):
                    vec[c] = scalars.flip(mat[c][a])
            if vec:
                products[(a, b)] = vec
    unit_vec = system.expand(words.WordElement.unit())
    unit = {c: v for c, v in enumerate(unit_vec) if not scalars.is_zero(v)}
    generators = {}
    for letter in generator_letters(r, s):
        vec = system.expand(words.WordElement.from_word((letter,)))
        generators[_letter_key(letter)] = {
            c: v for c, v in enumerate(vec) if not scalars.is_zero(v)}
    return StructureConstants(r, s, spec, seed, 0, products, generators, unit)


# ---------------------------------------------------------------------------
# cache management and the public front door
# ---------------------------------------------------------------------------

_TABLE_MEMO = {}


def cache_directory(cache_dir=None):
    if cache_dir:
        return cache_dir
    env = os.environ.get("WBQ_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "wbq")


def cache_path(r, s, cache_dir=None):
    return os.path.join(cache_directory(cache_dir),
                        "constants_%d_%d_generic.json" % (r, s))


def bundled_path(r, s):
    return os.path.join(os.path.dirname(__file__), "data",
                        "constants_%d_%d_generic.json" % (r, s))


def save_table(table, path):
    """Write a table atomically; emission order is canonical, so identical
    builds produce byte-identical files."""
    os.makedirs(os.path.dirname(path), exist_ok=True)
    payload = json.dumps(table.to_json_dict(), sort_keys=True,
                         separators=(",", ":"))
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(payload)
            handle.write("\n")
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def load_table(path, r, s):
    with open(path) as handle:
        data = json.load(handle)
    if data.get("r") != r or data.get("s") != s:
        raise ValueError("stored table is for (%r, %r), wanted (%d, %d)"
                         % (data.get("r"), data.get("s"), r, s))
    return StructureConstants.from_json_dict(data)


def generic_table(r, s, seed=0, cache_dir=None, progress=None):
    """The generic table, resolved through: in-memory memo, cache file,
    bundled data file, full build (which then populates the cache)."""
    key = (r, s)
    if key in _TABLE_MEMO:
        return _TABLE_MEMO[key]
    path = cache_path(r, s, cache_dir)
    for candidate in (path, bundled_path(r, s)):
        if os.path.exists(candidate):
            table = load_table(candidate, r, s)
            _TABLE_MEMO[key] = table
            return table
    table = build_generic_table(r, s, seed=seed, progress=progress)
    save_table(table, path)
    _TABLE_MEMO[key] = table
    return table


def structure_constants(r, s, mode="generic", seed=0, cache_dir=None,
                        route="auto", progress=None):
    """Structure constants of B_{r,s}.

    ``mode`` is "generic" for the two-parameter table, or a FieldSpec (or
    its string form) for a specialized one.  Specialized tables are derived
    from the generic table; ``route="direct"`` forces an independent
    computation inside the tensor model, which is available exactly for
    q-power fields with exponent >= r+s.
    """
    if mode in ("generic", None):
        return generic_table(r, s, seed=seed, cache_dir=cache_dir,
                             progress=progress)
    spec = FieldSpec.from_string(mode) if isinstance(mode, str) else mode
    if spec.kind == "generic":
        return generic_table(r, s, seed=seed, cache_dir=cache_dir,
                             progress=progress)
    if route == "direct":
        return direct_structure_constants(r, s, spec, seed=seed)
    if route not in ("auto", "from_generic"):
        raise ValueError("unknown route %r" % route)
    if route == "auto" and spec.kind == "qpow" and spec.a >= r + s:
        # prefer the cheap direct route when no generic table is at hand
        key = (r, s)
        if key not in _TABLE_MEMO \
                and not os.path.exists(cache_path(r, s, cache_dir)) \
                and not os.path.exists(bundled_path(r, s)):
            return direct_structure_constants(r, s, spec, seed=seed)
    return generic_table(r, s, seed=seed, cache_dir=cache_dir,
                         progress=progress).specialize(spec)
