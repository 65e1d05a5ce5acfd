"""Cell modules, Gram forms, decomposition matrices, and block structure.

Everything here reduces to the structure-constant tables: a cell module is
the layer of the multiplication table attached to one label, its Gram form
reads off the distinguished coefficient of products inside that layer, and
decomposition numbers are recovered by the trace method: over a field of
characteristic zero the traces of the basis elements on pairwise
non-isomorphic simple modules are linearly independent, so the system

    trace on C(nu) = sum over columns mu of d[nu][mu] * trace on D(mu)

has a unique solution, which is asserted to be a non-negative integer
matrix, unitriangular against the cell order.

A second, independent realization of each cell module lives inside the
mixed tensor space as a span of singular vectors; it is kept deliberately
separate from the table route so the two constructions can be compared
(dimensions, Gram ranks, trace tables) as a machine check.

All computations are exact; there is no floating point anywhere.
"""

import itertools
import random
from fractions import Fraction

from . import combinat, engine, linalg, scalars, tensor, words
from .errors import (
    IntegralityViolation,
    OracleMismatch,
    RankCertificationFailed,
    TraceSystemSingular,
)
from .linalg import FieldContext, RationalPointContext, SpanTracker
from .scalars import INFINITY, FieldSpec


def _as_spec(field):
    if field is None:
        return FieldSpec.generic()
    if isinstance(field, str):
        return FieldSpec.from_string(field)
    return field


def _resolve_table(r, s, spec, seed=0, cache_dir=None, table=None):
    if table is not None:
        return table
    mode = "generic" if spec.kind == "generic" else spec
    return engine.structure_constants(r, s, mode, seed=seed,
                                      cache_dir=cache_dir)


def label_text(label):
    """Stable plain-text form of a label, used in results and reports."""
    fmt = lambda lam: "[" + ",".join(str(p) for p in lam) + "]"
    return "f=%d,%s|%s" % (label.f, fmt(label.lam1), fmt(label.lam2))


def singular_index_set(label, r, s):
    """Index pairs for the singular-vector construction: the tableaux run
    over the componentwise conjugate shape (same count as the cell
    dimension), the coset representatives are shared with the cell basis."""
    conj_pair = (combinat.conjugate(label.lam1),
                 combinat.conjugate(label.lam2))
    return [(t, d)
            for t in combinat.standard_tableaux(conj_pair, label.f)
            for d in combinat.coset_reps(r, s, label.f)]


# ---------------------------------------------------------------------------
# predictions read off the ground field
# ---------------------------------------------------------------------------

def rho_square_power_clash(spec, bound):
    """True when rho^2 = q^(2a) holds for some |a| <= bound."""
    if bound < 0:
        return False
    if spec.kind == "generic":
        return False
    if spec.kind == "qpow":
        return abs(spec.a) <= bound
    if spec.rho_kind == "free":
        return False
    m = spec.m
    b = spec.rho_a
    return any((2 * a - 2 * b) % m == 0 for a in range(-bound, bound + 1))


def predicted_simple_labels(r, s, spec):
    """Labels whose cell module has a nonzero simple head: restricted
    bipartitions, with the top contraction layer dropped in the degenerate
    square case delta = 0, r = s."""
    e = scalars.quantum_characteristic(spec)
    delta_zero = scalars.is_zero(scalars.delta(spec))
    out = []
    for label in combinat.enumerate_labels(r, s):
        if not combinat.e_restricted((label.lam1, label.lam2), e):
            continue
        if delta_zero and r == s and label.f == r:
            continue
        out.append(label)
    return out


def predicted_semisimple(r, s, spec):
    """Semisimplicity criterion in terms of e, delta and the rho/q tie."""
    e = scalars.quantum_characteristic(spec)
    if not (e == INFINITY or e > max(r, s)):
        return False
    if scalars.is_zero(scalars.delta(spec)):
        return (r, s) in ((1, 2), (2, 1), (1, 3), (3, 1))
    return not rho_square_power_clash(spec, r + s - 2)


# ---------------------------------------------------------------------------
# cell modules
# ---------------------------------------------------------------------------

class CellModule:
    """A cell module with exact generator action matrices.

    Matrices act on row vectors: row ``j`` of ``letter_matrix(x)`` holds the
    coefficients of basis image ``v_j * x``.  Two constructions are
    supported: ``StructureConstants`` reads the same-label layer of the
    multiplication table, ``SingularVectors`` expresses the action on an
    explicit family of singular vectors in the mixed tensor space.
    """

    def __init__(self, r, s, label, spec, ctx, provenance, index_set,
                 letter_source):
        self.r = r
        self.s = s
        self.label = label
        self.spec = spec
        self.ctx = ctx
        self.provenance = provenance
        self.index_set = index_set
        self.dim = len(index_set)
        self._letter_source = letter_source
        self._letter_mats = {}
        self._word_mats = {(): None}

    def letter_matrix(self, letter):
        if letter in self._letter_mats:
            return self._letter_mats[letter]
        ctx = self.ctx
        if letter[0] in ("gi", "gsi"):
            base = self.letter_matrix((letter[0][:-1], letter[1]))
            shift = ctx.sub(ctx.from_monomial(1, 1, 0),
                            ctx.from_monomial(1, -1, 0))
            mat = [[ctx.sub(base[j][k], shift) if j == k else base[j][k]
                    for k in range(self.dim)] for j in range(self.dim)]
        else:
            mat = self._letter_source(letter)
        self._letter_mats[letter] = mat
        return mat

    def word_matrix(self, word):
        if word in self._word_mats:
            return self._word_mats[word]
        prefix = self.word_matrix(word[:-1])
        last = self.letter_matrix(word[-1])
        mat = last if prefix is None else linalg.mat_mul(self.ctx, prefix, last)
        self._word_mats[word] = mat
        return mat

    def element_matrix(self, element):
        """Action matrix of a word element (presentation coefficients)."""
        ctx = self.ctx
        total = [[ctx.zero()] * self.dim for _ in range(self.dim)]
        for word, c, qe, re in element.monomials():
            coeff = ctx.from_monomial(c, qe, re)
            mat = self.word_matrix(word)
            for j in range(self.dim):
                if mat is None:
                    total[j][j] = ctx.add(total[j][j], coeff)
                    continue
                row = mat[j]
                trow = total[j]
                for k in range(self.dim):
                    if not ctx.is_zero(row[k]):
                        trow[k] = ctx.add(trow[k], ctx.mul(coeff, row[k]))
        return total

    def check_relations(self):
        """All defining relations hold on the action matrices."""
        ctx = self.ctx
        for name, lhs, rhs in words.presentation_relations(self.r, self.s):
            lmat = self.element_matrix(lhs)
            rmat = self.element_matrix(rhs)
            for j in range(self.dim):
                for k in range(self.dim):
                    if not ctx.eq(lmat[j][k], rmat[j][k]):
                        raise OracleMismatch(
                            "relation %s fails on the cell module %s"
                            % (name, label_text(self.label)))


def _table_layer(table, label):
    for lab, start, dim in table.label_layout():
        if lab == label:
            return start, dim
    raise KeyError("label %s not found in the table" % label_text(label))


def _initial_offset(label, r, s, index_set):
    initial = words.initial_cell_index(label, r, s)
    for k, pair in enumerate(index_set):
        if pair == initial:
            return k
    raise RuntimeError("distinguished index missing from the index set")


def _table_module_letter(table, start, dim, frame, letter):
    """Same-label layer of right multiplication by a positive generator."""
    ctx = table.ctx
    gen = table.generator_expansion(engine._letter_key(letter))
    mat = [[ctx.zero()] * dim for _ in range(dim)]
    for j in range(dim):
        pos = start + frame * dim + j
        for b, coeff in gen.items():
            if ctx.is_zero(coeff):
                continue
            vec = table.product(pos, b)
            for k in range(dim):
                val = vec.get(start + frame * dim + k)
                if val is not None and not ctx.is_zero(val):
                    mat[j][k] = ctx.add(mat[j][k], ctx.mul(coeff, val))
    return mat


def cell_module(r, s, label, field=None, provenance="StructureConstants",
                n=None, seed=0, cache_dir=None, table=None, check=True):
    """Build the cell module of ``label`` over the given field.

    ``provenance`` selects the construction: the table layer, or the span
    of singular vectors inside the mixed tensor space (which requires the
    rho = q^n tie, n >= r+s).
    """
    index_set = words.cell_index_set(label, r, s)
    if provenance == "StructureConstants":
        spec = _as_spec(field)
        tab = _resolve_table(r, s, spec, seed=seed, cache_dir=cache_dir,
                             table=table)
        start, dim = _table_layer(tab, label)
        if dim != len(index_set):
            raise RuntimeError("layer size disagrees with the index set")
        frame = _initial_offset(label, r, s, index_set)

        def source(letter, _frame=frame):
            return _table_module_letter(tab, start, dim, _frame, letter)

        module = CellModule(r, s, label, spec, tab.ctx, provenance,
                            index_set, source)
        if check and dim >= 1:
            # the module does not depend on which row of the layer frames it
            other = frame - 1 if frame > 0 else (1 if dim > 1 else frame)
            if other != frame:
                for letter in engine.generator_letters(r, s):
                    a = module.letter_matrix(letter)
                    b = _table_module_letter(tab, start, dim, other, letter)
                    for j in range(dim):
                        for k in range(dim):
                            if not tab.ctx.eq(a[j][k], b[j][k]):
                                raise OracleMismatch(
                                    "cell module depends on the frame at %s"
                                    % label_text(label))
            module.check_relations()
        return module
    if provenance == "SingularVectors":
        n = (r + s) if n is None else n
        spec = FieldSpec.qpower(n) if field is None else _as_spec(field)
        if not tensor.spec_matches_rho(spec, n):
            raise ValueError("singular vectors need the rho = q^%d tie" % n)
        ctx = FieldContext(spec)
        # the singular family of the componentwise conjugate label carries
        # the same symmetrizer type as the cellular layer of ``label``, so
        # the two constructions become comparable module for module
        vectors = [tensor.singular_vector(label.conjugate(), t, d, n, spec)
                   for t, d in index_set]
        support = sorted(set(idx for v in vectors for idx, _ in v.items()))
        slot = {idx: k for k, idx in enumerate(support)}
        tracker = SpanTracker(ctx, len(support))

        def coords(vec):
            out = [ctx.zero()] * len(support)
            for idx, value in vec.items():
                if idx not in slot:
                    raise RankCertificationFailed(
                        "the singular span is not stable at %s"
                        % label_text(label))
                out[slot[idx]] = value
            return out

        for vec in vectors:
            if not tracker.insert(coords(vec)):
                raise RankCertificationFailed(
                    "singular vectors are dependent at %s"
                    % label_text(label))

        def source(letter):
            mat = []
            for vec in vectors:
                image = tensor.act_letters(vec, (letter,), n, r, s)
                expr = tracker.express(coords(image))
                if expr is None:
                    raise RankCertificationFailed(
                        "the singular span is not stable at %s"
                        % label_text(label))
                row = [scalars.flip(expr.get(k, ctx.zero()))
                       for k in range(len(vectors))]
                mat.append(row)
            return mat

        module = CellModule(r, s, label, spec, ctx, provenance,
                            index_set, source)
        module.vectors = vectors
        module.n = n
        if check:
            module.check_relations()
        return module
    raise ValueError("unknown provenance %r" % provenance)


# ---------------------------------------------------------------------------
# Gram matrices
# ---------------------------------------------------------------------------

class GramMatrix:
    """The cellular bilinear form of one label, with its exact rank."""

    def __init__(self, label, entries, ctx):
        self.label = label
        self.entries = entries
        self.ctx = ctx
        self.dim = len(entries)
        pivots, reduced = linalg.rref(ctx, entries) if entries else ([], [])
        self.rank = len(pivots)
        self._pivots = pivots
        self._reduced = reduced

    def radical_basis(self):
        return linalg.kernel_basis(self.ctx, self.entries, self.dim)

    def is_zero(self):
        return self.rank == 0


def gram_matrix(r, s, label, field=None, seed=0, cache_dir=None, table=None):
    """Gram matrix of the cell module: entry (i, j) is the coefficient of
    the distinguished diagonal basis word in C[(a)(i)] * C[(j)(a)]."""
    spec = _as_spec(field)
    tab = _resolve_table(r, s, spec, seed=seed, cache_dir=cache_dir,
                         table=table)
    index_set = words.cell_index_set(label, r, s)
    start, dim = _table_layer(tab, label)
    frame = _initial_offset(label, r, s, index_set)
    ctx = tab.ctx
    diag = start + frame * dim + frame
    entries = []
    for i in range(dim):
        row = []
        for j in range(dim):
            vec = tab.product(start + frame * dim + i, start + j * dim + frame)
            row.append(vec.get(diag, ctx.zero()))
        entries.append(row)
    gram = GramMatrix(label, entries, ctx)
    for i in range(dim):
        for j in range(i):
            if not ctx.eq(entries[i][j], entries[j][i]):
                raise OracleMismatch("Gram matrix is not symmetric at %s"
                                     % label_text(label))
    return gram


def simple_quotient(r, s, label, field=None, **kw):
    """Dimension of the simple head, or None when the form vanishes."""
    gram = gram_matrix(r, s, label, field=field, **kw)
    if gram.is_zero():
        return None
    return gram.rank


# ---------------------------------------------------------------------------
# traces and the decomposition matrix
# ---------------------------------------------------------------------------

def _layer_trace_table(tab, start, dim, frame):
    """Traces of every basis word on the cell module of one layer."""
    ctx = tab.ctx
    out = []
    for b in range(tab.size):
        acc = ctx.zero()
        for j in range(dim):
            pos = start + frame * dim + j
            val = tab.product(pos, b).get(pos)
            if val is not None:
                acc = ctx.add(acc, val)
        out.append(acc)
    return out


def _module_rows(tab, start, dim, frame, b):
    """Rows of the action of basis word ``b`` on the layer module."""
    ctx = tab.ctx
    mat = []
    for j in range(dim):
        vec = tab.product(start + frame * dim + j, b)
        mat.append([vec.get(start + frame * dim + k, ctx.zero())
                    for k in range(dim)])
    return mat


def _quotient_trace_table(tab, start, dim, frame, gram, check=True):
    """Traces of every basis word on the simple head of the layer module."""
    ctx = tab.ctx
    pivots = gram._pivots
    reduced = gram._reduced
    pivot_set = set(pivots)
    free = [j for j in range(dim) if j not in pivot_set]
    # e_free = sum over pivots p of reduced_row(p)[free] * e_p  (mod radical)
    if check and free:
        radical = gram.radical_basis()
        for letter in engine.generator_letters(tab.r, tab.s):
            gen = tab.generator_expansion(engine._letter_key(letter))
            for vec in radical:
                image = [ctx.zero()] * dim
                for j in range(dim):
                    if ctx.is_zero(vec[j]):
                        continue
                    for b, coeff in gen.items():
                        prod = tab.product(start + frame * dim + j, b)
                        for k in range(dim):
                            val = prod.get(start + frame * dim + k)
                            if val is not None:
                                image[k] = ctx.add(
                                    image[k],
                                    ctx.mul(vec[j], ctx.mul(coeff, val)))
                for check_row in gram.entries:
                    acc = ctx.zero()
                    for k in range(dim):
                        if not ctx.is_zero(image[k]):
                            acc = ctx.add(acc, ctx.mul(check_row[k], image[k]))
                    if not ctx.is_zero(acc):
                        raise OracleMismatch(
                            "the form radical is not stable under the action")
    out = []
    for b in range(tab.size):
        mat = _module_rows(tab, start, dim, frame, b)
        acc = ctx.zero()
        for row_idx, p in enumerate(pivots):
            acc = ctx.add(acc, mat[p][p])
            for fcol in free:
                corr = reduced[row_idx][fcol]
                if not ctx.is_zero(corr) and not ctx.is_zero(mat[p][fcol]):
                    acc = ctx.add(acc, ctx.mul(mat[p][fcol], corr))
        out.append(acc)
    return out


class DecompositionMatrix:
    """Rows are all labels, columns the labels with nonzero simple head."""

    def __init__(self, r, s, spec, rows, columns, entries, gram_ranks):
        self.r = r
        self.s = s
        self.spec = spec
        self.rows = rows
        self.columns = columns
        self.entries = entries
        self.gram_ranks = gram_ranks

    def entry(self, row_label, col_label):
        return self.entries[self.rows.index(row_label)][
            self.columns.index(col_label)]

    def is_identity(self):
        if len(self.columns) != len(self.rows):
            return False
        for i, row in enumerate(self.entries):
            for j, value in enumerate(row):
                if value != (1 if i == j else 0):
                    return False
        return True

    def block_partition(self):
        """Transitive closure of sharing a column with a nonzero entry."""
        parent = list(range(len(self.rows)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for j in range(len(self.columns)):
            rows_with = [i for i, row in enumerate(self.entries) if row[j]]
            for other in rows_with[1:]:
                ra, rb = find(rows_with[0]), find(other)
                if ra != rb:
                    parent[rb] = ra
        groups = {}
        for i in range(len(self.rows)):
            groups.setdefault(find(i), []).append(self.rows[i])
        return sorted(groups.values(),
                      key=lambda block: self.rows.index(block[0]))


def _integer_value(ctx, value, bound=64):
    for k in range(bound + 1):
        if ctx.eq(value, ctx.from_monomial(k)):
            return k
        if k and ctx.eq(value, ctx.from_monomial(-k)):
            return -k
    raise IntegralityViolation("a decomposition entry is not a small integer")


def decomposition_matrix(r, s, field=None, seed=0, cache_dir=None,
                         table=None, check=True):
    """Exact decomposition matrix over the given field, by the trace method.

    Raises TraceSystemSingular when the simple traces fail to be linearly
    independent, IntegralityViolation when the solved multiplicities are
    not non-negative integers, and OracleMismatch when the column set or
    the unitriangular shape disagrees with the predicted one.
    """
    spec = _as_spec(field)
    tab = _resolve_table(r, s, spec, seed=seed, cache_dir=cache_dir,
                         table=table)
    ctx = tab.ctx
    labels = list(combinat.enumerate_labels(r, s))
    layer = {}
    grams = {}
    for label in labels:
        start, dim = _table_layer(tab, label)
        frame = _initial_offset(label, r, s,
                                words.cell_index_set(label, r, s))
        layer[label] = (start, dim, frame)
        grams[label] = gram_matrix(r, s, label, table=tab)
    columns = [label for label in labels if grams[label].rank > 0]
    predicted = predicted_simple_labels(r, s, spec)
    if columns != predicted:
        raise OracleMismatch(
            "computed simple labels %s disagree with the predicted set %s"
            % ([label_text(l) for l in columns],
               [label_text(l) for l in predicted]))
    trace_c = {}
    trace_d = {}
    for label in labels:
        start, dim, frame = layer[label]
        trace_c[label] = _layer_trace_table(tab, start, dim, frame)
    for label in columns:
        start, dim, frame = layer[label]
        if grams[label].rank == dim:
            trace_d[label] = trace_c[label]
        else:
            trace_d[label] = _quotient_trace_table(
                tab, start, dim, frame, grams[label], check=check)
    ncols = len(columns)
    system = []
    for b in range(tab.size):
        row = [trace_d[col][b] for col in columns]
        row.extend(trace_c[lab][b] for lab in labels)
        system.append(row)
    pivots, reduced = linalg.rref(ctx, system)
    if pivots[:ncols] != list(range(ncols)) or len(pivots) != ncols:
        raise TraceSystemSingular(
            "simple trace vectors are dependent or inconsistent")
    entries = []
    for i, lab in enumerate(labels):
        row = []
        for j in range(ncols):
            value = reduced[j][ncols + i]
            row.append(_integer_value(ctx, value))
        entries.append(row)
    dec = DecompositionMatrix(r, s, spec, labels, columns, entries,
                              {label: grams[label].rank for label in labels})
    if check:
        _check_decomposition_shape(dec)
    return dec


def _check_decomposition_shape(dec):
    for i, row_label in enumerate(dec.rows):
        for j, col_label in enumerate(dec.columns):
            value = dec.entries[i][j]
            if value < 0:
                raise IntegralityViolation(
                    "negative multiplicity at (%s, %s)"
                    % (label_text(row_label), label_text(col_label)))
            if row_label == col_label and value != 1:
                raise OracleMismatch("diagonal multiplicity is not one")
            if value and row_label != col_label:
                order = combinat.label_order(row_label, col_label)
                if order not in ("gt",):
                    raise OracleMismatch(
                        "nonzero entry above the diagonal at (%s, %s)"
                        % (label_text(row_label), label_text(col_label)))


def blocks(r, s, field=None, **kw):
    """Partition of the labels into blocks (lists in canonical order)."""
    return decomposition_matrix(r, s, field=field, **kw).block_partition()


def semisimplicity(r, s, field=None, seed=0, cache_dir=None, table=None):
    """(computed, predicted) semisimplicity; raises on disagreement."""
    spec = _as_spec(field)
    tab = _resolve_table(r, s, spec, seed=seed, cache_dir=cache_dir,
                         table=table)
    computed = True
    for label in combinat.enumerate_labels(r, s):
        gram = gram_matrix(r, s, label, table=tab)
        if gram.rank != gram.dim:
            computed = False
            break
    predicted = predicted_semisimple(r, s, spec)
    if computed != predicted:
        raise OracleMismatch(
            "computed semisimplicity %r disagrees with the criterion %r "
            "at (%d,%d), %s" % (computed, predicted, r, s, spec.to_string()))
    return computed, predicted


# ---------------------------------------------------------------------------
# oracle comparisons
# ---------------------------------------------------------------------------

def blocks1_applicable(r, s, spec):
    """Hypothesis for the layer-reduction statements: no rho^2 = q^(2a)
    clash in the relevant window."""
    return not rho_square_power_clash(spec, r + s - 2)


def blocks1_comparison(r, s, field=None, dec=None, seed=0, cache_dir=None):
    """Entrywise check that multiplicities only connect equal contraction
    layers, and that each layer reproduces the layer-zero multiplicities
    of the smaller algebra with both strand counts reduced by f.

    Layers whose reference algebra has no strands of one colour are
    compared against the identity when at most one strand remains, and
    skipped otherwise.
    """
    spec = _as_spec(field)
    if dec is None:
        dec = decomposition_matrix(r, s, field=spec, seed=seed,
                                   cache_dir=cache_dir)
    for i, row_label in enumerate(dec.rows):
        for j, col_label in enumerate(dec.columns):
            if row_label.f != col_label.f and dec.entries[i][j]:
                return False
    fs = sorted(set(label.f for label in dec.rows if label.f > 0))
    for f in fs:
        rows_f = [label for label in dec.rows if label.f == f]
        cols_f = [label for label in dec.columns if label.f == f]
        sub_r, sub_s = r - f, s - f
        if min(sub_r, sub_s) >= 1:
            sub = decomposition_matrix(sub_r, sub_s, field=spec, seed=seed,
                                       cache_dir=cache_dir)
            sub_rows = [l for l in sub.rows if l.f == 0]
            sub_cols = [l for l in sub.columns if l.f == 0]
            if [(l.lam1, l.lam2) for l in rows_f] != \
                    [(l.lam1, l.lam2) for l in sub_rows]:
                return False
            if [(l.lam1, l.lam2) for l in cols_f] != \
                    [(l.lam1, l.lam2) for l in sub_cols]:
                return False
            for row_label, sub_row in zip(rows_f, sub_rows):
                for col_label, sub_col in zip(cols_f, sub_cols):
                    if dec.entry(row_label, col_label) != \
                            sub.entry(sub_row, sub_col):
                        return False
        elif max(sub_r, sub_s) <= 1:
            # the reference degenerates to a ground ring or a single strand
            if len(rows_f) != len(cols_f):
                return False
            for row_label in rows_f:
                for col_label in cols_f:
                    want = 1 if row_label == col_label else 0
                    if dec.entry(row_label, col_label) != want:
                        return False
        # a one-colour reference with two or more strands is out of scope
    return True


def einfty_comparison(r, s, field=None, moduli=(7, 11), seed=0,
                      cache_dir=None):
    """For rho = q^a over transcendental q, the decomposition matrix must
    agree with the one at a large root of unity carrying the same tie.
    Returns None for fields where the comparison does not apply.
    """
    spec = _as_spec(field)
    if spec.kind != "qpow":
        return None
    base = decomposition_matrix(r, s, field=spec, seed=seed,
                                cache_dir=cache_dir)
    for m in moduli:
        other_spec = FieldSpec.cyclotomic(m, spec.a % m)
        other = decomposition_matrix(r, s, field=other_spec, seed=seed,
                                     cache_dir=cache_dir)
        if base.rows != other.rows or base.columns != other.columns:
            return False
        if base.entries != other.entries:
            return False
    return True


# ---------------------------------------------------------------------------
# the alternative generator of a cell layer
# ---------------------------------------------------------------------------

def _alt_generator_element(label):
    """e^f m_{conjugate} g_{d} n_{lambda}, the classical generator of the
    cell layer written through the opposite symmetrizer."""
    f = label.f
    pair = (label.lam1, label.lam2)
    pairc = (combinat.conjugate(label.lam1), combinat.conjugate(label.lam2))
    _, t_col = combinat.initial_tableaux(pairc, f)
    elem = words.WordElement.from_word(words.e_power_letters(f))
    elem = elem * words.young_symmetrizer(pairc, f, sign=False)
    elem = elem * words.WordElement.from_word(words.d_letters(t_col))
    elem = elem * words.young_symmetrizer(pair, f, sign=True)
    return elem


def alt_cell_realization_check(r, s, label, field=None, seed=0,
                               cache_dir=None, table=None):
    """The right module generated by the alternative element inside the
    quotient by the higher-label ideal must match the cell module of the
    label: same dimension and the same trace of every basis word."""
    spec = _as_spec(field)
    tab = _resolve_table(r, s, spec, seed=seed, cache_dir=cache_dir,
                         table=table)
    ctx = tab.ctx
    nbasis = tab.size
    higher = [p for p in range(nbasis)
              if combinat.label_order(tab.basis[p].label, label) == "gt"]
    higher_set = set(higher)

    def project(vec):
        return [ctx.zero() if p in higher_set else vec[p]
                for p in range(nbasis)]

    start, dim, frame = None, None, None
    for lab, st, dm in tab.label_layout():
        if lab == label:
            start, dim = st, dm
    generator = project(tab.expand_word_element(_alt_generator_element(label)))
    for p in range(nbasis):
        if not ctx.is_zero(generator[p]):
            order = combinat.label_order(tab.basis[p].label, label)
            if order != "eq":
                raise OracleMismatch(
                    "the alternative generator leaves its layer at %s"
                    % label_text(label))
    tracker = SpanTracker(ctx, nbasis)
    if not tracker.insert(generator):
        return False
    letters = engine.generator_letters(r, s)
    frontier = [generator]
    basis_vectors = [generator]
    ordinals = [0]
    while frontier:
        new_frontier = []
        for vec in frontier:
            for letter in letters:
                mat = tab.letter_right_matrix(letter)
                image = [ctx.zero()] * nbasis
                for a in range(nbasis):
                    if ctx.is_zero(vec[a]):
                        continue
                    for c in range(nbasis):
                        if not ctx.is_zero(mat[c][a]):
                            image[c] = ctx.add(image[c],
                                               ctx.mul(vec[a], mat[c][a]))
                image = project(image)
                if tracker.insert(image):
                    new_frontier.append(image)
                    basis_vectors.append(image)
                    ordinals.append(tracker.count - 1)
        frontier = new_frontier
    if tracker.rank != dim:
        return False
    # traces of every basis word must match the cell module layer
    frame = _initial_offset(label, r, s, words.cell_index_set(label, r, s))
    reference = _layer_trace_table(tab, start, dim, frame)
    for b in range(nbasis):
        acc = ctx.zero()
        for i, vec in enumerate(basis_vectors):
            image = [ctx.zero()] * nbasis
            for a in range(nbasis):
                if ctx.is_zero(vec[a]):
                    continue
                for c, val in tab.product(a, b).items():
                    image[c] = ctx.add(image[c], ctx.mul(vec[a], val))
            expr = tracker.express(project(image))
            if expr is None:
                return False
            acc = ctx.add(acc, expr.get(ordinals[i], ctx.zero()))
        if not ctx.eq(acc, reference[b]):
            return False
    return True


# ---------------------------------------------------------------------------
# the image inside endomorphisms of the tensor space
# ---------------------------------------------------------------------------

def _operator_rows(ctx, n, r, s, basis):
    """One row per basis word: its action on every standard tensor index,
    flattened over all index pairs."""
    indices = list(itertools.product(range(1, n + 1), repeat=r + s))
    slot = {idx: k for k, idx in enumerate(indices)}
    width = len(indices)
    rows = []
    for rec in basis:
        row = [ctx.zero()] * (width * width)
        for col, idx in enumerate(indices):
            image = tensor.act_word(tensor.TensorVector.basis(ctx, idx),
                                    rec.element, n, r, s)
            for out_idx, value in image.items():
                row[slot[out_idx] * width + col] = value
        rows.append(row)
    return rows


def _as_fraction(value):
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.numerator), int(value.denominator))


def _fit_rational(points, values, check_points, check_values):
    """Fit value(t) = P(t)/Q(t) with deg P, Q <= d, exact, smallest d that
    also matches the held-out points; returns (P, Q) coefficient lists."""
    plain = RationalPointContext(2, 0)
    for d in range(0, (len(points) - 1) // 2 + 1):
        need = 2 * d + 2
        if need > len(points):
            break
        rows = []
        for t, v in zip(points, values):
            tq = Fraction(t)
            row = [tq ** k for k in range(d + 1)]
            row.extend(-v * tq ** k for k in range(d + 1))
            rows.append(row)
        for vec in linalg.kernel_basis(plain, rows, 2 * (d + 1)):
            pcoeffs = vec[: d + 1]
            qcoeffs = vec[d + 1:]
            if all(c == 0 for c in qcoeffs):
                continue
            ok = True
            for t, v in zip(check_points, check_values):
                tq = Fraction(t)
                qval = sum(Fraction(c) * tq ** k
                           for k, c in enumerate(qcoeffs))
                pval = sum(Fraction(c) * tq ** k
                           for k, c in enumerate(pcoeffs))
                if qval == 0 or pval != v * qval:
                    ok = False
                    break
            if ok:
                return [Fraction(c) for c in pcoeffs], \
                    [Fraction(c) for c in qcoeffs]
    raise RankCertificationFailed("no small rational function fits the data")


def _poly_scalar(spec, coeffs):
    total = scalars.zero(spec)
    for k, c in enumerate(coeffs):
        if c:
            total = total + scalars.monomial(spec, c, k, 0)
    return total


_SW_MEMO = {}


def schur_weyl_rank(n, r, s):
    """Exact dimension of the image of the algebra inside the endomorphism
    ring of the mixed tensor space with ``n`` rows.

    The lower bound is a modular rank at a rational sample point; when it
    falls short of the number of basis words, the gap is certified by
    exhibiting symbolically verified kernel elements.
    """
    key = (n, r, s)
    if key in _SW_MEMO:
        return _SW_MEMO[key]
    basis = engine.cell_basis(r, s)
    nbasis = len(basis)
    lower = 0
    for t in (2, 3):
        ctx = RationalPointContext(t, n)
        rows = _operator_rows(ctx, n, r, s, basis)
        lower = max(lower, linalg.modp_rank_robust(rows))
        if lower == nbasis:
            _SW_MEMO[key] = nbasis
            return nbasis
    gap = nbasis - lower
    kernels = _kernel_interpolation(n, r, s, basis, gap)
    if len(kernels) != gap:
        raise RankCertificationFailed(
            "found %d certified kernel elements, wanted %d"
            % (len(kernels), gap))
    _SW_MEMO[key] = lower
    return lower


def _kernel_interpolation(n, r, s, basis, gap):
    """Canonical kernel vectors over the rho = q^n field, interpolated from
    rational sample points and then verified symbolically."""
    nbasis = len(basis)
    sample_ts = [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13]
    per_point = []
    for t in sample_ts:
        ctx = RationalPointContext(t, n)
        rows = _operator_rows(ctx, n, r, s, basis)
        rows_t = [[rows[a][pos] for a in range(nbasis)]
                  for pos in range(len(rows[0]))]
        rows_t = [row for row in rows_t if any(row)]
        kern = linalg.kernel_basis(ctx, rows_t, nbasis)
        if len(kern) != gap:
            raise RankCertificationFailed(
                "kernel dimension varies across sample points")
        per_point.append(kern)
    spec = FieldSpec.qpower(n)
    fit_ts, check_ts = sample_ts[:-3], sample_ts[-3:]
    out = []
    for which in range(gap):
        entries = []
        for pos in range(nbasis):
            vals = [_as_fraction(per_point[i][which][pos])
                    for i in range(len(sample_ts))]
            fit_vals, check_vals = vals[:-3], vals[-3:]
            if not any(vals):
                entries.append(scalars.zero(spec))
                continue
            pc, qc = _fit_rational(fit_ts, fit_vals, check_ts, check_vals)
            entries.append(_poly_scalar(spec, pc) / _poly_scalar(spec, qc))
        _verify_kernel_element(n, r, s, basis, spec, entries)
        out.append(entries)
    return out


def _verify_kernel_element(n, r, s, basis, spec, entries):
    """Exact check: the combination annihilates every standard index."""
    ctx = FieldContext(spec)
    nonzero = [(a, entries[a]) for a in range(len(basis))
               if not scalars.is_zero(entries[a])]
    if not nonzero:
        raise RankCertificationFailed("interpolated kernel element is zero")
    for idx in itertools.product(range(1, n + 1), repeat=r + s):
        total = tensor.TensorVector.zero(ctx)
        for a, coeff in nonzero:
            image = tensor.act_word(tensor.TensorVector.basis(ctx, idx),
                                    basis[a].element, n, r, s)
            total = total.add(image.scale(coeff))
        if not total.is_zero():
            raise RankCertificationFailed(
                "the interpolated kernel element does not annihilate "
                "the tensor space")


# ---------------------------------------------------------------------------
# presentation relations on the tensor space
# ---------------------------------------------------------------------------

def random_tensor_vector(ctx, n, size, rng, terms=4):
    """A sparse random vector with small monomial coefficients."""
    entries = {}
    for _ in range(terms):
        idx = tuple(rng.randrange(1, n + 1) for _ in range(size))
        entries[idx] = ctx.from_monomial(rng.randrange(1, 5),
                                         rng.randrange(-2, 3))
    return tensor.TensorVector(ctx, entries)


def relation_suite(r, s, field=None, n=None, sample=None, seed=11):
    """Names of defining relations that fail as exact operator identities
    on the tensor space (empty list means the whole suite holds).

    By default every standard basis vector is checked; ``sample`` switches
    to that many pseudo-random vectors drawn from ``seed``.
    """
    n = (r + s) if n is None else n
    spec = FieldSpec.qpower(n) if field is None else _as_spec(field)
    ctx = FieldContext(spec)
    if sample is None:
        vectors = [tensor.TensorVector.basis(ctx, idx)
                   for idx in itertools.product(range(1, n + 1),
                                                repeat=r + s)]
    else:
        rng = random.Random(seed)
        vectors = [random_tensor_vector(ctx, n, r + s, rng)
                   for _ in range(sample)]
    failures = []
    for name, lhs, rhs in words.presentation_relations(r, s):
        for v in vectors:
            a = tensor.act_word(v, lhs, n, r, s)
            b = tensor.act_word(v, rhs, n, r, s)
            if not (a == b):
                failures.append(name)
                break
    return failures


# ---------------------------------------------------------------------------
# singular vector dimensions
# ---------------------------------------------------------------------------

def singular_dimension_check(r, s, field=None, n=None):
    """For every label: the singular vectors are independent, annihilated
    by all divided powers, and span the full singular space of their
    weight.  Returns {label: dimension}."""
    n = (r + s) if n is None else n
    spec = FieldSpec.qpower(n) if field is None else _as_spec(field)
    ctx = FieldContext(spec)
    out = {}
    for label in combinat.enumerate_labels(r, s):
        vectors = [tensor.singular_vector(label, t, d, n, spec)
                   for t, d in singular_index_set(label, r, s)]
        support = sorted(set(idx for v in vectors for idx, _ in v.items()))
        slot = {idx: k for k, idx in enumerate(support)}
        tracker = SpanTracker(ctx, len(support))
        for vec in vectors:
            coords = [ctx.zero()] * len(support)
            for idx, value in vec.items():
                coords[slot[idx]] = value
            if not tracker.insert(coords):
                raise OracleMismatch(
                    "singular vectors are dependent at %s"
                    % label_text(label))
        for vec in vectors:
            for i in range(1, n):
                for ell in range(1, r + s + 1):
                    image = tensor.act_divided_power(vec, i, ell, n, r, s)
                    if not image.is_zero():
                        raise OracleMismatch(
                            "a vector is not singular at %s"
                            % label_text(label))
        first = next(iter(vectors[0].items()))[0]
        wt = tensor.weight_of_index(first, n, r, s)
        space = tensor.singular_space(wt, n, r, s, spec=spec)
        if len(space) != len(vectors):
            raise OracleMismatch(
                "the singular space at %s has dimension %d, expected %d"
                % (label_text(label), len(space), len(vectors)))
        out[label] = len(vectors)
    return out


# ---------------------------------------------------------------------------
# route agreement and large-shape certificates
# ---------------------------------------------------------------------------

def route_agreement(r, s, n=None, seed=0, cache_dir=None):
    """Both constructions of every cell module at rho = q^n must agree on
    the Gram rank and on the trace of every basis word."""
    n = (r + s) if n is None else n
    spec = FieldSpec.qpower(n)
    tab = _resolve_table(r, s, spec, seed=seed, cache_dir=cache_dir)
    ctx = tab.ctx
    for label in combinat.enumerate_labels(r, s):
        start, dim = _table_layer(tab, label)
        frame = _initial_offset(label, r, s,
                                words.cell_index_set(label, r, s))
        table_traces = _layer_trace_table(tab, start, dim, frame)
        table_rank = gram_matrix(r, s, label, table=tab).rank
        module = cell_module(r, s, label, field=spec,
                             provenance="SingularVectors", n=n)
        sing_traces = []
        for b in range(tab.size):
            mat = module.element_matrix(tab.basis[b].element)
            acc = ctx.zero()
            for j in range(module.dim):
                acc = ctx.add(acc, mat[j][j])
            sing_traces.append(acc)
        form = [[tensor.contravariant_form(u, v, n, r, s)
                 for v in module.vectors] for u in module.vectors]
        sing_rank = linalg.rank(ctx, form) if form else 0
        if table_rank != sing_rank:
            raise OracleMismatch(
                "Gram ranks disagree between the two constructions at %s"
                % label_text(label))
        for b in range(tab.size):
            if not ctx.eq(table_traces[b], sing_traces[b]):
                raise OracleMismatch(
                    "trace tables disagree between the two constructions "
                    "at %s" % label_text(label))
    return True


def _faithful_support(n, r, s):
    """Union of weight spaces holding every contraction layer: one sample
    index per number of matched pairs between the two sides."""
    out = []
    seen = set()
    for k in range(min(r, s) + 1):
        right = tuple(range(1, k + 1)) + tuple(range(r + 1, r + s - k + 1))
        idx = tuple(range(1, r + 1)) + right
        wt = tensor.weight_of_index(idx, n, r, s)
        if wt in seen:
            continue
        seen.add(wt)
        out.extend(tensor.weight_space(wt, n, r, s))
    return out


def gram_certificate_numeric(r, s, points=(2, 3, 5)):
    """Certify that every Gram determinant is generically nonzero by exact
    evaluation at rational sample points (sound one-sided certificate)."""
    labels = list(combinat.enumerate_labels(r, s))
    unresolved = set(range(len(labels)))
    n = r + s
    for t in points:
        if not unresolved:
            break
        ctx = RationalPointContext(t, n)
        support = _faithful_support(n, r, s)
        try:
            system = engine.CoordinateSystem.build(r, s, ctx=ctx, n=n,
                                                   support=support,
                                                   max_seeds=8)
        except RankCertificationFailed:
            continue
        layout = {}
        startpos = 0
        for label in labels:
            dim = combinat.cell_dimension(label, r, s)
            layout[label] = (startpos, dim)
            startpos += dim * dim
        for li in list(unresolved):
            label = labels[li]
            start, dim = layout[label]
            frame = _initial_offset(label, r, s,
                                    words.cell_index_set(label, r, s))
            entries = []
            for i in range(dim):
                row = []
                img_list = system.tensor_images[start + frame * dim + i]
                for j in range(dim):
                    rec = system.basis[start + j * dim + frame]
                    images = [tensor.act_word(img, rec.element, n, r, s)
                              for img in img_list]
                    coords = system._flatten(ctx, images, system.support)
                    sol = system._solve(coords, check=False)
                    row.append(sol[start + frame * dim + frame])
                entries.append(row)
            if linalg.rank(ctx, entries) == dim:
                unresolved.discard(li)
    return not unresolved


# ---------------------------------------------------------------------------
# assembled results and emitters
# ---------------------------------------------------------------------------

def analyze(r, s, field=None, seed=0, cache_dir=None):
    """Full exact report for one ground field: Gram ranks, decomposition
    matrix, blocks, and the oracle comparisons."""
    spec = _as_spec(field)
    dec = decomposition_matrix(r, s, field=spec, seed=seed,
                               cache_dir=cache_dir)
    computed = dec.is_identity()
    predicted = predicted_semisimple(r, s, spec)
    blocks1 = blocks1_comparison(r, s, field=spec, dec=dec, seed=seed,
                                 cache_dir=cache_dir)
    einfty = einfty_comparison(r, s, field=spec, seed=seed,
                               cache_dir=cache_dir)
    return {
        "r": r,
        "s": s,
        "field": spec.to_string(),
        "labels": [label_text(label) for label in dec.rows],
        "gram_ranks": [dec.gram_ranks[label] for label in dec.rows],
        "decomposition": {
            "columns": [label_text(label) for label in dec.columns],
            "entries": dec.entries,
        },
        "blocks": [[label_text(label) for label in block]
                   for block in dec.block_partition()],
        "oracles": {
            "semisimple": {"computed": computed, "predicted": predicted},
            "blocks1": blocks1,
            "einfty": einfty,
        },
    }


def oracle_violations(result):
    """List of oracle identifiers that failed in an analysis result."""
    out = []
    oracles = result["oracles"]
    if oracles["semisimple"]["computed"] != oracles["semisimple"]["predicted"]:
        out.append("semisimple")
    spec = FieldSpec.from_string(result["field"])
    if oracles["blocks1"] is False and \
            blocks1_applicable(result["r"], result["s"], spec):
        out.append("blocks1")
    if oracles["einfty"] is False:
        out.append("einfty")
    return out


def result_to_latex(result):
    """LaTeX tabular of the decomposition matrix of a result."""
    columns = result["decomposition"]["columns"]
    lines = []
    lines.append("%% decomposition matrix, field %s" % result["field"])
    lines.append(r"\begin{tabular}{l%s}" % ("r" * len(columns)))
    header = " & ".join([""] + [_latex_label(c) for c in columns])
    lines.append(header + r" \\")
    lines.append(r"\hline")
    for label, row in zip(result["labels"],
                          result["decomposition"]["entries"]):
        cells = " & ".join([_latex_label(label)] + [str(v) for v in row])
        lines.append(cells + r" \\")
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"


def _latex_label(text):
    head, rest = text.split(",", 1)
    lam1, lam2 = rest.split("|")
    fmt = lambda lam: "(" + lam.strip("[]") + ")"
    return r"$(%s;\,%s,\,%s)$" % (head[2:], fmt(lam1), fmt(lam2))


def result_to_csv(result):
    """CSV with one row per label: gram rank then multiplicities."""
    import csv
    import io
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "gram_rank"]
                    + list(result["decomposition"]["columns"]))
    for label, rank, row in zip(result["labels"], result["gram_ranks"],
                                result["decomposition"]["entries"]):
        writer.writerow([label, rank] + list(row))
    return buf.getvalue()
