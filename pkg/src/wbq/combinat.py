"""Partitions, bipartitions, tableaux, the cell-label poset, coset
representatives, e-restriction, and the dominant-weight map.

Partitions are tuples of weakly decreasing positive integers; bipartitions are
pairs of partitions.  A cell label is a pair (f, (lambda1, lambda2)) with
|lambda1| = r - f and |lambda2| = s - f.  Labels are partially ordered by
"f bigger first, then componentwise dominance"; the canonical total order
(descending f, then descending lexicographic on the bipartition) refines it.
"""

from fractions import Fraction
import itertools
import math

from .errors import RankTooSmall


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

def is_partition(lam):
    lam = tuple(lam)
    return all(isinstance(x, int) and x > 0 for x in lam) and \
        all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1))


def partitions(m, max_len=None):
    """All partitions of m (optionally with at most max_len parts), descending lex."""
    if m < 0:
        return []
    out = []

    def rec(remaining, largest, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        if max_len is not None and len(prefix) >= max_len:
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(m, m if m else 1, [])
    if m == 0:
        return [()]
    return out


def conjugate(lam):
    if not lam:
        return ()
    out = []
    for j in range(1, lam[0] + 1):
        out.append(sum(1 for x in lam if x >= j))
    return tuple(out)


def dominates(lam, mu):
    """lam >= mu in dominance order (partitions of the same size)."""
    if sum(lam) != sum(mu):
        raise ValueError("dominance compares partitions of equal size")
    acc_l = acc_m = 0
    for k in range(max(len(lam), len(mu))):
        acc_l += lam[k] if k < len(lam) else 0
        acc_m += mu[k] if k < len(mu) else 0
        if acc_l < acc_m:
            return False
    return True


def removable_nodes(lam):
    """Cells (i, j), 1-based, whose removal leaves a partition."""
    out = []
    for i, part in enumerate(lam, start=1):
        nxt = lam[i] if i < len(lam) else 0
        if part > nxt:
            out.append((i, part))
    return out


def addable_nodes(lam):
    """Cells (i, j), 1-based, whose addition yields a partition."""
    out = []
    prev = None
    for i, part in enumerate(lam, start=1):
        if prev is None or part < prev:
            out.append((i, part + 1))
        prev = part
    out.append((len(lam) + 1, 1))
    return out


def residue(node):
    i, j = node
    return j - i


def hook_std_count(lam):
    """Number of standard tableaux of shape lam, by the hook-length formula."""
    n = sum(lam)
    if n == 0:
        return 1
    conj = conjugate(lam)
    prod = 1
    for i, part in enumerate(lam, start=1):
        for j in range(1, part + 1):
            prod *= (part - j) + (conj[j - 1] - i) + 1
    val = Fraction(math.factorial(n), prod)
    assert val.denominator == 1
    return int(val)


# ---------------------------------------------------------------------------
# cell labels
# ---------------------------------------------------------------------------

class CellLabel:
    __slots__ = ("f", "lam1", "lam2")

    def __init__(self, f, lam1, lam2):
        self.f = int(f)
        self.lam1 = tuple(lam1)
        self.lam2 = tuple(lam2)
        if not (is_partition(self.lam1) and is_partition(self.lam2)):
            raise ValueError("label components must be partitions")

    def key(self):
        return (self.f, self.lam1, self.lam2)

    def sort_key(self):
        # canonical total order: descending f, then descending lex
        return (self.f, self.lam1, self.lam2)

    def conjugate(self):
        return CellLabel(self.f, conjugate(self.lam1), conjugate(self.lam2))

    def __eq__(self, other):
        return isinstance(other, CellLabel) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "CellLabel(f=%d, %s, %s)" % (self.f, self.lam1, self.lam2)

    def to_json(self):
        return {"f": self.f, "lambda1": list(self.lam1), "lambda2": list(self.lam2)}

    @staticmethod
    def from_json(obj):
        return CellLabel(obj["f"], obj["lambda1"], obj["lambda2"])


def enumerate_labels(r, s):
    """All cell labels for (r, s), sorted by the canonical total order."""
    if r < 1 or s < 1:
        raise ValueError("enumerate_labels requires r >= 1 and s >= 1")
    out = []
    for f in range(min(r, s) + 1):
        for lam1 in partitions(r - f):
            for lam2 in partitions(s - f):
                out.append(CellLabel(f, lam1, lam2))
    out.sort(key=CellLabel.sort_key, reverse=True)
    return out


def label_order(a, b):
    """Compare labels in the poset: 'gt' (a above b), 'lt', 'eq', 'incomparable'."""
    if a == b:
        return "eq"
    if a.f != b.f:
        return "gt" if a.f > b.f else "lt"
    if sum(a.lam1) != sum(b.lam1) or sum(a.lam2) != sum(b.lam2):
        return "incomparable"
    a_ge = dominates(a.lam1, b.lam1) and dominates(a.lam2, b.lam2)
    b_ge = dominates(b.lam1, a.lam1) and dominates(b.lam2, a.lam2)
    if a_ge and not b_ge:
        return "gt"
    if b_ge and not a_ge:
        return "lt"
    return "incomparable"


# ---------------------------------------------------------------------------
# tableaux
# ---------------------------------------------------------------------------

class TableauPair:
    """A pair of standard tableaux with entries shifted by f: component i has
    entry set {f+1, ..., f+|shape_i|}."""

    __slots__ = ("f", "rows1", "rows2")

    def __init__(self, f, rows1, rows2):
        self.f = int(f)
        self.rows1 = tuple(tuple(row) for row in rows1)
        self.rows2 = tuple(tuple(row) for row in rows2)

    def shape(self):
        return (tuple(len(row) for row in self.rows1),
                tuple(len(row) for row in self.rows2))

    def key(self):
        return (self.f, self.rows1, self.rows2)

    def __eq__(self, other):
        return isinstance(other, TableauPair) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "TableauPair(f=%d, %s, %s)" % (self.f, self.rows1, self.rows2)


def _row_fill(lam, start):
    rows = []
    k = start
    for part in lam:
        rows.append(tuple(range(k, k + part)))
        k += part
    return tuple(rows)


def _column_fill(lam, start):
    if not lam:
        return ()
    grid = [[None] * part for part in lam]
    k = start
    for j in range(lam[0]):
        for i in range(len(lam)):
            if j < lam[i]:
                grid[i][j] = k
                k += 1
    return tuple(tuple(row) for row in grid)


def initial_tableaux(lam, f):
    """(t^lambda, t_lambda): row-filled and column-filled, entries from f+1."""
    lam1, lam2 = lam
    t_row = TableauPair(f, _row_fill(lam1, f + 1), _row_fill(lam2, f + 1))
    t_col = TableauPair(f, _column_fill(lam1, f + 1), _column_fill(lam2, f + 1))
    return t_row, t_col


def _standard_tableaux_one(lam, start):
    """All standard tableaux of shape lam with entries start..start+|lam|-1."""
    n = sum(lam)
    if n == 0:
        return [()]
    out = []

    def rec(shape, filled):
        placed = sum(shape)
        if placed == 0:
            grid = [[None] * part for part in lam]
            for (i, j), v in filled.items():
                grid[i][j] = v
            out.append(tuple(tuple(row) for row in grid))
            return
        value = start + placed - 1
        for i, part in enumerate(shape):
            nxt = shape[i + 1] if i + 1 < len(shape) else 0
            if part > nxt and part > 0:
                new_shape = list(shape)
                new_shape[i] -= 1
                filled[(i, part - 1)] = value
                rec(tuple(x for x in new_shape if True), filled)
                del filled[(i, part - 1)]

    rec(tuple(lam), {})
    return out


def standard_tableaux(lam, f):
    """All TableauPairs of bipartition shape lam with the f-shifted entries."""
    lam1, lam2 = lam
    t1s = _standard_tableaux_one(lam1, f + 1)
    t2s = _standard_tableaux_one(lam2, f + 1)
    return [TableauPair(f, a, b) for a in t1s for b in t2s]


def _perm_from_tableaux(t_initial, t_target):
    """Mapping entry-of-t_initial -> entry-of-t_target, as a dict."""
    out = {}
    for row_a, row_b in zip(t_initial, t_target):
        for a, b in zip(row_a, row_b):
            out[a] = b
    return out


def _reduced_word_from_perm(perm, f, size):
    """Reduced word (list of adjacent-transposition indices, applied left to
    right on values) for the permutation of {f+1, ..., f+size} given as a dict."""
    oneline = [perm[f + k] - f for k in range(1, size + 1)]
    word = []
    changed = True
    while changed:
        changed = False
        for i in range(1, size):
            if oneline[i - 1] > oneline[i]:
                word.append(f + i)
                oneline[i - 1], oneline[i] = oneline[i], oneline[i - 1]
                changed = True
                break
    return word


class DPair:
    """The permutation pair d(t) with t^lambda . d(t) = t, plus reduced words."""

    __slots__ = ("perm1", "perm2", "word1", "word2", "length")

    def __init__(self, perm1, perm2, word1, word2):
        self.perm1 = perm1
        self.perm2 = perm2
        self.word1 = list(word1)
        self.word2 = list(word2)
        self.length = len(self.word1) + len(self.word2)


def d_of(t):
    """d(t) for a TableauPair t, relative to the row-filled initial tableau."""
    shape1, shape2 = t.shape()
    t_row = TableauPair(t.f, _row_fill(shape1, t.f + 1), _row_fill(shape2, t.f + 1))
    p1 = _perm_from_tableaux(t_row.rows1, t.rows1)
    p2 = _perm_from_tableaux(t_row.rows2, t.rows2)
    w1 = _reduced_word_from_perm(p1, t.f, sum(shape1))
    w2 = _reduced_word_from_perm(p2, t.f, sum(shape2))
    return DPair(p1, p2, w1, w2)


def apply_word_to_tableau(t, word, component):
    """Apply adjacent transpositions (left to right, acting on entries)."""
    rows = t.rows1 if component == 1 else t.rows2
    grid = [list(row) for row in rows]
    for i in word:
        for row in grid:
            for k, v in enumerate(row):
                if v == i:
                    row[k] = i + 1
                elif v == i + 1:
                    row[k] = i
    if component == 1:
        return TableauPair(t.f, grid, t.rows2)
    return TableauPair(t.f, t.rows1, grid)


# ---------------------------------------------------------------------------
# coset representatives
# ---------------------------------------------------------------------------

class CosetRep:
    """Encodes s_{f,i_f} s*_{f,j_f} ... s_{1,i_1} s*_{1,j_1} with
    1 <= i_1 < ... < i_f <= r and k <= j_k <= s.

    ``word`` lists the letters left to right as ("g", index) for r-side
    transpositions and ("gs", index) for s-side ones.
    """

    __slots__ = ("f", "i_list", "j_list", "word")

    def __init__(self, f, i_list, j_list):
        self.f = int(f)
        self.i_list = tuple(i_list)
        self.j_list = tuple(j_list)
        word = []
        for k in range(self.f, 0, -1):
            for a in range(k, self.i_list[k - 1]):
                word.append(("g", a))
            for b in range(k, self.j_list[k - 1]):
                word.append(("gs", b))
        self.word = tuple(word)

    def key(self):
        return (self.f, self.i_list, self.j_list)

    def __eq__(self, other):
        return isinstance(other, CosetRep) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "CosetRep(f=%d, i=%s, j=%s)" % (self.f, self.i_list, self.j_list)


def coset_reps(r, s, f):
    """The complete list of coset representatives for the given layer."""
    if not (0 <= f <= min(r, s)):
        raise ValueError("need 0 <= f <= min(r, s)")
    out = []
    for i_list in itertools.combinations(range(1, r + 1), f):
        j_ranges = [range(k, s + 1) for k in range(1, f + 1)]
        for j_list in itertools.product(*j_ranges):
            out.append(CosetRep(f, i_list, j_list))
    return out


# ---------------------------------------------------------------------------
# e-restriction
# ---------------------------------------------------------------------------

def _one_restricted(lam, e):
    if e == math.inf:
        return True
    lam = tuple(lam) + (0,)
    return all(lam[i] - lam[i + 1] < e for i in range(len(lam) - 1))


def _one_regular(lam, e):
    if e == math.inf:
        return True
    return all(lam.count(v) < e for v in set(lam))


def e_restricted(lam, e):
    """Componentwise: lambda_i - lambda_{i+1} < e in both components."""
    return _one_restricted(lam[0], e) and _one_restricted(lam[1], e)


def e_regular(lam, e):
    """Componentwise: no part repeated e or more times in either component."""
    return _one_regular(lam[0], e) and _one_regular(lam[1], e)


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def phi_map(label, n):
    """The dominant weight (lam1..., 0...0, -reversed(lam2)) of length n."""
    r = label.f + sum(label.lam1)
    s = label.f + sum(label.lam2)
    if n < r + s:
        raise RankTooSmall("phi_map requires n >= r + s = %d" % (r + s))
    k, l = len(label.lam1), len(label.lam2)
    return tuple(label.lam1) + (0,) * (n - k - l) + tuple(-x for x in reversed(label.lam2))


def weight_fits(label, n):
    """Whether the label's weight can be written with n coordinates."""
    return len(label.lam1) + len(label.lam2) <= n


def mixed_weights(r, s, n):
    """All weights of the mixed tensor space: integer n-vectors whose positive
    part sums to r - f and negative part to f - s for some 0 <= f <= min(r,s)."""
    out = set()

    def rec(pos_left, neg_left, idx, current):
        if idx == n:
            if pos_left == 0 and neg_left == 0:
                out.add(tuple(current))
            return
        for v in range(-neg_left, pos_left + 1):
            current.append(v)
            rec(pos_left - max(v, 0), neg_left - max(-v, 0), idx + 1, current)
            current.pop()

    for f in range(min(r, s) + 1):
        rec(r - f, s - f, 0, [])
    return out


def dominant_weight_order(nu, mu):
    """nu >= mu in the dominance order on weights of equal coordinate sum."""
    if len(nu) != len(mu) or sum(nu) != sum(mu):
        raise ValueError("weights must have equal length and sum")
    acc = 0
    for a, b in zip(nu, mu):
        acc += a - b
        if acc < 0:
            return False
    return True


def cell_dimension(label, r, s):
    """dim C(f, lambda) = |Std(lambda)| * |D^f_{r,s}|."""
    std = hook_std_count(label.lam1) * hook_std_count(label.lam2)
    dcount = math.comb(r, label.f) * math.factorial(s) // math.factorial(s - label.f)
    return std * dcount
