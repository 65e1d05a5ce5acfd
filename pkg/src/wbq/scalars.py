"""Exact coefficient fields parameterized by (q, rho).

Three families of fields are supported:

* ``generic``      -- rational functions in two variables q, rho over Q.
* ``qpow:a``       -- rational functions in q over Q, with rho identified with q^a.
* ``cyclo:m``      -- the cyclotomic field Q(zeta_m) with q = zeta_m, and rho either
                      a fixed power zeta_m^a or a fresh transcendental.

All arithmetic is exact; equality is decided on canonical normal forms.  The
quantum characteristic e is the multiplicative order of q^2 (infinite in the
first two families).
"""

from fractions import Fraction
import math

from sympy import QQ as _QQ
from sympy import Symbol as _Symbol
from sympy import cyclotomic_poly as _cyclotomic_poly
from sympy.polys.fields import field as _frac_field

from .errors import DenominatorVanishes

INFINITY = float("inf")

_GFIELD, _GQ, _GRHO = _frac_field("q,rho", _QQ)
_QFIELD, _QGEN = _frac_field("q", _QQ)


def _qq(c):
    c = Fraction(c)
    return _QQ(c.numerator, c.denominator)


# ---------------------------------------------------------------------------
# dense polynomial helpers over Fraction (ascending coefficient lists)
# ---------------------------------------------------------------------------

def _ptrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _padd(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return _ptrim(out)


def _pneg(a):
    return [-x for x in a]


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _ptrim(out)


def _pdivmod(a, b):
    """Division with remainder over Fraction coefficients; b nonzero."""
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] * inv
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] -= c * y
        _ptrim(a)
    return _ptrim(q), a


def _pxgcd(a, b):
    """Extended Euclid: returns (g, u, v) with u*a + v*b = g, g monic (or [])."""
    r0, r1 = list(a), list(b)
    u0, u1 = [Fraction(1)], []
    v0, v1 = [], [Fraction(1)]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, _padd(u0, _pneg(_pmul(q, u1)))
        v0, v1 = v1, _padd(v0, _pneg(_pmul(q, v1)))
    if r0:
        lead = r0[-1]
        r0 = [x / lead for x in r0]
        u0 = [x / lead for x in u0]
        v0 = [x / lead for x in v0]
    return r0, u0, v0


_phi_cache = {}


def _phi(m):
    """Coefficients of the m-th cyclotomic polynomial, ascending, as Fractions."""
    if m not in _phi_cache:
        x = _Symbol("x")
        poly = _cyclotomic_poly(m, x).as_poly(x)
        coeffs = [Fraction(int(c)) for c in reversed(poly.all_coeffs())]
        # precompute reductions of x^d .. x^(2d-2) modulo Phi_m
        d = len(coeffs) - 1
        pows = []
        cur = [Fraction(0)] * d + [Fraction(1)]
        for _ in range(d, 2 * d - 1):
            _, rem = _pdivmod(cur, coeffs)
            pows.append(rem + [Fraction(0)] * (d - len(rem)))
            cur = [Fraction(0)] + cur
        _phi_cache[m] = (coeffs, d, pows)
    return _phi_cache[m]


class CycloNum:
    """An element of Q(zeta_m), stored as a residue modulo the m-th cyclotomic
    polynomial with Fraction coefficients (ascending, fixed length)."""

    __slots__ = ("m", "c")

    def __init__(self, m, coeffs):
        phi_c, d, _ = _phi(m)
        c = [Fraction(x) for x in coeffs]
        if len(c) > d:
            _, c = _pdivmod(c, phi_c)
        c = c + [Fraction(0)] * (d - len(c))
        self.m = m
        self.c = tuple(c[:d])

    @staticmethod
    def const(m, value):
        return CycloNum(m, [Fraction(value)])

    @staticmethod
    def zeta_pow(m, k):
        _, d, _ = _phi(m)
        k %= m
        if k < d:
            coeffs = [Fraction(0)] * k + [Fraction(1)]
            return CycloNum(m, coeffs)
        cur = CycloNum.zeta_pow(m, d - 1)
        z = CycloNum(m, [Fraction(0), Fraction(1)])
        for _ in range(k - d + 1):
            cur = cur * z
        return cur

    def is_zero(self):
        return all(x == 0 for x in self.c)

    def __eq__(self, other):
        return isinstance(other, CycloNum) and self.m == other.m and self.c == other.c

    def __hash__(self):
        return hash((self.m, self.c))

    def __add__(self, other):
        return CycloNum(self.m, [x + y for x, y in zip(self.c, other.c)])

    def __sub__(self, other):
        return CycloNum(self.m, [x - y for x, y in zip(self.c, other.c)])

    def __neg__(self):
        return CycloNum(self.m, [-x for x in self.c])

    def __mul__(self, other):
        _, d, pows = _phi(self.m)
        a, b = self.c, other.c
        out = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        res = out[:d]
        for k in range(d, 2 * d - 1):
            x = out[k]
            if x:
                red = pows[k - d]
                for i in range(d):
                    if red[i]:
                        res[i] += x * red[i]
        return CycloNum(self.m, res)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        phi_c, _, _ = _phi(self.m)
        g, u, _ = _pxgcd(_ptrim(list(self.c)), phi_c)
        if len(g) != 1:
            raise ZeroDivisionError("element not invertible modulo cyclotomic polynomial")
        inv_lead = 1 / g[0]
        return CycloNum(self.m, [x * inv_lead for x in u])

    def scale(self, fr):
        fr = Fraction(fr)
        return CycloNum(self.m, [x * fr for x in self.c])

    def galois_invert_zeta(self):
        """Apply the automorphism zeta -> zeta^{-1}."""
        zinv = CycloNum.zeta_pow(self.m, self.m - 1)
        acc = CycloNum.const(self.m, 0)
        power = CycloNum.const(self.m, 1)
        for x in self.c:
            if x:
                acc = acc + power.scale(x)
            power = power * zinv
        return acc

    def __repr__(self):
        return "CycloNum(m=%d, %s)" % (self.m, list(self.c))


# ---------------------------------------------------------------------------
# dense polynomials in rho over CycloNum (ascending lists), and their fractions
# ---------------------------------------------------------------------------

def _ctrim(c):
    while c and c[-1].is_zero():
        c.pop()
    return c


def _cadd(m, a, b):
    n = max(len(a), len(b))
    z = CycloNum.const(m, 0)
    out = [z] * n
    for i, x in enumerate(a):
        out[i] = out[i] + x
    for i, x in enumerate(b):
        out[i] = out[i] + x
    return _ctrim(out)


def _cneg(a):
    return [-x for x in a]


def _cmul(m, a, b):
    if not a or not b:
        return []
    z = CycloNum.const(m, 0)
    out = [z] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x.is_zero():
            for j, y in enumerate(b):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
    return _ctrim(out)


def _cdivmod(m, a, b):
    a = list(a)
    z = CycloNum.const(m, 0)
    q = [z] * max(0, len(a) - len(b) + 1)
    inv = b[-1].inverse()
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] * inv
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = a[k + i] - c * y
        _ctrim(a)
    return _ctrim(q), a


def _cgcd(m, a, b):
    r0, r1 = list(a), list(b)
    while r1:
        _, r = _cdivmod(m, r0, r1)
        r0, r1 = r1, r
    if r0:
        inv = r0[-1].inverse()
        r0 = [x * inv for x in r0]
    return r0


class CycloFrac:
    """A rational function in rho over Q(zeta_m), reduced with monic denominator."""

    __slots__ = ("m", "num", "den")

    def __init__(self, m, num, den, normalized=False):
        if normalized:
            self.m = m
            self.num = tuple(num)
            self.den = tuple(den)
            return
        num = _ctrim(list(num))
        den = _ctrim(list(den))
        if not den:
            raise ZeroDivisionError("zero denominator in rho-fraction")
        if not num:
            self.m = m
            self.num = ()
            self.den = (CycloNum.const(m, 1),)
            return
        g = _cgcd(m, num, den)
        if len(g) > 1 or (g and not (g[0] - CycloNum.const(m, 1)).is_zero()):
            num, _ = _cdivmod(m, num, g)
            den, _ = _cdivmod(m, den, g)
        inv = den[-1].inverse()
        num = [x * inv for x in num]
        den = [x * inv for x in den]
        self.m = m
        self.num = tuple(num)
        self.den = tuple(den)

    @staticmethod
    def const(m, value):
        return CycloFrac(m, [CycloNum.const(m, value)], [CycloNum.const(m, 1)])

    @staticmethod
    def from_cyclo(m, x):
        return CycloFrac(m, [x], [CycloNum.const(m, 1)])

    @staticmethod
    def rho_power(m, k):
        one = CycloNum.const(m, 1)
        zero = CycloNum.const(m, 0)
        if k >= 0:
            return CycloFrac(m, [zero] * k + [one], [one])
        return CycloFrac(m, [one], [zero] * (-k) + [one])

    def is_zero(self):
        return not self.num

    def __eq__(self, other):
        return (isinstance(other, CycloFrac) and self.m == other.m
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.m, self.num, self.den))

    def __add__(self, other):
        m = self.m
        n = _cadd(m, _cmul(m, list(self.num), list(other.den)),
                  _cmul(m, list(other.num), list(self.den)))
        d = _cmul(m, list(self.den), list(other.den))
        return CycloFrac(m, n, d)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CycloFrac(self.m, _cneg(list(self.num)), list(self.den), normalized=True)

    def __mul__(self, other):
        m = self.m
        return CycloFrac(m, _cmul(m, list(self.num), list(other.num)),
                         _cmul(m, list(self.den), list(other.den)))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rho-fraction")
        return CycloFrac(self.m, list(self.den), list(self.num))

    def flip(self):
        """Apply zeta -> zeta^{-1}, rho -> rho^{-1}."""
        m = self.m
        out = CycloFrac.const(m, 0)
        for i, x in enumerate(self.num):
            if not x.is_zero():
                out = out + CycloFrac.from_cyclo(m, x.galois_invert_zeta()) * CycloFrac.rho_power(m, -i)
        dens = CycloFrac.const(m, 0)
        for i, x in enumerate(self.den):
            if not x.is_zero():
                dens = dens + CycloFrac.from_cyclo(m, x.galois_invert_zeta()) * CycloFrac.rho_power(m, -i)
        return out * dens.inverse()

    def __repr__(self):
        return "CycloFrac(m=%d, num=%s, den=%s)" % (self.m, list(self.num), list(self.den))


# ---------------------------------------------------------------------------
# field specifications
# ---------------------------------------------------------------------------

class FieldSpec:
    """Description of a coefficient field: generic, rho=q^a, or cyclotomic."""

    __slots__ = ("kind", "a", "m", "rho_kind", "rho_a")

    def __init__(self, kind, a=None, m=None, rho_kind=None, rho_a=None):
        self.kind = kind
        self.a = a
        self.m = m
        self.rho_kind = rho_kind
        self.rho_a = rho_a

    @staticmethod
    def generic():
        return FieldSpec("generic")

    @staticmethod
    def qpower(a):
        return FieldSpec("qpow", a=int(a))

    @staticmethod
    def cyclotomic(m, rho="free"):
        m = int(m)
        if m in (1, 2):
            raise ValueError("cyclotomic index m must not be 1 or 2 (q^2 = 1 is excluded)")
        if rho == "free":
            return FieldSpec("cyclo", m=m, rho_kind="free")
        return FieldSpec("cyclo", m=m, rho_kind="power", rho_a=int(rho) % m)

    @staticmethod
    def from_string(text):
        """Parse 'generic', 'qpow:<a>', or 'cyclo:<m>[,rho=zeta^<a>|rho=free]'."""
        text = text.strip()
        if text == "generic":
            return FieldSpec.generic()
        if text.startswith("qpow:"):
            return FieldSpec.qpower(int(text[5:]))
        if text.startswith("cyclo:"):
            body = text[6:]
            parts = body.split(",")
            m = int(parts[0])
            rho = "free"
            for extra in parts[1:]:
                extra = extra.strip()
                if extra == "rho=free":
                    rho = "free"
                elif extra.startswith("rho=zeta^"):
                    rho = int(extra[len("rho=zeta^"):])
                else:
                    raise ValueError("unrecognized field option: %r" % extra)
            return FieldSpec.cyclotomic(m, rho)
        raise ValueError("unrecognized field: %r" % text)

    def to_string(self):
        if self.kind == "generic":
            return "generic"
        if self.kind == "qpow":
            return "qpow:%d" % self.a
        if self.rho_kind == "free":
            return "cyclo:%d,rho=free" % self.m
        return "cyclo:%d,rho=zeta^%d" % (self.m, self.rho_a)

    def key(self):
        return (self.kind, self.a, self.m, self.rho_kind, self.rho_a)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "FieldSpec(%s)" % self.to_string()


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

class Scalar:
    """An exact element of the field described by ``spec``."""

    __slots__ = ("spec", "rep")

    def __init__(self, spec, rep):
        self.spec = spec
        self.rep = rep

    def _check(self, other):
        if self.spec != other.spec:
            raise ValueError("scalar field mismatch: %s vs %s"
                             % (self.spec.to_string(), other.spec.to_string()))

    def __add__(self, other):
        self._check(other)
        return Scalar(self.spec, self.rep + other.rep)

    def __sub__(self, other):
        self._check(other)
        return Scalar(self.spec, self.rep - other.rep)

    def __neg__(self):
        return Scalar(self.spec, -self.rep)

    def __mul__(self, other):
        self._check(other)
        return Scalar(self.spec, self.rep * other.rep)

    def __truediv__(self, other):
        self._check(other)
        if is_zero(other):
            raise ZeroDivisionError("division by zero scalar")
        if isinstance(self.rep, (CycloNum, CycloFrac)):
            return Scalar(self.spec, self.rep * other.rep.inverse())
        return Scalar(self.spec, self.rep / other.rep)

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.spec == other.spec and self.rep == other.rep

    def __hash__(self):
        return hash((self.spec.key(), repr(self.rep)))

    def __repr__(self):
        return to_text(self)


def zero(spec):
    return from_fraction(0, spec)


def one(spec):
    return from_fraction(1, spec)


def from_fraction(c, spec):
    c = Fraction(c)
    if spec.kind == "generic":
        return Scalar(spec, _GFIELD.ground_new(_qq(c)))
    if spec.kind == "qpow":
        return Scalar(spec, _QFIELD.ground_new(_qq(c)))
    if spec.rho_kind == "power":
        return Scalar(spec, CycloNum.const(spec.m, c))
    return Scalar(spec, CycloFrac.const(spec.m, c))


def from_int(n, spec):
    return from_fraction(Fraction(n), spec)


def monomial(spec, c, qexp=0, rhoexp=0):
    """The scalar c * q^qexp * rho^rhoexp in the given field."""
    c = Fraction(c)
    if c == 0:
        return zero(spec)
    if spec.kind == "generic":
        rep = _GFIELD.ground_new(_qq(c)) * _GQ ** qexp * _GRHO ** rhoexp
        return Scalar(spec, rep)
    if spec.kind == "qpow":
        rep = _QFIELD.ground_new(_qq(c)) * _QGEN ** (qexp + spec.a * rhoexp)
        return Scalar(spec, rep)
    if spec.rho_kind == "power":
        k = (qexp + spec.rho_a * rhoexp) % spec.m
        return Scalar(spec, CycloNum.zeta_pow(spec.m, k).scale(c))
    zpart = CycloNum.zeta_pow(spec.m, qexp % spec.m).scale(c)
    return Scalar(spec, CycloFrac.from_cyclo(spec.m, zpart) * CycloFrac.rho_power(spec.m, rhoexp))


def q_elem(spec):
    return monomial(spec, 1, 1, 0)


def rho_elem(spec):
    return monomial(spec, 1, 0, 1)


def is_zero(x):
    rep = x.rep
    if isinstance(rep, (CycloNum, CycloFrac)):
        return rep.is_zero()
    return rep == 0


def constant_value(x):
    """Return the Fraction value of x if x is a rational constant, else None."""
    rep = x.rep
    if isinstance(rep, CycloNum):
        if all(c == 0 for c in rep.c[1:]):
            return rep.c[0]
        return None
    if isinstance(rep, CycloFrac):
        if len(rep.den) == 1 and len(rep.num) <= 1:
            if not rep.num:
                return Fraction(0)
            val = Scalar(FieldSpec.cyclotomic(rep.m, 0), rep.num[0] * rep.den[0].inverse())
            return constant_value(val)
        return None
    num, den = rep.numer, rep.denom
    nt, dt = list(num.terms()), list(den.terms())
    if len(dt) != 1 or any(e != 0 for e in dt[0][0]):
        return None
    if not nt:
        return Fraction(0)
    if len(nt) != 1 or any(e != 0 for e in nt[0][0]):
        return None
    cn, cd = nt[0][1], dt[0][1]
    return Fraction(int(cn.numerator), int(cn.denominator)) / Fraction(int(cd.numerator), int(cd.denominator))


def flip(x):
    """The field automorphism q -> q^{-1}, rho -> rho^{-1}."""
    spec = x.spec
    if spec.kind in ("generic", "qpow"):
        num, den = x.rep.numer, x.rep.denom
        nume = zero(spec)
        dene = zero(spec)
        for mono, coeff in num.terms():
            c = Fraction(int(coeff.numerator), int(coeff.denominator))
            if spec.kind == "generic":
                nume = nume + monomial(spec, c, -mono[0], -mono[1])
            else:
                nume = nume + Scalar(spec, _QFIELD.ground_new(_qq(c)) * _QGEN ** (-mono[0]))
        for mono, coeff in den.terms():
            c = Fraction(int(coeff.numerator), int(coeff.denominator))
            if spec.kind == "generic":
                dene = dene + monomial(spec, c, -mono[0], -mono[1])
            else:
                dene = dene + Scalar(spec, _QFIELD.ground_new(_qq(c)) * _QGEN ** (-mono[0]))
        return nume / dene
    if spec.rho_kind == "power":
        return Scalar(spec, x.rep.galois_invert_zeta())
    return Scalar(spec, x.rep.flip())


def quantum_integer(ell, spec):
    """[ell] = (q^ell - q^{-ell}) / (q - q^{-1}), as a Laurent polynomial."""
    ell = int(ell)
    if ell < 0:
        return -quantum_integer(-ell, spec)
    out = zero(spec)
    for k in range(ell):
        out = out + monomial(spec, 1, ell - 1 - 2 * k, 0)
    return out


def quantum_factorial(ell, spec):
    out = one(spec)
    for k in range(2, int(ell) + 1):
        out = out * quantum_integer(k, spec)
    return out


def delta(spec):
    """(rho - rho^{-1}) / (q - q^{-1})."""
    num = rho_elem(spec) - monomial(spec, 1, 0, -1)
    den = q_elem(spec) - monomial(spec, 1, -1, 0)
    return num / den


def quantum_characteristic(spec):
    """The multiplicative order of q^2, or INFINITY."""
    if spec.kind in ("generic", "qpow"):
        return INFINITY
    m = spec.m
    return m // math.gcd(m, 2)


def specialize(x, target):
    """Map a generic-mode (or qpow-mode) scalar into the target field.

    Raises DenominatorVanishes if the denominator evaluates to zero.
    """
    spec = x.spec
    if spec == target:
        return x
    if spec.kind == "qpow":
        if target.kind == "qpow":
            raise ValueError("cannot respecialize between distinct qpow fields")
        if target.kind == "cyclo":
            if target.rho_kind != "power" or (spec.a - target.rho_a) % target.m != 0:
                raise ValueError("specialization would not respect rho = q^%d" % spec.a)
        elif target.kind == "generic":
            raise ValueError("cannot lift a qpow scalar to the generic field")

        def term_image(mono, c):
            return monomial(target, c, mono[0], 0)
    elif spec.kind == "generic":
        def term_image(mono, c):
            return monomial(target, c, mono[0], mono[1])
    else:
        raise ValueError("specialize expects a generic or qpow source scalar")

    num, den = x.rep.numer, x.rep.denom
    num_val = zero(target)
    for mono, coeff in num.terms():
        c = Fraction(int(coeff.numerator), int(coeff.denominator))
        num_val = num_val + term_image(mono, c)
    den_val = zero(target)
    for mono, coeff in den.terms():
        c = Fraction(int(coeff.numerator), int(coeff.denominator))
        den_val = den_val + term_image(mono, c)
    if is_zero(den_val):
        raise DenominatorVanishes("denominator vanishes under %s" % target.to_string())
    return num_val / den_val


def normalize(x):
    """Return x with a canonically normalized representation (idempotent)."""
    if isinstance(x.rep, CycloFrac):
        return Scalar(x.spec, CycloFrac(x.rep.m, list(x.rep.num), list(x.rep.den)))
    return x


# ---------------------------------------------------------------------------
# canonical text serialization
# ---------------------------------------------------------------------------

def _format_rational_poly(terms, names):
    """terms: list of (exponent tuple, Fraction); integer coefficients expected."""
    terms = sorted(terms, key=lambda t: t[0], reverse=True)
    chunks = []
    for mono, c in terms:
        if c == 0:
            continue
        parts = []
        abs_c = abs(c)
        factors = [(names[i], e) for i, e in enumerate(mono) if e != 0]
        if abs_c != 1 or not factors:
            parts.append(str(abs_c))
        for name, e in factors:
            parts.append(name if e == 1 else "%s^%d" % (name, e))
        body = "*".join(parts)
        if not chunks:
            chunks.append(body if c > 0 else "-" + body)
        else:
            chunks.append((" + " if c > 0 else " - ") + body)
    return "".join(chunks) if chunks else "0"


def _integerize(num_terms, den_terms):
    """Scale two Fraction-coefficient term lists to coprime integer contents,
    with the leading denominator coefficient positive."""
    denoms = [c.denominator for _, c in num_terms] + [c.denominator for _, c in den_terms]
    L = 1
    for d in denoms:
        L = L * d // math.gcd(L, d)
    num_terms = [(m, c * L) for m, c in num_terms]
    den_terms = [(m, c * L) for m, c in den_terms]
    g = 0
    for _, c in num_terms:
        g = math.gcd(g, int(c))
    for _, c in den_terms:
        g = math.gcd(g, int(c))
    if g > 1:
        num_terms = [(m, c / g) for m, c in num_terms]
        den_terms = [(m, c / g) for m, c in den_terms]
    lead = max(den_terms, key=lambda t: t[0])[1] if den_terms else Fraction(1)
    if lead < 0:
        num_terms = [(m, -c) for m, c in num_terms]
        den_terms = [(m, -c) for m, c in den_terms]
    return num_terms, den_terms


def _sympy_terms(poly):
    out = []
    for mono, coeff in poly.terms():
        out.append((tuple(mono), Fraction(int(coeff.numerator), int(coeff.denominator))))
    return out


def to_text(x):
    """Canonical text form; parse_scalar inverts it on the same field."""
    spec = x.spec
    if spec.kind in ("generic", "qpow"):
        names = ("q", "rho") if spec.kind == "generic" else ("q",)
        num_terms = _sympy_terms(x.rep.numer)
        den_terms = _sympy_terms(x.rep.denom)
        num_terms, den_terms = _integerize(num_terms, den_terms)
        num_s = _format_rational_poly(num_terms, names)
        den_s = _format_rational_poly(den_terms, names)
        if den_s == "1":
            return num_s
        return "(%s)/(%s)" % (num_s, den_s)
    if spec.rho_kind == "power":
        num_terms = [((i,), c) for i, c in enumerate(x.rep.c) if c != 0]
        den_terms = [((0,), Fraction(1))]
        num_terms, den_terms = _integerize(num_terms, den_terms)
        num_s = _format_rational_poly(num_terms, ("z",))
        den_s = _format_rational_poly(den_terms, ("z",))
        if den_s == "1":
            return num_s
        return "(%s)/(%s)" % (num_s, den_s)
    # cyclotomic with free rho: polynomials in rho with cyclotomic coefficients
    rep = x.rep
    all_fracs = []
    for cn in list(rep.num) + list(rep.den):
        all_fracs.extend(cn.c)
    L = 1
    for f in all_fracs:
        L = L * f.denominator // math.gcd(L, f.denominator)
    g = 0
    for f in all_fracs:
        g = math.gcd(g, int(f * L))
    if g == 0:
        g = 1

    def fmt_side(coeffs):
        chunks = []
        for i in reversed(range(len(coeffs))):
            cn = coeffs[i]
            if cn.is_zero():
                continue
            zterms = [((j,), c * L / g) for j, c in enumerate(cn.c) if c != 0]
            zs = _format_rational_poly(zterms, ("z",))
            if i == 0:
                chunks.append("(%s)" % zs)
            elif i == 1:
                chunks.append("(%s)*rho" % zs)
            else:
                chunks.append("(%s)*rho^%d" % (zs, i))
        return " + ".join(chunks) if chunks else "(0)"

    num_s = fmt_side(list(rep.num))
    den_s = fmt_side(list(rep.den))
    if den_s == "(1)":
        return num_s
    return "(%s)/(%s)" % (num_s, den_s)


class _Tok:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos] == " ":
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        got = self.peek()
        if got != ch:
            raise ValueError("expected %r at %d in %r" % (ch, self.pos, self.text))
        self.pos += 1

    def integer(self):
        self.peek()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ValueError("expected integer at %d in %r" % (start, self.text))
        return int(self.text[start:self.pos])

    def name(self):
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start:self.pos]


def _parse_poly(tok, spec, stop_chars):
    total = zero(spec)
    sign = 1
    first = True
    while True:
        ch = tok.peek()
        if ch == "" or ch in stop_chars:
            if first:
                raise ValueError("empty polynomial in %r" % tok.text)
            return total
        if ch == "+":
            tok.take("+")
            sign = 1
        elif ch == "-":
            tok.take("-")
            sign = -1
        elif not first:
            raise ValueError("expected +/- at %d in %r" % (tok.pos, tok.text))
        term = _parse_term(tok, spec)
        total = total + (term if sign == 1 else -term)
        first = False
        sign = 1


def _parse_term(tok, spec):
    coeff = Fraction(1)
    acc = None
    expect_factor = True
    while expect_factor:
        ch = tok.peek()
        if ch == "(":
            # parenthesized cyclotomic coefficient (free-rho fields)
            tok.take("(")
            inner = _parse_poly(tok, FieldSpec.cyclotomic(spec.m, 0) if spec.kind == "cyclo" else spec, ")")
            tok.take(")")
            part = Scalar(spec, CycloFrac.from_cyclo(spec.m, inner.rep)) if spec.rho_kind == "free" else inner
            acc = part if acc is None else acc * part
        elif ch.isdigit():
            n = tok.integer()
            if tok.peek() == "/":
                save = tok.pos
                tok.take("/")
                if tok.peek().isdigit():
                    coeff *= Fraction(n, tok.integer())
                else:
                    tok.pos = save
                    coeff *= n
            else:
                coeff *= n
        elif ch.isalpha():
            nm = tok.name()
            e = 1
            if tok.peek() == "^":
                tok.take("^")
                e = tok.integer()
            if nm == "q":
                part = monomial(spec, 1, e, 0)
            elif nm == "rho":
                part = monomial(spec, 1, 0, e)
            elif nm == "z":
                if spec.kind != "cyclo":
                    raise ValueError("'z' only valid in cyclotomic fields")
                part = monomial(spec, 1, e, 0)
            else:
                raise ValueError("unknown symbol %r" % nm)
            acc = part if acc is None else acc * part
        else:
            raise ValueError("unexpected %r at %d in %r" % (ch, tok.pos, tok.text))
        expect_factor = tok.peek() == "*"
        if expect_factor:
            tok.take("*")
    out = from_fraction(coeff, spec)
    if acc is not None:
        out = out * acc
    return out


def parse_scalar(text, spec):
    """Parse the canonical text form back into a Scalar of the given field."""
    text = text.strip()
    if text.startswith("("):
        depth = 0
        for i, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    if i + 1 < len(text) and text[i + 1] == "/":
                        num = parse_scalar(text[1:i], spec)
                        den_text = text[i + 2:].strip()
                        if not (den_text.startswith("(") and den_text.endswith(")")):
                            raise ValueError("malformed fraction: %r" % text)
                        den = parse_scalar(den_text[1:-1], spec)
                        return num / den
                    break
    tok = _Tok(text)
    val = _parse_poly(tok, spec, "")
    if tok.peek() != "":
        raise ValueError("trailing input at %d in %r" % (tok.pos, text))
    return val


def generic_terms(x):
    """Numerator and denominator of a generic scalar as sorted term lists.

    Each term is (qexp, rhoexp, Fraction coefficient); the two lists are a
    faithful, order-normalized encoding of the scalar.
    """
    if x.spec.kind != "generic":
        raise ValueError("generic_terms expects a generic-mode scalar")

    def side(poly):
        out = []
        for mono, coeff in poly.terms():
            out.append((int(mono[0]), int(mono[1]),
                        Fraction(int(coeff.numerator), int(coeff.denominator))))
        out.sort()
        return out

    return side(x.rep.numer), side(x.rep.denom)


def generic_from_terms(num_terms, den_terms):
    """Rebuild a generic scalar from ``generic_terms`` output (or any
    equivalent term lists; negative exponents are allowed and normalized)."""
    ring = _GFIELD.ring
    if not den_terms:
        raise ZeroDivisionError("empty denominator")
    exps = [(int(qe), int(re)) for qe, re, _ in list(num_terms) + list(den_terms)]
    shift_q = max(0, -min(e[0] for e in exps))
    shift_r = max(0, -min(e[1] for e in exps))
    num = {}
    for qe, re, c in num_terms:
        num[(int(qe) + shift_q, int(re) + shift_r)] = _qq(Fraction(c))
    den = {}
    for qe, re, c in den_terms:
        den[(int(qe) + shift_q, int(re) + shift_r)] = _qq(Fraction(c))
    rep = _GFIELD.new(ring.from_dict(num), ring.from_dict(den))
    return Scalar(FieldSpec.generic(), rep)
