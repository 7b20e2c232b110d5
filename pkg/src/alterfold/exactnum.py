"""Exact arithmetic in Q(theta), theta = 2**(1/4), and dense linear algebra over it.

Elements are stored as four rational coefficients of 1, theta, theta**2, theta**3.
Text form: ``a/b + c/d·r + e/f·r2 + g/h·r3`` where ``r`` stands for theta.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

__all__ = [
    "AlgNum",
    "AlgMatrix",
    "pow2_quarter",
    "sign",
    "rank",
    "kernel_basis",
    "is_psd",
    "parse",
    "THETA",
    "SQRT2",
]

_Coeffs = tuple  # four Fractions


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational coefficient")


class AlgNum:
    """c0 + c1·θ + c2·θ² + c3·θ³ with rational coefficients and θ⁴ = 2."""

    __slots__ = ("_c", "_hash")

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self._c = (_frac(c0), _frac(c1), _frac(c2), _frac(c3))
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: _Coeffs) -> "AlgNum":
        obj = object.__new__(cls)
        obj._c = coeffs
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, x) -> "AlgNum":
        if isinstance(x, AlgNum):
            return x
        if isinstance(x, (int, Fraction)):
            return cls._raw((Fraction(x), _ZF, _ZF, _ZF))
        if isinstance(x, str):
            return parse(x)
        raise TypeError(f"cannot convert {type(x).__name__} to AlgNum")

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self._c

    c0 = property(lambda self: self._c[0])
    c1 = property(lambda self: self._c[1])
    c2 = property(lambda self: self._c[2])
    c3 = property(lambda self: self._c[3])

    def is_zero(self) -> bool:
        return not any(self._c)

    def is_rational(self) -> bool:
        return not (self._c[1] or self._c[2] or self._c[3])

    # ring operations
    def __add__(self, other):
        try:
            o = AlgNum.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._c, o._c
        return AlgNum._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    __radd__ = __add__

    def __neg__(self):
        a = self._c
        return AlgNum._raw((-a[0], -a[1], -a[2], -a[3]))

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = AlgNum.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._c, o._c
        return AlgNum._raw((a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]))

    def __rsub__(self, other):
        try:
            return AlgNum.coerce(other) - self
        except TypeError:
            return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ZERO
            a = self._c
            return AlgNum._raw((a[0] * other, a[1] * other, a[2] * other, a[3] * other))
        if not isinstance(other, AlgNum):
            try:
                other = AlgNum.coerce(other)
            except TypeError:
                return NotImplemented
        a0, a1, a2, a3 = self._c
        b0, b1, b2, b3 = other._c
        # θ⁴ = 2 folds degrees 4..6 back down with a factor 2
        return AlgNum._raw((
            a0 * b0 + 2 * (a1 * b3 + a2 * b2 + a3 * b1),
            a0 * b1 + a1 * b0 + 2 * (a2 * b3 + a3 * b2),
            a0 * b2 + a1 * b1 + a2 * b0 + 2 * (a3 * b3),
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        ))

    __rmul__ = __mul__

    def conjugate_neg(self) -> "AlgNum":
        """Image under θ -> -θ."""
        a = self._c
        return AlgNum._raw((a[0], -a[1], a[2], -a[3]))

    def inv(self) -> "AlgNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(2^(1/4))")
        # x·x(-θ) lies in Q(√2) = p + q·θ²; then multiply by p - q·θ²
        half = self * self.conjugate_neg()
        p, q = half._c[0], half._c[2]
        norm = p * p - 2 * q * q
        return self.conjugate_neg() * AlgNum._raw((p / norm, _ZF, -q / norm, _ZF))

    def __truediv__(self, other):
        try:
            o = AlgNum.coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_rational():
            if o._c[0] == 0:
                raise ZeroDivisionError("division by zero in Q(2^(1/4))")
            d = o._c[0]
            a = self._c
            return AlgNum._raw((a[0] / d, a[1] / d, a[2] / d, a[3] / d))
        return self * o.inv()

    def __rtruediv__(self, other):
        try:
            return AlgNum.coerce(other) * self.inv()
        except TypeError:
            return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison
    def __eq__(self, other):
        if isinstance(other, AlgNum):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self._c[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._c[0]) if self.is_rational() else hash(self._c)
        return self._hash

    def __lt__(self, other):
        return sign(self - AlgNum.coerce(other)) < 0

    def __le__(self, other):
        return sign(self - AlgNum.coerce(other)) <= 0

    def __gt__(self, other):
        return sign(self - AlgNum.coerce(other)) > 0

    def __ge__(self, other):
        return sign(self - AlgNum.coerce(other)) >= 0

    def __bool__(self):
        return not self.is_zero()

    def __float__(self):
        t = 2.0 ** 0.25
        a = self._c
        return float(a[0]) + float(a[1]) * t + float(a[2]) * t * t + float(a[3]) * t ** 3

    def __str__(self):
        return format_algnum(self)

    def __repr__(self):
        return f"AlgNum('{format_algnum(self)}')"

    def __reduce__(self):
        return (AlgNum, self._c)


_ZF = Fraction(0)
ZERO = AlgNum._raw((_ZF, _ZF, _ZF, _ZF))
ONE = AlgNum._raw((Fraction(1), _ZF, _ZF, _ZF))
THETA = AlgNum._raw((_ZF, Fraction(1), _ZF, _ZF))
SQRT2 = AlgNum._raw((_ZF, _ZF, Fraction(1), _ZF))


def pow2_quarter(k: int) -> AlgNum:
    """Return 2**(k/4) exactly."""
    m, r = divmod(k, 4)
    scale = Fraction(2) ** m
    c = [_ZF, _ZF, _ZF, _ZF]
    c[r] = scale
    return AlgNum._raw(tuple(c))


def _theta_enclosure(bits: int) -> tuple[Fraction, Fraction]:
    # floor(2^(1/4) * 2^bits) via integer fourth root
    scaled = 2 << (4 * bits)
    root = isqrt(isqrt(scaled))
    den = 1 << bits
    return Fraction(root, den), Fraction(root + 1, den)


def sign(a: AlgNum) -> int:
    """-1, 0 or +1 under the real embedding with θ ≈ 1.1892."""
    a = AlgNum.coerce(a)
    if a.is_zero():
        return 0
    c = a.coeffs
    bits = 16
    while True:
        lo, hi = _theta_enclosure(bits)
        vlo = vhi = c[0]
        plo = phi = Fraction(1)
        for k in (1, 2, 3):
            plo *= lo
            phi *= hi
            if c[k] >= 0:
                vlo += c[k] * plo
                vhi += c[k] * phi
            else:
                vlo += c[k] * phi
                vhi += c[k] * plo
        if vlo > 0:
            return 1
        if vhi < 0:
            return -1
        bits *= 2


# ---------------------------------------------------------------- text form

def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_ATOMS = ("", "r", "r2", "r3")


def format_algnum(a: AlgNum) -> str:
    parts = []
    for k, q in enumerate(a.coeffs):
        if q == 0:
            continue
        neg = q < 0
        mag = -q if neg else q
        if k == 0:
            body = _fmt_frac(mag)
        elif mag == 1:
            body = _ATOMS[k]
        else:
            body = f"{_fmt_frac(mag)}·{_ATOMS[k]}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts) if parts else "0"


def format_with_decimal(a: AlgNum, digits: int = 12) -> str:
    return f"{format_algnum(a)} ({float(a):.{digits}g})"


_TOKEN = re.compile(
    r"\s*(?:(?P<pow>2\^\(\s*-?\d+\s*/\s*4\s*\))|(?P<sqrt>sqrt2)|(?P<atom>r[23]?)"
    r"|(?P<num>\d+(?:/\d+(?![\d^]))?)|(?P<op>[-+*/·()]))"
)


def _tokens(text: str):
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse number near {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        val = m.group(kind)
        if kind == "pow":
            k = int(re.search(r"-?\d+", val[2:]).group())
            yield ("val", pow2_quarter(k))
        elif kind == "sqrt":
            yield ("val", SQRT2)
        elif kind == "atom":
            yield ("val", {"r": THETA, "r2": SQRT2, "r3": pow2_quarter(3)}[val])
        elif kind == "num":
            yield ("val", AlgNum(Fraction(val)))
        else:
            yield ("op", "*" if val == "·" else val)


def parse(text: str) -> AlgNum:
    """Parse sums of signed products/quotients of rationals and the atoms r, r2, r3, sqrt2, 2^(k/4)."""
    toks = list(_tokens(text))
    if not toks:
        raise ValueError("empty number")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def expr():
        nonlocal pos
        total = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = toks[pos][1]
            pos += 1
            rhs = term()
            total = total + rhs if op == "+" else total - rhs
        return total

    def term():
        nonlocal pos
        value = factor()
        while True:
            t = peek()
            if t == ("op", "*"):
                pos += 1
                value = value * factor()
            elif t == ("op", "/"):
                pos += 1
                value = value / factor()
            elif t is not None and (t[0] == "val" or t == ("op", "(")):
                value = value * factor()  # juxtaposition, e.g. "3 r2"
            else:
                return value

    def factor():
        nonlocal pos
        t = peek()
        if t is None:
            raise ValueError(f"unexpected end of number in {text!r}")
        if t == ("op", "-"):
            pos += 1
            return -factor()
        if t == ("op", "+"):
            pos += 1
            return factor()
        if t == ("op", "("):
            pos += 1
            v = expr()
            if peek() != ("op", ")"):
                raise ValueError(f"unbalanced parenthesis in {text!r}")
            pos += 1
            return v
        if t[0] == "val":
            pos += 1
            return t[1]
        raise ValueError(f"unexpected {t[1]!r} in {text!r}")

    result = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return result


# ---------------------------------------------------------------- matrices

class AlgMatrix:
    """Dense immutable matrix over Q(2^(1/4))."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        flat = tuple(AlgNum.coerce(x) for x in entries)
        if len(flat) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(flat)}")
        self.rows = rows
        self.cols = cols
        self.entries = flat

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "AlgMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "AlgMatrix":
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[AlgNum]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[AlgNum]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "AlgMatrix":
        return AlgMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    def apply(self, vec: Sequence) -> list[AlgNum]:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        v = [AlgNum.coerce(x) for x in vec]
        out = []
        for i in range(self.rows):
            acc = ZERO
            for j in range(self.cols):
                e = self.entries[i * self.cols + j]
                if e and v[j]:
                    acc = acc + e * v[j]
            out.append(acc)
        return out

    def __matmul__(self, other: "AlgMatrix") -> "AlgMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols_other = [[other[k, j] for k in range(other.rows)] for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for c in cols_other:
                acc = ZERO
                for x, y in zip(r, c):
                    if x and y:
                        acc = acc + x * y
                out.append(acc)
        return AlgMatrix(self.rows, other.cols, out)

    def __eq__(self, other):
        if not isinstance(other, AlgMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __str__(self):
        return "\n".join("[" + ", ".join(format_algnum(x) for x in self.row(i)) + "]" for i in range(self.rows))

    def __repr__(self):
        return f"AlgMatrix({self.rows}x{self.cols})"


def _bareiss_echelon(m: AlgMatrix) -> tuple[list[list[AlgNum]], list[int]]:
    """Fraction-free forward elimination; returns the echelon rows and pivot columns."""
    a = m.to_rows()
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    prev = ONE
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            lead = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, ncols):
                # exact division by the previous pivot keeps entries small
                val = piv * row_i[j] - lead * row_r[j]
                row_i[j] = val / prev if val else ZERO
            row_i[c] = ZERO
        prev = piv
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: AlgMatrix) -> int:
    return len(_bareiss_echelon(m)[1])


def kernel_basis(m: AlgMatrix) -> list[list[AlgNum]]:
    """Basis of {v : m v = 0}; one vector per free column with that coordinate set to 1."""
    ech, pivots = _bareiss_echelon(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            acc = ZERO
            row = ech[r]
            for j in range(c + 1, m.cols):
                if row[j] and v[j]:
                    acc = acc + row[j] * v[j]
            v[c] = -acc / row[c] if acc else ZERO
        basis.append(v)
    return basis


def is_psd(m: AlgMatrix) -> bool:
    """Exact positive-semidefiniteness by symmetric elimination (Schur complements)."""
    if not m.is_symmetric():
        raise ValueError("is_psd requires a symmetric matrix")
    a = m.to_rows()
    n = m.rows
    for k in range(n):
        d = a[k][k]
        s = sign(d)
        if s < 0:
            return False
        if s == 0:
            if any(a[k][j] for j in range(k + 1, n)):
                return False
            continue
        inv_d = d.inv()
        for i in range(k + 1, n):
            if not a[i][k]:
                continue
            f = a[i][k] * inv_d
            for j in range(i, n):
                if a[k][j]:
                    a[i][j] = a[i][j] - f * a[k][j]
                    a[j][i] = a[i][j]
    return True
