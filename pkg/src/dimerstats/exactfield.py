"""Exact arithmetic for coupling values and probabilities.

Lozenge values live in Q[t] with t = sqrt(3)/(2 pi); domino values live in
Q(i)[ip] with ip = 1/pi.  Both are represented by :class:`SymbolicValue`,
a polynomial with rational (resp. Gaussian rational) coefficients.

Canonical string grammar (``str(value)`` and :func:`parse_symbolic`)::

    value   := "0" | first (sep term)*
    first   := ["-"] term
    sep     := " + " | " - "
    term    := coeff | ["(" coeff ")"] var ["^" power]
    coeff   := rational | rational "i" | "[" rational "," rational "]"
    rational:= digits ["/" digits]
    var     := "t" | "ip"

Powers appear in increasing order, a power of 1 is written without
``^`` and a unit coefficient is dropped.  The parser also accepts a
``*`` between the bracketed coefficient and the variable.  A Gaussian coefficient with both parts nonzero is written as
``[re,im]`` with signed parts and is always joined with " + ".
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

import mpmath
import numpy as np

from .geometry import Model


class GaussianRational:
    """a + b*i with a, b rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, (int, Fraction, Rational)):
            return cls(v, 0)
        if isinstance(v, complex):
            return cls(Fraction(v.real), Fraction(v.imag))
        raise TypeError(f"cannot coerce {v!r} to a Gaussian rational")

    def __add__(self, o):
        try:
            o = GaussianRational.coerce(o)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        try:
            o = GaussianRational.coerce(o)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussianRational.coerce(o) - self

    def __mul__(self, o):
        try:
            o = GaussianRational.coerce(o)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, o):
        try:
            o = GaussianRational.coerce(o)
        except TypeError:
            return NotImplemented
        d = o.norm()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, o):
        return GaussianRational.coerce(o) / self

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / self ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        try:
            o = GaussianRational.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


I = GaussianRational(0, 1)


def _field_for(model: Model):
    return GaussianRational.coerce if model is Model.DOMINO else Fraction


class SymbolicValue:
    """Polynomial in t (lozenge) or ip = 1/pi (domino) with exact coefficients.

    Zero coefficients are never stored, so equality is structural.
    """

    __slots__ = ("model", "_terms")

    def __init__(self, model, terms=None):
        self.model = Model.parse(model)
        coerce = _field_for(self.model)
        clean = {}
        for k, c in (terms or {}).items():
            if k < 0:
                raise ValueError("negative powers are not part of the ring")
            c = coerce(c)
            if c:
                clean[int(k)] = c
        self._terms = tuple(sorted(clean.items()))

    # constructors
    @classmethod
    def const(cls, model, c) -> "SymbolicValue":
        return cls(model, {0: c})

    @classmethod
    def zero(cls, model) -> "SymbolicValue":
        return cls(model)

    @classmethod
    def one(cls, model) -> "SymbolicValue":
        return cls(model, {0: 1})

    @classmethod
    def tau(cls) -> "SymbolicValue":
        return cls(Model.LOZENGE, {1: 1})

    @classmethod
    def inv_pi(cls) -> "SymbolicValue":
        return cls(Model.DOMINO, {1: 1})

    @classmethod
    def imag_unit(cls) -> "SymbolicValue":
        return cls(Model.DOMINO, {0: I})

    # structure
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def coeff(self, k: int):
        return dict(self._terms).get(k, _field_for(self.model)(0))

    @property
    def degree(self) -> int:
        return self._terms[-1][0] if self._terms else -1

    def is_zero(self) -> bool:
        return not self._terms

    def is_real(self) -> bool:
        if self.model is Model.LOZENGE:
            return True
        return all(c.im == 0 for _, c in self._terms)

    def _lift(self, other) -> "SymbolicValue":
        if isinstance(other, SymbolicValue):
            if other.model is not self.model:
                raise TypeError(f"cannot mix {self.model.value} and {other.model.value} values")
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            if isinstance(other, GaussianRational) and self.model is Model.LOZENGE:
                if other.im:
                    raise TypeError("lozenge values are real")
                other = other.re
            return SymbolicValue.const(self.model, other)
        raise TypeError(f"unsupported operand {other!r}")

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            if isinstance(other, SymbolicValue):
                raise
            return NotImplemented
        t = dict(self._terms)
        for k, c in other._terms:
            t[k] = t[k] + c if k in t else c
        return SymbolicValue(self.model, t)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicValue(self.model, {k: -c for k, c in self._terms})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            if isinstance(other, SymbolicValue):
                raise
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            if isinstance(other, SymbolicValue):
                raise
            return NotImplemented
        t = {}
        for k1, c1 in self._terms:
            for k2, c2 in other._terms:
                k = k1 + k2
                t[k] = t[k] + c1 * c2 if k in t else c1 * c2
        return SymbolicValue(self.model, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not part of the ring")
        out = SymbolicValue.one(self.model)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "SymbolicValue":
        """Divide or multiply by a field scalar: ``v.scale(Fraction(1, 3))``."""
        return SymbolicValue(self.model, {k: v * c for k, v in self._terms})

    def divexact(self, other) -> "SymbolicValue":
        """Exact polynomial division; raises ArithmeticError on a nonzero remainder."""
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = dict(self._terms)
        dk, dc = other._terms[-1]
        quot = {}
        while rem:
            top = max(rem)
            if top < dk:
                break
            q = rem[top] / dc
            shift = top - dk
            quot[shift] = q
            for k, c in other._terms:
                kk = k + shift
                val = rem.get(kk, 0) - q * c
                if val:
                    rem[kk] = val
                else:
                    rem.pop(kk, None)
        if rem:
            raise ArithmeticError("polynomial division is not exact")
        return SymbolicValue(self.model, quot)

    def conjugate(self) -> "SymbolicValue":
        if self.model is Model.LOZENGE:
            return self
        return SymbolicValue(self.model, {k: c.conjugate() for k, c in self._terms})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = self._lift(other)
        if not isinstance(other, SymbolicValue):
            return NotImplemented
        return self.model is other.model and self._terms == other._terms

    def __hash__(self):
        return hash((self.model, self._terms))

    def __bool__(self):
        return bool(self._terms)

    def evaluate(self, tol: float = 1e-15):
        """Numeric value (float, or complex for non-real domino values), |error| < tol."""
        return sym_eval(self, tol)

    def __float__(self):
        v = sym_eval(self)
        if isinstance(v, complex):
            raise TypeError("value is not real")
        return v

    def __complex__(self):
        return complex(sym_eval(self))

    def __str__(self):
        return format_symbolic(self)

    def __repr__(self):
        return f"SymbolicValue({self.model.value!r}, {str(self)!r})"


def sym_arith(a: SymbolicValue, b: SymbolicValue, op: str) -> SymbolicValue:
    if not (isinstance(a, SymbolicValue) and isinstance(b, SymbolicValue)):
        raise TypeError("sym_arith expects two SymbolicValue operands")
    if a.model is not b.model:
        raise TypeError(f"cannot mix {a.model.value} and {b.model.value} values")
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op in ("*", "x", "×"):
        return a * b
    raise ValueError(f"unknown operation {op!r}")


# numeric evaluation ----------------------------------------------------------

def _base_constant(model: Model):
    if model is Model.LOZENGE:
        return mpmath.sqrt(3) / (2 * mpmath.pi)
    return 1 / mpmath.pi


def sym_eval(v: SymbolicValue, tol: float = 1e-15):
    """Evaluate in extended precision and round; the result is within ``tol``."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    digits = max(30, int(-math.log10(tol)) + 20)
    with mpmath.workdps(digits):
        base = _base_constant(v.model)
        re_total = mpmath.mpf(0)
        im_total = mpmath.mpf(0)
        for k, c in v._terms:
            p = base ** k
            if v.model is Model.LOZENGE:
                re_total += mpmath.mpf(c.numerator) / c.denominator * p
            else:
                re_total += mpmath.mpf(c.re.numerator) / c.re.denominator * p
                im_total += mpmath.mpf(c.im.numerator) / c.im.denominator * p
        if v.model is Model.DOMINO and im_total != 0:
            return complex(float(re_total), float(im_total))
        return float(re_total)


def sym_sign(v: SymbolicValue) -> int:
    """Sign of a real symbolic value, decided at increasing precision."""
    if not v.is_real():
        raise ValueError("sign of a non-real value")
    if v.is_zero():
        return 0
    digits = 30
    while digits < 2000:
        with mpmath.workdps(digits):
            base = _base_constant(v.model)
            total = mpmath.mpf(0)
            for k, c in v._terms:
                c = c.re if isinstance(c, GaussianRational) else c
                total += mpmath.mpf(c.numerator) / c.denominator * base ** k
            if abs(total) > mpmath.mpf(10) ** (-(digits - 10)):
                return 1 if total > 0 else -1
        digits *= 2
    raise ArithmeticError("could not resolve sign")


def sym_abs(v: SymbolicValue) -> SymbolicValue:
    """|v| for a real value (stays in the ring)."""
    return -v if sym_sign(v) < 0 else v


# string form -----------------------------------------------------------------

def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _coeff_parts(model, c):
    """Return (sign, body) for a coefficient; body has no leading minus unless bracketed."""
    if model is Model.LOZENGE:
        return (-1 if c < 0 else 1), _fmt_rat(abs(c))
    if c.im == 0:
        return (-1 if c.re < 0 else 1), _fmt_rat(abs(c.re))
    if c.re == 0:
        return (-1 if c.im < 0 else 1), _fmt_rat(abs(c.im)) + "i"
    return 1, f"[{_fmt_rat(c.re)},{_fmt_rat(c.im)}]"


def format_symbolic(v: SymbolicValue) -> str:
    if v.is_zero():
        return "0"
    var = "t" if v.model is Model.LOZENGE else "ip"
    out = []
    for k, c in v._terms:
        sign, body = _coeff_parts(v.model, c)
        if k == 0:
            term = body
        else:
            term = ("" if body == "1" else f"({body})") + var + (f"^{k}" if k > 1 else "")
        if not out:
            out.append(("-" if sign < 0 else "") + term)
        else:
            out.append((" - " if sign < 0 else " + ") + term)
    return "".join(out)


_RAT = r"\d+(?:/\d+)?"
_TERM = re.compile(
    rf"^(?:(?:\((?P<pc>[^()]+)\)\*?)?(?P<var>t|ip)(?:\^(?P<pow>\d+))?|(?P<c>[^()*]+))$")


def _parse_rat(s: str) -> Fraction:
    return Fraction(s.strip())


def _parse_coeff(model, s: str):
    s = s.strip()
    if s.startswith("["):
        re_s, im_s = s[1:-1].split(",")
        return GaussianRational(_parse_rat(re_s), _parse_rat(im_s))
    if s.endswith("i"):
        if model is Model.LOZENGE:
            raise ValueError("imaginary coefficient in a lozenge value")
        return GaussianRational(0, _parse_rat(s[:-1]))
    return _parse_rat(s)


def parse_symbolic(text: str, model) -> SymbolicValue:
    """Inverse of :func:`format_symbolic`."""
    model = Model.parse(model)
    text = text.strip()
    if text == "0":
        return SymbolicValue.zero(model)
    # split on separators that sit outside brackets
    pieces, signs = [], []
    sign = 1
    if text.startswith("-"):
        sign, text = -1, text[1:]
    depth, start = 0, 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif depth == 0 and text.startswith((" + ", " - "), i):
            pieces.append(text[start:i])
            signs.append(sign)
            sign = 1 if text[i + 1] == "+" else -1
            i += 3
            start = i
            continue
        i += 1
    pieces.append(text[start:])
    signs.append(sign)
    terms = {}
    for s, piece in zip(signs, pieces):
        m = _TERM.match(piece.strip())
        if not m:
            raise ValueError(f"cannot parse term {piece!r}")
        if m.group("c") is not None:
            k, c = 0, _parse_coeff(model, m.group("c"))
        else:
            expected = "t" if model is Model.LOZENGE else "ip"
            if m.group("var") != expected:
                raise ValueError(f"variable {m.group('var')!r} does not belong to {model.value}")
            k = int(m.group("pow") or 1)
            c = _parse_coeff(model, m.group("pc")) if m.group("pc") else 1
        terms[k] = terms.get(k, 0) + s * c
    return SymbolicValue(model, terms)


# determinants ----------------------------------------------------------------

def _laplace_det(M, zero):
    n = len(M)
    if n == 0:
        return zero + 1
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = zero
    for j, a in enumerate(M[0]):
        if not a:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = a * _laplace_det(minor, zero)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_bareiss(M, exact_div):
    """Fraction-free elimination; ``exact_div(a, b)`` must divide exactly."""
    A = [list(row) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = None
    for k in range(n - 1):
        if not A[k][k]:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return A[k][k] * 0
        pk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            if prev is None:
                A[i] = rowi[:k + 1] + [rowi[j] * pk - aik * rowk[j] for j in range(k + 1, n)]
            else:
                A[i] = rowi[:k + 1] + [exact_div(rowi[j] * pk - aik * rowk[j], prev)
                                       for j in range(k + 1, n)]
        prev = pk
    return A[n - 1][n - 1] if sign > 0 else -A[n - 1][n - 1]


def det_int(M) -> int:
    """Exact determinant of an integer matrix."""
    return det_bareiss(M, lambda a, b: a // b)


def det_field(M):
    """Gaussian elimination over a field (Fraction or GaussianRational entries)."""
    A = [list(row) for row in M]
    n = len(A)
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if A[r][k]), None)
        if piv is None:
            return Fraction(0) * det
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        pk = A[k][k]
        det = det * pk
        for i in range(k + 1, n):
            if A[i][k]:
                f = A[i][k] / pk
                A[i] = [a - f * b for a, b in zip(A[i], A[k])]
    return det


def inverse_field(M):
    """Exact inverse over a field; raises ZeroDivisionError when singular."""
    n = len(M)
    one = M[0][0] * 0 + 1 if n else 1
    zero = one * 0
    A = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(M)]
    for k in range(n):
        piv = next((r for r in range(k, n) if A[r][k]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        A[k], A[piv] = A[piv], A[k]
        pk = A[k][k]
        A[k] = [a / pk for a in A[k]]
        for i in range(n):
            if i != k and A[i][k]:
                f = A[i][k]
                A[i] = [a - f * b for a, b in zip(A[i], A[k])]
    return [row[n:] for row in A]


def _as_symbolic_matrix(M):
    model = None
    for row in M:
        for a in row:
            if isinstance(a, SymbolicValue):
                model = a.model
                break
        if model:
            break
    if model is None:
        raise TypeError("matrix has no SymbolicValue entries to fix the ring")
    lift = SymbolicValue.zero(model)._lift
    return model, [[lift(a) for a in row] for row in M]


def sym_det(M) -> SymbolicValue:
    """Exact determinant of a square matrix of SymbolicValues."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    if n == 0:
        raise ValueError("empty matrix has no ring; use SymbolicValue.one(model)")
    model, A = _as_symbolic_matrix(M)
    if n <= 6:
        return _laplace_det(A, SymbolicValue.zero(model))
    return det_bareiss(A, lambda a, b: a.divexact(b))


# characteristic polynomials ------------------------------------------------------

def charpoly(M) -> list:
    """Coefficients [1, -e1, e2, ..., (-1)^n e_n] of det(zI - M) over a field.

    Reduces to upper Hessenberg form by exact similarity transforms, then
    runs the standard Hessenberg recurrence.
    """
    n = len(M)
    A = [list(row) for row in M]
    zero = A[0][0] * 0 if n else Fraction(0)
    for k in range(n - 2):
        piv = next((r for r in range(k + 1, n) if A[r][k]), None)
        if piv is None:
            continue
        if piv != k + 1:
            A[k + 1], A[piv] = A[piv], A[k + 1]
            for row in A:
                row[k + 1], row[piv] = row[piv], row[k + 1]
        p = A[k + 1][k]
        for i in range(k + 2, n):
            if A[i][k]:
                f = A[i][k] / p
                A[i] = [a - f * b for a, b in zip(A[i], A[k + 1])]
                for row in A:
                    row[k + 1] = row[k + 1] + f * row[i]
    # p_j(z) = charpoly of the leading j x j block, stored low -> high degree
    polys = [[zero + 1]]
    for j in range(1, n + 1):
        h = A[j - 1]
        # (z - h_jj) p_{j-1}
        prev = polys[j - 1]
        cur = [zero] + prev[:]
        for d, c in enumerate(prev):
            cur[d] = cur[d] - h[j - 1] * c
        prod = zero + 1
        for i in range(j - 1, 0, -1):
            prod = prod * A[i][i - 1]
            coef = prod * A[i - 1][j - 1]
            if coef:
                for d, c in enumerate(polys[i - 1]):
                    cur[d] = cur[d] - coef * c
        polys.append(cur)
    return list(reversed(polys[n]))


# multi-modular characteristic polynomial -----------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_below(start: int):
    p = start
    while True:
        p -= 1
        if _is_prime(p):
            yield p


def _charpoly_mod(A, ps):
    """det(zI - A) modulo each prime in ``ps`` at once.

    ``A`` has shape (P, n, n) with slice k reduced mod ps[k].  Returns the
    coefficients (low -> high, shape (P, n+1)) and a mask of usable primes.
    Zero pivots are handled by a symmetric row and column swap.
    """
    A = A.copy()
    P, n = A.shape[0], A.shape[1]
    pc = ps[:, None]
    pm = ps[:, None, None]
    ok = np.ones(P, dtype=bool)
    for k in range(n - 2):
        below = A[:, k + 2:, k]
        for s in np.nonzero((A[:, k + 1, k] == 0) & below.any(axis=1))[0]:
            r = k + 2 + int(np.argmax(below[s] != 0))
            A[s, [k + 1, r], :] = A[s, [r, k + 1], :]
            A[s, :, [k + 1, r]] = A[s, :, [r, k + 1]]
        piv = A[:, k + 1, k]
        below = A[:, k + 2:, k]
        if not below.any():
            continue
        inv = np.array([pow(int(a), int(q) - 2, int(q)) if a else 0 for a, q in zip(piv, ps)],
                       dtype=np.int64)
        f = (below * inv[:, None]) % pc
        A[:, k + 2:, :] = (A[:, k + 2:, :] - (f[:, :, None] * A[:, k + 1, None, :]) % pm) % pm
        A[:, :, k + 1] = (A[:, :, k + 1] + ((A[:, :, k + 2:] * f[:, None, :]) % pm).sum(axis=2)) % pc
    polys = [np.ones((P, 1), dtype=np.int64)]
    for j in range(1, n + 1):
        prev = polys[j - 1]
        cur = np.zeros((P, j + 1), dtype=np.int64)
        cur[:, 1:] = prev
        cur[:, :-1] = (cur[:, :-1] - (A[:, j - 1, j - 1, None] * prev) % pc) % pc
        prod = np.ones(P, dtype=np.int64)
        for i in range(j - 1, 0, -1):
            prod = prod * A[:, i, i - 1] % ps
            coef = prod * A[:, i - 1, j - 1] % ps
            q = polys[i - 1]
            cur[:, :q.shape[1]] = (cur[:, :q.shape[1]] - (coef[:, None] * q) % pc) % pc
        polys.append(cur)
    return polys[n], ok


def charpoly_int(M) -> list:
    """Exact [1, -e1, e2, ..., (-1)^n e_n] for an integer matrix.

    Hessenberg reduction modulo many 31-bit primes and Chinese remaindering.
    The number of primes follows from |e_k| <= C(n, k) rho^k with rho the
    largest absolute row sum (a bound on every eigenvalue).
    """
    n = len(M)
    if n == 0:
        return [1]
    rows = [[int(a) for a in row] for row in M]
    rho = max(sum(abs(a) for a in row) for row in rows) or 1
    # modulus must exceed twice the largest |coefficient|
    bits = max((math.comb(n, k) * rho ** k).bit_length() for k in range(n + 1)) + 1
    gen = _primes_below(2 ** 31)
    residues, modulus = [0] * (n + 1), 1
    while modulus.bit_length() <= bits:
        need = int((bits - modulus.bit_length()) // 30) + 1
        ps = [next(gen) for _ in range(need)]
        A = np.array([[[a % q for a in row] for row in rows] for q in ps], dtype=np.int64)
        cps, ok = _charpoly_mod(A, np.array(ps, dtype=np.int64))
        for q, cp, good in zip(ps, cps, ok):
            if not good:
                continue
            inv = pow(modulus % q, q - 2, q)
            for d in range(n + 1):
                t = (int(cp[d]) - residues[d]) * inv % q
                residues[d] += modulus * t
            modulus *= q
    half = modulus // 2
    coeffs = [r - modulus if r > half else r for r in residues]
    return list(reversed(coeffs))
