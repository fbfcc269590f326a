"""Exact univariate polynomials over Q, piecewise polynomials, and
certified sign analysis on intervals.

Every coefficient is a `fractions.Fraction`; no operation here ever rounds,
so polynomial equality and sign verdicts are bit-exact.  Root counting uses
Sturm chains computed as integer pseudo-remainder sequences with content
removal, which keeps coefficient growth under control for the degrees that
occur in practice (a few dozen at most).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from .errors import InvariantViolation

Scalar = Union[int, Fraction]


def as_fraction(x: Scalar) -> Fraction:
    """Coerce ints and Fractions; reject floats so no rounding can sneak in."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"exact arithmetic only, got {type(x).__name__}")


class Poly:
    """Dense univariate polynomial, coefficients ascending by degree.

    The zero polynomial is the empty coefficient tuple and has degree -1.
    Instances are immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def constant(cls, c: Scalar) -> "Poly":
        return cls((c,))

    @classmethod
    def x(cls) -> "Poly":
        """The identity polynomial t."""
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading_coefficient(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return self.coeffs[-1]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        if not isinstance(other, Poly):
            c = as_fraction(other)
            return Poly(tuple(c * a for a in self.coeffs))
        if self.is_zero or other.is_zero:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    def __rmul__(self, other: Scalar) -> "Poly":
        return self * other

    def __truediv__(self, c: Scalar) -> "Poly":
        c = as_fraction(c)
        return Poly(tuple(a / c for a in self.coeffs))

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Poly.one()
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, t: Scalar) -> Fraction:
        t = as_fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def shift(self, c: Scalar) -> "Poly":
        """Return q with q(t) = p(t + c), expanded exactly."""
        c = as_fraction(c)
        lin = Poly((c, 1))
        acc = Poly()
        for coef in reversed(self.coeffs):
            acc = acc * lin + Poly((coef,))
        return acc

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        dlead = other.coeffs[-1]
        while len(rem) >= len(other.coeffs) and rem:
            if rem[-1] == 0:
                rem.pop()
                continue
            shiftl = len(rem) - len(other.coeffs)
            f = rem[-1] / dlead
            quot[shiftl] = f
            for i, c in enumerate(other.coeffs):
                rem[shiftl + i] -= f * c
            rem.pop()
        return Poly(quot), Poly(rem)

    def deflate(self, root: Scalar) -> "Poly":
        """Divide out the full (t - root)^m factor at a known rational root."""
        root = as_fraction(root)
        out = self
        factor = Poly((-root, 1))
        while not out.is_zero and out(root) == 0:
            q, r = out.divmod(factor)
            if not r.is_zero:
                raise InvariantViolation("deflation left a remainder")
            out = q
        return out

    def __repr__(self) -> str:
        if self.is_zero:
            return "Poly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*t" if c != 1 else "t")
            else:
                parts.append(f"{c}*t^{i}" if c != 1 else f"t^{i}")
        return "Poly(" + " + ".join(parts) + ")"


# ---------------------------------------------------------------------------
# Sturm chains over the integers
# ---------------------------------------------------------------------------


def _int_primitive(coeffs: Sequence[Fraction]) -> list[int]:
    """Clear denominators and remove integer content (a positive rescaling)."""
    if not coeffs:
        return []
    denom = lcm(*(c.denominator for c in coeffs))
    ints = [int(c * denom) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _int_derivative(coeffs: Sequence[int]) -> list[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def _strip(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _prem_positive(f: Sequence[int], g: Sequence[int]) -> list[int]:
    """Pseudo-remainder of f by g, rescaled by a positive constant.

    Returns r with r = c * rem(f, g) for some rational c > 0, all integer.
    """
    r = list(f)
    lead = g[-1]
    flips = 0
    while len(r) >= len(g):
        if r[-1] == 0:
            r.pop()
            continue
        shiftl = len(r) - len(g)
        coef = r[-1]
        r = [lead * c for c in r]
        flips += 1
        for i, gc in enumerate(g):
            r[shiftl + i] -= coef * gc
        _strip(r)
    if lead < 0 and flips % 2 == 1:
        r = [-c for c in r]
    return r


def _int_content_removed(coeffs: Sequence[int]) -> list[int]:
    g = 0
    for v in coeffs:
        g = gcd(g, v)
    if g > 1:
        return [v // g for v in coeffs]
    return list(coeffs)


def sturm_chain(p: Poly) -> list[list[int]]:
    """Generalized Sturm chain of p as primitive integer polynomials.

    Works for non-square-free p: the chain terminates at a gcd of p and p',
    and sign-variation differences still count distinct real roots on
    intervals whose endpoints are not roots of p.
    """
    if p.is_zero:
        raise ValueError("Sturm chain of the zero polynomial")
    f0 = _int_primitive(p.coeffs)
    chain = [f0]
    f1 = _int_content_removed(_int_derivative(f0))
    if f1:
        chain.append(f1)
        while True:
            r = _prem_positive(chain[-2], chain[-1])
            if not r:
                break
            chain.append([-c for c in _int_content_removed(r)])
    return chain


def _sign_at(coeffs: Sequence[int], x: Fraction) -> int:
    num, den = x.numerator, x.denominator
    d = len(coeffs) - 1
    total = 0
    npow = 1
    dpows = [1] * (d + 1)
    for i in range(d - 1, -1, -1):
        dpows[i] = dpows[i + 1] * den
    for i, c in enumerate(coeffs):
        if c:
            total += c * npow * dpows[i]
        npow *= num
    return (total > 0) - (total < 0)


def _variations(signs: Iterable[int]) -> int:
    nonzero = [s for s in signs if s != 0]
    return sum(1 for a, b in itertools.pairwise(nonzero) if a != b)


def _variations_at(chain: Sequence[Sequence[int]], x: Fraction) -> int:
    return _variations(_sign_at(f, x) for f in chain)


class _RationalRootHit(Exception):
    """Raised when an evaluation point turns out to be a root; the caller
    deflates and restarts."""

    def __init__(self, value: Fraction):
        self.value = value


def _count_open(chain: Sequence[Sequence[int]], a: Fraction, b: Fraction) -> int:
    return _variations_at(chain, a) - _variations_at(chain, b)


@dataclass(frozen=True)
class RootLocator:
    """One distinct real root: either exact (lo == hi) or bracketed in the
    open interval (lo, hi) with nonzero values at both ends."""

    lo: Fraction
    hi: Fraction

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi


def _checked_value(p: Poly, x: Fraction) -> Fraction:
    v = p(x)
    if v == 0:
        raise _RationalRootHit(x)
    return v


def _split_ranges(chain, p: Poly, a: Fraction, b: Fraction) -> list[tuple[Fraction, Fraction]]:
    n = _count_open(chain, a, b)
    if n == 0:
        return []
    if n == 1:
        return [(a, b)]
    m = (a + b) / 2
    _checked_value(p, m)
    return _split_ranges(chain, p, a, m) + _split_ranges(chain, p, m, b)


def _refine_once(chain, p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    m = (lo + hi) / 2
    _checked_value(p, m)
    if _count_open(chain, lo, m) == 1:
        return lo, m
    return m, hi


def _isolate_roots_closed(p: Poly, a: Fraction, b: Fraction) -> list[RootLocator]:
    """Locators for all distinct roots of p in the closed interval [a, b],
    pairwise separated (bracketing ranges never contain or touch an exact
    root; two ranges may share one non-root endpoint)."""
    exact: set[Fraction] = set()
    work = p
    while True:
        try:
            for x in (a, b):
                _checked_value(work, x)
            if work.degree < 1:
                ranges: list[tuple[Fraction, Fraction]] = []
            else:
                chain = sturm_chain(work)
                ranges = _split_ranges(chain, work, a, b)
                in_window = sorted(r for r in exact if a <= r <= b)
                separated = []
                for lo, hi in ranges:
                    while any(lo <= r <= hi for r in in_window):
                        lo, hi = _refine_once(chain, work, lo, hi)
                    separated.append((lo, hi))
                ranges = separated
            break
        except _RationalRootHit as hit:
            exact.add(hit.value)
            work = work.deflate(hit.value)
    locators = [RootLocator(r, r) for r in exact if a <= r <= b]
    locators += [RootLocator(lo, hi) for lo, hi in ranges]
    locators.sort(key=lambda L: (L.lo, L.hi))
    return locators


@dataclass(frozen=True)
class SignVerdict:
    """Exact sign classification of a polynomial on a closed interval.

    kind is one of "nonnegative", "nonpositive", "zero", "mixed".  For mixed
    verdicts both sample points are recorded: positive_at has p > 0 and
    negative_at has p < 0.
    """

    kind: str
    positive_at: Fraction | None = None
    negative_at: Fraction | None = None

    @property
    def witness(self) -> Fraction | None:
        """A point of the offending sign (positive first, for <= 0 claims)."""
        return self.positive_at if self.positive_at is not None else self.negative_at


def _gap_samples(locators: list[RootLocator], a: Fraction, b: Fraction) -> list[Fraction]:
    if not locators:
        return [(a + b) / 2]
    samples: list[Fraction] = []
    first, last = locators[0], locators[-1]
    if not (first.is_exact and first.lo == a):
        samples.append(a)
    for left, right in itertools.pairwise(locators):
        if left.hi == right.lo:
            samples.append(left.hi)  # shared bisection point, never a root
        else:
            samples.append((left.hi + right.lo) / 2)
    if not (last.is_exact and last.hi == b):
        samples.append(b)
    return samples


def sign_on_interval(p: Poly, a: Scalar, b: Scalar) -> SignVerdict:
    """Certified sign of p on [a, b].

    Counts the distinct roots with a Sturm chain, splits the interval at
    them, and determines the sign on each root-free subinterval by one exact
    evaluation.  "nonnegative"/"nonpositive" permit interior zeros; "zero"
    means p is the zero polynomial.
    """
    a, b = as_fraction(a), as_fraction(b)
    if not a < b:
        raise ValueError("sign_on_interval requires a < b")
    if p.is_zero:
        return SignVerdict("zero")
    locators = _isolate_roots_closed(p, a, b)
    positive_at = negative_at = None
    for x in _gap_samples(locators, a, b):
        v = p(x)
        if v > 0 and positive_at is None:
            positive_at = x
        elif v < 0 and negative_at is None:
            negative_at = x
    if positive_at is not None and negative_at is not None:
        return SignVerdict("mixed", positive_at, negative_at)
    if positive_at is not None:
        return SignVerdict("nonnegative", positive_at, None)
    if negative_at is not None:
        return SignVerdict("nonpositive", None, negative_at)
    raise InvariantViolation("sign sampling produced no nonzero value")


def count_distinct_roots(p: Poly, a: Scalar, b: Scalar) -> int:
    """Number of distinct real roots of p in the closed interval [a, b]."""
    a, b = as_fraction(a), as_fraction(b)
    if not a < b:
        raise ValueError("count_distinct_roots requires a < b")
    if p.is_zero:
        raise ValueError("root count of the zero polynomial")
    work = p
    endpoint_roots = 0
    for x in (a, b):
        if work(x) == 0:
            endpoint_roots += 1
            work = work.deflate(x)
    if work.degree < 1:
        return endpoint_roots
    chain = sturm_chain(work)
    return endpoint_roots + _count_open(chain, a, b)


# ---------------------------------------------------------------------------
# Piecewise polynomials
# ---------------------------------------------------------------------------


class PiecewisePoly:
    """Piecewise polynomial on [breakpoints[0], breakpoints[-1]].

    Piece i is valid on [breakpoints[i], breakpoints[i+1]].  Evaluation at an
    interior breakpoint uses the right-hand piece; the final breakpoint uses
    the last piece.  `continuous` records whether adjacent pieces agree at
    every shared breakpoint.
    """

    __slots__ = ("breakpoints", "pieces")

    def __init__(self, breakpoints: Iterable[Scalar], pieces: Iterable[Poly]):
        bps = tuple(as_fraction(x) for x in breakpoints)
        pcs = tuple(pieces)
        if len(bps) < 2:
            raise ValueError("need at least two breakpoints")
        if any(x >= y for x, y in itertools.pairwise(bps)):
            raise ValueError("breakpoints must be strictly increasing")
        if len(pcs) != len(bps) - 1:
            raise ValueError("need exactly one piece per breakpoint interval")
        if not all(isinstance(p, Poly) for p in pcs):
            raise TypeError("pieces must be Poly instances")
        self.breakpoints = bps
        self.pieces = pcs

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def continuous(self) -> bool:
        return all(
            left(c) == right(c)
            for left, right, c in zip(self.pieces, self.pieces[1:], self.breakpoints[1:])
        )

    def piece_index(self, t: Fraction) -> int:
        """Index of the piece evaluated at t (right-continuous convention)."""
        a, b = self.domain
        if not a <= t <= b:
            raise ValueError(f"{t} outside the domain [{a}, {b}]")
        lo, hi = 0, len(self.pieces) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if t < self.breakpoints[mid + 1]:
                hi = mid
            else:
                lo = mid + 1
        # right-continuity: t equal to an interior breakpoint lands on the
        # right piece; t == final breakpoint keeps the last piece
        if lo < len(self.pieces) - 1 and t == self.breakpoints[lo + 1]:
            lo += 1
        return lo

    def __call__(self, t: Scalar) -> Fraction:
        t = as_fraction(t)
        return self.pieces[self.piece_index(t)](t)

    def left_value(self, t: Scalar) -> Fraction:
        """Limit from the left at t (t must exceed the left endpoint)."""
        t = as_fraction(t)
        a, b = self.domain
        if not a < t <= b:
            raise ValueError(f"{t} has no left limit inside [{a}, {b}]")
        idx = next(i for i in range(len(self.pieces)) if t <= self.breakpoints[i + 1])
        return self.pieces[idx](t)

    def two_sided(self, c: Scalar) -> tuple[Fraction, Fraction]:
        """(left limit, right value) at an interior breakpoint, for jump analysis."""
        c = as_fraction(c)
        return self.left_value(c), self(c)

    def derivative(self) -> "PiecewisePoly":
        return PiecewisePoly(self.breakpoints, tuple(p.derivative() for p in self.pieces))

    def refined(self, extra: Iterable[Scalar]) -> "PiecewisePoly":
        """Same function with breakpoints enlarged by `extra` (inside the domain)."""
        a, b = self.domain
        pts = sorted(set(self.breakpoints) | {as_fraction(x) for x in extra})
        if pts[0] != a or pts[-1] != b:
            raise ValueError("refinement points must lie inside the domain")
        pieces = [self.pieces[self.piece_index(lo)] for lo in pts[:-1]]
        return PiecewisePoly(pts, pieces)

    def _zip_with(self, other: "PiecewisePoly", op) -> "PiecewisePoly":
        if self.domain != other.domain:
            raise ValueError("piecewise operands must share a domain")
        if self.breakpoints == other.breakpoints:
            a, b = self, other
        else:
            common = set(self.breakpoints) | set(other.breakpoints)
            a = self.refined(common)
            b = other.refined(common)
        return PiecewisePoly(a.breakpoints, tuple(op(p, q) for p, q in zip(a.pieces, b.pieces)))

    def __add__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return self._zip_with(other, lambda p, q: p + q)

    def __sub__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return self._zip_with(other, lambda p, q: p - q)

    def __neg__(self) -> "PiecewisePoly":
        return PiecewisePoly(self.breakpoints, tuple(-p for p in self.pieces))

    def __mul__(self, c: Scalar) -> "PiecewisePoly":
        c = as_fraction(c)
        return PiecewisePoly(self.breakpoints, tuple(p * c for p in self.pieces))

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> "PiecewisePoly":
        c = as_fraction(c)
        return PiecewisePoly(self.breakpoints, tuple(p / c for p in self.pieces))

    def canonical(self) -> "PiecewisePoly":
        """Drop interior breakpoints where the two adjacent pieces are the
        same polynomial (removable breakpoints)."""
        bps = [self.breakpoints[0]]
        pcs = [self.pieces[0]]
        for c, piece in zip(self.breakpoints[1:-1], self.pieces[1:]):
            if piece == pcs[-1]:
                continue
            bps.append(c)
            pcs.append(piece)
        bps.append(self.breakpoints[-1])
        return PiecewisePoly(bps, pcs)

    def same_function(self, other: "PiecewisePoly") -> bool:
        """True when both represent the same function on the same domain."""
        if self.domain != other.domain:
            return False
        a, b = self.canonical(), other.canonical()
        return a.breakpoints == b.breakpoints and a.pieces == b.pieces

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PiecewisePoly)
            and self.breakpoints == other.breakpoints
            and self.pieces == other.pieces
        )

    def __hash__(self) -> int:
        return hash((self.breakpoints, self.pieces))

    def __repr__(self) -> str:
        spans = ", ".join(
            f"[{lo}, {hi}]: {p!r}"
            for lo, hi, p in zip(self.breakpoints, self.breakpoints[1:], self.pieces)
        )
        return f"PiecewisePoly({spans})"


def constant_piecewise(value: Scalar, breakpoints: Sequence[Scalar]) -> PiecewisePoly:
    bps = [as_fraction(x) for x in breakpoints]
    return PiecewisePoly(bps, tuple(Poly((value,)) for _ in bps[:-1]))


def piecewise_smoothness(f: PiecewisePoly, c: Scalar) -> int:
    """Largest k with f of class C^k at the interior breakpoint c; -1 means
    discontinuous.

    When the two adjacent pieces are equal polynomials the true answer is
    C-infinity; that is reported through the sentinel value
    max(degree) + 1, one past any order at which distinct polynomials of
    those degrees could still agree.
    """
    c = as_fraction(c)
    if c not in f.breakpoints[1:-1]:
        raise ValueError(f"{c} is not an interior breakpoint")
    i = f.breakpoints.index(c)
    left, right = f.pieces[i - 1], f.pieces[i]
    cap = max(left.degree, right.degree, 0)
    if left == right:
        return cap + 1
    for order in range(cap + 1):
        if left(c) != right(c):
            return order - 1
        left, right = left.derivative(), right.derivative()
    raise InvariantViolation("distinct polynomials agreed past the degree cap")
