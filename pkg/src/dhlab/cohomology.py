"""The combinatorial model of equivariant cohomology for semifree circle
actions with isolated fixed points.

The ring is Q[u, b_1, ..., b_n] / (b_i^2 - u b_i), graded with deg u =
deg b_i = 2.  Restriction to the fixed point labeled by a subset S sends b_i
to u for i in S and to 0 otherwise; the classes prod_{i in S} b_i restrict
like the canonical basis classes of the product-of-spheres model, so any
semifree isolated dataset computes here once its labels are reconstructed.

Integration over a reduced space at a regular level is a residue sum over
the fixed points above the level, with equivariant Euler class m_F u^n at an
isolated point.  The kernel of the surjection onto reduced cohomology is
spanned by the classes vanishing on all points above the level plus those
vanishing below, which turns every Betti number and hard Lefschetz question
into exact rational rank computations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import InputError, InvariantViolation
from .fixedpoints import FixedPointSet
from .polynomial import Poly, Scalar, as_fraction

TermKey = tuple[frozenset[int], int]  # (subset S, power of u)


class RingElement:
    """Element of Q[u, b]/(b_i^2 - u b_i) in square-free normal form.

    terms maps (S, k) to the coefficient of u^k * prod_{i in S} b_i; the
    normal form is unique, so equality is dictionary equality.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[TermKey, Fraction] | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        clean: dict[TermKey, Fraction] = {}
        for (subset, k), coeff in (terms or {}).items():
            coeff = as_fraction(coeff)
            if coeff == 0:
                continue
            subset = frozenset(subset)
            if any(not 1 <= i <= n for i in subset):
                raise ValueError(f"generator index outside 1..{n}")
            if k < 0:
                raise ValueError("negative power of u")
            clean[(subset, k)] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "RingElement":
        return cls(n)

    @classmethod
    def scalar(cls, n: int, c: Scalar) -> "RingElement":
        return cls(n, {(frozenset(), 0): as_fraction(c)})

    @classmethod
    def one(cls, n: int) -> "RingElement":
        return cls.scalar(n, 1)

    @classmethod
    def u(cls, n: int) -> "RingElement":
        return cls(n, {(frozenset(), 1): Fraction(1)})

    @classmethod
    def b(cls, n: int, i: int) -> "RingElement":
        if not 1 <= i <= n:
            raise ValueError(f"generator index {i} outside 1..{n}")
        return cls(n, {(frozenset({i}), 0): Fraction(1)})

    @classmethod
    def monomial(cls, n: int, subset: Iterable[int], k: int, coeff: Scalar = 1) -> "RingElement":
        return cls(n, {(frozenset(subset), k): as_fraction(coeff)})

    # -- arithmetic --------------------------------------------------------

    def _require_same_ring(self, other: "RingElement") -> None:
        if self.n != other.n:
            raise ValueError("ring elements over different n")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._require_same_ring(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return RingElement(self.n, out)

    def __neg__(self) -> "RingElement":
        return RingElement(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def __mul__(self, other) -> "RingElement":
        if not isinstance(other, RingElement):
            c = as_fraction(other)
            return RingElement(self.n, {k: c * v for k, v in self.terms.items()})
        self._require_same_ring(other)
        out: dict[TermKey, Fraction] = {}
        for (s1, k1), c1 in self.terms.items():
            for (s2, k2), c2 in other.terms.items():
                # b_i^2 = u b_i: doubled generators each contribute one u
                key = (s1 | s2, k1 + k2 + len(s1 & s2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return RingElement(self.n, out)

    def __rmul__(self, other: Scalar) -> "RingElement":
        return self * other

    def __pow__(self, k: int) -> "RingElement":
        if k < 0:
            raise ValueError("negative power")
        out = RingElement.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RingElement)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {2 * (len(s) + k) for s, k in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, degree: int) -> "RingElement":
        return RingElement(
            self.n,
            {key: c for key, c in self.terms.items() if 2 * (len(key[0]) + key[1]) == degree},
        )

    def coefficient(self, subset: Iterable[int], k: int) -> Fraction:
        return self.terms.get((frozenset(subset), k), Fraction(0))

    def restrict(self, subset: Iterable[int]) -> Poly:
        """Restriction to the fixed point labeled by `subset`: a polynomial
        in u (b_i goes to u inside the subset and to 0 outside)."""
        chosen = frozenset(subset)
        out: dict[int, Fraction] = {}
        for (s, k), c in self.terms.items():
            if s <= chosen:
                d = k + len(s)
                out[d] = out.get(d, Fraction(0)) + c
        if not out:
            return Poly()
        coeffs = [Fraction(0)] * (max(out) + 1)
        for d, c in out.items():
            coeffs[d] = c
        return Poly(coeffs)

    def drop_u_terms(self) -> "RingElement":
        """Image in the quotient by the ideal (u): only square-free subset
        monomials with no u factor survive (the ordinary cohomology of the
        product of spheres, where b_i^2 = 0)."""
        return RingElement(
            self.n, {key: c for key, c in self.terms.items() if key[1] == 0}
        )

    def __repr__(self) -> str:
        if not self.terms:
            return "RingElement(0)"
        bits = []
        for (s, k), c in sorted(self.terms.items(), key=lambda kv: (kv[0][1], sorted(kv[0][0]))):
            factors = []
            if c != 1 or (not s and k == 0):
                factors.append(str(c))
            if k:
                factors.append("u" if k == 1 else f"u^{k}")
            factors.extend(f"b{i}" for i in sorted(s))
            bits.append("*".join(factors) if factors else "1")
        return "RingElement(" + " + ".join(bits) + ")"


def normalize(n: int, raw_terms: Mapping[tuple[Sequence[int], int], Scalar]) -> RingElement:
    """Normal form of a raw polynomial given by b-exponent vectors.

    Keys are (exponents, k) with exponents[i-1] the power of b_i; the
    relation b_i^e = u^(e-1) b_i collapses every key to a square-free
    monomial, so the result is unique.
    """
    out: dict[TermKey, Fraction] = {}
    for (exponents, k), coeff in raw_terms.items():
        exponents = tuple(exponents)
        if len(exponents) != n:
            raise ValueError(f"exponent vector of length {len(exponents)}, expected {n}")
        if any(e < 0 for e in exponents) or k < 0:
            raise ValueError("negative exponent")
        subset = frozenset(i + 1 for i, e in enumerate(exponents) if e > 0)
        extra_u = sum(e - 1 for e in exponents if e > 0)
        key = (subset, k + extra_u)
        out[key] = out.get(key, Fraction(0)) + as_fraction(coeff)
    return RingElement(n, out)


def monomial_basis(n: int, degree: int) -> list[TermKey]:
    """Monomials u^k prod_{i in S} b_i of the given (even) degree, in graded
    lexicographic order on (k, S)."""
    if degree % 2 != 0 or degree < 0:
        return []
    half = degree // 2
    keys = []
    for size in range(min(n, half) + 1):
        k = half - size
        for subset in itertools.combinations(range(1, n + 1), size):
            keys.append((frozenset(subset), k))
    keys.sort(key=lambda key: (key[1], tuple(sorted(key[0]))))
    return keys


def slice_dimension(n: int, degree: int) -> int:
    if degree % 2 != 0 or degree < 0:
        return 0
    return sum(comb(n, j) for j in range(min(n, degree // 2) + 1))


def _require_labels(s: FixedPointSet) -> None:
    if not s.labeled:
        raise InputError("operation needs labeled fixed-point data (reconstruct_labels)")


def equivariant_symplectic_class(s: FixedPointSet) -> RingElement:
    """The symplectic class of labeled data: m0 u + sum m_i b_i, where m0 is
    the moment value of the minimum and m_i the increment to the point
    labeled {i}.  Restricting to any label S returns mu(point) * u."""
    _require_labels(s)
    try:
        minimum = next(p for p in s.points if p.label == frozenset())
    except StopIteration:
        raise InputError("no point labeled by the empty set") from None
    m0 = minimum.mu
    terms: dict[TermKey, Fraction] = {(frozenset(), 1): m0}
    for i in range(1, s.n + 1):
        try:
            pt = next(p for p in s.points if p.label == frozenset({i}))
        except StopIteration:
            raise InputError(f"no point labeled {{{i}}}") from None
        terms[(frozenset({i}), 0)] = pt.mu - m0
    cls = RingElement(s.n, terms)
    for p in s.points:
        if cls.restrict(p.label) != Poly((0, p.mu)):
            raise InvariantViolation(
                f"symplectic class restricts to {cls.restrict(p.label)!r} at "
                f"{sorted(p.label)}, expected {p.mu} * u"
            )
    return cls


def residue_integrate(e: RingElement, s: FixedPointSet, xi: Scalar) -> Fraction:
    """Integrate the image of e over the reduced space at the regular value
    xi: the residue sum over fixed points above xi of the u^(n-1)
    coefficient of the restriction, divided by m_F."""
    _require_labels(s)
    if e.n != s.n:
        raise ValueError("ring element and data have different n")
    xi = as_fraction(xi)
    if any(p.mu == xi for p in s.points):
        raise ValueError(f"{xi} is a critical level")
    total = Fraction(0)
    for p in s.points:
        if p.mu > xi:
            r = e.restrict(p.label)
            if r.degree >= s.n - 1:
                total += r.coeffs[s.n - 1] / p.weight_product
    return total


@dataclass(frozen=True)
class Subspace:
    """A subspace of one graded slice, given by a homogeneous basis that is
    certified linearly independent by exact row reduction."""

    degree: int
    basis: tuple[RingElement, ...]

    def __post_init__(self):
        keys = monomial_basis(self.basis[0].n, self.degree) if self.basis else []
        rows = []
        for e in self.basis:
            if e.degrees() not in ({self.degree}, set()):
                raise ValueError(f"basis element not homogeneous of degree {self.degree}")
            rows.append([e.terms.get(key, Fraction(0)) for key in keys])
        if rows and linalg.rank(rows) != len(rows):
            raise ValueError("basis is linearly dependent")

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _restriction_matrix(n: int, keys: Sequence[TermKey], labels: Sequence[frozenset[int]]):
    """Rows: one per label; columns: one per monomial; entry 1 when the
    monomial's subset sits inside the label (all monomials of a fixed degree
    restrict to the same power of u, so scalars suffice)."""
    return [
        [Fraction(1) if key[0] <= label else Fraction(0) for key in keys]
        for label in labels
    ]


def _kernel_vectors(s: FixedPointSet, xi: Fraction, degree: int) -> tuple[list, list[TermKey]]:
    keys = monomial_basis(s.n, degree)
    above = [p.label for p in s.points if p.mu > xi]
    below = [p.label for p in s.points if p.mu < xi]
    up = linalg.nullspace(_restriction_matrix(s.n, keys, above), len(keys))
    down = linalg.nullspace(_restriction_matrix(s.n, keys, below), len(keys))
    reduced, _ = linalg.rref(up + down)
    return reduced, keys


def kirwan_kernel(s: FixedPointSet, xi: Scalar, degree: int) -> Subspace:
    """Basis of the degree-d slice of the kernel of the reduction map at the
    regular value xi: classes vanishing on all fixed points above xi plus
    those vanishing on all points below."""
    _require_labels(s)
    xi = as_fraction(xi)
    if any(p.mu == xi for p in s.points):
        raise ValueError(f"{xi} is a critical level")
    if degree % 2 != 0 or not 0 <= degree <= 2 * (s.n - 1):
        raise ValueError(
            f"degree must be even in [0, {2 * (s.n - 1)}], got {degree}"
        )
    vectors, keys = _kernel_vectors(s, xi, degree)
    basis = tuple(
        RingElement(s.n, {key: c for key, c in zip(keys, row) if c != 0})
        for row in vectors
    )
    return Subspace(degree, basis)


def reduced_betti(s: FixedPointSet, xi: Scalar) -> list[int]:
    """Even Betti numbers b_0, b_2, ..., b_{2(n-1)} of the reduced space at
    the regular value xi, as slice dimension minus kernel dimension."""
    _require_labels(s)
    xi = as_fraction(xi)
    if any(p.mu == xi for p in s.points):
        raise ValueError(f"{xi} is a critical level")
    betti = []
    for degree in range(0, 2 * s.n - 1, 2):
        vectors, keys = _kernel_vectors(s, xi, degree)
        betti.append(len(keys) - len(vectors))
    if betti[0] != 1:
        raise InvariantViolation(f"reduced space disconnected: b_0 = {betti[0]}")
    guard_degree = 2 * s.n
    vectors, keys = _kernel_vectors(s, xi, guard_degree)
    if len(keys) != len(vectors):
        raise InvariantViolation(
            f"kernel guard failed: degree {guard_degree} has cohomology above "
            "the dimension of the reduced space"
        )
    return betti


@dataclass(frozen=True)
class LefschetzReport:
    """Outcome of a hard Lefschetz verification.

    betti lists the even Betti numbers b_0, b_2, ...; level is None for the
    ambient-manifold check.  failing_degree, when set, is the lowest real
    degree at which a power of the symplectic class fails to have full rank.
    """

    level: Fraction | None
    betti: tuple[int, ...]
    poincare_symmetric: bool
    lefschetz_ok: bool
    failing_degree: int | None

    def to_dict(self) -> dict:
        return {
            "level": None if self.level is None else str(self.level),
            "betti": list(self.betti),
            "poincare_symmetric": self.poincare_symmetric,
            "lefschetz_ok": self.lefschetz_ok,
            "failing_degree": self.failing_degree,
        }


def _quotient_structure(s: FixedPointSet, xi: Fraction, degree: int):
    """(monomial keys, kernel rref rows, kernel pivots, quotient key indices)."""
    vectors, keys = _kernel_vectors(s, xi, degree)
    reduced, pivots = linalg.rref(vectors) if vectors else ([], [])
    free = [i for i in range(len(keys)) if i not in pivots]
    return keys, reduced, pivots, free


def _coords(e: RingElement, keys: Sequence[TermKey]) -> list[Fraction]:
    return [e.terms.get(key, Fraction(0)) for key in keys]


def hard_lefschetz_check(s: FixedPointSet, xi: Scalar) -> LefschetzReport:
    """Verify hard Lefschetz for the reduced space at the regular value xi.

    With L the class of (symplectic class - xi u), multiplication by
    L^((n-1)-k) from reduced degree k to degree 2(n-1)-k must have full rank
    for every k <= n-1; nondegeneracy is certified independently through the
    residue pairing matrix P_ab = integral of a_i L^power a_j.
    """
    _require_labels(s)
    xi = as_fraction(xi)
    betti = reduced_betti(s, xi)
    top = 2 * (s.n - 1)
    palindromic = betti == betti[::-1]
    ell = equivariant_symplectic_class(s) - xi * RingElement.u(s.n)

    ok = True
    failing: int | None = None
    for k in range(0, s.n, 2):  # odd real degrees carry no cohomology here
        power = (s.n - 1) - k
        dom = _quotient_structure(s, xi, k)
        cod = _quotient_structure(s, xi, top - k)
        dom_keys, dom_red, dom_piv, dom_free = dom
        cod_keys, cod_red, cod_piv, cod_free = cod
        dim_dom = len(dom_free)
        dim_cod = len(cod_free)
        if dim_dom != dim_cod:
            ok = False
            failing = k
            break
        if dim_dom == 0:
            continue
        ell_power = ell**power
        reps = [
            RingElement(s.n, {dom_keys[i]: Fraction(1)}) for i in dom_free
        ]
        images = [rep * ell_power for rep in reps]
        matrix = []
        for img in images:
            vec = linalg.reduce_mod_rowspace(_coords(img, cod_keys), cod_red, cod_piv)
            matrix.append([vec[i] for i in cod_free])
        if linalg.rank(matrix) != dim_dom:
            ok = False
            failing = k
            break
        pairing = [
            [residue_integrate(ra * ell_power * rb, s, xi) for rb in reps]
            for ra in reps
        ]
        if linalg.rank(pairing) != dim_dom:
            ok = False
            failing = k
            break

    return LefschetzReport(
        level=xi,
        betti=tuple(betti),
        poincare_symmetric=palindromic,
        lefschetz_ok=ok and palindromic,
        failing_degree=failing,
    )


def ambient_lefschetz_check(s: FixedPointSet) -> LefschetzReport:
    """Verify hard Lefschetz for the ambient manifold itself.

    Works modulo u, where the model collapses to the cohomology of a product
    of n spheres with b_i^2 = 0 and symplectic class sum of m_i b_i; all the
    m_i must be positive.  Multiplication by the (n-k)-th power from degree k
    to degree 2n-k must be bijective for every k <= n.
    """
    _require_labels(s)
    cls = equivariant_symplectic_class(s)
    increments = [cls.coefficient({i}, 0) for i in range(1, s.n + 1)]
    if any(m <= 0 for m in increments):
        raise InputError(f"nonpositive sphere size in {increments}")
    omega = RingElement(
        s.n, {(frozenset({i}), 0): m for i, m in enumerate(increments, start=1)}
    )
    betti = tuple(comb(s.n, j) for j in range(s.n + 1))

    ok = True
    failing: int | None = None
    for k in range(0, s.n + 1, 2):
        j = k // 2
        power = s.n - k
        domain = list(itertools.combinations(range(1, s.n + 1), j))
        codomain = list(itertools.combinations(range(1, s.n + 1), s.n - j))
        omega_power = (omega**power).drop_u_terms()
        matrix = []
        for sub in domain:
            img = (RingElement.monomial(s.n, sub, 0) * omega_power).drop_u_terms()
            matrix.append([img.coefficient(target, 0) for target in codomain])
        if linalg.rank(matrix) != len(domain):
            ok = False
            failing = k
            break

    return LefschetzReport(
        level=None,
        betti=betti,
        poincare_symmetric=True,
        lefschetz_ok=ok,
        failing_degree=failing,
    )
