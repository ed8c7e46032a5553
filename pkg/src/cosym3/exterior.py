"""Sparse exterior algebra with exact polynomial coefficients.

Forms, vector fields, endomorphism fields, and metrics on a single chart of
dimension ``m``.  Forms are keyed by strictly increasing index tuples; any
other tuple handed to a constructor is normalized, with the permutation sign
absorbed into the coefficient.  Values are immutable after construction and
every operation is a pure function, so concurrent use needs no coordination.

Conventions fixed here and used everywhere else:

* wedge is the determinant convention, ``(dx^i ^ dx^j)(X, Y) = X^i Y^j - X^j Y^i``;
* the volume form orders coordinates by increasing index;
* the Hodge star is defined by ``alpha ^ *beta = <alpha, beta> vol`` with the
  inner product on k-forms given by Gram determinants of the inverse metric.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from . import linalg
from .poly import Poly, as_fraction, as_poly

IndexTuple = tuple[int, ...]


def sort_with_sign(indices) -> tuple[IndexTuple, int]:
    """Sort an index tuple, returning the permutation sign (0 on repeats)."""
    lst = list(indices)
    sign = 1
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(lst, lst[1:]):
        if a == b:
            return tuple(lst), 0
    return tuple(lst), sign


class KForm:
    """Differential k-form with Poly coefficients on an m-dimensional chart.

    Degree 0 is stored as a single term keyed by the empty tuple.  Degrees
    above ``m`` are permitted only for the zero form (wedge products may
    overflow the top degree and must still carry their formal degree).
    """

    __slots__ = ("m", "degree", "terms")

    def __init__(self, m: int, degree: int, terms: Mapping | None = None):
        if m < 0 or degree < 0:
            raise ValueError("chart dimension and degree must be non-negative")
        clean: dict[IndexTuple, Poly] = {}
        if terms:
            for key, value in terms.items():
                key = tuple(key)
                if len(key) != degree:
                    raise ValueError(f"index tuple {key} has length != degree {degree}")
                if any(not 0 <= i < m for i in key):
                    raise ValueError(f"index out of range in {key}")
                sorted_key, sign = sort_with_sign(key)
                if sign == 0:
                    continue
                p = as_poly(value, m) if not isinstance(value, Poly) else value
                if p.nvars != m:
                    raise ValueError("coefficient over wrong variable count")
                if sign < 0:
                    p = -p
                if sorted_key in clean:
                    p = clean[sorted_key] + p
                if p.is_zero():
                    clean.pop(sorted_key, None)
                else:
                    clean[sorted_key] = p
        if degree > m and clean:
            raise ValueError(f"non-zero form of degree {degree} > dimension {m}")
        self.m = m
        self.degree = degree
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, m: int, degree: int) -> "KForm":
        return cls(m, degree)

    @classmethod
    def constant(cls, m: int, value) -> "KForm":
        """Degree-0 form with a constant coefficient."""
        p = Poly.const(m, value)
        return cls(m, 0, {(): p} if not p.is_zero() else None)

    @classmethod
    def function(cls, m: int, p: Poly) -> "KForm":
        return cls(m, 0, {(): p} if not p.is_zero() else None)

    @classmethod
    def coordinate(cls, m: int, index: int) -> "KForm":
        """The coordinate differential dx^index."""
        return cls(m, 1, {(index,): Fraction(1)})

    @classmethod
    def monomial(cls, m: int, indices, value=1) -> "KForm":
        indices = tuple(indices)
        return cls(m, len(indices), {indices: value})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(p.is_constant() for p in self.terms.values())

    def coefficient(self, indices) -> Poly:
        key, sign = sort_with_sign(tuple(indices))
        if sign == 0:
            return Poly.zero(self.m)
        p = self.terms.get(key)
        if p is None:
            return Poly.zero(self.m)
        return p if sign > 0 else -p

    def __add__(self, other: "KForm") -> "KForm":
        self._check_compatible(other)
        terms = dict(self.terms)
        for key, p in other.terms.items():
            q = terms.get(key)
            total = p if q is None else q + p
            if total.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = total
        out = KForm.__new__(KForm)
        out.m, out.degree, out.terms = self.m, self.degree, terms
        return out

    def __neg__(self) -> "KForm":
        out = KForm.__new__(KForm)
        out.m, out.degree = self.m, self.degree
        out.terms = {key: -p for key, p in self.terms.items()}
        return out

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def scaled(self, factor) -> "KForm":
        f = factor if isinstance(factor, Poly) else Poly.const(self.m, factor)
        terms = {}
        for key, p in self.terms.items():
            q = f * p
            if not q.is_zero():
                terms[key] = q
        out = KForm.__new__(KForm)
        out.m, out.degree, out.terms = self.m, self.degree, terms
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (
            self.m == other.m
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.m, self.degree, frozenset(self.terms.items())))

    def _check_compatible(self, other: "KForm"):
        if self.m != other.m:
            raise ValueError("forms on charts of different dimension")
        if self.degree != other.degree:
            raise ValueError("forms of different degree")

    def render(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.m)]
        parts = []
        for key in sorted(self.terms):
            p = self.terms[key]
            basis = "^".join(f"d{names[i]}" for i in key) if key else "1"
            coeff = p.render(names)
            if coeff == "1" and key:
                parts.append(basis)
            elif coeff == "-1" and key:
                parts.append(f"-{basis}")
            elif p.is_constant() or not key:
                parts.append(f"{coeff}*{basis}" if key else coeff)
            else:
                parts.append(f"({coeff})*{basis}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"KForm({self.render()})"


class VectorField:
    """Vector field given by one Poly component per coordinate."""

    __slots__ = ("m", "components")

    def __init__(self, components: Sequence):
        comps = tuple(
            c if isinstance(c, Poly) else as_poly(c, len(components))
            for c in components
        )
        m = len(comps)
        for c in comps:
            if c.nvars != m:
                raise ValueError("component count must equal the chart dimension")
        self.m = m
        self.components = comps

    @classmethod
    def coordinate(cls, m: int, index: int) -> "VectorField":
        return cls([Poly.const(m, 1 if i == index else 0) for i in range(m)])

    @classmethod
    def zero(cls, m: int) -> "VectorField":
        return cls([Poly.zero(m)] * m)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def is_constant(self) -> bool:
        return all(c.is_constant() for c in self.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.m != other.m:
            raise ValueError("vector fields on different charts")
        return VectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        if self.m != other.m:
            raise ValueError("vector fields on different charts")
        return VectorField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "VectorField":
        return VectorField([-a for a in self.components])

    def scaled(self, factor) -> "VectorField":
        f = factor if isinstance(factor, Poly) else Poly.const(self.m, factor)
        return VectorField([f * a for a in self.components])

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.m == other.m and self.components == other.components

    def __hash__(self):
        return hash((self.m, self.components))

    def render(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.m)]
        parts = [
            f"({c.render(names)})*e_{names[i]}"
            for i, c in enumerate(self.components)
            if not c.is_zero()
        ]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"VectorField({self.render()})"


class EndField:
    """Field of endomorphisms: an m x m matrix of Poly acting on components."""

    __slots__ = ("m", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        m = len(entries)
        rows = []
        for row in entries:
            if len(row) != m:
                raise ValueError("endomorphism matrix must be square")
            rows.append(
                tuple(c if isinstance(c, Poly) else as_poly(c, m) for c in row)
            )
        for row in rows:
            for c in row:
                if c.nvars != m:
                    raise ValueError("entry over wrong variable count")
        self.m = m
        self.entries = tuple(rows)

    @classmethod
    def identity(cls, m: int) -> "EndField":
        return cls([[1 if i == j else 0 for j in range(m)] for i in range(m)])

    @classmethod
    def zero(cls, m: int) -> "EndField":
        return cls([[0] * m for _ in range(m)])

    @classmethod
    def from_fractions(cls, mat: Sequence[Sequence]) -> "EndField":
        m = len(mat)
        return cls([[Poly.const(m, as_fraction(x)) for x in row] for row in mat])

    @classmethod
    def block_diag(cls, *blocks: "EndField") -> "EndField":
        m = sum(b.m for b in blocks)
        entries = [[Poly.zero(m) for _ in range(m)] for _ in range(m)]
        offset = 0
        for b in blocks:
            pad = (0,) * offset, (0,) * (m - offset - b.m)
            for i in range(b.m):
                for j in range(b.m):
                    p = b.entries[i][j]
                    if b.m == m:
                        entries[i][j] = p
                    else:
                        entries[offset + i][offset + j] = Poly(
                            m, {pad[0] + e + pad[1]: c for e, c in p.terms.items()}
                        )
            offset += b.m
        return cls(entries)

    def is_constant(self) -> bool:
        return all(c.is_constant() for row in self.entries for c in row)

    def to_fractions(self) -> linalg.Matrix:
        if not self.is_constant():
            raise ValueError("endomorphism field is not constant")
        return [[c.constant_value() for c in row] for row in self.entries]

    def __mul__(self, other: "EndField") -> "EndField":
        if self.m != other.m:
            raise ValueError("dimension mismatch")
        m = self.m
        return EndField(
            [
                [
                    sum(
                        (self.entries[i][k] * other.entries[k][j] for k in range(m)),
                        Poly.zero(m),
                    )
                    for j in range(m)
                ]
                for i in range(m)
            ]
        )

    def __add__(self, other: "EndField") -> "EndField":
        return EndField(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "EndField") -> "EndField":
        return EndField(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        )

    def __neg__(self) -> "EndField":
        return EndField([[-a for a in row] for row in self.entries])

    def scaled(self, factor) -> "EndField":
        f = factor if isinstance(factor, Poly) else Poly.const(self.m, factor)
        return EndField([[f * a for a in row] for row in self.entries])

    def transpose(self) -> "EndField":
        return EndField([list(col) for col in zip(*self.entries)])

    def apply(self, v: VectorField) -> VectorField:
        if self.m != v.m:
            raise ValueError("dimension mismatch")
        return VectorField(
            [
                sum((row[j] * v.components[j] for j in range(self.m)), Poly.zero(self.m))
                for row in self.entries
            ]
        )

    def column(self, j: int) -> VectorField:
        return VectorField([self.entries[i][j] for i in range(self.m)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, EndField):
            return NotImplemented
        return self.m == other.m and self.entries == other.entries

    def __hash__(self):
        return hash((self.m, self.entries))

    def __repr__(self):
        return f"EndField(m={self.m})"


class Metric:
    """Symmetric 2-tensor with Poly entries.

    Symmetry is enforced at construction.  Positive definiteness is a
    semantic property checked by the structure verifier (leading principal
    minors for constant metrics, sample-point evaluation otherwise), so that
    deliberately broken inputs can still be represented and diagnosed.
    """

    __slots__ = ("m", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        m = len(entries)
        rows = []
        for row in entries:
            if len(row) != m:
                raise ValueError("metric matrix must be square")
            rows.append(
                tuple(c if isinstance(c, Poly) else as_poly(c, m) for c in row)
            )
        for i in range(m):
            for j in range(i + 1, m):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"metric not symmetric at entry ({i}, {j})")
        self.m = m
        self.entries = tuple(rows)

    @classmethod
    def identity(cls, m: int) -> "Metric":
        return cls([[1 if i == j else 0 for j in range(m)] for i in range(m)])

    @classmethod
    def from_fractions(cls, mat: Sequence[Sequence]) -> "Metric":
        m = len(mat)
        return cls([[Poly.const(m, as_fraction(x)) for x in row] for row in mat])

    @classmethod
    def block_diag(cls, *blocks: "Metric") -> "Metric":
        ends = [EndField(b.entries) for b in blocks]
        return cls(EndField.block_diag(*ends).entries)

    def is_constant(self) -> bool:
        return all(c.is_constant() for row in self.entries for c in row)

    def to_fractions(self) -> linalg.Matrix:
        if not self.is_constant():
            raise ValueError("metric is not constant")
        return [[c.constant_value() for c in row] for row in self.entries]

    def evaluate(self, point: Sequence) -> linalg.Matrix:
        return [[c.evaluate(point) for c in row] for row in self.entries]

    def is_positive_definite_at(self, point: Sequence) -> bool:
        return _leading_minors_positive(self.evaluate(point))

    def is_positive_definite(self) -> bool:
        """Leading-principal-minor test; constant metrics only."""
        return _leading_minors_positive(self.to_fractions())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Metric):
            return NotImplemented
        return self.m == other.m and self.entries == other.entries

    def __hash__(self):
        return hash((self.m, self.entries))

    def __repr__(self):
        return f"Metric(m={self.m})"


def _leading_minors_positive(mat: linalg.Matrix) -> bool:
    n = len(mat)
    for k in range(1, n + 1):
        sub = [row[:k] for row in mat[:k]]
        if linalg.det(sub) <= 0:
            return False
    return True


# -- core operations --------------------------------------------------------


def wedge(alpha: KForm, beta: KForm) -> KForm:
    """Exterior product; graded-commutative and bilinear."""
    if alpha.m != beta.m:
        raise ValueError("forms on charts of different dimension")
    m = alpha.m
    degree = alpha.degree + beta.degree
    if degree > m:
        return KForm(m, degree)
    terms: dict[IndexTuple, Poly] = {}
    for ka, pa in alpha.terms.items():
        for kb, pb in beta.terms.items():
            key, sign = sort_with_sign(ka + kb)
            if sign == 0:
                continue
            p = pa * pb
            if sign < 0:
                p = -p
            q = terms.get(key)
            total = p if q is None else q + p
            if total.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = total
    out = KForm.__new__(KForm)
    out.m, out.degree, out.terms = m, degree, terms
    return out


def exterior_derivative(omega: KForm) -> KForm:
    """d on polynomial-coefficient forms: linear, d(d(.)) = 0, graded Leibniz."""
    m = omega.m
    result = KForm(m, omega.degree + 1)
    terms: dict[IndexTuple, Poly] = {}
    for key, p in omega.terms.items():
        for j in range(m):
            dp = p.diff(j)
            if dp.is_zero():
                continue
            new_key, sign = sort_with_sign((j,) + key)
            if sign == 0:
                continue
            if sign < 0:
                dp = -dp
            q = terms.get(new_key)
            total = dp if q is None else q + dp
            if total.is_zero():
                terms.pop(new_key, None)
            else:
                terms[new_key] = total
    result.terms = terms
    return result


def interior_product(x: VectorField, omega: KForm) -> KForm:
    """Contraction i_X(omega); antiderivation of degree -1."""
    if x.m != omega.m:
        raise ValueError("vector field and form on different charts")
    if omega.degree == 0:
        raise ValueError("cannot contract a degree-0 form")
    m = omega.m
    terms: dict[IndexTuple, Poly] = {}
    for key, p in omega.terms.items():
        for pos, idx in enumerate(key):
            comp = x.components[idx]
            if comp.is_zero():
                continue
            q = comp * p
            if pos % 2:
                q = -q
            new_key = key[:pos] + key[pos + 1 :]
            acc = terms.get(new_key)
            total = q if acc is None else acc + q
            if total.is_zero():
                terms.pop(new_key, None)
            else:
                terms[new_key] = total
    out = KForm.__new__(KForm)
    out.m, out.degree, out.terms = m, omega.degree - 1, terms
    return out


def lie_bracket(x: VectorField, y: VectorField) -> VectorField:
    """[X, Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i)."""
    if x.m != y.m:
        raise ValueError("vector fields on different charts")
    m = x.m
    comps = []
    for i in range(m):
        total = Poly.zero(m)
        for j in range(m):
            total = total + x.components[j] * y.components[i].diff(j)
            total = total - y.components[j] * x.components[i].diff(j)
        comps.append(total)
    return VectorField(comps)


def pullback(a: EndField, omega: KForm) -> KForm:
    """Slotwise pullback (A* w)(v1..vk) = w(A v1, .., A vk); constant data only.

    On a monomial dx_I this is the sum over increasing J of det(A[I, J]) dx_J.
    """
    if a.m != omega.m:
        raise ValueError("dimension mismatch")
    if not a.is_constant():
        raise ValueError("pullback requires a constant endomorphism field")
    if not omega.is_constant():
        raise ValueError("pullback requires constant coefficients")
    m = a.m
    k = omega.degree
    if k == 0:
        return omega
    mat = a.to_fractions()
    terms: dict[IndexTuple, Fraction] = {}
    for key, p in omega.terms.items():
        c = p.constant_value()
        rows = [mat[i] for i in key]
        for target in combinations(range(m), k):
            sub = [[row[j] for j in target] for row in rows]
            if any(not any(r) for r in sub):
                continue
            d = linalg.det(sub)
            if not d:
                continue
            terms[target] = terms.get(target, Fraction(0)) + c * d
    return KForm(m, k, {key: v for key, v in terms.items() if v})


def complement_sign(indices: IndexTuple, m: int) -> tuple[IndexTuple, int]:
    """Complementary index tuple and the sign of (indices, complement)."""
    chosen = set(indices)
    comp = tuple(i for i in range(m) if i not in chosen)
    _, sign = sort_with_sign(indices + comp)
    return comp, sign


def _sqrt_fraction(value: Fraction) -> Fraction | None:
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return Fraction(rn, rd)


class HodgeOperator:
    """Hodge star for a constant positive-definite metric.

    Defined by ``alpha ^ *(beta) = <alpha, beta> vol``.  The chart orientation
    is increasing coordinate order unless an explicit coordinate permutation
    is supplied; an odd permutation flips the sign of the volume form.
    Requires det(g) to be the square of a rational so that the volume
    normalization stays exact.
    """

    def __init__(self, g: Metric, orientation: Sequence[int] | None = None):
        self.m = g.m
        mat = g.to_fractions()
        if not _leading_minors_positive(mat):
            raise ValueError("metric is degenerate or not positive definite")
        d = linalg.det(mat)
        sqrt_det = _sqrt_fraction(d)
        if sqrt_det is None:
            raise ValueError(
                "det(g) is not a rational square; exact Hodge star unavailable"
            )
        self.inverse = linalg.inverse(mat)
        self.sqrt_det = sqrt_det
        if orientation is None:
            self.orientation_sign = 1
        else:
            perm = tuple(orientation)
            if sorted(perm) != list(range(self.m)):
                raise ValueError("orientation must be a permutation of the coordinates")
            _, sign = sort_with_sign(perm)
            self.orientation_sign = sign

    def gram(self, left: IndexTuple, right: IndexTuple) -> Fraction:
        """<dx_left, dx_right> via the Gram determinant of the inverse metric."""
        if len(left) != len(right):
            raise ValueError("gram of unequal degrees")
        if not left:
            return Fraction(1)
        rows = [[self.inverse[i][j] for j in right] for i in left]
        if any(not any(r) for r in rows):
            return Fraction(0)
        cols = range(len(right))
        if any(not any(row[c] for row in rows) for c in cols):
            return Fraction(0)
        return linalg.det(rows)

    def volume(self) -> KForm:
        return KForm.monomial(
            self.m, tuple(range(self.m)), self.sqrt_det * self.orientation_sign
        )

    def __call__(self, omega: KForm) -> KForm:
        if omega.m != self.m:
            raise ValueError("dimension mismatch")
        if not omega.is_constant():
            raise ValueError("Hodge star requires constant coefficients")
        k = omega.degree
        terms: dict[IndexTuple, Fraction] = {}
        for key, p in omega.terms.items():
            c = p.constant_value()
            for other in combinations(range(self.m), k):
                inner = self.gram(other, key)
                if not inner:
                    continue
                comp, sign = complement_sign(other, self.m)
                coeff = c * inner * self.sqrt_det * sign * self.orientation_sign
                terms[comp] = terms.get(comp, Fraction(0)) + coeff
        return KForm(self.m, self.m - k, {key: v for key, v in terms.items() if v})


def hodge_star(g: Metric, omega: KForm, orientation: Sequence[int] | None = None) -> KForm:
    return HodgeOperator(g, orientation)(omega)


def form_inner_product(g: Metric, alpha: KForm, beta: KForm) -> Fraction:
    """Pointwise inner product of constant forms of equal degree."""
    if alpha.degree != beta.degree or alpha.m != beta.m:
        raise ValueError("forms of different type")
    op = HodgeOperator(g)
    total = Fraction(0)
    for ka, pa in alpha.terms.items():
        for kb, pb in beta.terms.items():
            gr = op.gram(ka, kb)
            if gr:
                total += pa.constant_value() * pb.constant_value() * gr
    return total


def volume_form(g: Metric, orientation: Sequence[int] | None = None) -> KForm:
    return HodgeOperator(g, orientation).volume()
