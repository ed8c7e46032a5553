"""Almost contact metric 3-structures and their identity checkers.

Each checker returns a :class:`CheckReport` whose line items appear in a
fixed order, so reports are reproducible and a failing tensor entry can be
pinpointed.  Failures are verdicts, not exceptions; only structurally
impossible inputs (wrong chart dimensions) raise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exterior import EndField, KForm, Metric, VectorField, exterior_derivative, lie_bracket
from .poly import Poly, as_fraction

EVEN_PERMS = ((1, 2, 3), (2, 3, 1), (3, 1, 2))

#: Sign table eps_{abc} for permutations of {1, 2, 3}; zero on repeats.
EPSILON = {perm: 1 for perm in EVEN_PERMS}
EPSILON.update({(a, c, b): -s for (a, b, c), s in list(EPSILON.items())})


def epsilon(a: int, b: int, c: int) -> int:
    return EPSILON.get((a, b, c), 0)


class StructureError(ValueError):
    """Input does not form the claimed kind of structure."""


class DimensionError(StructureError):
    """Chart dimension is incompatible with a 3-structure."""


@dataclass(frozen=True)
class CheckItem:
    name: str
    passed: bool
    witness: str | None = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class CheckReport:
    items: tuple[CheckItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failures(self) -> list[CheckItem]:
        return [item for item in self.items if not item.passed]

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def item(self, name: str) -> CheckItem:
        for entry in self.items:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "items": [item.to_dict() for item in self.items],
        }


def merge_reports(*reports: CheckReport) -> CheckReport:
    items: list[CheckItem] = []
    for rep in reports:
        items.extend(rep.items)
    return CheckReport(tuple(items))


class AlmostContactMetricStructure:
    """Candidate structure (phi, xi, eta, g) on one chart.

    Nothing is assumed at construction beyond matching chart dimensions; the
    defining identity phi^2 = -I + eta (x) xi is checked, not imposed.
    """

    __slots__ = ("m", "phi", "xi", "eta", "g")

    def __init__(self, phi: EndField, xi: VectorField, eta: KForm, g: Metric):
        m = phi.m
        if xi.m != m or eta.m != m or g.m != m:
            raise StructureError("structure tensors live on different charts")
        if eta.degree != 1:
            raise StructureError("eta must be a 1-form")
        self.m = m
        self.phi = phi
        self.xi = xi
        self.eta = eta
        self.g = g

    def eta_components(self) -> list[Poly]:
        return [self.eta.coefficient((j,)) for j in range(self.m)]


class ThreeStructure:
    """Three almost contact metric structures sharing one metric.

    The chart dimension of an almost contact 3-structure is necessarily of
    the form 4n + 3; a mismatch is flagged here and rejected by
    :func:`check_three_cosymplectic`.
    """

    __slots__ = ("m", "structures", "g", "sign_convention", "dimension_ok")

    def __init__(self, structures: Sequence[AlmostContactMetricStructure]):
        if len(structures) != 3:
            raise StructureError("exactly three structures are required")
        m = structures[0].m
        g = structures[0].g
        for s in structures:
            if s.m != m:
                raise StructureError("structures on charts of different dimension")
            if s.g != g:
                raise StructureError("structures must share a single metric")
        self.m = m
        self.structures = tuple(structures)
        self.g = g
        self.sign_convention = dict(EPSILON)
        self.dimension_ok = m % 4 == 3

    def structure(self, alpha: int) -> AlmostContactMetricStructure:
        if alpha not in (1, 2, 3):
            raise ValueError("alpha must be 1, 2, or 3")
        return self.structures[alpha - 1]

    @property
    def fiber_n(self) -> int:
        return (self.m - 3) // 4


# -- tensor helpers ----------------------------------------------------------


def outer_xi_eta(xi: VectorField, eta_comps: Sequence[Poly]) -> EndField:
    """The endomorphism eta (x) xi: X -> eta(X) xi."""
    m = xi.m
    return EndField([[xi.components[i] * eta_comps[j] for j in range(m)] for i in range(m)])


def eta_compose_phi(eta_comps: Sequence[Poly], phi: EndField) -> list[Poly]:
    """Row vector eta . phi."""
    m = phi.m
    return [
        sum((eta_comps[i] * phi.entries[i][j] for i in range(m)), Poly.zero(m))
        for j in range(m)
    ]


def metric_times_phi(g: Metric, phi: EndField) -> list[list[Poly]]:
    m = g.m
    return [
        [
            sum((g.entries[i][k] * phi.entries[k][j] for k in range(m)), Poly.zero(m))
            for j in range(m)
        ]
        for i in range(m)
    ]


def _first_entry_witness(rows: Sequence[Sequence[Poly]], label: str) -> str | None:
    for i, row in enumerate(rows):
        for j, p in enumerate(row):
            if not p.is_zero():
                return f"{label} entry ({i + 1},{j + 1}): {p.render()}"
    return None


def _first_component_witness(comps: Sequence[Poly], label: str) -> str | None:
    for i, p in enumerate(comps):
        if not p.is_zero():
            return f"{label} component {i + 1}: {p.render()}"
    return None


def _matrix_item(name: str, diff_rows: Sequence[Sequence[Poly]]) -> CheckItem:
    witness = _first_entry_witness(diff_rows, "residual")
    return CheckItem(name, witness is None, witness)


def _form_item(name: str, diff: KForm) -> CheckItem:
    if diff.is_zero():
        return CheckItem(name, True)
    key = sorted(diff.terms)[0]
    return CheckItem(name, False, f"residual term {key}: {diff.terms[key].render()}")


# -- fundamental 2-form ------------------------------------------------------


def fundamental_form(s: AlmostContactMetricStructure) -> KForm:
    """The 2-form Phi(X, Y) = g(X, phi Y), assembled entrywise.

    Antisymmetry of g.phi is a consequence of metric compatibility, so a
    failure means the input is not almost contact metric and raises.
    """
    b = metric_times_phi(s.g, s.phi)
    m = s.m
    for i in range(m):
        for j in range(i, m):
            if b[i][j] != -b[j][i]:
                raise StructureError(
                    f"fundamental form not antisymmetric at entry ({i + 1},{j + 1})"
                )
    terms = {}
    for i in range(m):
        for j in range(i + 1, m):
            if not b[i][j].is_zero():
                terms[(i, j)] = b[i][j]
    return KForm(m, 2, terms)


def _fundamental_form_or_none(s) -> tuple[KForm | None, CheckItem]:
    try:
        phi_form = fundamental_form(s)
    except StructureError as exc:
        return None, CheckItem("fundamental_form_antisymmetric", False, str(exc))
    return phi_form, CheckItem("fundamental_form_antisymmetric", True)


# -- pointwise checks --------------------------------------------------------


def check_almost_contact(s: AlmostContactMetricStructure, label: str = "") -> CheckReport:
    """phi^2 = -I + eta (x) xi, with the standard consequences as line items."""
    m = s.m
    eta = s.eta_components()
    prefix = f"almost_contact{label}"
    phi2 = s.phi * s.phi
    expected = outer_xi_eta(s.xi, eta) - EndField.identity(m)
    items = [
        _matrix_item(
            f"{prefix}.phi_squared",
            (phi2 - expected).entries,
        )
    ]
    phi_xi = s.phi.apply(s.xi)
    witness = _first_component_witness(phi_xi.components, "phi(xi)")
    items.append(CheckItem(f"{prefix}.phi_xi_zero", witness is None, witness))
    eta_phi = eta_compose_phi(eta, s.phi)
    witness = _first_component_witness(eta_phi, "eta.phi")
    items.append(CheckItem(f"{prefix}.eta_phi_zero", witness is None, witness))
    pairing = sum(
        (eta[i] * s.xi.components[i] for i in range(m)), Poly.zero(m)
    ) - Poly.const(m, 1)
    items.append(
        CheckItem(
            f"{prefix}.eta_xi_one",
            pairing.is_zero(),
            None if pairing.is_zero() else f"eta(xi) - 1 = {pairing.render()}",
        )
    )
    return CheckReport(tuple(items))


def check_compatible(s: AlmostContactMetricStructure, label: str = "") -> CheckReport:
    """Metric compatibility g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)."""
    m = s.m
    eta = s.eta_components()
    lhs = s.phi.transpose() * EndField(s.g.entries) * s.phi
    rhs_entries = [
        [s.g.entries[i][j] - eta[i] * eta[j] for j in range(m)] for i in range(m)
    ]
    diff = [
        [lhs.entries[i][j] - rhs_entries[i][j] for j in range(m)] for i in range(m)
    ]
    return CheckReport((_matrix_item(f"compatible{label}", diff),))


@dataclass(frozen=True)
class NijenhuisResult:
    """Nijenhuis tensor of phi and the normality tensor on coordinate pairs.

    ``n_phi`` and ``n_one`` map index pairs (i, j), i < j, to the nonzero
    value of the tensor on the corresponding coordinate fields.  The two
    coincide whenever d(eta) = 0.
    """

    m: int
    n_phi: dict[tuple[int, int], VectorField] = field(default_factory=dict)
    n_one: dict[tuple[int, int], VectorField] = field(default_factory=dict)

    @property
    def phi_tensor_vanishes(self) -> bool:
        return not self.n_phi

    @property
    def normality_tensor_vanishes(self) -> bool:
        return not self.n_one

    def witness(self, which: str = "n_one") -> str | None:
        data = self.n_one if which == "n_one" else self.n_phi
        if not data:
            return None
        (i, j) = sorted(data)[0]
        return f"pair (d_{i + 1}, d_{j + 1}): {data[(i, j)].render()}"


def nijenhuis_tensor(phi: EndField, eta: KForm, xi: VectorField) -> NijenhuisResult:
    """N_phi(X, Y) = phi^2 [X,Y] + [phi X, phi Y] - phi[phi X, Y] - phi[X, phi Y]
    on all coordinate-field pairs, plus the normality tensor
    N^(1) = N_phi + 2 d(eta) (x) xi.
    """
    m = phi.m
    if eta.m != m or xi.m != m or eta.degree != 1:
        raise StructureError("tensor dimensions do not match")
    d_eta = exterior_derivative(eta)
    columns = [phi.column(j) for j in range(m)]
    basis = [VectorField.coordinate(m, i) for i in range(m)]
    n_phi: dict[tuple[int, int], VectorField] = {}
    n_one: dict[tuple[int, int], VectorField] = {}
    for i in range(m):
        for j in range(i + 1, m):
            # [d_i, d_j] = 0, so the phi^2 term drops on coordinate pairs.
            value = lie_bracket(columns[i], columns[j])
            value = value - phi.apply(lie_bracket(columns[i], basis[j]))
            value = value - phi.apply(lie_bracket(basis[i], columns[j]))
            if not value.is_zero():
                n_phi[(i, j)] = value
            correction = d_eta.coefficient((i, j))
            normal = value + xi.scaled(correction * 2)
            if not normal.is_zero():
                n_one[(i, j)] = normal
    return NijenhuisResult(m, n_phi, n_one)


def check_quaternionic(t: ThreeStructure) -> CheckReport:
    """All six identities relating (phi, xi, eta) across each even permutation."""
    items: list[CheckItem] = []
    m = t.m
    for (a, b, c) in EVEN_PERMS:
        sa, sb, sc = t.structure(a), t.structure(b), t.structure(c)
        eta_a, eta_b = sa.eta_components(), sb.eta_components()
        tag = f"quaternionic[{a}{b}{c}]"
        diff = sc.phi - (sa.phi * sb.phi - outer_xi_eta(sa.xi, eta_b))
        items.append(_matrix_item(f"{tag}.phi_c_eq_phi_a_phi_b", diff.entries))
        diff = sc.phi - (-(sb.phi * sa.phi) + outer_xi_eta(sb.xi, eta_a))
        items.append(_matrix_item(f"{tag}.phi_c_eq_minus_phi_b_phi_a", diff.entries))
        vec = sc.xi - sa.phi.apply(sb.xi)
        witness = _first_component_witness(vec.components, "xi residual")
        items.append(CheckItem(f"{tag}.xi_c_eq_phi_a_xi_b", witness is None, witness))
        vec = sc.xi + sb.phi.apply(sa.xi)
        witness = _first_component_witness(vec.components, "xi residual")
        items.append(CheckItem(f"{tag}.xi_c_eq_minus_phi_b_xi_a", witness is None, witness))
        row = eta_compose_phi(eta_a, sb.phi)
        diff_row = [sc.eta_components()[k] - row[k] for k in range(m)]
        witness = _first_component_witness(diff_row, "eta residual")
        items.append(CheckItem(f"{tag}.eta_c_eq_eta_a_phi_b", witness is None, witness))
        row = eta_compose_phi(eta_b, sa.phi)
        diff_row = [sc.eta_components()[k] + row[k] for k in range(m)]
        witness = _first_component_witness(diff_row, "eta residual")
        items.append(CheckItem(f"{tag}.eta_c_eq_minus_eta_b_phi_a", witness is None, witness))
    return CheckReport(tuple(items))


def _positive_definite_item(g: Metric, sample_points) -> CheckItem:
    if g.is_constant():
        ok = g.is_positive_definite()
        return CheckItem(
            "metric_positive_definite",
            ok,
            None if ok else "a leading principal minor is <= 0",
        )
    points = list(sample_points) if sample_points else [(0,) * g.m]
    for point in points:
        if not g.is_positive_definite_at(point):
            return CheckItem(
                "metric_positive_definite",
                False,
                f"leading principal minor <= 0 at sample point {tuple(point)}",
            )
    return CheckItem(
        "metric_positive_definite",
        True,
        f"non-constant metric checked at {len(points)} sample point(s)",
    )


def check_three_cosymplectic(
    t: ThreeStructure, metric_sample_points: Sequence[Sequence] | None = None
) -> CheckReport:
    """Full 3-cosymplectic verdict.

    Aggregates, per structure: the almost contact identities, metric
    compatibility, closedness of eta and of the fundamental 2-form, and the
    vanishing of the normality tensor; then the quaternionic relations, the
    metric duality g(xi_a, .) = eta_a, and positive definiteness of g.
    """
    if not t.dimension_ok:
        raise DimensionError(
            f"chart dimension {t.m} is not of the form 4n+3; no 3-structure exists"
        )
    items: list[CheckItem] = []
    m = t.m
    for alpha in (1, 2, 3):
        s = t.structure(alpha)
        label = f"[{alpha}]"
        items.extend(check_almost_contact(s, label))
        items.extend(check_compatible(s, label))
        items.append(_form_item(f"closed_eta{label}", exterior_derivative(s.eta)))
        phi_form, antisym_item = _fundamental_form_or_none(s)
        items.append(
            CheckItem(f"fundamental_form_antisymmetric{label}", antisym_item.passed, antisym_item.witness)
        )
        if phi_form is None:
            items.append(
                CheckItem(f"closed_Phi{label}", False, "fundamental form is not a 2-form")
            )
        else:
            items.append(_form_item(f"closed_Phi{label}", exterior_derivative(phi_form)))
        nij = nijenhuis_tensor(s.phi, s.eta, s.xi)
        items.append(
            CheckItem(
                f"nijenhuis_phi_zero{label}",
                nij.phi_tensor_vanishes,
                nij.witness("n_phi"),
            )
        )
        items.append(
            CheckItem(
                f"normality_tensor_zero{label}",
                nij.normality_tensor_vanishes,
                nij.witness("n_one"),
            )
        )
        g_xi = [
            sum((t.g.entries[i][j] * s.xi.components[j] for j in range(m)), Poly.zero(m))
            for i in range(m)
        ]
        diff_row = [g_xi[i] - s.eta_components()[i] for i in range(m)]
        witness = _first_component_witness(diff_row, "g(xi) - eta")
        items.append(CheckItem(f"reeb_metric_dual{label}", witness is None, witness))
    items.extend(check_quaternionic(t))
    items.append(_positive_definite_item(t.g, metric_sample_points))
    return CheckReport(tuple(items))


# -- D_a-homothetic deformation ----------------------------------------------


def d_homothetic_deform(t: ThreeStructure, a) -> ThreeStructure:
    """Rescale the triple: phi -> phi, xi -> xi/a, eta -> a.eta, and
    g -> a.g + a(a-1) sum_alpha eta_alpha (x) eta_alpha.

    The metric correction is summed over the three structures, which is the
    unique correction of this shape compatible with all of them at once; the
    output satisfies the full 3-cosymplectic check whenever the input does.
    """
    a = as_fraction(a)
    if a <= 0:
        raise ValueError("deformation parameter must be positive")
    m = t.m
    inv_a = 1 / a
    coeff = a * (a - 1)
    correction = [[Poly.zero(m) for _ in range(m)] for _ in range(m)]
    for alpha in (1, 2, 3):
        eta = t.structure(alpha).eta_components()
        for i in range(m):
            for j in range(m):
                correction[i][j] = correction[i][j] + eta[i] * eta[j] * coeff
    new_g = Metric(
        [
            [t.g.entries[i][j] * a + correction[i][j] for j in range(m)]
            for i in range(m)
        ]
    )
    new_structures = []
    for alpha in (1, 2, 3):
        s = t.structure(alpha)
        new_structures.append(
            AlmostContactMetricStructure(
                s.phi,
                s.xi.scaled(inv_a),
                s.eta.scaled(a),
                new_g,
            )
        )
    return ThreeStructure(new_structures)
