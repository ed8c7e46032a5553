"""Harmonic forms, the eightfold eigenspace split, and Betti arithmetic.

On a compact flat quotient with finite-order linear monodromy the harmonic
forms are exactly the constant monodromy-invariant forms, so every space here
is computed by exact rational linear algebra: invariant subspaces come from
averaging projectors, eigenspace splits from kernels, and every basis is
canonicalized to reduced echelon vectors over the lexicographically ordered
monomial forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import linalg
from .exterior import (
    EndField,
    KForm,
    exterior_derivative,
    interior_product,
    pullback,
    wedge,
)
from .models import DEFAULT_ORDER_BOUND, ModelSpace
from .structures import CheckItem, CheckReport, EVEN_PERMS, ThreeStructure

#: Fixed report order for the eight eigenvalue patterns (eps1, eps2, eps3).
EPS_ORDER = (
    (0, 0, 0),
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 1, 0),
    (1, 0, 1),
    (0, 1, 1),
    (1, 1, 1),
)


class NonCompactError(ValueError):
    """Betti data requested for a non-compact model."""


class CohomologyError(RuntimeError):
    """An identity that is a theorem failed; the model data is inconsistent."""


def eps_label(eps: tuple[int, int, int]) -> str:
    return "".join(str(e) for e in eps)


# -- coordinatization of constant forms --------------------------------------


def monomial_tuples(m: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(m), k))


def form_vector(omega: KForm, tuples: list[tuple[int, ...]]) -> list[Fraction]:
    if not omega.is_constant():
        raise ValueError("only constant forms can be coordinatized")
    zero = Fraction(0)
    terms = omega.terms
    # Keys are already canonical increasing tuples, so plain lookups suffice.
    return [
        terms[t].constant_value() if t in terms else zero for t in tuples
    ]


def vector_form(vec, m: int, k: int, tuples: list[tuple[int, ...]]) -> KForm:
    return KForm(m, k, {t: c for t, c in zip(tuples, vec) if c})


def canonicalize_forms(forms: list[KForm], m: int, k: int) -> list[KForm]:
    """Reduced-echelon basis of the span, in lexicographic monomial order."""
    if not forms:
        return []
    tuples = monomial_tuples(m, k)
    rows = [form_vector(f, tuples) for f in forms]
    return [vector_form(v, m, k, tuples) for v in linalg.row_space_basis(rows)]


def operator_matrix(
    images: list[KForm], dst_basis: list[KForm], m: int, k_dst: int
) -> linalg.Matrix | None:
    """Matrix of an operator in given bases, or None if an image leaves the span."""
    if not images:
        return [[] for _ in range(len(dst_basis))]
    tuples = monomial_tuples(m, k_dst)
    dst_cols = [form_vector(f, tuples) for f in dst_basis]
    image_cols = [form_vector(im, tuples) for im in images]
    dmat = [[col[r] for col in dst_cols] for r in range(len(tuples))]
    vmat = [[col[r] for col in image_cols] for r in range(len(tuples))]
    return linalg.solve_many(dmat, vmat)


# -- invariant forms under a finite-order monodromy ---------------------------


def pullback_matrix(a: EndField, q: int) -> linalg.Matrix:
    """Matrix of the slotwise pullback a* on constant q-forms."""
    m = a.m
    tuples = monomial_tuples(m, q)
    cols = [form_vector(pullback(a, KForm.monomial(m, t)), tuples) for t in tuples]
    return [[cols[j][i] for j in range(len(tuples))] for i in range(len(tuples))]


def invariant_forms(
    a: EndField, q: int, order_bound: int = DEFAULT_ORDER_BOUND
) -> list[KForm]:
    """Canonical basis of the fixed subspace of a* on constant q-forms.

    Computed as the column space of the averaging projector
    P = (1/r) sum_{j<r} (a*)^j; the projector trace must equal the fixed
    dimension, and the two are cross-checked on every call.
    """
    if not a.is_constant():
        raise ValueError("monodromy must be constant")
    order = linalg.matrix_order(a.to_fractions(), order_bound)
    if order is None:
        raise CohomologyError(f"monodromy not finite order within bound {order_bound}")
    m = a.m
    tuples = monomial_tuples(m, q)
    n = len(tuples)
    star = pullback_matrix(a, q)
    acc = linalg.identity(n)
    total = linalg.identity(n)
    for _ in range(order - 1):
        acc = linalg.mat_mul(acc, star)
        total = linalg.mat_add(total, acc)
    proj = linalg.mat_scale(total, Fraction(1, order))
    basis_vecs = linalg.row_space_basis(linalg.transpose(proj))
    tr = linalg.trace(proj)
    if tr != len(basis_vecs):
        raise CohomologyError(
            f"projector trace {tr} disagrees with fixed-space dimension {len(basis_vecs)}"
        )
    return [vector_form(v, m, q, tuples) for v in basis_vecs]


# -- harmonic spaces ----------------------------------------------------------


def _require_compact_constant(space: ModelSpace, t: ThreeStructure):
    if not space.topology.compact:
        raise NonCompactError(
            "harmonic-form spaces require a compact (torus or mapping_torus) model"
        )
    for alpha in (1, 2, 3):
        s = t.structure(alpha)
        if not (
            s.phi.is_constant()
            and s.xi.is_constant()
            and s.eta.is_constant()
            and s.g.is_constant()
        ):
            raise ValueError(
                "compact models require constant-coefficient structure tensors"
            )


def _embed_fiber_form(w: KForm, m: int) -> KForm:
    return KForm(m, w.degree, {key: p.constant_value() for key, p in w.terms.items()})


def harmonic_space(space: ModelSpace, t: ThreeStructure, k: int) -> list[KForm]:
    """Canonical basis of the harmonic k-forms of a compact builtin model.

    Torus: all constant k-forms.  Mapping torus: spans dt_S ^ w with w a
    monodromy-invariant constant form on the fiber, dt-factors free.
    """
    _require_compact_constant(space, t)
    m = space.chart_dim
    if not 0 <= k <= m:
        raise ValueError(f"degree {k} out of range 0..{m}")
    topo = space.topology
    if topo.kind == "torus":
        return [KForm.monomial(m, t_) for t_ in monomial_tuples(m, k)]
    d = topo.fiber_dim
    assert topo.monodromy is not None
    forms: list[KForm] = []
    for p in range(4):
        q = k - p
        if q < 0 or q > d:
            continue
        fiber = invariant_forms(topo.monodromy, q, order_bound=topo.order or DEFAULT_ORDER_BOUND)
        for t_set in combinations(range(d, d + 3), p):
            dt_part = KForm.monomial(m, t_set)
            for w in fiber:
                forms.append(wedge(dt_part, _embed_fiber_form(w, m)))
    return canonicalize_forms(forms, m, k)


def is_basic(space: ModelSpace, t: ThreeStructure, omega: KForm) -> bool:
    """A form is basic when every i_{xi_alpha} kills both it and its differential."""
    d_omega = exterior_derivative(omega)
    for alpha in (1, 2, 3):
        xi = t.structure(alpha).xi
        if omega.degree > 0 and not interior_product(xi, omega).is_zero():
            return False
        if not interior_product(xi, d_omega).is_zero():
            return False
    return True


# -- graded operators ---------------------------------------------------------


@dataclass(frozen=True)
class GradedOperatorMatrix:
    """Per-degree matrices of a degree-shifting operator in canonical bases."""

    name: str
    degree_shift: int
    blocks: dict[int, linalg.Matrix]

    def block(self, k: int) -> linalg.Matrix:
        return self.blocks.get(k, [])


def _e_alpha(s, omega: KForm) -> KForm:
    if omega.degree == 0:
        return KForm(omega.m, 0)
    return wedge(s.eta, interior_product(s.xi, omega))


def small_operators(
    space: ModelSpace,
    t: ThreeStructure,
    bases: list[list[KForm]] | None = None,
) -> dict[str, GradedOperatorMatrix]:
    """Matrices of l_alpha (wedge eta), lambda_alpha (contract xi), and
    e_alpha = l_alpha . lambda_alpha on every harmonic space.

    Raises :class:`CohomologyError` if an image fails to stay harmonic, which
    would mean the model data is inconsistent.
    """
    m = space.chart_dim
    if bases is None:
        bases = [harmonic_space(space, t, k) for k in range(m + 1)]
    ops: dict[str, GradedOperatorMatrix] = {}
    for alpha in (1, 2, 3):
        s = t.structure(alpha)
        l_blocks: dict[int, linalg.Matrix] = {}
        lam_blocks: dict[int, linalg.Matrix] = {}
        e_blocks: dict[int, linalg.Matrix] = {}
        for k in range(m + 1):
            basis = bases[k]
            if k < m:
                images = [wedge(s.eta, b) for b in basis]
                mat = operator_matrix(images, bases[k + 1], m, k + 1)
                if mat is None:
                    raise CohomologyError(f"l{alpha} does not preserve harmonic forms at degree {k}")
                l_blocks[k] = mat
            if k > 0:
                images = [interior_product(s.xi, b) for b in basis]
                mat = operator_matrix(images, bases[k - 1], m, k - 1)
                if mat is None:
                    raise CohomologyError(
                        f"lambda{alpha} does not preserve harmonic forms at degree {k}"
                    )
                lam_blocks[k] = mat
            images = [_e_alpha(s, b) for b in basis]
            mat = operator_matrix(images, basis, m, k)
            if mat is None:
                raise CohomologyError(f"e{alpha} does not preserve harmonic forms at degree {k}")
            e_blocks[k] = mat
        ops[f"l{alpha}"] = GradedOperatorMatrix(f"l{alpha}", 1, l_blocks)
        ops[f"lambda{alpha}"] = GradedOperatorMatrix(f"lambda{alpha}", -1, lam_blocks)
        ops[f"e{alpha}"] = GradedOperatorMatrix(f"e{alpha}", 0, e_blocks)
    return ops


# -- the eightfold decomposition ----------------------------------------------


@dataclass(frozen=True)
class HarmonicTable:
    """Harmonic bases, their eigenspace split, and (basic) Betti numbers."""

    m: int
    bases: tuple[tuple[KForm, ...], ...]
    components: dict[tuple[int, tuple[int, int, int]], tuple[KForm, ...]]
    b: tuple[int, ...]
    bh: tuple[int, ...]

    def component(self, k: int, eps: tuple[int, int, int]) -> tuple[KForm, ...]:
        return self.components.get((k, eps), ())

    def dims_row(self, k: int) -> dict[str, int]:
        return {eps_label(eps): len(self.component(k, eps)) for eps in EPS_ORDER}


def decompose(space: ModelSpace, t: ThreeStructure) -> HarmonicTable:
    """Split every harmonic space into the eight joint e_alpha eigenspaces.

    Verifies on the way that the e_alpha are commuting idempotents, that the
    component dimensions reproduce b_k and the basic Betti numbers, and that
    the (0,0,0) component is exactly the basic harmonic subspace.  Any
    failure raises :class:`CohomologyError`.
    """
    m = space.chart_dim
    bases = [harmonic_space(space, t, k) for k in range(m + 1)]
    b = tuple(len(basis) for basis in bases)
    ops = small_operators(space, t, bases)
    e_mats = [[ops[f"e{alpha}"].block(k) for alpha in (1, 2, 3)] for k in range(m + 1)]
    for k in range(m + 1):
        for alpha in range(3):
            e = e_mats[k][alpha]
            if linalg.mat_mul(e, e) != e:
                raise CohomologyError(f"e{alpha + 1} is not idempotent on degree {k}")
            for beta in range(alpha + 1, 3):
                f = e_mats[k][beta]
                if linalg.mat_mul(e, f) != linalg.mat_mul(f, e):
                    raise CohomologyError(
                        f"e{alpha + 1} and e{beta + 1} do not commute on degree {k}"
                    )
    components: dict[tuple[int, tuple[int, int, int]], tuple[KForm, ...]] = {}
    tuples_by_k = [monomial_tuples(m, k) for k in range(m + 1)]
    for k in range(m + 1):
        basis = bases[k]
        n = len(basis)
        basis_vecs = [form_vector(f, tuples_by_k[k]) for f in basis]
        for eps in EPS_ORDER:
            stacked: linalg.Matrix = []
            for alpha in range(3):
                block = e_mats[k][alpha]
                for i in range(n):
                    row = block[i][:]
                    if eps[alpha]:
                        row[i] = row[i] - 1
                    stacked.append(row)
            coords = linalg.kernel_basis(stacked) if n else []
            mono_rows = []
            for v in coords:
                mono = [Fraction(0)] * len(tuples_by_k[k])
                for j, c in enumerate(v):
                    if c:
                        for r in range(len(mono)):
                            mono[r] += c * basis_vecs[j][r]
                mono_rows.append(mono)
            canon = linalg.row_space_basis(mono_rows) if mono_rows else []
            components[(k, eps)] = tuple(
                vector_form(v, m, k, tuples_by_k[k]) for v in canon
            )
    bh = tuple(len(components[(k, (0, 0, 0))]) for k in range(m + 1))
    for k in range(m + 1):
        total = sum(len(components[(k, eps)]) for eps in EPS_ORDER)
        if total != b[k]:
            raise CohomologyError(
                f"eigenspace dimensions at degree {k} sum to {total}, expected {b[k]}"
            )
        for eps in EPS_ORDER:
            weight = sum(eps)
            expected = bh[k - weight] if 0 <= k - weight <= m else 0
            if len(components[(k, eps)]) != expected:
                raise CohomologyError(
                    f"dim of component {eps_label(eps)} at degree {k} is "
                    f"{len(components[(k, eps)])}, expected {expected}"
                )
    _verify_basic_is_000(space, t, bases, components, tuples_by_k)
    return HarmonicTable(m, tuple(tuple(x) for x in bases), components, b, bh)


def _verify_basic_is_000(space, t, bases, components, tuples_by_k):
    m = space.chart_dim
    for k in range(m + 1):
        basis = bases[k]
        if k == 0:
            basic_dim = len(basis)
        else:
            stacked = []
            for alpha in (1, 2, 3):
                xi = t.structure(alpha).xi
                image_cols = [
                    form_vector(interior_product(xi, f), tuples_by_k[k - 1])
                    for f in basis
                ]
                for r in range(len(tuples_by_k[k - 1])):
                    stacked.append([col[r] for col in image_cols])
            basic_dim = len(linalg.kernel_basis(stacked)) if basis else 0
        comp = components[(k, (0, 0, 0))]
        if basic_dim != len(comp):
            raise CohomologyError(
                f"basic harmonic dimension {basic_dim} differs from the "
                f"(0,0,0) component dimension {len(comp)} at degree {k}"
            )
        for f in comp:
            if not is_basic(space, t, f):
                raise CohomologyError(
                    f"a (0,0,0) component basis form of degree {k} is not basic"
                )


# -- the ladder of isomorphisms ----------------------------------------------


def verify_ladder(
    space: ModelSpace, t: ThreeStructure, table: HarmonicTable | None = None
) -> CheckReport:
    """Check that each l_alpha maps its source component bijectively onto its
    target along every edge of the eigenvalue cube, for 0 <= k <= m - 3."""
    if table is None:
        table = decompose(space, t)
    m = table.m
    items = []
    for k in range(m - 2):
        for alpha in (1, 2, 3):
            eta = t.structure(alpha).eta
            for eps in EPS_ORDER:
                if eps[alpha - 1] == 1:
                    continue
                target = tuple(
                    1 if i == alpha - 1 else eps[i] for i in range(3)
                )
                src_deg = k + sum(eps)
                dst_deg = src_deg + 1
                src = table.component(src_deg, eps)
                dst = table.component(dst_deg, target)
                name = (
                    f"ladder[k={k}].l{alpha}.{eps_label(eps)}->{eps_label(target)}"
                )
                if len(src) != len(dst):
                    items.append(
                        CheckItem(name, False, f"dims {len(src)} -> {len(dst)}")
                    )
                    continue
                if not src:
                    items.append(CheckItem(name, True))
                    continue
                images = [wedge(eta, f) for f in src]
                mat = operator_matrix(images, list(dst), m, dst_deg)
                if mat is None:
                    items.append(CheckItem(name, False, "image leaves the target component"))
                    continue
                ok = linalg.rank(mat) == len(src)
                items.append(
                    CheckItem(name, ok, None if ok else "restriction is not injective")
                )
    return CheckReport(tuple(items))


# -- Betti arithmetic ----------------------------------------------------------


def betti_checks(table: HarmonicTable, n: int) -> CheckReport:
    """All arithmetic consequences of the decomposition for a 4n+3 model.

    Every line here is a theorem for a verified 3-cosymplectic compact model,
    so a failure indicates inconsistent data, not a property of the space.
    """
    m = table.m
    b, bh = table.b, table.bh
    if m != 4 * n + 3:
        raise ValueError(f"table dimension {m} does not match n = {n}")

    def bh_at(j: int) -> int:
        return bh[j] if 0 <= j <= m else 0

    items = []
    for k in range(m + 1):
        expected = bh_at(k) + 3 * bh_at(k - 1) + 3 * bh_at(k - 2) + bh_at(k - 3)
        items.append(
            CheckItem(
                f"betti_formula[k={k}]",
                b[k] == expected,
                None if b[k] == expected else f"b_{k} = {b[k]}, formula gives {expected}",
            )
        )
    for k in range(1, m + 1, 2):
        ok = bh[k] % 4 == 0
        items.append(
            CheckItem(
                f"basic_betti_div4[k={k}]",
                ok,
                None if ok else f"bh_{k} = {bh[k]}",
            )
        )
        ok = (b[k - 1] + b[k]) % 4 == 0
        items.append(
            CheckItem(
                f"betti_sum_div4[k={k}]",
                ok,
                None if ok else f"b_{k - 1} + b_{k} = {b[k - 1] + b[k]}",
            )
        )
    for k in range(0, 2 * n + 2):
        bound = math.comb(k + 2, 2)
        ok = b[k] >= bound
        items.append(
            CheckItem(
                f"betti_lower_bound[k={k}]",
                ok,
                f"b_{k} = {b[k]} >= C({k}+2,2) = {bound}" if ok else f"b_{k} = {b[k]} < {bound}",
            )
        )
    for k in range(0, (2 * n + 1) // 2 + 1):
        bound = math.comb(k + 2, 2)
        ok = b[2 * k] >= bound
        items.append(
            CheckItem(
                f"wakakuwa_bound[k={k}]",
                ok,
                f"b_{2 * k} = {b[2 * k]} >= {bound} (weaker even-degree bound)",
            )
        )
    for k in range(m + 1):
        ok = b[k] == b[m - k]
        items.append(
            CheckItem(
                f"poincare_duality[k={k}]",
                ok,
                None if ok else f"b_{k} = {b[k]} != b_{m - k} = {b[m - k]}",
            )
        )
    euler = sum((-1) ** k * b[k] for k in range(m + 1))
    items.append(
        CheckItem(
            "euler_characteristic_zero",
            euler == 0,
            None if euler == 0 else f"chi = {euler}",
        )
    )
    return CheckReport(tuple(items))


# -- quaternionic module structure on odd basic degrees ------------------------


def quaternion_module(
    space: ModelSpace,
    t: ThreeStructure,
    k: int,
    table: HarmonicTable | None = None,
) -> CheckReport:
    """Slotwise phi_alpha-pullback on the degree-k basic harmonic space.

    For odd k the three pullbacks square to -id and anticommute into each
    other (I_a I_b = -I_c on even permutations), which makes the space a
    quaternionic vector space and forces 4 | dim.
    """
    if k % 2 == 0:
        raise ValueError("the quaternionic module structure applies to odd degrees")
    if table is None:
        table = decompose(space, t)
    m = table.m
    basis = list(table.component(k, (0, 0, 0)))
    dim = len(basis)
    items = []
    mats = {}
    for alpha in (1, 2, 3):
        phi = t.structure(alpha).phi
        images = [pullback(phi, f) for f in basis]
        mat = operator_matrix(images, basis, m, k)
        name = f"hmodule_preserved[{alpha}]"
        if mat is None:
            items.append(CheckItem(name, False, "pullback leaves the component"))
        else:
            items.append(CheckItem(name, True))
            mats[alpha] = mat
    if len(mats) == 3:
        minus_id = linalg.mat_scale(linalg.identity(dim), Fraction(-1))
        for alpha in (1, 2, 3):
            ok = linalg.mat_mul(mats[alpha], mats[alpha]) == minus_id
            items.append(
                CheckItem(
                    f"hmodule_I{alpha}_squared_minus_id",
                    ok,
                    None if ok else "I^2 != -id",
                )
            )
        for (a, b_, c) in EVEN_PERMS:
            prod = linalg.mat_mul(mats[a], mats[b_])
            ok = prod == linalg.mat_scale(mats[c], Fraction(-1))
            items.append(
                CheckItem(
                    f"hmodule_I{a}I{b_}_eq_minus_I{c}",
                    ok,
                    None if ok else "quaternion relation fails",
                )
            )
    ok = dim % 4 == 0
    items.append(
        CheckItem(
            f"hmodule_dim_div4[k={k}]",
            ok,
            f"dim = {dim}" if ok else f"dim = {dim} not divisible by 4",
        )
    )
    return CheckReport(tuple(items))
