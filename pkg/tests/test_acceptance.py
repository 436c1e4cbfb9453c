"""The acceptance gate: one test per frozen criterion, in order.

Every comparison is exact unless a tolerance is stated in the test.  The
expected values are written out inline here, on purpose, even where the
package exports the same constants: this file is the record of what the
build must reproduce.

Run with `python3 -m pytest tests/test_acceptance.py -v` for one pass/fail
line per criterion, or `triform verify-all` for the CLI rendering.
"""

import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from triform.borcherds import (
    accounting_report,
    ball_weight,
    borcherds_weight,
    lift_witness,
    long_root_divisor,
    obstruction_check,
    short_root_divisor,
)
from triform.exact import CycQ, OMEGA, mat_eq, mat_from_rows
from triform.fqm import (
    canonical_sign,
    central_negation,
    classify,
    involutive_reflections,
    isotropic_incidence,
    orthogonal_bases,
    orthogonal_group,
    paper_module,
    pairing_table,
    reflect,
    type_of,
)
from triform.lattice import (
    alt_spec,
    discriminant_form,
    milgram_signature,
    paper_spec,
    reflection_minus_one,
    trireflection,
)
from triform.qseries import (
    eisenstein_g4,
    eta_power_8,
    evaluate,
    numeric_transform_check,
    obstruction_eisenstein,
)
from triform.vvmf import RepSpec, dimension_report
from triform.weil import (
    aggregated_dual,
    build_weil,
    cayley_check,
    character_decompose,
    isotypic_subspace,
    o_q_character_norm,
    special_vector_rank,
    special_vectors,
    verify_special,
)


@pytest.fixture(scope="module")
def module():
    return paper_module()


@pytest.fixture(scope="module")
def rep(module):
    return build_weil(module)


@pytest.fixture(scope="module")
def form():
    return obstruction_eisenstein(60)


@pytest.fixture(scope="module")
def subspace(rep):
    return isotypic_subspace(rep)


@pytest.fixture(scope="module")
def vectors(rep):
    return special_vectors(rep)


def _expand(patterns):
    out = set()
    for pat in patterns:
        slots = [i for i, d in enumerate(pat) if d]
        for signs in itertools.product((1, 2), repeat=len(slots)):
            x = list(pat)
            for i, s in zip(slots, signs):
                x[i] = s
            out.add(tuple(x))
    return out


def test_criterion_01_type_census(module):
    """Counts (1, 20, 30, 30) and the exact element lists.  Exact."""
    types = classify(module)
    assert {t: len(v) for t, v in types.items()} == {
        "00": 1, "0": 20, "1": 30, "2": 30}
    assert set(types["00"]) == {(0, 0, 0, 0)}
    assert set(types["0"]) == _expand(
        [(1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 1)])
    assert set(types["1"]) == _expand(
        [(1, 0, 0, 0), (1, 1, 1, 1), (0, 1, 1, 0), (0, 1, 0, 1), (0, 0, 1, 1)])
    assert set(types["2"]) == _expand(
        [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
         (1, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1)])
    print("criterion 01: 81 elements in types (1, 20, 30, 30), lists exact")


def test_criterion_02_pairing_table(module):
    """All 16 (u-type, v-type) triples.  Exact."""
    assert pairing_table(module) == {
        ("00", "00"): (1, 0, 0), ("00", "0"): (20, 0, 0),
        ("00", "1"): (30, 0, 0), ("00", "2"): (30, 0, 0),
        ("0", "00"): (1, 0, 0), ("0", "0"): (2, 9, 9),
        ("0", "1"): (12, 9, 9), ("0", "2"): (12, 9, 9),
        ("1", "00"): (1, 0, 0), ("1", "0"): (8, 6, 6),
        ("1", "1"): (12, 9, 9), ("1", "2"): (6, 12, 12),
        ("2", "00"): (1, 0, 0), ("2", "0"): (8, 6, 6),
        ("2", "1"): (6, 12, 12), ("2", "2"): (12, 9, 9),
    }
    print("criterion 02: all 16 pairing triples exact")


def test_criterion_03_weil_traces(rep):
    """Traces (81, 1, 1, -9, 1, 1, -9); multiplicities (1,10,5,5,5,10,5).  Exact."""
    assert cayley_check(rep) == 576
    dec = character_decompose(rep)
    assert tuple(int(t.as_fraction()) for t in dec.traces) == (
        81, 1, 1, -9, 1, 1, -9)
    assert dec.multiplicities == (1, 10, 5, 5, 5, 10, 5)
    print("criterion 03: traces and multiplicities exact, 576 products closed")


def test_criterion_04_aggregated_dual(rep):
    """The 4 x 4 conjugate-action pair, entry for entry.  Exact CycQ."""
    agg_t, agg_s = aggregated_dual(rep)
    w = OMEGA
    expected_t = mat_from_rows([
        [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, w * w, 0], [0, 0, 0, w]])
    expected_s = mat_from_rows([
        [Fraction(-1, 9) * x for x in row]
        for row in ((1, 1, 1, 1), (20, -7, 2, 2), (30, 3, 3, -6), (30, 3, -6, 3))])
    assert mat_eq(agg_t, expected_t)
    assert mat_eq(agg_s, expected_s)
    print("criterion 04: aggregated dual pair exact")


def test_criterion_05_dimension_report(rep):
    """d = 4, alpha = (1, 4/3, 1), dims 2 / 2 / 0.  Exact."""
    agg_t, agg_s = aggregated_dual(rep)
    report = dimension_report(RepSpec(agg_t, agg_s), 4)
    assert report.dim_plus == 4
    assert (report.alpha_s, report.alpha_st, report.alpha_t) == (
        Fraction(1), Fraction(4, 3), Fraction(1))
    assert report.dim_modular == 2
    assert report.dim_eisenstein == 2
    assert report.dim_cusp == 0
    print("criterion 05: dimension report 2 / 2 / 0 at weight 4")


def test_criterion_06_eisenstein_normalization(form):
    """Constant -1/2; leading 270 q, 135 q^(2/3), 15 q^(1/3).  Exact.

    The zero-class q-coefficient (15) is certified against the truncated
    lattice sum (|m|, |n| <= 2000 at tau = 1.3i), tolerance 1e-6 relative,
    rather than against any printed value.
    """
    assert form.component("00").coeff_at(0) == Fraction(-1, 2)
    assert form.component("0").leading() == (3, CycQ.rational(270))
    assert form.component("1").leading() == (2, CycQ.rational(135))
    assert form.component("2").leading() == (1, CycQ.rational(15))
    assert form.component("00").coeff_at(3) == 15

    tau = 1.3j
    box = 2000
    c = (2 * math.pi) ** 4 / 486

    def lattice_sum(a, b):
        ms = np.arange(-box, box + 1)
        ns = np.arange(-box, box + 1)
        ms = ms[ms % 3 == a].astype(np.float64)
        ns = ns[ns % 3 == b].astype(np.float64)
        total = 0j
        for chunk in np.array_split(ms, 8):
            total += np.sum((chunk[:, None] * tau + ns[None, :]) ** -4.0)
        return complex(total) / c

    a_coef, b_coef = form.weights
    direct = (float(a_coef) * lattice_sum(0, 1)
              + float(b_coef) * (lattice_sum(1, 0) + lattice_sum(1, 1)
                                 + lattice_sum(1, 2)))
    expansion = evaluate(form.component("00"), tau)
    assert abs(direct - expansion) / abs(direct) < 1e-6
    print("criterion 06: normalization exact, lattice-sum oracle within 1e-6")


def test_criterion_07_borcherds_weights(form):
    """Long -> 135, short -> 15; ball weights 45 and 5; no obstruction.  Exact."""
    assert borcherds_weight(long_root_divisor(), form) == 135
    assert borcherds_weight(short_root_divisor(), form) == 15
    assert ball_weight(long_root_divisor(), form) == 45
    assert ball_weight(short_root_divisor(), form) == 5
    assert obstruction_check(4).ok
    print("criterion 07: weights 135 / 15, ball 45 / 5, obstruction clear")


def test_criterion_08_orthogonal_group(module):
    """Order 1440; orbits {20, 30, 30}; central -1; 30 involutive reflections."""
    group = orthogonal_group(module)
    assert group.order == 1440
    assert sorted(len(o) for o in group.orbits) == [20, 30, 30]
    assert central_negation(group)
    assert len(involutive_reflections(group)) == 30
    print("criterion 08: group order 1440, orbits (20, 30, 30), 30 reflections")


def test_criterion_09_orthogonal_bases(module):
    """15 sign-classes; unique completions; incidence 3; coverage; 10 cusps."""
    bases = orthogonal_bases(module)  # raises on any ambiguous completion
    assert len(bases) == 15
    types = classify(module)
    canon1 = {x for x in types["1"] if canonical_sign(module, x) == x}
    assert {b.alpha0 for b in bases} == canon1
    incidence = Counter(
        canonical_sign(module, a) for b in bases for a in b.rest)
    assert set(incidence.values()) == {3}
    assert len(incidence) == 15
    for b in bases:
        assert all(isotropic_incidence(module, b).values())
    assert len(types["0"]) // 2 == 10
    print("criterion 09: 15 bases, incidence 3, isotropic coverage, 10 cusps")


def test_criterion_10_special_vectors(rep, subspace, vectors):
    """All 15 verified; rank 5; O(q)-character norm 1.  Exact."""
    assert len(vectors) == 15
    for sv in vectors:
        checks = verify_special(rep, sv, subspace)
        assert checks.s_fixed
        assert checks.t_eigenvector
        assert all(checks.reflections_negate)
        assert checks.in_isotypic
    assert subspace.dimension == 5
    assert special_vector_rank(vectors) == 5
    assert o_q_character_norm(rep, subspace.projector) == 1
    print("criterion 10: 15 special vectors verified, rank 5, norm 1")


def test_criterion_11_lift_witness(rep, vectors):
    """Every special vector has a signed support witness.  Exact."""
    for sv in vectors:
        x, coeff = lift_witness(sv)
        assert coeff in (-1, 1)
        assert type_of(rep.module, x) == "1"
    standard = next(sv for sv in vectors if sv.basis.alpha0 == (1, 0, 0, 0))
    assert lift_witness(standard) == ((1, 1, 1, 1), -1)
    print("criterion 11: signed witnesses, standard basis -> (1111, -1)")


def test_criterion_12_lattice_layer(module):
    """Isometries induce the asserted maps; decompositions agree.  Exact."""
    spec = paper_spec()
    data = discriminant_form(spec)
    assert data.module == module
    identity4 = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))

    tri = trireflection(spec, (0, 0, 1, 0, 0, 0, 0, 0))   # norm -2 root
    assert data.induced_map(tri) == identity4

    long_root = (0, 0, 1, 0, 1, 0, 0, 0)                  # norm -4 root
    refl = reflection_minus_one(spec, long_root)
    alpha = data.vector_class(long_root)
    assert type_of(module, alpha) == "1"
    assert data.induced_map(refl) == reflect(module, alpha).matrix

    alt = discriminant_form(alt_spec())
    assert data.module.q_histogram() == alt.module.q_histogram()
    assert milgram_signature(data.module) == 4
    assert milgram_signature(alt.module) == 4
    print("criterion 12: induced maps exact, histograms equal, Milgram 4 / 4")


def test_criterion_13_numeric_transform(rep, vectors):
    """eta^8 times a special vector at tau = 0.3 + 1.1i.  Tolerance 1e-8."""
    standard = next(sv for sv in vectors if sv.basis.alpha0 == (1, 0, 0, 0))
    eta8 = eta_power_8(60)
    assert eta8.coeff_at(1) == 1
    assert eta8.coeff_at(4) == -8
    assert eta8.coeff_at(7) == 20
    components = [eta8.scale(v) for v in standard.vec]
    out = numeric_transform_check(components, rep.rho_T, rep.rho_S, 4,
                                  0.3 + 1.1j)
    assert out["max_deviation"] < 1e-8
    print(f"criterion 13: transformation deviation {out['max_deviation']:.2e}")


def test_criterion_14_accounting(module, form):
    """15 * 6 = 90 = 45 + 9 * 5, multiplicity 9 from enumerated incidence."""
    report = accounting_report(module, form)
    assert report.n_bases == 15
    assert report.short_incidence == 3          # enumerated, not assumed
    assert report.short_multiplicity == 9
    assert report.ball_long == 45
    assert report.ball_short == 5
    assert report.per_basis_weight == 90
    assert report.per_basis_weight == report.ball_long + 9 * report.ball_short
    assert report.per_basis_weight == 6 * report.n_bases
    assert report.cusps == 10
    # the (3 * 15 * 3) / 15 count, from the raw enumeration
    bases = orthogonal_bases(module)
    slots = sum(len(b.rest) for b in bases)
    assert slots == 45
    assert slots * 3 // len(bases) == 9
    print("criterion 14: 90 = 45 + 9 * 5 = 6 * 15, multiplicity enumerated")
