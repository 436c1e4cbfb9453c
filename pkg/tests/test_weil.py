import itertools
from fractions import Fraction

import numpy as np
import pytest

from triform.exact import (
    CycQ,
    OMEGA,
    mat_eq,
    mat_from_rows,
    mat_identity,
    mat_mul,
    mat_trace,
    root_of_unity,
)
from triform.fqm import classify, orthogonal_group, paper_module
from triform.weil import (
    CHARACTER_TABLE,
    CLASS_ORDER,
    CLASS_SIZES,
    OmegaMat,
    RelationError,
    S_MAT,
    T_MAT,
    WeilRep,
    _inv2,
    _mul2,
    _neg2,
    aggregated_dual,
    build_sl2f3,
    build_weil,
    cayley_check,
    character_decompose,
    isotypic_subspace,
    o_q_character_norm,
    projector_onto_indices,
    special_vector_rank,
    special_vectors,
    validate_character_table,
    verify_special,
)

M = paper_module()
REP = build_weil(M)


# ---------------------------------------------------------------------------
# the exact matrix layer


def test_omega_mat_arithmetic():
    w_scalar = OmegaMat(np.array([[0]]), np.array([[1]]))
    w2 = w_scalar @ w_scalar
    # w^2 = -1 - w
    assert np.array_equal(w2.a, [[-1]]) and np.array_equal(w2.b, [[-1]])
    assert (w2 @ w_scalar) == OmegaMat.identity(1)
    third = OmegaMat(np.array([[1]]), np.array([[0]]), 3)
    assert third + third + third == OmegaMat.identity(1)
    assert w_scalar.conjugate() == w2
    assert w_scalar.trace() == OMEGA
    assert (w_scalar.scale(0, 1)) == w2


def test_omega_mat_equality_across_denominators():
    a = OmegaMat(np.array([[2]]), np.array([[4]]), 2)
    b = OmegaMat(np.array([[1]]), np.array([[2]]))
    assert a == b


# ---------------------------------------------------------------------------
# the group


def test_group_structure():
    group = build_sl2f3()
    assert group.order == 24
    assert group.by_mat[((1, 0), (0, 1))].word == ""
    # canonical words are shortest; the two generators are themselves
    assert group.by_mat[S_MAT].word == "S"
    assert group.by_mat[T_MAT].word == "T"
    sizes = {label: len(group.classes[label]) for label in CLASS_ORDER}
    assert tuple(sizes[label] for label in CLASS_ORDER) == CLASS_SIZES
    for g in group.elements:
        assert _mul2(g.mat, _inv2(g.mat)) == ((1, 0), (0, 1))


def test_character_table_orthogonality():
    validate_character_table()
    dims = sorted(int(CHARACTER_TABLE[i][0].as_fraction()) for i in CHARACTER_TABLE)
    assert dims == [1, 1, 1, 2, 2, 2, 3]
    assert sum(d * d for d in dims) == 24


# ---------------------------------------------------------------------------
# the representation


def test_generator_matrices():
    # diagonal phases 1, 1, w, w^2 on types 00, 0, 1, 2
    t = REP.rho_T
    for x in REP.elements:
        i = REP.index[x]
        q = M.q(x)
        expected = root_of_unity(int(Fraction(3, 2) * q % 3), 3)
        assert t.entry(i, i) == expected
    s = REP.rho_S
    z = REP.index[M.zero()]
    assert s.entry(z, z) == Fraction(-1, 9)
    alpha = REP.index[(1, 0, 0, 0)]
    # b((1,0,0,0), (1,0,0,0)) = 2/3, so the entry is -(1/9) e^(-4 pi i/3)
    assert s.entry(alpha, alpha) == Fraction(-1, 9) * root_of_unity(-2, 3)


def test_full_multiplication_table():
    assert cayley_check(REP) == 576


def test_rho_inverse_is_conjugate_transpose():
    # the representation is unitary with real structure constants
    for word in ("S", "T", "ST", "TS", "STT"):
        m = REP.rho_of(word)
        g = REP.group.by_mat[_matrix_of_word(word)]
        inv = REP.rho[_inv2(g.mat)]
        assert m @ inv == OmegaMat.identity(81)
        assert inv == m.conjugate().transpose()


def _matrix_of_word(word):
    m = ((1, 0), (0, 1))
    for ch in word:
        m = _mul2(m, S_MAT if ch == "S" else T_MAT)
    return m


def test_traces_on_classes():
    dec = character_decompose(REP)
    expected = (81, 1, 1, -9, 1, 1, -9)
    for tr, want in zip(dec.traces, expected):
        assert tr == want
        # algebraic integers: integer coordinates over the power basis
        assert all(c.denominator == 1 for c in tr.c)


def test_multiplicities():
    dec = character_decompose(REP)
    assert dec.multiplicities == (1, 10, 5, 5, 5, 10, 5)


def test_rho_commutes_with_orthogonal_group():
    group = orthogonal_group(M)
    elems = np.array(REP.elements, dtype=np.int64)
    weights = np.array([27, 9, 3, 1], dtype=np.int64)
    idx = np.arange(81)
    for g in group.generators:
        p = (elems @ np.array(g, dtype=np.int64).T % 3) @ weights
        pinv = np.empty_like(p)
        pinv[p] = idx
        for m in (REP.rho_S, REP.rho_T):
            assert np.array_equal(m.a[np.ix_(pinv, pinv)], m.a)
            assert np.array_equal(m.b[np.ix_(pinv, pinv)], m.b)


# ---------------------------------------------------------------------------
# independent re-derivation of the character table

I4 = root_of_unity(1, 4)
HALF = Fraction(1, 2)


def _quaternion_model():
    one = mat_identity(2)
    i_m = mat_from_rows([[I4, 0], [0, -I4]])
    j_m = mat_from_rows([[0, 1], [-1, 0]])
    k_m = mat_mul(i_m, j_m)
    return one, i_m, j_m, k_m


def _scale_mat(s, m):
    return tuple(tuple(s * x for x in row) for row in m)


def _add_mats(*ms):
    out = ms[0]
    for m in ms[1:]:
        out = tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(out, m))
    return out


def _mat_key(m):
    return tuple(tuple(tuple(str(c) for c in x.embed(12).c) for x in row) for row in m)


def test_two_dimensional_characters_from_quaternion_model():
    """Re-derive the three 2-dim irreducibles inside SU(2) and, with the
    cubic and permutation characters, recover the whole frozen table."""
    group = build_sl2f3()
    one, i_m, j_m, k_m = _quaternion_model()
    neg_one = _scale_mat(CycQ.rational(-1), one)

    order4 = []
    for base in (i_m, j_m, k_m):
        order4.append(base)
        order4.append(_scale_mat(CycQ.rational(-1), base))
    order3 = []
    for si, sj, sk in itertools.product((1, -1), repeat=3):
        cand = _scale_mat(HALF, _add_mats(
            neg_one, _scale_mat(CycQ.rational(si), i_m),
            _scale_mat(CycQ.rational(sj), j_m),
            _scale_mat(CycQ.rational(sk), k_m)))
        assert mat_eq(mat_mul(cand, mat_mul(cand, cand)), one)
        order3.append(cand)

    found = None
    for ms in order4:
        if found:
            break
        ms2 = mat_mul(ms, ms)
        if not mat_eq(ms2, neg_one):
            continue
        for mt in order3:
            # defining relations first, then full well-definedness
            mst = mat_mul(ms, mt)
            if not mat_eq(mat_mul(mst, mat_mul(mst, mst)), ms2):
                continue
            images = {}
            ok = True
            for g in group.elements:
                m = one
                for ch in g.word:
                    m = mat_mul(m, ms if ch == "S" else mt)
                images[g.mat] = m
            for g in group.elements:
                for h in group.elements:
                    if not mat_eq(mat_mul(images[g.mat], images[h.mat]),
                                  images[_mul2(g.mat, h.mat)]):
                        ok = False
                        break
                if not ok:
                    break
            if ok and len({_mat_key(m) for m in images.values()}) == 24:
                found = images
                break
    assert found is not None, "no faithful 2-dimensional model exists"

    char2 = tuple(mat_trace(found[group.classes[label][0].mat])
                  for label in CLASS_ORDER)

    # cubic characters via the abelianization
    comm = {((1, 0), (0, 1))}
    frontier = list(comm)
    commutators = {
        _mul2(_mul2(g.mat, h.mat), _inv2(_mul2(h.mat, g.mat)))
        for g in group.elements for h in group.elements
    }
    comm_group = set()
    frontier = [((1, 0), (0, 1))]
    comm_group.update(frontier)
    while frontier:
        nxt = []
        for m in frontier:
            for c in commutators:
                p = _mul2(m, c)
                if p not in comm_group:
                    comm_group.add(p)
                    nxt.append(p)
        frontier = nxt
    assert len(comm_group) == 8  # the quaternion subgroup

    def coset_exponent(mat):
        for k in (0, 1, 2):
            tk = ((1, 0), (0, 1))
            for _ in range(k):
                tk = _mul2(tk, T_MAT)
            if _mul2(_inv2(tk), mat) in comm_group:
                return k
        raise AssertionError("quotient is not generated by the T-coset")

    cubic1 = tuple(root_of_unity(coset_exponent(group.classes[label][0].mat), 3)
                   for label in CLASS_ORDER)
    cubic2 = tuple(v * v for v in cubic1)
    for label in CLASS_ORDER:  # class functions indeed
        for g in group.classes[label]:
            assert coset_exponent(g.mat) == coset_exponent(group.classes[label][0].mat)

    # permutation character on the projective line minus the trivial one
    lines = [(1, 0), (0, 1), (1, 1), (1, 2)]

    def line_of(v):
        v = (v[0] % 3, v[1] % 3)
        return v if v in lines else ((2 * v[0]) % 3, (2 * v[1]) % 3)

    def fixed_lines(mat):
        count = 0
        for v in lines:
            img = (mat[0][0] * v[0] + mat[0][1] * v[1],
                   mat[1][0] * v[0] + mat[1][1] * v[1])
            if line_of(img) == v:
                count += 1
        return count

    chi_three_dim = tuple(CycQ.rational(fixed_lines(group.classes[label][0].mat) - 1)
                          for label in CLASS_ORDER)

    trivial = tuple(CycQ.rational(1) for _ in CLASS_ORDER)
    derived = [
        trivial,
        chi_three_dim,
        cubic1,
        cubic2,
        char2,
        tuple(a * b for a, b in zip(char2, cubic1)),
        tuple(a * b for a, b in zip(char2, cubic2)),
    ]

    # all seven have norm one and are pairwise orthogonal
    for i, chi in enumerate(derived):
        for j, psi in enumerate(derived):
            acc = CycQ.rational(0)
            for size, a, b in zip(CLASS_SIZES, chi, psi):
                acc = acc + Fraction(size) * a * b.conjugate()
            assert acc == (24 if i == j else 0)

    def norm_key(values):
        out = []
        for v in values:
            v3 = v if v.n == 3 else (
                CycQ.rational(v.as_fraction()).embed(3) if v.is_rational()
                else v.embed(12).restrict(3))
            out.append(tuple(str(c) for c in v3.c))
        return tuple(out)

    derived_keys = sorted(norm_key(chi) for chi in derived)
    frozen_keys = sorted(norm_key(CHARACTER_TABLE[i]) for i in CHARACTER_TABLE)
    assert derived_keys == frozen_keys


# ---------------------------------------------------------------------------
# aggregated dual action


def test_aggregated_dual_matches_display():
    agg_t, agg_s = aggregated_dual(REP)
    w = OMEGA
    assert agg_t[2][2] == w * w and agg_t[3][3] == w
    assert agg_s[1][0] == Fraction(-20, 9)
    assert agg_s[1][1] == Fraction(7, 9)
    assert agg_s[2][3] == Fraction(6, 9)
    # a representation of the 4-group quotient: involution and braid relation
    assert mat_eq(mat_mul(agg_s, agg_s), mat_identity(4))
    st = mat_mul(agg_s, agg_t)
    assert mat_eq(mat_mul(st, mat_mul(st, st)), mat_identity(4))


# ---------------------------------------------------------------------------
# isotypic subspace and the special vectors


def test_isotypic_subspace_dimension():
    sub = isotypic_subspace(REP, 3)
    assert sub.dimension == 5
    assert len(sub.basis) == 5


def test_special_vectors_all_checks():
    sub = isotypic_subspace(REP, 3)
    vectors = special_vectors(REP)
    assert len(vectors) == 15
    for sv in vectors:
        checks = verify_special(REP, sv, sub)
        assert checks.s_fixed
        assert checks.t_eigenvector
        assert checks.reflections_negate == (True, True, True, True)
        assert checks.in_isotypic
        assert checks.ok


def test_special_vectors_span_rank_five():
    vectors = special_vectors(REP)
    assert special_vector_rank(vectors) == 5


def test_special_vector_standard_sign():
    vectors = special_vectors(REP)
    standard = next(sv for sv in vectors if sv.basis.alpha0 == (1, 0, 0, 0))
    assert standard.coeffs[(1, 1, 1, 1)] == -1


def test_support_coverage():
    vectors = special_vectors(REP)
    counts: dict = {}
    for sv in vectors:
        for x in sv.coeffs:
            counts[x] = counts.get(x, 0) + 1
    type_one = classify(M)["1"]
    assert set(counts) == set(type_one)
    assert set(counts.values()) == {8}


def test_o_q_character_norms():
    sub = isotypic_subspace(REP, 3)
    assert o_q_character_norm(REP, sub.projector) == 1
    zero_idx = REP.index[M.zero()]
    assert o_q_character_norm(REP, projector_onto_indices(81, [zero_idx])) == 1
    full = o_q_character_norm(REP, OmegaMat.identity(81))
    assert full.denominator == 1 and full > 1


def test_o_q_norm_rejects_unstable_projector():
    bad = projector_onto_indices(81, [REP.index[(1, 0, 0, 0)]])
    with pytest.raises(Exception):
        o_q_character_norm(REP, bad)
