"""The Weil representation of SL(2, F_3) on the group algebra of (F_3)^4.

The representation acts on the 81 basis vectors e_alpha by

    rho(T) e_alpha = e^(pi i q(alpha)) e_alpha
    rho(S) e_alpha = -(1/9) sum_delta e^(-2 pi i b(delta, alpha)) e_delta

and everything here is exact: matrices are stored as (A + B w)/d with
integer numpy arrays A, B, a positive integer denominator d, and w a
primitive cube root of unity (w^2 = -1 - w).  That keeps the full
24 x 24 multiplication-table check and the 81-dimensional projector
arithmetic fast without ever leaving Z[w].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import CycQ, OMEGA, mat_eq, mat_from_rows
from .fqm import (
    OrthoBasis,
    QuadraticModule,
    apply_matrix,
    classify,
    orthogonal_bases,
    orthogonal_group,
    type_of,
    _b3,
    _q3,
)


class RelationError(ValueError):
    """A defining relation of the representation failed."""


class DualMismatchError(ValueError):
    """The aggregated 4-dimensional action disagreed with the frozen display."""


class RankError(ValueError):
    pass


class InvarianceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact matrices over Z[w] with a common denominator

_OVERFLOW_LIMIT = 1 << 61


class OmegaMat:
    """(A + B w) / den with int64 arrays A, B; w = e^(2 pi i / 3)."""

    __slots__ = ("a", "b", "den")

    def __init__(self, a, b, den: int = 1, normalize: bool = True):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape != b.shape:
            raise ValueError("component shapes differ")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            a, b, den = -a, -b, -den
        if normalize:
            g = int(np.gcd.reduce(np.concatenate(
                [np.abs(a).ravel(), np.abs(b).ravel(), [den]])))
            if g > 1:
                a, b, den = a // g, b // g, den // g
        self.a, self.b, self.den = a, b, int(den)

    @staticmethod
    def identity(n: int) -> "OmegaMat":
        return OmegaMat(np.eye(n, dtype=np.int64), np.zeros((n, n), dtype=np.int64))

    @staticmethod
    def zeros(n: int) -> "OmegaMat":
        z = np.zeros((n, n), dtype=np.int64)
        return OmegaMat(z, z.copy())

    @property
    def shape(self):
        return self.a.shape

    def _guard(self, other: "OmegaMat"):
        m1 = max(int(np.abs(self.a).max(initial=0)), int(np.abs(self.b).max(initial=0)))
        m2 = max(int(np.abs(other.a).max(initial=0)), int(np.abs(other.b).max(initial=0)))
        if m1 * m2 * 3 * self.shape[1] >= _OVERFLOW_LIMIT:
            raise OverflowError("entries too large for the int64 representation")

    def __matmul__(self, other: "OmegaMat") -> "OmegaMat":
        self._guard(other)
        a1b2 = self.a @ other.b
        b1a2 = self.b @ other.a
        b1b2 = self.b @ other.b
        a = self.a @ other.a - b1b2
        b = a1b2 + b1a2 - b1b2
        return OmegaMat(a, b, self.den * other.den)

    def __add__(self, other: "OmegaMat") -> "OmegaMat":
        d = np.lcm(self.den, other.den)
        f1, f2 = int(d // self.den), int(d // other.den)
        return OmegaMat(self.a * f1 + other.a * f2, self.b * f1 + other.b * f2, int(d))

    def __sub__(self, other: "OmegaMat") -> "OmegaMat":
        return self + (-other)

    def __neg__(self) -> "OmegaMat":
        return OmegaMat(-self.a, -self.b, self.den, normalize=False)

    def scale(self, p: int, q: int, d: int = 1) -> "OmegaMat":
        """Multiply by the scalar (p + q w)/d."""
        a = self.a * p - self.b * q
        b = self.a * q + self.b * p - self.b * q
        return OmegaMat(a, b, self.den * d)

    def __eq__(self, other):
        if not isinstance(other, OmegaMat):
            return NotImplemented
        if self.shape != other.shape:
            return False
        f1, f2 = other.den, self.den
        return bool(np.array_equal(self.a * f1, other.a * f2)
                    and np.array_equal(self.b * f1, other.b * f2))

    __hash__ = None  # type: ignore[assignment]

    def conjugate(self) -> "OmegaMat":
        return OmegaMat(self.a - self.b, -self.b, self.den, normalize=False)

    def transpose(self) -> "OmegaMat":
        return OmegaMat(self.a.T.copy(), self.b.T.copy(), self.den, normalize=False)

    def trace(self) -> CycQ:
        ta, tb = int(np.trace(self.a)), int(np.trace(self.b))
        return CycQ(3, [Fraction(ta, self.den), Fraction(tb, self.den)])

    def entry(self, i: int, j: int) -> CycQ:
        return CycQ(3, [Fraction(int(self.a[i, j]), self.den),
                        Fraction(int(self.b[i, j]), self.den)])

    def matvec_int(self, v) -> tuple[np.ndarray, np.ndarray, int]:
        v = np.asarray(v, dtype=np.int64)
        return self.a @ v, self.b @ v, self.den

    def is_zero(self) -> bool:
        return not (self.a.any() or self.b.any())

    def to_cyc_rows(self):
        n, m = self.shape
        return tuple(tuple(self.entry(i, j) for j in range(m)) for i in range(n))

    def __repr__(self):
        return f"OmegaMat(shape={self.shape}, den={self.den})"


def scalar_as_pair(value: CycQ) -> tuple[int, int, int]:
    """(p, q, d) with value = (p + q w)/d, for conductor-3 values."""
    v = value if value.n == 3 else value.embed(3)
    a, b = v.c
    d = a.denominator * b.denominator // np.gcd(a.denominator, b.denominator)
    return int(a * d), int(b * d), int(d)


# ---------------------------------------------------------------------------
# SL(2, F_3)

Mat2 = tuple  # ((a, b), (c, d)) mod 3

S_MAT: Mat2 = ((0, 2), (1, 0))
T_MAT: Mat2 = ((1, 1), (0, 1))

# conjugacy-class display order; matches the character table below
CLASS_ORDER = ("E", "-E", "S", "ST2", "-ST2", "ST", "-ST")
CLASS_SIZES = (1, 1, 6, 4, 4, 4, 4)


def _mul2(x: Mat2, y: Mat2) -> Mat2:
    return (
        ((x[0][0] * y[0][0] + x[0][1] * y[1][0]) % 3,
         (x[0][0] * y[0][1] + x[0][1] * y[1][1]) % 3),
        ((x[1][0] * y[0][0] + x[1][1] * y[1][0]) % 3,
         (x[1][0] * y[0][1] + x[1][1] * y[1][1]) % 3),
    )


def _neg2(x: Mat2) -> Mat2:
    return tuple(tuple((-v) % 3 for v in row) for row in x)


def _inv2(x: Mat2) -> Mat2:
    (a, b), (c, d) = x
    det = (a * d - b * c) % 3
    if det != 1:
        raise ValueError("not in SL(2, F_3)")
    return ((d % 3, (-b) % 3), ((-c) % 3, a % 3))


@dataclass(frozen=True)
class GroupElement:
    mat: Mat2
    word: str  # shortest word in S, T; ties broken S before T


@dataclass(frozen=True)
class SL2F3:
    elements: tuple[GroupElement, ...]
    by_mat: dict
    class_of: dict  # mat -> label
    classes: dict   # label -> tuple of GroupElement

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return self.by_mat[_mul2(g.mat, h.mat)]

    def inv(self, g: GroupElement) -> GroupElement:
        return self.by_mat[_inv2(g.mat)]

    @property
    def order(self) -> int:
        return len(self.elements)


def build_sl2f3() -> SL2F3:
    ident: Mat2 = ((1, 0), (0, 1))
    elements = [GroupElement(ident, "")]
    seen = {ident}
    queue = [elements[0]]
    while queue:
        nxt = []
        for g in queue:
            for letter, gen in (("S", S_MAT), ("T", T_MAT)):
                m = _mul2(g.mat, gen)
                if m not in seen:
                    seen.add(m)
                    el = GroupElement(m, g.word + letter)
                    elements.append(el)
                    nxt.append(el)
        queue = nxt
    if len(elements) != 24:
        raise AssertionError(f"SL(2, F_3) enumeration found {len(elements)} elements")
    by_mat = {g.mat: g for g in elements}

    # conjugacy classes
    remaining = {g.mat for g in elements}
    raw_classes = []
    for g in elements:
        if g.mat not in remaining:
            continue
        orbit = {_mul2(_mul2(h.mat, g.mat), _inv2(h.mat)) for h in elements}
        raw_classes.append(orbit)
        remaining -= orbit

    st = _mul2(S_MAT, T_MAT)
    st2 = _mul2(st, T_MAT)
    named = {
        "E": ident,
        "-E": _neg2(ident),
        "S": S_MAT,
        "ST2": st2,
        "-ST2": _neg2(st2),
        "ST": st,
        "-ST": _neg2(st),
    }
    class_of = {}
    classes = {}
    for label in CLASS_ORDER:
        rep = named[label]
        orbit = next((o for o in raw_classes if rep in o), None)
        if orbit is None:
            raise AssertionError(f"no conjugacy class contains {label}")
        classes[label] = tuple(sorted((by_mat[m] for m in orbit), key=lambda g: g.word))
        for m in orbit:
            class_of[m] = label
    if len(class_of) != 24:
        raise AssertionError("conjugacy classes do not partition the group")
    for label, size in zip(CLASS_ORDER, CLASS_SIZES):
        if len(classes[label]) != size:
            raise AssertionError(
                f"class {label} has size {len(classes[label])}, expected {size}")
    return SL2F3(tuple(elements), by_mat, class_of, classes)


# ---------------------------------------------------------------------------
# the character table of SL(2, F_3)

def _w(k: int) -> CycQ:
    return CycQ.from_exponents(3, [(k, 1)])


CHARACTER_TABLE: dict[int, tuple[CycQ, ...]] = {
    1: tuple(CycQ.rational(x) for x in (1, 1, 1, 1, 1, 1, 1)),
    2: tuple(CycQ.rational(x) for x in (3, 3, -1, 0, 0, 0, 0)),
    3: (CycQ.rational(1), CycQ.rational(1), CycQ.rational(1),
        _w(2), _w(2), _w(1), _w(1)),
    4: (CycQ.rational(1), CycQ.rational(1), CycQ.rational(1),
        _w(1), _w(1), _w(2), _w(2)),
    5: (CycQ.rational(2), CycQ.rational(-2), CycQ.rational(0),
        -_w(1), _w(1), _w(2), -_w(2)),
    6: (CycQ.rational(2), CycQ.rational(-2), CycQ.rational(0),
        CycQ.rational(-1), CycQ.rational(1), CycQ.rational(1), CycQ.rational(-1)),
    7: (CycQ.rational(2), CycQ.rational(-2), CycQ.rational(0),
        -_w(2), _w(2), _w(1), -_w(1)),
}


def validate_character_table() -> None:
    """First and second orthogonality for the frozen table; raises on failure."""
    order = sum(CLASS_SIZES)
    for i, chi in CHARACTER_TABLE.items():
        for j, psi in CHARACTER_TABLE.items():
            acc = CycQ.rational(0)
            for size, a, b in zip(CLASS_SIZES, chi, psi):
                acc = acc + Fraction(size) * a * b.conjugate()
            expected = order if i == j else 0
            if acc != expected:
                raise AssertionError(f"row orthogonality fails for ({i}, {j})")
    for c in range(len(CLASS_ORDER)):
        for d in range(len(CLASS_ORDER)):
            acc = CycQ.rational(0)
            for chi in CHARACTER_TABLE.values():
                acc = acc + chi[c] * chi[d].conjugate()
            expected = Fraction(order, CLASS_SIZES[c]) if c == d else 0
            if acc != expected:
                raise AssertionError(f"column orthogonality fails for ({c}, {d})")


# ---------------------------------------------------------------------------
# the representation

@dataclass(frozen=True)
class WeilRep:
    module: QuadraticModule
    elements: tuple
    index: dict
    group: SL2F3
    rho: dict  # mat -> OmegaMat

    @property
    def rho_S(self) -> OmegaMat:
        return self.rho[S_MAT]

    @property
    def rho_T(self) -> OmegaMat:
        return self.rho[T_MAT]

    def rho_of(self, g) -> OmegaMat:
        """rho at a GroupElement, a 2x2 matrix mod 3, or a word in S and T."""
        if isinstance(g, GroupElement):
            return self.rho[g.mat]
        if isinstance(g, str):
            m: Mat2 = ((1, 0), (0, 1))
            for letter in g:
                if letter == "S":
                    m = _mul2(m, S_MAT)
                elif letter == "T":
                    m = _mul2(m, T_MAT)
                else:
                    raise ValueError(f"word may contain only S and T, got {letter!r}")
            return self.rho[m]
        return self.rho[tuple(map(tuple, g))]

    def dim(self) -> int:
        return len(self.elements)


def build_weil(module: QuadraticModule) -> WeilRep:
    """Construct rho on C[A] and certify its defining relations."""
    elements = module.elements()
    n = len(elements)
    index = {x: i for i, x in enumerate(elements)}

    # rho(T): diagonal phases e^(pi i q)
    ta = np.zeros((n, n), dtype=np.int64)
    tb = np.zeros((n, n), dtype=np.int64)
    pair = {0: (1, 0), 1: (0, 1), 2: (-1, -1)}  # w^k as (re-part, w-part)
    for i, x in enumerate(elements):
        ta[i, i], tb[i, i] = pair[_q3(module, x)]
    rho_t = OmegaMat(ta, tb)

    # rho(S): -(1/9) e^(-2 pi i b(delta, alpha)) at (delta, alpha)
    sa = np.zeros((n, n), dtype=np.int64)
    sb = np.zeros((n, n), dtype=np.int64)
    for i, delta in enumerate(elements):
        for j, alpha in enumerate(elements):
            k = (-_b3(module, delta, alpha)) % 3
            p, q = pair[k]
            sa[i, j], sb[i, j] = -p, -q
    rho_s = OmegaMat(sa, sb, 9)

    ident = OmegaMat.identity(n)
    if not (rho_t @ rho_t @ rho_t) == ident:
        raise RelationError("rho(T)^3 != 1")
    s2 = rho_s @ rho_s
    neg_perm = np.zeros((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        neg_perm[index[module.neg(x)], i] = 1
    if not s2 == OmegaMat(neg_perm, np.zeros_like(neg_perm)):
        raise RelationError("rho(S)^2 is not the negation permutation")
    if not s2 @ s2 == ident:
        raise RelationError("rho(S)^4 != 1")
    st = rho_s @ rho_t
    if not (st @ st @ st) == s2:
        raise RelationError("(rho(S) rho(T))^3 != rho(S)^2")

    group = build_sl2f3()
    rho: dict = {}
    gens = {"S": rho_s, "T": rho_t}
    for g in group.elements:  # BFS order: prefixes come first
        if not g.word:
            rho[g.mat] = ident
            continue
        prefix, letter = g.word[:-1], g.word[-1]
        pm: Mat2 = ((1, 0), (0, 1))
        for ch in prefix:
            pm = _mul2(pm, S_MAT if ch == "S" else T_MAT)
        rho[g.mat] = rho[pm] @ gens[letter]
    return WeilRep(module, elements, index, group, rho)


def cayley_check(rep: WeilRep) -> int:
    """rho(g) rho(h) = rho(gh) over every pair; returns the pair count."""
    count = 0
    for g in rep.group.elements:
        rg = rep.rho[g.mat]
        for h in rep.group.elements:
            prod = rg @ rep.rho[h.mat]
            if not prod == rep.rho[_mul2(g.mat, h.mat)]:
                raise RelationError(f"rho({g.word or 'E'}) rho({h.word or 'E'}) "
                                    "disagrees with the product element")
            count += 1
    return count


# ---------------------------------------------------------------------------
# traces and character decomposition

@dataclass(frozen=True)
class Decomposition:
    traces: tuple  # CycQ per class, display order
    multiplicities: tuple[int, ...]  # over char indices 1..7


def character_decompose(rep: WeilRep) -> Decomposition:
    validate_character_table()
    per_class: dict[str, CycQ] = {}
    for g in rep.group.elements:
        tr = rep.rho[g.mat].trace()
        label = rep.group.class_of[g.mat]
        if label in per_class:
            if not per_class[label] == tr:
                raise RelationError(f"trace is not constant on class {label}")
        else:
            per_class[label] = tr
    traces = tuple(per_class[label] for label in CLASS_ORDER)
    mults = []
    order = sum(CLASS_SIZES)
    for i in sorted(CHARACTER_TABLE):
        acc = CycQ.rational(0)
        for size, chi_val, tr in zip(CLASS_SIZES, CHARACTER_TABLE[i], traces):
            acc = acc + Fraction(size) * chi_val.conjugate() * tr
        acc = acc * Fraction(1, order)
        if not acc.is_rational():
            raise RelationError(f"multiplicity of character {i} is irrational")
        val = acc.as_fraction()
        if val.denominator != 1 or val < 0:
            raise RelationError(f"multiplicity of character {i} is {val}")
        mults.append(int(val))
    dims = [int(CHARACTER_TABLE[i][0].as_fraction()) for i in sorted(CHARACTER_TABLE)]
    if sum(m * d for m, d in zip(mults, dims)) != rep.dim():
        raise RelationError("multiplicities do not add up to the dimension")
    return Decomposition(traces, tuple(mults))


# ---------------------------------------------------------------------------
# the aggregated 4-dimensional dual action

_AGG_T = mat_from_rows([
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, OMEGA * OMEGA, 0],
    [0, 0, 0, OMEGA],
])

_AGG_S = mat_from_rows([
    [Fraction(-1, 9) * x for x in row]
    for row in ((1, 1, 1, 1), (20, -7, 2, 2), (30, 3, 3, -6), (30, 3, -6, 3))
])


def aggregated_dual(rep: WeilRep):
    """The conjugated action compressed to the four types.

    Row t, column s holds sum_(delta of type t) conj(rho(S)[delta, alpha])
    for any alpha of type s; well-definedness over the choice of alpha is
    enumerated.  Returns (rho*_T, rho*_S) as exact 4x4 matrices and raises
    DualMismatchError if they differ from the frozen display values.
    """
    module = rep.module
    types = classify(module)
    labels = tuple(types)
    s_conj = rep.rho_S.conjugate()
    by_label_rows = {t: [rep.index[x] for x in types[t]] for t in labels}

    per_alpha: dict[int, tuple] = {}
    for j, alpha in enumerate(rep.elements):
        col_a = s_conj.a[:, j]
        col_b = s_conj.b[:, j]
        sums = tuple(
            CycQ(3, [Fraction(int(col_a[rows].sum()), s_conj.den),
                     Fraction(int(col_b[rows].sum()), s_conj.den)])
            for rows in (by_label_rows[t] for t in labels)
        )
        per_alpha[j] = sums

    agg_cols = {}
    for t in labels:
        rep_sums = None
        for x in types[t]:
            sums = per_alpha[rep.index[x]]
            if rep_sums is None:
                rep_sums = sums
            elif not all(a == b for a, b in zip(rep_sums, sums)):
                raise DualMismatchError(
                    f"column sums depend on the representative of type {t}")
        agg_cols[t] = rep_sums

    agg_s = tuple(tuple(agg_cols[s][i] for s in labels) for i in range(len(labels)))

    t_phase = {}
    for x in rep.elements:
        i = rep.index[x]
        val = rep.rho_T.entry(i, i).conjugate()
        t = type_of(module, x)
        if t in t_phase:
            if not t_phase[t] == val:
                raise DualMismatchError(f"diagonal phase not constant on type {t}")
        else:
            t_phase[t] = val
    agg_t = tuple(tuple(t_phase[s] if s == t else CycQ.rational(0) for s in labels)
                  for t in labels)

    if not mat_eq(agg_t, _AGG_T):
        raise DualMismatchError("aggregated diagonal action differs from the display")
    if not mat_eq(agg_s, _AGG_S):
        raise DualMismatchError("aggregated S-action differs from the display")
    return agg_t, agg_s


# ---------------------------------------------------------------------------
# the 5-dimensional isotypic subspace

@dataclass(frozen=True)
class IsotypicSubspace:
    rep: WeilRep
    character: int
    projector: OmegaMat
    dimension: int
    basis: tuple  # rows of CycQ, echelonized

    def contains_int_vector(self, v) -> bool:
        av, bv, den = self.projector.matvec_int(v)
        v = np.asarray(v, dtype=np.int64)
        return bool(np.array_equal(av, v * den) and not bv.any())


def isotypic_subspace(rep: WeilRep, char_index: int = 3) -> IsotypicSubspace:
    """Image of the isotypic projector (1/24) sum conj(chi(g)) rho(g)."""
    chi = CHARACTER_TABLE[char_index]
    by_label = dict(zip(CLASS_ORDER, chi))
    n = rep.dim()
    acc = OmegaMat.zeros(n)
    for g in rep.group.elements:
        p, q, d = scalar_as_pair(by_label[rep.group.class_of[g.mat]].conjugate())
        acc = acc + rep.rho[g.mat].scale(p, q, d)
    dim_chi = int(chi[0].as_fraction())
    proj = acc.scale(dim_chi, 0, 24)
    if not proj @ proj == proj:
        raise RankError("isotypic operator is not idempotent")
    for gen in (rep.rho_S, rep.rho_T):
        if not gen @ proj == proj @ gen:
            raise RankError("isotypic operator does not commute with rho")
    tr = proj.trace()
    if not tr.is_rational() or tr.as_fraction().denominator != 1:
        raise RankError(f"projector trace {tr!r} is not an integer")
    dim = int(tr.as_fraction())

    # column echelon basis of the image
    rows = proj.transpose().to_cyc_rows()  # columns of proj as rows
    from .exact import _echelon
    ech, pivots = _echelon([list(r) for r in rows])
    basis = tuple(tuple(row) for row in ech[:len(pivots)])
    if len(pivots) != dim:
        raise RankError(f"projector rank {len(pivots)} != trace {dim}")
    return IsotypicSubspace(rep, char_index, proj, dim, basis)


def projector_onto_indices(n: int, indices) -> OmegaMat:
    a = np.zeros((n, n), dtype=np.int64)
    for i in indices:
        a[i, i] = 1
    return OmegaMat(a, np.zeros_like(a))


# ---------------------------------------------------------------------------
# special vectors

@dataclass(frozen=True)
class SpecialVector:
    basis: OrthoBasis
    coeffs: dict  # element -> -1, 0, +1
    vec: tuple[int, ...]  # over the 81 elements in lex order


def special_vector(module: QuadraticModule, basis: OrthoBasis) -> SpecialVector:
    """The sign vector supported on the 16 combinations sum(+-alpha_i).

    Coefficient at alpha: the product of the four pairings B(alpha, alpha_i)
    over F_3, read as +1 or -1 (zero kills the element).
    """
    elements = module.elements()
    coeffs = {}
    vec = []
    for x in elements:
        prod = 1
        for a in basis.vectors:
            prod = (prod * _b3(module, x, a)) % 3
            if prod == 0:
                break
        val = {0: 0, 1: 1, 2: -1}[prod]
        vec.append(val)
        if val:
            coeffs[x] = val
    support = [x for x, v in coeffs.items()]
    if len(support) != 16:
        raise RankError(f"support has {len(support)} elements, expected 16")
    combos = set()
    for signs in np.ndindex(2, 2, 2, 2):
        y = module.zero()
        for s, a in zip(signs, basis.vectors):
            y = module.add(y, a if s == 0 else module.neg(a))
        combos.add(y)
    if combos != set(support):
        raise RankError("support is not the set of signed basis sums")
    if any(type_of(module, x) != "1" for x in support):
        raise RankError("support contains an element outside the q = -4/3 type")
    return SpecialVector(basis, coeffs, tuple(vec))


def special_vectors(rep: WeilRep) -> tuple[SpecialVector, ...]:
    return tuple(special_vector(rep.module, b) for b in orthogonal_bases(rep.module))


@dataclass(frozen=True)
class SpecialChecks:
    s_fixed: bool
    t_eigenvector: bool
    reflections_negate: tuple[bool, ...]
    in_isotypic: bool

    @property
    def ok(self) -> bool:
        return self.s_fixed and self.t_eigenvector and all(self.reflections_negate) \
            and self.in_isotypic


def verify_special(rep: WeilRep, sv: SpecialVector,
                   subspace: IsotypicSubspace | None = None) -> SpecialChecks:
    v = np.array(sv.vec, dtype=np.int64)

    av, bv, den = rep.rho_S.matvec_int(v)
    s_fixed = bool(np.array_equal(av, v * den) and not bv.any())

    av, bv, den = rep.rho_T.matvec_int(v)
    # w * v has a-part 0 and b-part v
    t_eigen = bool(den == 1 and np.array_equal(bv, v) and not av.any())

    negations = []
    from .fqm import reflect
    for alpha in sv.basis.vectors:
        r = reflect(rep.module, alpha)
        permuted = np.empty_like(v)
        for i, x in enumerate(rep.elements):
            permuted[rep.index[r(x)]] = v[i]
        negations.append(bool(np.array_equal(permuted, -v)))

    in_v = subspace.contains_int_vector(v) if subspace is not None else True
    return SpecialChecks(s_fixed, t_eigen, tuple(negations), in_v)


def special_vector_rank(vectors) -> int:
    """Rank over Q of the span of the sign vectors (they are integral)."""
    rows = [list(map(Fraction, sv.vec)) for sv in vectors]
    rank = 0
    ncols = len(rows[0])
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col]
        rows[rank] = [x / inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# O(q)-irreducibility of the subspace

def o_q_character_norm(rep: WeilRep, projector: OmegaMat) -> Fraction:
    """<chi, chi> for the O(q)-action on the image of an invariant projector.

    The orthogonal group permutes the basis e_alpha; the value is
    (1/|O|) sum_g |trace(P_g P)|^2, which equals 1 exactly when the image
    is O(q)-irreducible.  Raises InvarianceError if the image is not
    O(q)-stable (checked on the generators).
    """
    module = rep.module
    group = orthogonal_group(module)
    elems = np.array(rep.elements, dtype=np.int64)
    weights = np.array([3 ** (len(module.orders) - 1 - i)
                        for i in range(len(module.orders))], dtype=np.int64)

    def perm_of(g) -> np.ndarray:
        images = (elems @ np.array(g, dtype=np.int64).T) % 3
        return images @ weights  # lex order = base-3 encoding

    n = rep.dim()
    idx = np.arange(n)
    for g in group.generators:
        p = perm_of(g)
        pinv = np.empty_like(p)
        pinv[p] = idx
        if not (np.array_equal(projector.a[np.ix_(pinv, pinv)], projector.a)
                and np.array_equal(projector.b[np.ix_(pinv, pinv)], projector.b)):
            raise InvarianceError("projector image is not stable under the "
                                  "orthogonal group")

    total = Fraction(0)
    den2 = projector.den * projector.den
    for g in group.elements:
        p = perm_of(g)
        pinv = np.empty_like(p)
        pinv[p] = idx
        x = int(projector.a[pinv, idx].sum())
        y = int(projector.b[pinv, idx].sum())
        total += Fraction(x * x - x * y + y * y, den2)
    return total / group.order
