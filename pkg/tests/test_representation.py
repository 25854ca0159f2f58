import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from pappuslab import boxes as bx
from pappuslab import modular as md
from pappuslab import projective as pj
from pappuslab import representation as rp
from pappuslab import scalars as sc
from pappuslab.boxes import LAMBDA_ZERO, BoxModuli, Lambda, from_moduli, marked_equal
from pappuslab.errors import NoSolution, NotARotation, NotInSubgroupO, SpecialBox
from pappuslab.modular import BASE_EDGE, GroupWord

rational_moduli = st.tuples(
    st.integers(-8, 8), st.integers(-8, 8)
).map(lambda t: BoxModuli(Fraction(t[0], 10), Fraction(t[1], 10)))

M_TEST = BoxModuli(Fraction(1, 2), Fraction(1, 3))


def random_lambda(rng):
    return Lambda(
        u=Fraction(rng.randint(5, 15), 10), v=Fraction(rng.randint(5, 15), 10)
    )


# ---------------------------------------------------------------------------
# matrix families


def test_matrix_a_at_origin():
    a = rp.matrix_A(BoxModuli(0, 0))
    assert a == ((-1, 0, 0), (0, 1, -1), (0, 1, 0))
    displayed = ((1, 0, 0), (0, -1, 1), (0, -1, 0))
    assert pj.proj_equal_mat(a, displayed)


@given(rational_moduli)
@settings(max_examples=40, deadline=None)
def test_matrix_a_trace_zero_and_order_three(m):
    a = rp.matrix_A(m)
    assert a[0][0] + a[1][1] + a[2][2] == 0
    cube = sc.mat_mul(sc.mat_mul(a, a), a)
    assert pj.proj_equal_mat(cube, sc.IDENTITY)


def test_matrix_a_cube_scalar_exact():
    a = rp.matrix_A(M_TEST)
    cube = sc.mat_mul(sc.mat_mul(a, a), a)
    mu = cube[0][0]
    assert mu != 0
    assert cube == tuple(
        tuple(mu if i == j else 0 for j in range(3)) for i in range(3)
    )


def test_matrix_d_examples():
    assert rp.matrix_D(BoxModuli(0, 0)) == sc.IDENTITY
    d = rp.matrix_D(M_TEST)
    assert d == sc.mat_transpose(d)
    minors = (
        d[0][0],
        d[0][0] * d[1][1] - d[0][1] * d[1][0],
        sc.det3(d),
    )
    # det D = (1 - zt^2)(1 - zb^2)
    assert minors == (1, Fraction(3, 4), Fraction(2, 3))
    assert all(x > 0 for x in minors)
    # non-convex moduli lose positive definiteness
    d2 = rp.matrix_D(BoxModuli(2, 0))
    assert d2[0][0] * d2[1][1] - d2[0][1] * d2[1][0] < 0


def test_matrix_sigma():
    assert rp.matrix_Sigma(LAMBDA_ZERO) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@given(st.integers(1, 30), st.integers(1, 30))
@settings(max_examples=30, deadline=None)
def test_sigma_determinant_one(un, vn):
    lam = Lambda(u=Fraction(un, 7), v=Fraction(vn, 11))
    assert sc.det3(rp.matrix_Sigma(lam)) == 1


def test_matrix_b_special_undeformed():
    b = rp.matrix_B(BoxModuli(0, 0), LAMBDA_ZERO)
    a = rp.matrix_A(BoxModuli(0, 0))
    assert b == sc.mat_inverse(sc.mat_transpose(a))
    displayed = ((1, 0, 0), (0, 0, 1), (0, -1, -1))
    assert pj.proj_equal_mat(b, displayed)


def test_matrix_b_conjugation_identity():
    rng = random.Random(3)
    for _ in range(5):
        lam = random_lambda(rng)
        sig = rp.matrix_Sigma(lam)
        lhs = rp.matrix_B(M_TEST, lam)
        rhs = sc.mat_mul(
            sc.mat_mul(sc.mat_inverse(sig), rp.matrix_B0(M_TEST)), sig
        )
        assert lhs == rhs


# ---------------------------------------------------------------------------
# word evaluation


def test_evaluate_basics():
    lam = LAMBDA_ZERO
    assert rp.evaluate(M_TEST, lam, GroupWord.identity()) == sc.IDENTITY
    cube = rp.evaluate(M_TEST, lam, GroupWord(("R",)) ** 3)
    assert pj.proj_equal_mat(cube, sc.IDENTITY)
    with pytest.raises(NotInSubgroupO):
        rp.evaluate(M_TEST, lam, GroupWord(("I",)))


def test_evaluate_is_homomorphic():
    rng = random.Random(7)
    lam = random_lambda(rng)
    words = md.enumerate_words(4, subgroup_o_only=True)
    for _ in range(15):
        w1, w2 = rng.choice(words), rng.choice(words)
        lhs = rp.evaluate(M_TEST, lam, w1 * w2)
        rhs = sc.mat_mul(
            rp.evaluate(M_TEST, lam, w1), rp.evaluate(M_TEST, lam, w2)
        )
        assert pj.proj_equal_mat(lhs, rhs)


def test_evaluate_schwartz_kinds():
    g = rp.evaluate_schwartz(M_TEST, GroupWord(("I",)))
    assert g.kind == pj.DUALITY
    assert g.matrix == rp.matrix_D(M_TEST)
    gg = rp.evaluate_schwartz(M_TEST, GroupWord(("I", "I")))
    assert gg.kind == pj.TRANSFORMATION
    assert pj.proj_equal_mat(gg.matrix, sc.IDENTITY)


def test_evaluate_matches_schwartz_at_zero():
    for w in md.enumerate_words(5, subgroup_o_only=True):
        g = rp.evaluate_schwartz(M_TEST, w)
        assert g.kind == pj.TRANSFORMATION
        assert pj.proj_equal_mat(g.matrix, rp.evaluate(M_TEST, LAMBDA_ZERO, w))


def test_translation_squared_not_loxodromic():
    w = md.T1_WORD * md.T1_WORD
    mat = rp.evaluate(M_TEST, LAMBDA_ZERO, w)
    res = sc.eigen_real(sc.normalize_det_one(sc.mat_to_mpf(mat)))
    assert not res.loxodromic
    assert max(res.moduli) - min(res.moduli) < mpf("1e-12")


# ---------------------------------------------------------------------------
# box cycles


def test_matrix_a_box_cycle():
    box = from_moduli(M_TEST)
    a = rp.matrix_A(M_TEST)
    target = bx.transform_j(rp.xi_action(GroupWord(("R",)), box))
    step1 = bx.apply_matrix(box, a)
    assert step1 == target
    # the cube closes the cycle up to the corner-swap involution
    step3 = bx.apply_matrix(bx.apply_matrix(step1, a), a)
    assert marked_equal(step3, box)


def test_matrix_a_uniqueness():
    # any transformation realizing the same corner correspondence is
    # projectively the same matrix
    box = from_moduli(M_TEST)
    a = rp.matrix_A(M_TEST)
    image = bx.apply_matrix(box, a)
    frame = pj.frame_map(
        (box.p, box.q, box.r, box.s), (image.p, image.q, image.r, image.s)
    )
    assert pj.proj_equal_mat(frame, a)


def test_matrix_d_box_cycle():
    box = from_moduli(M_TEST)
    d = pj.duality(rp.matrix_D(M_TEST))
    target = bx.transform_j(bx.transform_i(box))
    step1 = bx.apply_symmetry_to_box(d, box)
    assert step1 == target
    # the square closes the cycle up to the corner-swap involution
    assert marked_equal(bx.apply_symmetry_to_box(d, step1), box)


def test_matrix_b_box_cycle():
    rng = random.Random(11)
    box = from_moduli(M_TEST)
    for lam in (LAMBDA_ZERO, random_lambda(rng), random_lambda(rng)):
        b = rp.matrix_B(M_TEST, lam)
        # one application realizes the twisted first descendant composite
        step1 = bx.apply_matrix(box, b)
        target = bx.transform_j(
            bx.tau1_lambda(bx.i_lambda(box, lam), lam)
        )
        assert step1 == target
        step3 = bx.apply_matrix(bx.apply_matrix(step1, b), b)
        assert marked_equal(step3, box)


def test_schwartz_equivariance():
    box = from_moduli(M_TEST)
    for w in md.enumerate_words(4):
        e = md.star_action(w, BASE_EDGE)
        label = rp.xi_action(md.label_word(e), box)
        for gen in (md.I_WORD, md.R_WORD):
            moved = md.mobius_action(gen, e)
            lhs = rp.xi_action(md.label_word(moved), box)
            rhs = bx.apply_symmetry_to_box(
                rp.evaluate_schwartz(M_TEST, gen), label
            )
            assert marked_equal(lhs, rhs)


# ---------------------------------------------------------------------------
# non-loxodromic witness


@pytest.mark.parametrize("m", [BoxModuli(0, 0), M_TEST])
def test_non_anosov_witness_exact(m):
    p, q = rp.non_anosov_witness(m)
    conj = sc.mat_mul(sc.mat_mul(q, p), sc.mat_inverse(q))
    assert conj == rp.NON_LOXODROMIC_NORMAL_FORM


def test_non_anosov_witness_moduli():
    p, _ = rp.non_anosov_witness(M_TEST)
    res = sc.eigen_real(sc.mat_to_mpf(p))
    assert all(abs(x - 1) < mpf("1e-12") for x in res.moduli)


# ---------------------------------------------------------------------------
# the curve h


def test_curve_h_at_eps_zero():
    lam = Lambda(u=1, v=Fraction(7, 5))
    coeff = rp._special_coefficient(M_TEST)
    v = Fraction(7, 5)
    sd, cd = (v - 1 / v) / 2, (v + 1 / v) / 2
    assert rp.curve_h(M_TEST, lam) == coeff * sd * 2 * cd
    assert abs(rp.solve_delta_h(M_TEST, 0)) < mpf("1e-10")


def test_curve_h_delta_derivative():
    step = mpf("1e-6")
    fd = (
        rp.curve_h(M_TEST, Lambda(epsilon=0, delta=step))
        - rp.curve_h(M_TEST, Lambda(epsilon=0, delta=-step))
    ) / (2 * step)
    expected = 2 * sc.to_mpf(rp._special_coefficient(M_TEST))
    assert abs(fd - expected) < mpf("1e-8")


def test_solve_delta_h_flat_at_zero():
    eps = mpf("1e-4")
    slope = (rp.solve_delta_h(M_TEST, eps) - rp.solve_delta_h(M_TEST, -eps)) / (
        2 * eps
    )
    assert abs(slope) < mpf("1e-4")
    with pytest.raises(SpecialBox):
        rp.solve_delta_h(BoxModuli(0, 0), mpf("0.1"))


# ---------------------------------------------------------------------------
# extension intertwiner


def test_intertwiner_special_moduli():
    rng = random.Random(23)
    lam = random_lambda(rng)
    s, residual, invertible = rp.extension_intertwiner(BoxModuli(0, 0), lam)
    assert s == rp.matrix_Sigma(lam)
    assert residual < mpf("1e-20")
    assert invertible


def test_intertwiner_on_curve():
    eps = mpf("-0.1")
    delta = rp.solve_delta_h(M_TEST, eps)
    lam = Lambda(epsilon=eps, delta=delta)
    obs, _ = rp.obstruction(M_TEST, lam)
    assert abs(obs) < mpf("1e-10")
    s, residual, invertible = rp.extension_intertwiner(M_TEST, lam)
    assert s == sc.mat_transpose(s)
    assert residual < mpf("1e-9")
    assert invertible


def test_intertwiner_off_curve():
    lam = Lambda(epsilon=mpf("-0.1"), delta=mpf("0.5"))
    obs, _ = rp.obstruction(M_TEST, lam)
    assert abs(obs) > mpf("1e-6")
    with pytest.raises(NoSolution):
        rp.extension_intertwiner(M_TEST, lam)


def test_intertwiner_off_curve_exact():
    with pytest.raises(NoSolution):
        rp.extension_intertwiner(M_TEST, Lambda(u=Fraction(9, 10), v=Fraction(3, 2)))


# ---------------------------------------------------------------------------
# rotation criterion


def _rot(c, s, mu=1):
    return ((mu, 0, 0), (0, mu * c, -mu * s), (0, mu * s, mu * c))


def test_rotation_angle():
    theta = rp.rotation_angle(_rot(0, 1))
    assert abs(theta - sc.to_mpf(mpf(1)) * 3.14159265358979 / 2) < mpf("1e-9")
    with pytest.raises(NotARotation):
        rp.rotation_angle(((1, 0, 0), (0, 2, 0), (0, 0, 3)))
    # order-3 family is a rotation of angle 2*pi/3
    theta = rp.rotation_angle(rp.matrix_A(M_TEST))
    assert abs(theta - 2 * sc.to_mpf(3.14159265358979) / 3) < mpf("1e-6")


def test_appendix_criterion_identity_g():
    a = _rot(0, 1, mu=2)
    by_det, by_s = rp.appendix_criterion(a, sc.IDENTITY)
    assert by_det == by_s


def test_appendix_criterion_random_g():
    rng = random.Random(31)
    a = _rot(0, 1, mu=2)
    for _ in range(5):
        g = tuple(
            tuple(Fraction(rng.randint(-3, 3)) for _ in range(3)) for _ in range(3)
        )
        if sc.det3(g) == 0:
            continue
        by_det, by_s = rp.appendix_criterion(a, g)
        assert by_det == by_s


def test_appendix_criterion_curve_family():
    eps = mpf("-0.05")
    delta = rp.solve_delta_h(M_TEST, eps)
    lam = Lambda(epsilon=eps, delta=delta)
    g = sc.mat_mul(sc.mat_to_mpf(rp.matrix_D(M_TEST)), rp.matrix_Sigma(lam))
    by_det, by_s = rp.appendix_criterion(rp.matrix_A(M_TEST), g)
    assert by_det and by_s
    # off the curve both predicates are false
    g2 = sc.mat_mul(
        sc.mat_to_mpf(rp.matrix_D(M_TEST)),
        rp.matrix_Sigma(Lambda(epsilon=eps, delta=mpf("0.5"))),
    )
    by_det, by_s = rp.appendix_criterion(rp.matrix_A(M_TEST), g2)
    assert not by_det and not by_s
