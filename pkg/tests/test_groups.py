from fractions import Fraction

import pytest

from classinv.exact import Matrix, SingularMatrixError
from classinv.groups import (
    ClosureCapExceeded,
    GroupSpec,
    cayley,
    contains,
    finite_closure,
    finite_group,
    general_linear,
    group_elements,
    is_orthogonal,
    is_symplectic,
    orthogonal,
    sample_element,
    small_integer_elements,
    symplectic,
    symplectic_form_matrix,
)


def mat(rows):
    return Matrix.from_rows([[Fraction(v) for v in row] for row in rows])


KAPPA = mat([[0, 1], [-1, 0]])


class TestFormMatrix:
    def test_n2(self):
        assert symplectic_form_matrix(2) == KAPPA

    def test_n4_block_diagonal(self):
        j = symplectic_form_matrix(4)
        assert j.at(0, 1) == 1 and j.at(1, 0) == -1
        assert j.at(2, 3) == 1 and j.at(3, 2) == -1
        assert j.at(0, 2) == 0 and j.at(1, 3) == 0

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            symplectic_form_matrix(3)

    def test_square_to_minus_identity(self):
        for n in (2, 4, 6):
            j = symplectic_form_matrix(n)
            assert j @ j == -Matrix.identity(n)
            assert j.transpose() == -j


class TestMembership:
    def test_rotation_is_orthogonal(self):
        rot = mat([[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]])
        assert is_orthogonal(rot)
        assert contains(orthogonal(2), rot)

    def test_stretch_is_not_orthogonal(self):
        assert not is_orthogonal(mat([[2, 0], [0, 1]]))

    def test_shear_is_symplectic(self):
        # SL(2) = Sp(2), so a unit shear qualifies
        assert is_symplectic(mat([[1, 1], [0, 1]]))

    def test_det_two_not_symplectic(self):
        assert not is_symplectic(mat([[2, 0], [0, 1]]))

    def test_gl_membership_is_invertibility(self):
        assert contains(general_linear(2), mat([[1, 1], [0, 1]]))
        assert not contains(general_linear(2), mat([[1, 1], [1, 1]]))

    def test_wrong_size_rejected(self):
        assert not contains(orthogonal(3), Matrix.identity(2))


class TestSpecValidation:
    def test_sp_odd_n(self):
        with pytest.raises(ValueError, match="n must be even"):
            symplectic(3)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            GroupSpec(family="su", n=2)

    def test_finite_needs_generators_or_n(self):
        with pytest.raises(ValueError):
            finite_group([])

    def test_generator_size_checked(self):
        with pytest.raises(ValueError):
            finite_group([Matrix.identity(2)], n=3)


class TestCayley:
    def test_zero_gives_identity(self):
        assert cayley(Matrix.zero(3, 3)) == Matrix.identity(3)

    def test_kappa_gives_quarter_turn(self):
        assert cayley(KAPPA) == mat([[0, -1], [1, 0]])

    def test_skew_input_lands_in_o(self):
        s = mat([[0, 2], [-2, 0]])
        assert is_orthogonal(cayley(s))

    def test_singular_shift_raises(self):
        with pytest.raises(SingularMatrixError):
            cayley(-Matrix.identity(2))


class TestSampling:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_orthogonal_samples(self, n):
        spec = orthogonal(n)
        dets = set()
        for seed in range(100):
            el = sample_element(spec, seed)
            assert el.g.transpose() @ el.g == Matrix.identity(n)
            assert el.g @ el.g_inv == Matrix.identity(n)
            dets.add(el.g.det())
        assert dets == {Fraction(1), Fraction(-1)}

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_orthogonal_det_tracks_seed_parity(self, n):
        spec = orthogonal(n)
        for seed in range(20):
            det = sample_element(spec, seed).g.det()
            assert det == (-1 if seed % 2 else 1)

    @pytest.mark.parametrize("n", [2, 4])
    def test_symplectic_samples(self, n):
        spec = symplectic(n)
        j = symplectic_form_matrix(n)
        for seed in range(100):
            el = sample_element(spec, seed)
            assert el.g.transpose() @ j @ el.g == j
            assert el.g @ el.g_inv == Matrix.identity(n)

    def test_gl_samples_invertible(self):
        spec = general_linear(3)
        for seed in range(50):
            el = sample_element(spec, seed)
            assert el.g.is_invertible()
            assert el.g @ el.g_inv == Matrix.identity(3)

    def test_deterministic_in_seed(self):
        spec = orthogonal(3)
        assert sample_element(spec, 41).g == sample_element(spec, 41).g
        assert sample_element(spec, 41).g != sample_element(spec, 42).g


class TestFiniteClosure:
    def test_sign_group(self):
        elems = finite_closure([mat([[-1]])])
        assert len(elems) == 2

    def test_swap_group(self):
        elems = finite_closure([mat([[0, 1], [1, 0]])])
        assert len(elems) == 2

    def test_full_sign_group_on_two_coords(self):
        gens = [mat([[-1, 0], [0, 1]]), mat([[1, 0], [0, -1]])]
        assert len(finite_closure(gens)) == 4

    def test_symmetric_group_three(self):
        gens = [
            mat([[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
            mat([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
        ]
        assert len(finite_closure(gens)) == 6

    def test_infinite_generator_hits_cap(self):
        with pytest.raises(ClosureCapExceeded):
            finite_closure([mat([[2]])], cap=100)

    def test_idempotent(self):
        elems = finite_closure([mat([[0, 1], [1, 0]])])
        again = finite_closure(elems)
        assert len(again) == len(elems)

    def test_closure_contains_inverses(self):
        elems = finite_closure([mat([[0, -1], [1, 0]])])  # order-4 rotation
        assert len(elems) == 4
        for g in elems:
            assert g.inverse() in elems

    def test_group_elements_cached_pairs(self):
        spec = finite_group((mat([[-1]]),))
        els = group_elements(spec)
        assert len(els) == 2
        for el in els:
            assert el.g @ el.g_inv == Matrix.identity(1)


class TestSmallIntegerElements:
    # membership is asserted inside the helper; exercising it per family is
    # already a real test
    @pytest.mark.parametrize(
        "spec", [orthogonal(1), orthogonal(2), orthogonal(3), symplectic(2),
                 symplectic(4), general_linear(1), general_linear(2)],
        ids=["o1", "o2", "o3", "sp2", "sp4", "gl1", "gl2"],
    )
    def test_members_and_inverses(self, spec):
        els = small_integer_elements(spec)
        assert els
        for el in els:
            assert contains(spec, el.g)
            assert el.g @ el.g_inv == Matrix.identity(spec.n)

    def test_orthogonal_covers_all_sign_masks(self):
        els = small_integer_elements(orthogonal(2))
        diag_signs = {
            (el.g.at(0, 0), el.g.at(1, 1))
            for el in els
            if el.g.at(0, 1) == 0 and el.g.at(1, 0) == 0
        }
        assert (Fraction(-1), Fraction(1)) in diag_signs
        assert (Fraction(1), Fraction(-1)) in diag_signs
        assert (Fraction(-1), Fraction(-1)) in diag_signs
