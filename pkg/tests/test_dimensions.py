"""Dimension cross-checks with closed-form counts.

When the contractions satisfy no relation in the probed degree, the
invariant dimension must equal the number of degree-d/2 monomials in the
G generators, C(G + d/2 - 1, d/2).  Each classical family also has a
first relation with a known location and codimension, giving sharp
expected values on both sides of the boundary.
"""

from math import comb

import pytest

from classinv.certify import fft_verify
from classinv.groups import general_linear, orthogonal, symplectic
from classinv.poly import SpaceSignature


def free_count(num_gens, d):
    return comb(num_gens + d // 2 - 1, d // 2)


class TestRelationFreeCells:
    # copies do not outnumber the dimension, so products are independent
    @pytest.mark.parametrize(
        "spec,sig,d,gens",
        [
            (orthogonal(3), SpaceSignature(n=3, k=0, m=3), 6, 6),
            (symplectic(4), SpaceSignature(n=4, k=0, m=3), 6, 3),
            (symplectic(2), SpaceSignature(n=2, k=0, m=3), 4, 3),
            (general_linear(2), SpaceSignature(n=2, k=2, m=2), 6, 4),
            (general_linear(2), SpaceSignature(n=2, k=1, m=2), 6, 2),
        ],
        ids=["o3k3d6", "sp4k3d6", "sp2k3d4", "gl2-22-d6", "gl2-12-d6"],
    )
    def test_kernel_matches_monomial_count(self, spec, sig, d, gens):
        rep = fft_verify(spec, sig, d, seed=0)
        expected = free_count(gens, d)
        assert rep.certified
        assert rep.free_products == expected
        assert rep.dim_span == expected
        assert rep.dim_kernel == expected


class TestFirstRelations:
    def test_gl_rank_one_determinant(self):
        # one covector pair and one vector pair in a line: the 2x2 matrix
        # of pairings has rank 1, so its determinant is the first relation
        rep = fft_verify(general_linear(1), SpaceSignature(n=1, k=2, m=2), 4)
        assert rep.certified
        assert rep.free_products == free_count(4, 4) == 10
        assert rep.dim_kernel == rep.dim_span == 9

    def test_gl_no_relation_at_matching_rank(self):
        # same copy counts, two dimensions: the determinant no longer dies
        rep = fft_verify(general_linear(2), SpaceSignature(n=2, k=2, m=2), 4)
        assert rep.certified
        assert rep.dim_kernel == rep.free_products == free_count(4, 4)

    def test_orthogonal_gram_determinant(self):
        # three plane vectors: the 3x3 matrix of inner products is singular
        rep = fft_verify(orthogonal(2), SpaceSignature(n=2, k=0, m=3), 6)
        assert rep.certified
        assert rep.free_products == free_count(6, 6) == 56
        assert rep.dim_kernel == rep.dim_span == 55

    def test_orthogonal_no_gram_below_degree_six(self):
        rep = fft_verify(orthogonal(2), SpaceSignature(n=2, k=0, m=3), 4)
        assert rep.certified
        assert rep.dim_kernel == rep.free_products == free_count(6, 4)

    def test_symplectic_four_copy_identity(self):
        # w(1,2)w(3,4) - w(1,3)w(2,4) + w(1,4)w(2,3) vanishes in the plane
        rep = fft_verify(symplectic(2), SpaceSignature(n=2, k=0, m=4), 4)
        assert rep.certified
        assert rep.free_products == free_count(6, 4) == 21
        assert rep.dim_kernel == rep.dim_span == 20

    def test_symplectic_identity_needs_small_n(self):
        rep = fft_verify(symplectic(4), SpaceSignature(n=4, k=0, m=4), 4)
        assert rep.certified
        assert rep.dim_kernel == rep.free_products == free_count(6, 4) == 21
