import pytest

from strutforge.bases import (
    BasisSpec,
    enumerate_basis,
    enumerate_trees,
    enumerate_y_basis,
    forests,
    strut_union_count,
)
from strutforge.counting import u
from strutforge.diagrams import (
    Mode,
    canonicalize,
    decode_diagram,
    encoding_leaf_colors,
)
from strutforge.errors import CapacityError, DomainError

H = Mode.HOMOTOPY
C = Mode.CONCORDANCE


class TestEnumerateTrees:
    def test_struts_for_three_colors(self):
        trees = enumerate_trees(3, 1, H)
        assert [cd.encoding for cd in trees] == [b"\x01\x02", b"\x01\x03", b"\x02\x03"]

    def test_y_components_one_per_color_triple(self):
        assert len(enumerate_trees(4, 2, H)) == 4

    def test_three_four_leaf_trees_per_color_quadruple(self):
        assert len(enumerate_trees(4, 3, H)) == 3
        assert len(enumerate_trees(5, 3, H)) == 15

    def test_concordance_small_colors(self):
        # Only the (12|12) leaf pairing survives antisymmetry with 2 colors.
        assert len(enumerate_trees(2, 3, C)) == 1
        assert len(enumerate_trees(2, 2, C)) == 0

    def test_capacity_guard(self):
        with pytest.raises(CapacityError):
            enumerate_trees(5, 3, H, max_elements=3)


class TestEnumerateYBasis:
    def test_single_y_no_struts(self):
        basis = enumerate_y_basis(3, 0, H)
        assert len(basis) == 1

    def test_ten_y_choices_on_five_colors(self):
        assert len(enumerate_y_basis(5, 0, H)) == 10

    def test_matches_closed_form(self):
        assert len(enumerate_y_basis(3, 1, H)) == u(1, 3) == 3
        for k in (3, 4, 5, 6):
            for n in (0, 1, 2):
                assert len(enumerate_y_basis(k, n, H)) == u(n, k)

    def test_leaf_count_is_2n_plus_3(self):
        basis = enumerate_y_basis(4, 2, H)
        for cd in basis.elements:
            assert len(encoding_leaf_colors(cd.encoding)) == 2 * 2 + 3

    def test_homotopy_needs_three_colors(self):
        with pytest.raises(DomainError):
            enumerate_y_basis(2, 1, H)

    def test_capacity_guard(self):
        with pytest.raises(CapacityError):
            enumerate_y_basis(5, 2, H, max_elements=10)


class TestEnumerateBasis:
    def test_degree_two_three_colors(self):
        assert len(enumerate_basis(3, 2, H)) == 7

    def test_degree_two_five_colors(self):
        assert len(enumerate_basis(5, 2, H)) == 65

    def test_concordance_two_colors_degree_two(self):
        basis = enumerate_basis(2, 2, C)
        assert len(basis) == 6
        # multisets of two struts from {(1,1),(1,2),(2,2)}; no Y survives
        for cd in basis.elements:
            d = decode_diagram(cd.encoding, C, 2)
            assert all(comp.is_strut for comp in d.components)

    def test_degree_one_is_struts(self):
        basis = enumerate_basis(4, 1, H)
        for cd in basis.elements:
            d = decode_diagram(cd.encoding, H, 4)
            assert len(d.components) == 1 and d.components[0].is_strut

    def test_retains_large_components(self):
        # Degree-2 components on 3 colors stay in the basis; relations,
        # not enumeration, kill them in the quotient.
        basis = enumerate_basis(3, 2, H)
        shapes = {len(decode_diagram(cd.encoding, H, 3).components)
                  for cd in basis.elements}
        assert shapes == {1, 2}


class TestBasisStructure:
    def test_sorted_and_indexed(self):
        basis = enumerate_basis(4, 2, H)
        encs = [cd.encoding for cd in basis.elements]
        assert encs == sorted(encs)
        assert all(basis.index[e] == i for i, e in enumerate(encs))

    def test_all_sign_positive(self):
        basis = enumerate_basis(3, 3, C)
        for cd in basis.elements:
            assert cd.sign == 1
            d = decode_diagram(cd.encoding, C, 3)
            assert canonicalize(d).sign == 1

    def test_deterministic(self):
        a = enumerate_y_basis(5, 2, H)
        b = enumerate_y_basis(5, 2, H)
        assert a.elements == b.elements

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            BasisSpec(H, 3, "weird", 1)
        with pytest.raises(DomainError):
            BasisSpec(H, 3, "full", 0)
        with pytest.raises(DomainError):
            BasisSpec(H, 0, "y", 1)


class TestForests:
    def test_empty_forest_for_degree_zero(self):
        assert list(forests(3, 0, H)) == [()]

    def test_forest_degrees_sum(self):
        for forest in forests(3, 3, H):
            assert sum(comp.degree for comp in forest) == 3

    def test_no_zero_components(self):
        for forest in forests(2, 3, C):
            for comp in forest:
                cols = [c for c in comp.colors if c > 0]
                assert comp.degree >= 1


class TestStrutUnionCount:
    def test_values(self):
        assert strut_union_count(3, 2, H) == 6
        assert strut_union_count(5, 3, H) == 220
        assert strut_union_count(2, 2, C) == 6
        assert strut_union_count(3, 0, H) == 1

    def test_matches_strut_only_basis_elements(self):
        basis = enumerate_basis(3, 2, H)
        strut_only = 0
        for cd in basis.elements:
            d = decode_diagram(cd.encoding, H, 3)
            if all(comp.is_strut for comp in d.components):
                strut_only += 1
        assert strut_only == strut_union_count(3, 2, H)
