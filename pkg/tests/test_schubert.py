import random

import pytest

from clusterint.errors import NotReduced, WrongWord
from clusterint.poisson_core import bracket, generic_rank, is_log_canonical
from clusterint.polyring import Poly, RatFun, lowest_term, parse_poly
from clusterint.rationals import QQ
from clusterint.schubert import (
    build_cell,
    choose_integrable_system,
    flow_structure_check,
    index_and_magic,
    magic_number,
    pfaffian_check,
    solid_minor_check,
)
from clusterint.typea import ReducedWord, WeylElt, longest_word

from conftest import SL4_PI0_TABLE, SL4_PI_TABLE, SL4_PHIS, Z6, p6

from test_typea import _random_reduced_word


@pytest.fixture(scope="module")
def sl4_cell():
    return build_cell(4, [1, 2, 3, 1, 2, 1])


class TestBuildCellSL4:
    def test_phis_exact(self, sl4_cell):
        assert [str(p) for p in sl4_cell.phis] == [
            "z1",
            "z2",
            "z3",
            "z1*z4 - z2",
            "z2*z5 - z3*z4",
            "z1*z4*z6 - z1*z5 - z2*z6 + z3",
        ]

    def test_full_bracket_table(self, sl4_cell):
        for (i, j), s in SL4_PI_TABLE.items():
            assert sl4_cell.pi_z.bracket_matrix[i - 1][j - 1] == RatFun.from_poly(
                p6(s)
            ), (i, j)

    def test_full_linearized_table(self, sl4_cell):
        for i in range(1, 7):
            for j in range(i + 1, 7):
                expect = p6(SL4_PI0_TABLE.get((i, j), "0"))
                assert sl4_cell.pi0.bracket_matrix[i - 1][j - 1] == RatFun.from_poly(
                    expect
                ), (i, j)

    def test_lows_boxed_minors(self, sl4_cell):
        lows = sl4_cell.lows()
        expect = ["z1", "z2", "z3", "z2", "z2*z5 - z3*z4", "z3"]
        for got, want in zip(lows, expect):
            w = p6(want)
            assert got == w or got == -w

    def test_low_degrees(self, sl4_cell):
        assert sl4_cell.low_degrees() == [1, 1, 1, 1, 2, 1]

    def test_kmaps(self, sl4_cell):
        assert sl4_cell.kminus == {1: None, 2: None, 3: None, 4: 1, 5: 2, 6: 4}
        assert sl4_cell.kplus == {1: 4, 2: 5, 3: None, 4: 6, 5: None, 6: None}

    def test_single_letter(self):
        cell = build_cell(2, [1])
        assert [str(p) for p in cell.phis] == ["z1"]
        assert cell.pi_z.is_zero()

    def test_m3_121(self):
        cell = build_cell(3, [1, 2, 1])
        assert str(cell.phis[0]) == "z1"
        low3, deg3 = lowest_term(cell.phis[2])
        z2 = parse_poly("z2", cell.vars)
        assert low3 == z2 or low3 == -z2
        assert deg3 == 1

    def test_not_reduced_rejected(self):
        with pytest.raises(NotReduced):
            build_cell(4, [1, 1])


class TestChoose:
    def test_sl4(self, sl4_cell):
        rep = choose_integrable_system(sl4_cell)
        assert set(rep.functions) == {"z1", "z2", "z3", "z2*z5 - z3*z4"}
        assert rep.involutive and rep.independent_count == 4

    def test_single(self):
        rep = choose_integrable_system(build_cell(2, [1]))
        assert rep.functions == ["z1"]

    def test_m3_121(self):
        rep = choose_integrable_system(build_cell(3, [1, 2, 1]))
        assert set(rep.functions) == {"z1", "z2"}
        assert rep.selected_indices == [1, 2]


class TestIndexMagic:
    def test_sl4(self, sl4_cell):
        assert index_and_magic(sl4_cell) == {
            "d_w": 4,
            "ind": 2,
            "mag": 4,
            "rank_check": True,
        }

    def test_single(self):
        assert index_and_magic(build_cell(2, [1])) == {
            "d_w": 1,
            "ind": 1,
            "mag": 1,
            "rank_check": True,
        }

    def test_m3_121(self):
        assert index_and_magic(build_cell(3, [1, 2, 1])) == {
            "d_w": 2,
            "ind": 1,
            "mag": 2,
            "rank_check": True,
        }


class TestPfaffian:
    def test_sl4(self, sl4_cell):
        assert pfaffian_check(sl4_cell)

    def test_single(self):
        assert pfaffian_check(build_cell(2, [1]))

    def test_random_s5(self, rng):
        for _ in range(3):
            word = _random_reduced_word(rng, 5)
            if len(word) == 0:
                continue
            assert pfaffian_check(build_cell(5, word))


class TestSolidMinors:
    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_standard_word(self, m):
        assert solid_minor_check(m)

    def test_wrong_word(self):
        cell = build_cell(3, [2, 1, 2])
        with pytest.raises(WrongWord):
            solid_minor_check(3, cell)


class TestFlowStructure:
    def test_sl4_all_j(self, sl4_cell):
        for j in range(1, 7):
            rep = flow_structure_check(sl4_cell, j)
            assert rep["constant_coordinates"] == list(range(1, j + 1))

    def test_last_j_trivial(self, sl4_cell):
        rep = flow_structure_check(sl4_cell, 6)
        assert rep["linear_coordinates"] == []

    def test_random_s4(self, rng):
        for _ in range(4):
            word = _random_reduced_word(rng, 4)
            if len(word) == 0:
                continue
            cell = build_cell(4, word)
            for j in range(1, len(word) + 1):
                flow_structure_check(cell, j)


class TestStructuralInvariants:
    def test_predecessor_derivative(self, sl4_cell):
        # d phi_k / d z_k equals phi_{k^-} exactly
        for k in range(1, 7):
            d = sl4_cell.phis[k - 1].derivative(f"z{k}")
            pred = sl4_cell.kminus[k]
            expect = (
                sl4_cell.phis[pred - 1]
                if pred
                else Poly.const(sl4_cell.vars, 1)
            )
            assert d == expect

    def test_log_canonical_lambda(self, sl4_cell):
        for j in range(6):
            for k in range(j + 1, 6):
                lam = is_log_canonical(
                    sl4_cell.pi_z, sl4_cell.phis[j], sl4_cell.phis[k]
                )
                assert lam == sl4_cell.lam[j][k]

    def test_degree_jump_lemma(self, rng):
        # deg(phi_{k^-}^low) <= deg(phi_k^low) <= 1 + deg(phi_{k^-}^low), with
        # the jump exactly when the predecessor low commutes with z_k
        for _ in range(4):
            word = _random_reduced_word(rng, 4)
            if len(word) == 0:
                continue
            cell = build_cell(4, word)
            degs = cell.low_degrees()
            lows = cell.lows()
            for k in range(1, len(word) + 1):
                pred = cell.kminus[k]
                pred_deg = degs[pred - 1] if pred else 0
                assert pred_deg <= degs[k - 1] <= 1 + pred_deg
                pred_low = (
                    lows[pred - 1] if pred else Poly.const(cell.vars, 1)
                )
                zk = Poly.var(cell.vars, f"z{k}")
                commutes = cell.pi0.bracket_poly(pred_low, zk).is_zero()
                assert (degs[k - 1] == 1 + pred_deg) == commutes

    def test_frozen_lows_are_casimirs(self, sl4_cell):
        for k in sl4_cell.frozen_indices():
            low = sl4_cell.lows()[k - 1]
            for name in sl4_cell.vars.names:
                z = Poly.var(sl4_cell.vars, name)
                assert sl4_cell.pi0.bracket_poly(low, z).is_zero()

    def test_property_I_random_words(self, rng):
        from clusterint.poisson_core import LogCanonicalSystem, property_I_check

        for _ in range(3):
            word = _random_reduced_word(rng, 4)
            if len(word) == 0:
                continue
            cell = build_cell(4, word)
            sys = LogCanonicalSystem(
                cell.vars, [RatFun.from_poly(p) for p in cell.phis], cell.lam
            )
            rep = property_I_check(sys, cell.pi_z, pi0=cell.pi0)
            assert rep.holds
