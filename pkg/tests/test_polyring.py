import random

import pytest

from clusterint.errors import BadTruncation, NonSquare, NotDivisible, ZeroInput
from clusterint.polyring import (
    Jet,
    Poly,
    PolyMatrix,
    RatFun,
    VarSet,
    det,
    jacobian,
    lowest_term,
    numeric_rank,
    numeric_rank_at,
    parse_poly,
    poly_gcd,
    truncated_exp,
    _det_bareiss,
    _det_cofactor,
)
from clusterint.rationals import QQ

from conftest import Z6, p6, random_poly


class TestLowestTerm:
    def test_sl4_phi6(self):
        # z6*(z4*z1 - z2) - z1*z5 + z3 has lowest term z3 of degree 1
        phi6 = p6("z1*z4*z6 - z2*z6 - z1*z5 + z3")
        low, deg = lowest_term(phi6)
        assert low == p6("z3")
        assert deg == 1

    def test_nonzero_constant(self):
        low, deg = lowest_term(Poly.const(Z6, 1))
        assert low == Poly.const(Z6, 1)
        assert deg == 0

    def test_ratfun(self):
        f = RatFun(p6("z1 + z1^2"), p6("1 + z2"))
        low, deg = lowest_term(f)
        assert low == RatFun.from_poly(p6("z1"))
        assert deg == 1

    def test_zero_input(self):
        with pytest.raises(ZeroInput):
            lowest_term(Poly.zero(Z6))

    def test_multiplicative(self, rng):
        for _ in range(30):
            f = random_poly(rng, Z6)
            g = random_poly(rng, Z6)
            if f.is_zero() or g.is_zero():
                continue
            lf, df = lowest_term(f)
            lg, dg = lowest_term(g)
            lfg, dfg = lowest_term(f * g)
            assert lfg == lf * lg
            assert dfg == df + dg

    def test_presentation_independent(self, rng):
        # (f*h)/(g*h) has the same lowest term as f/g
        for _ in range(20):
            f = random_poly(rng, Z6)
            g = random_poly(rng, Z6)
            h = random_poly(rng, Z6)
            if f.is_zero() or g.is_zero() or h.is_zero():
                continue
            a = lowest_term(RatFun(f, g))
            b = lowest_term(RatFun(f * h, g * h, reduce=False))
            assert a[1] == b[1]
            assert a[0] == b[0]


class TestDet:
    def test_2x2(self):
        m = PolyMatrix([[p6("z1"), p6("-1")], [p6("1"), p6("0")]])
        assert det(m) == Poly.const(Z6, 1)

    def test_identity(self):
        assert det(PolyMatrix.identity(Z6, 3)) == Poly.const(Z6, 1)

    def test_sl4_jacobian_det(self, sl4_phis):
        j = jacobian(sl4_phis, Z6)
        assert det(j) == p6("z1") * p6("z2") * p6("z1*z4 - z2")

    def test_nonsquare(self):
        with pytest.raises(NonSquare):
            det(PolyMatrix([[p6("z1"), p6("z2")]]))

    def test_cofactor_vs_bareiss(self, rng):
        for _ in range(10):
            m = PolyMatrix(
                [[random_poly(rng, Z6, 2, 2) for _ in range(4)] for _ in range(4)]
            )
            assert _det_cofactor(m) == _det_bareiss(m)

    def test_bareiss_5x5_vs_cofactor(self, rng):
        m = PolyMatrix(
            [[random_poly(rng, Z6, 1, 2, 3) for _ in range(5)] for _ in range(5)]
        )
        assert det(m) == _det_cofactor(m)

    def test_ratfun_det(self):
        m = PolyMatrix(
            [
                [RatFun(p6("z1"), p6("z2")), RatFun.const(Z6, 1)],
                [RatFun.const(Z6, 1), RatFun(p6("z2"), p6("z1"))],
            ]
        )
        assert det(m) == RatFun.const(Z6, 0)


class TestJacobian:
    def test_identity(self):
        fs = [p6("z1"), p6("z2")]
        vs2 = VarSet(["z1", "z2"])
        fs = [parse_poly("z1", vs2), parse_poly("z2", vs2)]
        j = jacobian(fs, vs2)
        assert j.entries[0][0] == Poly.const(vs2, 1)
        assert j.entries[0][1].is_zero()
        assert j.entries[1][1] == Poly.const(vs2, 1)

    def test_product_column(self):
        vs2 = VarSet(["z1", "z2"])
        j = jacobian([parse_poly("z1*z2", vs2)], vs2)
        # rows indexed by variables, single column
        assert j.rows == 2 and j.cols == 1
        assert j.entries[0][0] == parse_poly("z2", vs2)
        assert j.entries[1][0] == parse_poly("z1", vs2)

    def test_phi4_column(self):
        j = jacobian([p6("z1*z4 - z2")], Z6)
        col = [j.entries[a][0] for a in range(6)]
        assert col == [p6("z4"), p6("-1"), p6("0"), p6("z1"), p6("0"), p6("0")]


class TestRank:
    def test_zero(self, rng):
        m = PolyMatrix([[Poly.zero(Z6)] * 3 for _ in range(3)])
        assert numeric_rank(m, rng) == 0

    def test_identity(self, rng):
        assert numeric_rank(PolyMatrix.identity(Z6, 4), rng) == 4

    def test_point_evaluation(self):
        vs2 = VarSet(["z1", "z2"])
        m = PolyMatrix(
            [
                [parse_poly("z1", vs2), parse_poly("z2", vs2)],
                [parse_poly("z1", vs2), parse_poly("z2", vs2)],
            ]
        )
        assert numeric_rank_at(m, [QQ(3), QQ(5)]) == 1


class TestTruncatedExp:
    def test_zero(self):
        x = PolyMatrix([[Poly.zero(Z6)] * 2 for _ in range(2)])
        e = truncated_exp(x, 3)
        assert e.entries[0][0].poly == Poly.const(Z6, 1)
        assert e.entries[0][1].poly.is_zero()

    def test_nilpotent(self):
        x = PolyMatrix([[Poly.zero(Z6), p6("z1")], [Poly.zero(Z6), Poly.zero(Z6)]])
        e = truncated_exp(x, 3)
        assert e.entries[0][1].poly == p6("z1")
        assert e.entries[1][0].poly.is_zero()

    def test_diagonal(self):
        vs = VarSet(["u11", "u22"])
        x = PolyMatrix(
            [
                [parse_poly("u11", vs), Poly.zero(vs)],
                [Poly.zero(vs), parse_poly("u22", vs)],
            ]
        )
        e = truncated_exp(x, 2)
        assert e.entries[0][0].poly == parse_poly("1/2*u11^2 + u11 + 1", vs)
        assert e.entries[1][1].poly == parse_poly("1/2*u22^2 + u22 + 1", vs)

    def test_exp_times_exp_minus(self, rng):
        vs = VarSet(["a", "b", "c"])
        x = PolyMatrix(
            [
                [parse_poly("a", vs), parse_poly("b", vs), parse_poly("c", vs)],
                [parse_poly("b", vs), Poly.zero(vs), parse_poly("a", vs)],
                [parse_poly("c", vs), parse_poly("a", vs), parse_poly("b", vs)],
            ]
        )
        D = 4
        e = truncated_exp(x, D)
        em = truncated_exp(x.map(lambda p: -p), D)
        prod = e * em
        for i in range(3):
            for j in range(3):
                expect = QQ(1) if i == j else QQ(0)
                assert prod.entries[i][j].poly == Poly.const(vs, expect)

    def test_bad_truncation(self):
        x = PolyMatrix([[Poly.zero(Z6)]])
        with pytest.raises(BadTruncation):
            truncated_exp(x, 0)


class TestCanonicalText:
    def test_example_format(self):
        assert str(p6("z1*z4 - z2")) == "z1*z4 - z2"

    def test_coefficients(self):
        assert str(p6("-1/2*z1^2 + 3*z2 - 1")) == "-1/2*z1^2 + 3*z2 - 1"

    def test_round_trip_random(self, rng):
        for _ in range(60):
            p = random_poly(rng, Z6, max_degree=4, terms=6)
            assert parse_poly(str(p), Z6) == p

    def test_grlex_descending(self):
        p = p6("z2 + z1 + z1*z2")
        assert str(p) == "z1*z2 + z1 + z2"


class TestGcdDivision:
    def test_exact_div(self):
        f = p6("z1^2*z4 - z1*z2")
        assert f.exact_div(p6("z1")) == p6("z1*z4 - z2")

    def test_not_divisible(self):
        with pytest.raises(NotDivisible):
            p6("z1 + z2").exact_div(p6("z1"))

    def test_gcd_random_products(self, rng):
        for _ in range(15):
            f = random_poly(rng, Z6, 2, 2)
            g = random_poly(rng, Z6, 2, 2)
            h = random_poly(rng, Z6, 2, 2)
            if f.is_zero() or g.is_zero() or h.is_zero():
                continue
            d = poly_gcd(f * h, g * h)
            # h divides the gcd
            assert d.divides(f * h) and d.divides(g * h)
            assert h.divides(d) or poly_gcd(f, g).total_degree() > 0

    def test_ratfun_reduction(self):
        f = RatFun(p6("z1^2 - z2^2"), p6("z1 + z2"))
        assert f == RatFun.from_poly(p6("z1 - z2"))

    def test_ratfun_den_monic(self):
        f = RatFun(p6("z2"), p6("2*z1"))
        assert f.den == p6("z1")
        assert f.num == p6("1/2*z2")


class TestJet:
    def test_truncating_product(self):
        j = Jet(p6("z1 + z2"), 2)
        sq = j * j
        assert sq.poly == p6("z1^2 + 2*z1*z2 + z2^2")
        cube = sq * j
        assert cube.poly.is_zero()

    def test_inverse(self):
        j = Jet(p6("1 + z1"), 4)
        inv = j.inverse()
        assert (j * inv).poly == Poly.const(Z6, 1)
        assert inv.poly == p6("z1^4 - z1^3 + z1^2 - z1 + 1")
