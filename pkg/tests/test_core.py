import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperforge import (
    FiniteSeq,
    WeightSpec,
    WideComplex,
    backward_iterate,
    cauchy_power,
    cauchy_product,
    coordinatewise_power,
    coordinatewise_product,
    forward_iterate,
    root_power_block,
)
from hyperforge.errors import WeightError

from conftest import (
    dicts_close,
    from_dict,
    naive_convolution,
    naive_power,
    rand_seq,
    to_dict,
)


class TestWideComplex:
    def test_roundtrip_human_scale(self):
        for z in (3 + 4j, -1.5, 2j, -0.25 - 7j):
            assert abs(WideComplex.from_complex(z).to_complex() - z) <= 1e-14 * abs(z)

    def test_roundtrip_extreme_log_magnitudes(self):
        # mul/div against a second wide value cancels to 1e-14 relative
        for L in (1e6, -1e6, 3.7e5):
            h = WideComplex(L, 2.0)
            g = WideComplex(-0.97 * L, -1.3)
            assert ((h * g) / g).approx_eq(h, 1e-14)

    def test_json_roundtrip_uses_log_form_for_extremes(self):
        big = WideComplex(5e5, 1.0)
        enc = big.to_json()
        assert isinstance(enc, dict) and enc["log_mag"] == 5e5
        assert WideComplex.from_json(enc) == big
        small = WideComplex.from_complex(0.5 - 2j)
        assert isinstance(small.to_json(), list)
        assert WideComplex.from_json(small.to_json()).approx_eq(small, 1e-15)

    def test_zero_flag_is_canonical(self):
        z = WideComplex.zero()
        assert z.is_zero and z.phase == 0.0
        assert (WideComplex.from_real(5.0) - WideComplex.from_real(5.0)).is_zero

    def test_principal_root_branch(self):
        minus_one = WideComplex.from_real(-1.0)
        assert minus_one.root(2).approx_eq(WideComplex.from_complex(1j), 1e-15)
        i = WideComplex.from_complex(1j)
        assert i.root(2).phase == pytest.approx(math.pi / 4)
        # phase of an m-th root always lands in (-pi/m, pi/m]
        assert abs(WideComplex(0.0, 3.0).root(5).phase) <= math.pi / 5 + 1e-15

    def test_fractional_power_is_power_of_stored_root(self):
        z = WideComplex(2.0, 2.5)
        assert z.powfrac(2, 4) == z.root(4).powi(2)
        assert z.powfrac(3, 2) == z.root(2).powi(3)
        assert z.powfrac(3, 3) == z  # j = m short-circuits exactly

    def test_max_rescaled_sum(self):
        terms = [WideComplex.from_real(1e-18), WideComplex.from_real(1.0)]
        s = WideComplex.sum_of(terms)
        assert abs(s.to_complex() - (1.0 + 1e-18)) < 1e-15


SMALL_COMPLEX = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


def seqs(max_terms=8, max_index=12):
    return st.dictionaries(st.integers(0, max_index), SMALL_COMPLEX, min_size=1, max_size=max_terms)


class TestProducts:
    def test_coordinatewise_examples(self):
        e3 = FiniteSeq.basis(3)
        assert coordinatewise_product(e3, e3) == e3
        assert coordinatewise_product(FiniteSeq.basis(2), FiniteSeq.basis(3)).is_zero
        got = coordinatewise_product(from_dict({0: 1, 1: 2}), from_dict({0: 3, 2: 5}))
        assert got.support == (0,)
        assert got.approx_eq(from_dict({0: 3}), 1e-14)

    def test_disjoint_supports_give_exact_zero(self):
        rng = random.Random(7)
        for _ in range(50):
            x = rand_seq(rng, 5, 10)
            y = from_dict({n + 11: 1.0 for n in rand_seq(rng, 5, 10).support})
            assert coordinatewise_product(x, y).is_zero

    def test_cauchy_examples(self):
        assert cauchy_product(FiniteSeq.basis(1), FiniteSeq.basis(1)) == FiniteSeq.basis(2)
        two = from_dict({0: 1, 1: 1})
        assert cauchy_product(two, two).approx_eq(from_dict({0: 1, 1: 2, 2: 1}), 1e-14)
        got = cauchy_product(from_dict({0: 1, 1: 2}), from_dict({0: 3, 1: 4}))
        assert got.approx_eq(from_dict({0: 3, 1: 10, 2: 8}), 1e-14)

    def test_cauchy_max_index_adds(self):
        rng = random.Random(3)
        for _ in range(25):
            x, y = rand_seq(rng), rand_seq(rng)
            assert cauchy_product(x, y).max_index == x.max_index + y.max_index

    def test_cauchy_power_examples(self):
        cube = cauchy_power(from_dict({0: 1, 1: 1}), 3)
        assert cube.approx_eq(from_dict({0: 1, 1: 3, 2: 3, 3: 1}), 1e-14)
        x = from_dict({0: 0.3, 2: -1j})
        assert cauchy_power(x, 1) == x
        assert cauchy_power(FiniteSeq.basis(2), 4).support == (8,)

    @settings(max_examples=60, deadline=None)
    @given(seqs(), seqs())
    def test_cauchy_commutative(self, da, db):
        x, y = from_dict(da), from_dict(db)
        assert dicts_close(to_dict(cauchy_product(x, y)), naive_convolution(da, db))
        assert cauchy_product(x, y).rel_distance(cauchy_product(y, x)) <= 1e-10

    @settings(max_examples=40, deadline=None)
    @given(seqs(5, 8), seqs(5, 8), seqs(5, 8))
    def test_cauchy_associative_and_distributive(self, da, db, dc):
        x, y, z = from_dict(da), from_dict(db), from_dict(dc)
        left = cauchy_product(cauchy_product(x, y), z)
        right = cauchy_product(x, cauchy_product(y, z))
        assert left.rel_distance(right) <= 1e-10
        dist_l = cauchy_product(x, y + z)
        dist_r = cauchy_product(x, y) + cauchy_product(x, z)
        assert dist_l.rel_distance(dist_r) <= 1e-10

    @settings(max_examples=30, deadline=None)
    @given(seqs(6, 8), st.integers(0, 6))
    def test_cauchy_power_matches_repeated_convolution_oracle(self, d, m):
        got = to_dict(cauchy_power(from_dict(d), m))
        assert dicts_close(got, naive_power(d, m))

    def test_coordinatewise_power_equals_repeated_product(self):
        rng = random.Random(11)
        for _ in range(20):
            x = rand_seq(rng)
            prod = x
            for j in range(2, 5):
                prod = coordinatewise_product(prod, x)
                assert coordinatewise_power(x, j).rel_distance(prod) <= 1e-12


class TestWeightsAndShifts:
    def test_weight_parsing(self):
        assert WeightSpec.parse("const:2").value == 2
        assert WeightSpec.parse("const:1+2i").value == 1 + 2j
        assert WeightSpec.parse("maclane").kind == "maclane"
        with pytest.raises(WeightError):
            WeightSpec.parse("const:0")
        with pytest.raises(WeightError):
            WeightSpec.parse("gauss")

    def test_table_rejects_zero_and_exhausts(self, tmp_path):
        with pytest.raises(WeightError):
            WeightSpec("table", table=[1, 0, 2])
        t = WeightSpec("table", table=[2, 3, 4])
        assert t.v(3).approx_eq(WideComplex.from_real(24.0), 1e-14)
        with pytest.raises(WeightError):
            t.v(4)
        path = tmp_path / "w.json"
        path.write_text("[[2,0],[0,1]]")
        loaded = WeightSpec.parse(f"table:{path}")
        assert loaded.w(2).approx_eq(WideComplex.from_complex(1j), 1e-15)

    def test_weight_products(self, weight2, maclane):
        assert weight2.v(0) == WideComplex.one()  # w_0 = 1
        assert weight2.v(10).approx_eq(WideComplex.from_real(1024.0), 1e-13)
        assert maclane.v(5).approx_eq(WideComplex.from_real(120.0), 1e-13)

    def test_backward_shift_definition(self, weight2, maclane):
        assert backward_iterate(maclane, FiniteSeq.basis(3), 1).approx_eq(
            from_dict({2: 3}), 1e-14
        )
        assert backward_iterate(weight2, FiniteSeq.basis(5), 2).approx_eq(
            from_dict({3: 4}), 1e-14
        )
        assert backward_iterate(weight2, FiniteSeq.basis(0), 1).is_zero

    def test_forward_shift_definition(self, weight2):
        assert forward_iterate(weight2, FiniteSeq.basis(0), 3).approx_eq(
            from_dict({3: 0.125}), 1e-14
        )
        x = from_dict({0: 1j, 4: -2})
        assert forward_iterate(weight2, x, 0) == x

    @settings(max_examples=40, deadline=None)
    @given(seqs(), st.integers(0, 20), st.sampled_from(["const:2", "maclane", "const:0.5+0.5i"]))
    def test_backward_undoes_forward(self, d, a, wspec):
        w = WeightSpec.parse(wspec)
        x = from_dict(d)
        assert backward_iterate(w, forward_iterate(w, x, a), a).rel_distance(x) <= 1e-12


class TestRootPowerBlocks:
    def test_block_values(self, weight2):
        blk = root_power_block(weight2, FiniteSeq.basis(0), 3, 1, 1)
        assert blk.approx_eq(from_dict({3: 0.125}), 1e-14)
        w4 = WeightSpec.parse("const:4")
        blk2 = root_power_block(w4, FiniteSeq.basis(0), 2, 1, 2)
        assert blk2.approx_eq(from_dict({2: 0.25}), 1e-14)

    def test_full_power_block_inverts_the_shift(self, maclane, weight2):
        rng = random.Random(23)
        for w in (maclane, weight2):
            for m in (1, 2, 3):
                y = rand_seq(rng, 5, 6)
                blk = root_power_block(w, y, 9, m, m)
                assert backward_iterate(w, blk, 9).rel_distance(y) <= 1e-12

    def test_zero_coordinates_pass_through(self, weight2):
        y = from_dict({0: 1.0, 3: 2.0})  # indices 1, 2 are zero inside [0, s]
        blk = root_power_block(weight2, y, 4, 1, 2)
        assert blk.support == (4, 7)

    def test_fractional_block_matches_scalar_path(self, maclane):
        # product of per-factor roots == root of the full ratio for positive weights
        y = from_dict({1: 0.7})
        blk = root_power_block(maclane, y, 6, 2, 3)
        ratio = maclane.v(7).log_mag - maclane.v(1).log_mag
        expected = y.coef(1).powfrac(2, 3).log_mag - ratio * 2 / 3
        assert blk.coef(7).log_mag == pytest.approx(expected, rel=1e-14)


class TestFiniteSeqJson:
    def test_roundtrip_plain_and_extreme(self):
        x = FiniteSeq(
            {2: WideComplex.from_real(0.5), 1000: WideComplex(5e5, 1.0), 7: WideComplex(-4e5, -2.0)}
        )
        data = x.to_json()
        assert FiniteSeq.from_json(data) == x

    def test_horizon_tag_survives(self):
        x = from_dict({0: 1.0}).with_horizon(12)
        assert FiniteSeq.from_json(x.to_json()).horizon == 12

    def test_no_stored_zeros(self):
        x = FiniteSeq({0: WideComplex.zero(), 1: WideComplex.one()})
        assert x.support == (1,)


def test_concurrent_use_is_safe():
    # pure operations over immutable values; the weight cache grows under a lock
    from concurrent.futures import ThreadPoolExecutor

    from hyperforge import seminorm_eval, space

    w = WeightSpec.parse("maclane")
    sp = space("entire_hadamard")
    rng = random.Random(97)
    seqs = [rand_seq(rng) for _ in range(64)]

    def work(i):
        x = seqs[i % len(seqs)]
        val = seminorm_eval(sp, 1 + i % 5, x).upper_log
        shifted = backward_iterate(w, forward_iterate(w, x, 500 + i), 500 + i)
        return val, shifted.rel_distance(x) <= 1e-11

    with ThreadPoolExecutor(8) as pool:
        results = list(pool.map(work, range(256)))
    assert all(ok for _, ok in results)
    serial = [work(i) for i in range(256)]
    assert [v for v, _ in results] == [v for v, _ in serial]


def test_table_weight_grows_only_to_its_length():
    table = [2.0] * 200
    w = WeightSpec("table", table=table)
    assert w.v(200).log_mag == pytest.approx(200 * math.log(2))
    with pytest.raises(WeightError):
        w.v(201)
