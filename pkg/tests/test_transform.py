import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bidcodes.codes import A3, A3P, CodeSpec, bid_generator, dimension, kernel_row_class
from bidcodes.gf2 import gf2_rank, gf2_same_span, pack_bits
from bidcodes.rng import PURPOSE_AWGN, PURPOSE_BEC, RNG_VERSION, substream
from bidcodes.transform import (
    EncoderConfig,
    PreTransform,
    config_from_json,
    config_to_json,
    default_kernel,
    encode,
    frozen_spec,
    make_config,
    polar_transform,
    polar_transform_dense,
    trit_reversal_perm,
)


class TestTritReversal:
    def test_m1_identity(self):
        assert trit_reversal_perm(1).tolist() == [0, 1, 2]

    def test_m2_values(self):
        assert trit_reversal_perm(2).tolist() == [0, 3, 6, 1, 4, 7, 2, 5, 8]

    @pytest.mark.parametrize("m", range(1, 6))
    def test_involution(self, m):
        p = trit_reversal_perm(m)
        assert (p[p] == np.arange(3**m)).all()


class TestPolarTransform:
    @pytest.mark.parametrize("kernel", [A3, A3P])
    @pytest.mark.parametrize("m", range(1, 5))
    def test_butterfly_matches_dense(self, kernel, m):
        rng = np.random.default_rng(20 * m + (kernel.name == "A3p"))
        for _ in range(20):
            u = rng.integers(0, 2, 3**m, dtype=np.uint8)
            assert (
                polar_transform(u, kernel) == polar_transform_dense(u, kernel)
            ).all()

    @pytest.mark.parametrize("kernel", [A3, A3P])
    def test_unit_vectors_give_kronecker_rows(self, kernel):
        # the transform includes the trit reversal, so e_i lands on
        # row perm[i] of the plain Kronecker power
        dense = np.kron(kernel.as_array(), kernel.as_array()) % 2
        p = trit_reversal_perm(2)
        for i in range(9):
            u = np.zeros(9, dtype=np.uint8)
            u[i] = 1
            assert (polar_transform(u, kernel) == dense[p[i]]).all()

    @pytest.mark.parametrize("kernel", [A3, A3P])
    @pytest.mark.parametrize("m", range(1, 5))
    def test_commutes_with_trit_reversal(self, kernel, m):
        rng = np.random.default_rng(m)
        p = trit_reversal_perm(m)
        for _ in range(10):
            u = rng.integers(0, 2, 3**m, dtype=np.uint8)
            assert (
                polar_transform(u, kernel)[p] == polar_transform(u[p], kernel)
            ).all()

    def test_linear(self):
        rng = np.random.default_rng(4)
        a = rng.integers(0, 2, 27, dtype=np.uint8)
        b = rng.integers(0, 2, 27, dtype=np.uint8)
        assert (
            polar_transform(a ^ b, A3P)
            == polar_transform(a, A3P) ^ polar_transform(b, A3P)
        ).all()


class TestFrozenSpec:
    @pytest.mark.parametrize("kernel", [A3, A3P])
    @pytest.mark.parametrize("m", range(1, 5))
    def test_unfrozen_count_is_dimension(self, kernel, m):
        for r1 in range(m + 1):
            for r2 in range(r1, m + 1):
                fs = frozen_spec(m, r1, r2, kernel)
                assert fs.k == dimension(m, range(r1, r2 + 1))
                assert fs.n == 3**m
                assert len(fs.unfrozen_indices()) == fs.k

    def test_mask_follows_row_classes(self):
        fs = frozen_spec(3, 1, 2, A3P)
        for i in range(27):
            frozen = not (1 <= kernel_row_class(A3P, i, 3) <= 2)
            assert fs.frozen_mask[i] == frozen

    @pytest.mark.parametrize("kernel", [A3, A3P])
    @pytest.mark.parametrize("m", range(1, 5))
    def test_mask_invariant_under_trit_reversal(self, kernel, m):
        p = trit_reversal_perm(m)
        for r1 in range(m + 1):
            mask = np.asarray(frozen_spec(m, r1, m, kernel).frozen_mask)
            assert (mask[p] == mask).all()

    @pytest.mark.parametrize("kernel", [A3, A3P])
    @pytest.mark.parametrize("m", range(1, 5))
    def test_unfrozen_rows_span_the_code(self, kernel, m):
        for r1 in range(m + 1):
            for r2 in range(r1, m + 1):
                cfg = make_config(m, r1, r2, kernel=kernel)
                rows = []
                for i in cfg.frozen.unfrozen_indices():
                    msg = np.zeros(cfg.frozen.k, dtype=np.uint8)
                    msg[np.searchsorted(cfg.frozen.unfrozen_indices(), i)] = 1
                    _, x = encode(cfg, msg)
                    rows.append(pack_bits(x))
                gen = bid_generator(CodeSpec(m, r1, r2, kernel))
                if rows:
                    assert gf2_same_span(rows, gen.rows)
                else:
                    assert gen.dim == 0


class TestPreTransform:
    def test_materialize_unit_upper_triangular(self):
        T = PreTransform(seed=5, n=9).materialize()
        assert (np.diag(T) == 1).all()
        assert (np.tril(T, -1) == 0).all()
        assert gf2_rank([pack_bits(r) for r in T]) == 9

    def test_rows_match_materialized(self):
        pt = PreTransform(seed=5, n=27)
        T = pt.materialize()
        for j in range(27):
            # row(j) packs only the strict upper part; diagonal is implicit
            expected = pack_bits(T[j]) & ~(1 << j)
            assert pt.row(j) == expected
            assert pt.row(j) >> 27 == 0
            assert pt.row(j) & ((1 << (j + 1)) - 1) == 0

    def test_reentrant_and_seed_dependent(self):
        a = PreTransform(seed=5, n=27)
        b = PreTransform(seed=5, n=27)
        c = PreTransform(seed=6, n=27)
        rows_a = [a.row(j) for j in range(27)]
        assert rows_a == [b.row(j) for j in range(27)]
        assert rows_a != [c.row(j) for j in range(27)]
        # regenerating out of order gives the same rows
        assert a.row(13) == b.row(13)


class TestEncode:
    @pytest.mark.parametrize("kernel", [A3, A3P])
    def test_zero_message_static(self, kernel):
        cfg = make_config(3, 1, 2, kernel=kernel)
        u, x = encode(cfg, np.zeros(cfg.frozen.k, dtype=np.uint8))
        assert not u.any() and not x.any()

    @pytest.mark.parametrize("kernel", [A3, A3P])
    def test_static_codewords_lie_in_the_code(self, kernel):
        rng = np.random.default_rng(8)
        cfg = make_config(3, 1, 2, kernel=kernel)
        gen = bid_generator(cfg.spec)
        for _ in range(25):
            msg = rng.integers(0, 2, cfg.frozen.k, dtype=np.uint8)
            u, x = encode(cfg, msg)
            assert gen.contains(pack_bits(x))
            assert not u[np.asarray(cfg.frozen.frozen_mask)].any()

    def test_dynamic_code_differs_but_keeps_dimension(self):
        # parities land on frozen u positions, so the span moves off the
        # static code while the dimension stays k
        cfg = make_config(3, 1, 2, dynamic=True, seed=2)
        gen = bid_generator(cfg.spec)
        basis = []
        outside = 0
        for i in range(cfg.frozen.k):
            msg = np.zeros(cfg.frozen.k, dtype=np.uint8)
            msg[i] = 1
            _, x = encode(cfg, msg)
            basis.append(pack_bits(x))
            outside += not gen.contains(basis[-1])
        assert gf2_rank(basis) == cfg.frozen.k
        assert outside > 0

    def test_transform_relation(self):
        # x = u B A^(x)m, with the Kronecker power built by bare np.kron
        rng = np.random.default_rng(3)
        cfg = make_config(2, 1, 2, kernel="A3p")
        p = trit_reversal_perm(2)
        karr = cfg.spec.kernel.as_array()
        dense = np.kron(karr, karr) % 2
        for _ in range(10):
            msg = rng.integers(0, 2, cfg.frozen.k, dtype=np.uint8)
            u, x = encode(cfg, msg)
            assert (x == (u[p] @ dense) % 2).all()

    def test_dynamic_parity_matches_materialized_transform(self):
        cfg = make_config(2, 1, 1, dynamic=True, seed=7)
        T = cfg.dynamic.materialize()
        rng = np.random.default_rng(1)
        unfrozen = cfg.frozen.unfrozen_indices()
        for _ in range(16):
            msg = rng.integers(0, 2, cfg.frozen.k, dtype=np.uint8)
            u, x = encode(cfg, msg)
            v = np.zeros(9, dtype=np.uint8)
            v[unfrozen] = msg
            assert (u == v @ T % 2).all()

    def test_dynamic_injective(self):
        cfg = make_config(2, 1, 1, dynamic=True, seed=3)
        seen = set()
        for msg_int in range(16):
            msg = np.array([(msg_int >> i) & 1 for i in range(4)], dtype=np.uint8)
            _, x = encode(cfg, msg)
            seen.add(pack_bits(x))
        assert len(seen) == 16

    def test_message_length_checked(self):
        cfg = make_config(2, 1, 1)
        with pytest.raises(ValueError):
            encode(cfg, np.zeros(5, dtype=np.uint8))


class TestConfig:
    def test_default_kernels(self):
        assert default_kernel(2, dynamic=True).name == "A3"
        assert default_kernel(3, dynamic=True).name == "A3p"
        assert default_kernel(2, dynamic=False).name == "A3p"
        assert default_kernel(3, dynamic=False).name == "A3p"
        assert make_config(5, 2, 2, dynamic=True).spec.kernel.name == "A3"
        assert make_config(5, 3, 3, dynamic=True).spec.kernel.name == "A3p"

    def test_labels(self):
        assert make_config(3, 0, 2).label == "BiD(3,0,2)"
        assert make_config(3, 1, 2, dynamic=True, seed=9).label == "dBiD(3,1,2)"

    def test_bad_kernel_name(self):
        with pytest.raises(ValueError):
            make_config(2, 1, 1, kernel="bogus")

    def test_mismatched_parts_rejected(self):
        with pytest.raises(ValueError):
            EncoderConfig(CodeSpec(2, 1, 1, A3P), frozen_spec(3, 1, 1, A3P), None)
        with pytest.raises(ValueError):
            EncoderConfig(CodeSpec(2, 1, 1, A3P), frozen_spec(2, 1, 1, A3), None)

    def test_json_round_trip(self):
        cfg = make_config(3, 1, 2, dynamic=True, seed=9)
        back = config_from_json(config_to_json(cfg))
        assert back.spec == cfg.spec
        assert back.dynamic.seed == 9
        assert (
            np.asarray(back.frozen.frozen_mask) == np.asarray(cfg.frozen.frozen_mask)
        ).all()
        static = make_config(4, 2, 3)
        back = config_from_json(config_to_json(static))
        assert back.dynamic is None and back.spec == static.spec

    def test_json_pins_rng_scheme(self):
        d = json.loads(config_to_json(make_config(2, 1, 1, dynamic=True)))
        assert d["rng"] == RNG_VERSION
        d["rng"] = "other-rng-0"
        with pytest.raises(ValueError):
            config_from_json(json.dumps(d))


class TestSubstreams:
    def test_deterministic(self):
        a = substream(1, PURPOSE_AWGN, 7).random(4)
        b = substream(1, PURPOSE_AWGN, 7).random(4)
        assert np.array_equal(a, b)

    @given(
        seed=st.integers(0, 2**32 - 1),
        idx=st.integers(0, 2**40),
    )
    @settings(max_examples=30, deadline=None)
    def test_purposes_are_disjoint_streams(self, seed, idx):
        a = substream(seed, PURPOSE_AWGN, idx).random(2)
        b = substream(seed, PURPOSE_BEC, idx).random(2)
        assert not np.array_equal(a, b)
