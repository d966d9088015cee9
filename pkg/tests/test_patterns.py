import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pspin.patterns import (
    FlipSet,
    PatternFormatError,
    PatternTruncatedError,
    SpinState,
    _valid_mask,
    flip,
    generate,
    hamming,
    load_patterns,
    save_patterns,
    sym_hamming,
)


class TestGenerate:
    def test_deterministic(self):
        a = generate(64, 2, 7)
        b = generate(64, 2, 7)
        assert np.array_equal(a.words, b.words)

    def test_distinct_seeds(self):
        a = generate(64, 2, 7)
        c = generate(64, 2, 8)
        assert not np.array_equal(a.words, c.words)

    def test_rows_order_independent(self):
        big = generate(100, 5, 9)
        small = generate(100, 3, 9)
        assert np.array_equal(big.words[:3], small.words)

    def test_zero_dims(self):
        with pytest.raises(ValueError):
            generate(0, 1, 1)
        with pytest.raises(ValueError):
            generate(1, 0, 1)

    def test_entries_pm1(self):
        m = generate(70, 3, 5)
        for mu in range(3):
            assert np.isin(m.row_pm1(mu), (-1, 1)).all()

    def test_padding_zero(self):
        m = generate(70, 3, 5)
        assert not (m.words & ~_valid_mask(70)).any()

    def test_row_mean_concentration(self):
        # binomial oracle: |mean| <= 0.05 is a 5 sigma event at n1 = 10^4
        hits = 0
        for seed in range(100):
            row = generate(10_000, 1, seed).row_pm1(0)
            if abs(row.mean()) <= 0.05:
                hits += 1
        assert hits >= 99

    def test_global_mean(self):
        m = generate(1000, 1000, 42)
        vals = np.concatenate([m.row_pm1(mu) for mu in range(1000)])
        assert abs(vals.mean()) <= 4.0 / np.sqrt(1e6)

    def test_immutable(self):
        m = generate(64, 2, 7)
        with pytest.raises(ValueError):
            m.words[0, 0] = np.uint64(0)


class TestFlipHamming:
    @given(st.integers(1, 120), st.data())
    @settings(max_examples=60, deadline=None)
    def test_flip_involution(self, n1, data):
        seed = data.draw(st.integers(0, 1000))
        sigma = generate(n1, 1, seed).row_state(0)
        k = data.draw(st.integers(0, max(0, n1 - 1)))
        sites = data.draw(st.sets(st.integers(0, n1 - 1), max_size=n1))
        fs = FlipSet.from_indices(sorted(sites))
        assert flip(flip(sigma, fs), fs) == sigma
        assert hamming(sigma, flip(sigma, fs)) == len(fs)

    def test_empty_and_full(self):
        sigma = generate(67, 1, 3).row_state(0)
        assert flip(sigma, FlipSet.from_indices([])) == sigma
        allset = FlipSet.from_indices(range(67))
        negated = flip(sigma, allset)
        assert np.array_equal(negated.to_pm1(), -sigma.to_pm1())
        assert hamming(sigma, negated) == 67
        assert hamming(sigma, sigma) == 0
        assert sym_hamming(sigma, negated) == 0

    def test_mismatch(self):
        a = generate(64, 1, 1).row_state(0)
        b = generate(65, 1, 1).row_state(0)
        with pytest.raises(ValueError):
            hamming(a, b)

    def test_flipset_validation(self):
        with pytest.raises(ValueError):
            FlipSet.from_indices([1, 1, 2])
        with pytest.raises(ValueError):
            FlipSet.from_indices([-1])
        fs = FlipSet.from_indices([3, 70])
        with pytest.raises(ValueError):
            fs.mask_words(64)

    def test_spinstate_roundtrip(self):
        vals = np.array([1, -1, -1, 1, 1], dtype=np.int8)
        s = SpinState.from_pm1(vals)
        assert np.array_equal(s.to_pm1(), vals)
        assert s.get(0) == 1 and s.get(1) == -1
        s.flip_inplace(1)
        assert s.get(1) == 1
        with pytest.raises(ValueError):
            SpinState.from_pm1(np.array([1, 0, -1]))


class TestSaveLoad:
    def test_roundtrip_many(self, tmp_path, rng):
        for i in range(100):
            n1 = int(rng.integers(1, 200))
            n2 = int(rng.integers(1, 8))
            seed = int(rng.integers(0, 2 ** 63))
            m = generate(n1, n2, seed)
            path = tmp_path / f"m{i}.pspn"
            save_patterns(m, path)
            back = load_patterns(path)
            assert back.n1 == n1 and back.n2 == n2 and back.seed == seed
            assert np.array_equal(back.words, m.words)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.pspn"
        m = generate(64, 2, 7)
        save_patterns(m, path)
        data = bytearray(path.read_bytes())
        data[:4] = b"XXXX"
        path.write_bytes(bytes(data))
        with pytest.raises(PatternFormatError):
            load_patterns(path)

    def test_truncated(self, tmp_path):
        path = tmp_path / "trunc.pspn"
        m = generate(64, 3, 7)
        save_patterns(m, path)
        data = path.read_bytes()
        path.write_bytes(data[: len(data) - 11])
        with pytest.raises(PatternTruncatedError):
            load_patterns(path)

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "hdr.pspn"
        path.write_bytes(b"PSPN\x01\x00\x00")
        with pytest.raises(PatternTruncatedError):
            load_patterns(path)

    def test_trailing_garbage(self, tmp_path):
        path = tmp_path / "trail.pspn"
        m = generate(64, 2, 7)
        save_patterns(m, path)
        path.write_bytes(path.read_bytes() + b"zz")
        with pytest.raises(PatternFormatError):
            load_patterns(path)

    def test_bad_version(self, tmp_path):
        path = tmp_path / "ver.pspn"
        m = generate(64, 2, 7)
        save_patterns(m, path)
        data = bytearray(path.read_bytes())
        data[4] = 2
        path.write_bytes(bytes(data))
        with pytest.raises(PatternFormatError):
            load_patterns(path)

    def test_padding_enforced(self, tmp_path):
        path = tmp_path / "pad.pspn"
        m = generate(70, 1, 7)  # 6 padding bits in word 2
        save_patterns(m, path)
        data = bytearray(path.read_bytes())
        data[-1] |= 0x80  # set the top padding bit of the last word
        path.write_bytes(bytes(data))
        with pytest.raises(PatternFormatError):
            load_patterns(path)
