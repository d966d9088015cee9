"""Bit-packed ±1 patterns and spin configurations.

Storage convention: 64-bit little-endian words, set bit <-> +1, padding
bits beyond n1 are zero.  Overlaps and Hamming distances reduce to XOR +
popcount, so every inner product is an exact integer.

Pattern rows are drawn from counter-based Philox streams keyed by
(seed, row index); rows are therefore reproducible independently of
generation order.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from . import kernels

WORD_BITS = 64
MAGIC = b"PSPN"
FORMAT_VERSION = 1


class PatternFileError(Exception):
    """Base class for pattern file problems."""


class PatternFormatError(PatternFileError):
    """Bad magic, bad version, or malformed payload."""


class PatternTruncatedError(PatternFileError):
    """File ends before the declared payload."""


def _n_words(n1: int) -> int:
    return (n1 + WORD_BITS - 1) // WORD_BITS


def _valid_mask(n1: int) -> np.ndarray:
    """Per-word mask of the bits that carry entries (padding cleared)."""
    nw = _n_words(n1)
    mask = np.full(nw, ~np.uint64(0), dtype=np.uint64)
    rem = n1 % WORD_BITS
    if rem:
        mask[-1] = (np.uint64(1) << np.uint64(rem)) - np.uint64(1)
    return mask


def _words_to_pm1(words: np.ndarray, n1: int) -> np.ndarray:
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")[:n1]
    return (2 * bits.astype(np.int8) - 1).astype(np.int8)


def _pm1_to_words(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values)
    n1 = values.shape[0]
    bits = (values > 0).astype(np.uint8)
    packed = np.packbits(bits, bitorder="little")
    buf = np.zeros(_n_words(n1) * 8, np.uint8)
    buf[: packed.shape[0]] = packed
    return buf.view(np.uint64).copy()


class SpinState:
    """A single ±1 configuration; the only mutable object in the package."""

    __slots__ = ("n1", "words")

    def __init__(self, n1: int, words: np.ndarray):
        self.n1 = int(n1)
        self.words = np.ascontiguousarray(words, dtype=np.uint64)

    @classmethod
    def from_pm1(cls, values) -> "SpinState":
        values = np.asarray(values)
        if not np.isin(values, (-1, 1)).all():
            raise ValueError("entries must be exactly +1 or -1")
        return cls(values.shape[0], _pm1_to_words(values))

    @classmethod
    def from_state_int(cls, n1: int, state: int) -> "SpinState":
        """Bit i of ``state`` set <=> entry i equals +1 (n1 <= 64)."""
        if n1 > WORD_BITS:
            raise ValueError("from_state_int supports n1 <= 64")
        return cls(n1, np.array([np.uint64(state)], dtype=np.uint64))

    def to_pm1(self) -> np.ndarray:
        return _words_to_pm1(self.words, self.n1)

    def copy(self) -> "SpinState":
        return SpinState(self.n1, self.words.copy())

    def tobytes(self) -> bytes:
        return self.words.astype("<u8").tobytes()

    def get(self, k: int) -> int:
        w, b = divmod(k, WORD_BITS)
        return 1 if (self.words[w] >> np.uint64(b)) & np.uint64(1) else -1

    def flip_inplace(self, k: int) -> None:
        if not 0 <= k < self.n1:
            raise ValueError(f"site index {k} out of range [0, {self.n1})")
        w, b = divmod(k, WORD_BITS)
        self.words[w] ^= np.uint64(1) << np.uint64(b)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SpinState)
            and self.n1 == other.n1
            and np.array_equal(self.words, other.words)
        )

    def __repr__(self) -> str:
        return f"SpinState(n1={self.n1})"


@dataclass(frozen=True)
class FlipSet:
    """A strictly increasing, duplicate-free set of site indices."""

    indices: np.ndarray

    @classmethod
    def from_indices(cls, indices) -> "FlipSet":
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        arr = np.asarray(indices, dtype=np.int64)
        if idx.shape[0] != arr.shape[0]:
            raise ValueError("flip set contains duplicate indices")
        if idx.size and idx[0] < 0:
            raise ValueError("flip set indices must be non-negative")
        return cls(indices=idx)

    def mask_words(self, n1: int) -> np.ndarray:
        if self.indices.size and self.indices[-1] >= n1:
            raise ValueError(
                f"flip index {int(self.indices[-1])} out of range [0, {n1})"
            )
        mask = np.zeros(_n_words(n1), np.uint64)
        w, b = np.divmod(self.indices, WORD_BITS)
        np.bitwise_or.at(mask, w, np.uint64(1) << b.astype(np.uint64))
        return mask

    def __len__(self) -> int:
        return int(self.indices.shape[0])


@dataclass
class PatternMatrix:
    """n2 immutable bit-packed ±1 rows of length n1."""

    n1: int
    n2: int
    seed: int
    words: np.ndarray  # (n2, n_words) uint64, read-only
    _cols: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.words.setflags(write=False)

    def row_state(self, mu: int) -> SpinState:
        if not 0 <= mu < self.n2:
            raise ValueError(f"pattern index {mu} out of range [0, {self.n2})")
        return SpinState(self.n1, self.words[mu].copy())

    def row_pm1(self, mu: int) -> np.ndarray:
        return _words_to_pm1(self.words[mu], self.n1)

    def cols(self) -> np.ndarray:
        """Site-major ±1 view, shape (n1, n2) int8, cached; cols()[k] is xi_k."""
        if self._cols is None:
            rows = np.empty((self.n2, self.n1), np.int8)
            for mu in range(self.n2):
                rows[mu] = _words_to_pm1(self.words[mu], self.n1)
            cols = np.ascontiguousarray(rows.T)
            cols.setflags(write=False)
            object.__setattr__(self, "_cols", cols)
        return self._cols


def _row_words(seed: int, row: int, n1: int) -> np.ndarray:
    key = np.array([seed, row], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    words = gen.integers(0, 2 ** 64, size=_n_words(n1), dtype=np.uint64)
    return words & _valid_mask(n1)


def generate(n1: int, n2: int, seed: int) -> PatternMatrix:
    """i.i.d. uniform ±1 patterns; bit-exact under (n1, n2, seed)."""
    if n1 < 1 or n2 < 1:
        raise ValueError("n1 and n2 must be >= 1")
    words = np.empty((n2, _n_words(n1)), np.uint64)
    for mu in range(n2):
        words[mu] = _row_words(int(seed), mu, n1)
    return PatternMatrix(n1=n1, n2=n2, seed=int(seed), words=words)


def flip(state: SpinState, flips: FlipSet) -> SpinState:
    """New state with the sites in ``flips`` negated."""
    return SpinState(state.n1, state.words ^ flips.mask_words(state.n1))


def hamming(a: SpinState, b: SpinState) -> int:
    """Number of differing coordinates, by word-wise XOR and popcount."""
    if a.n1 != b.n1:
        raise ValueError(f"length mismatch: {a.n1} vs {b.n1}")
    return kernels.hamming_words(a.words, b.words)


def sym_hamming(a: SpinState, b: SpinState) -> int:
    """min(hamming(a,b), n1 - hamming(a,b)): distance modulo a global flip."""
    d = hamming(a, b)
    return min(d, a.n1 - d)


_HEADER = struct.Struct("<QQQ")


def save_patterns(matrix: PatternMatrix, path) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(bytes([FORMAT_VERSION]))
        fh.write(_HEADER.pack(matrix.n1, matrix.n2, matrix.seed))
        fh.write(matrix.words.astype("<u8").tobytes())


def load_patterns(path) -> PatternMatrix:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 5:
        raise PatternTruncatedError("file shorter than magic + version")
    if data[:4] != MAGIC:
        raise PatternFormatError(f"bad magic {data[:4]!r}")
    if data[4] != FORMAT_VERSION:
        raise PatternFormatError(f"unsupported version {data[4]}")
    if len(data) < 5 + _HEADER.size:
        raise PatternTruncatedError("truncated header")
    n1, n2, seed = _HEADER.unpack_from(data, 5)
    if n1 < 1 or n2 < 1:
        raise PatternFormatError(f"invalid dimensions n1={n1} n2={n2}")
    payload = data[5 + _HEADER.size:]
    expected = n2 * _n_words(n1) * 8
    if len(payload) < expected:
        raise PatternTruncatedError(
            f"payload has {len(payload)} bytes, expected {expected}"
        )
    if len(payload) > expected:
        raise PatternFormatError("trailing bytes after pattern payload")
    words = (
        np.frombuffer(payload, dtype="<u8")
        .reshape(n2, _n_words(n1))
        .astype(np.uint64)
    )
    if (words & ~_valid_mask(n1)).any():
        raise PatternFormatError("padding bits beyond n1 are set")
    return PatternMatrix(n1=int(n1), n2=int(n2), seed=int(seed), words=words)
