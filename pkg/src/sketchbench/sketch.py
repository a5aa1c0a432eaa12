"""Count-min sketch with conservative update, over linear or logarithmic cells.

The sketch is a depth x width grid of cells.  An element e owns one cell per
row, located by a seeded hash; an update raises only the cells currently
equal to the minimum of e's cells (conservative update), and in logarithmic
mode the raise itself is accepted with probability base^(-min).  A query
decodes the minimum of e's cells through the configured counter semantics.

Hash family
-----------
Elements are opaque byte strings.  Each element is first digested to 64 bits
with blake2b; row k then mixes the digest with a row seed derived from the
sketch seed, and reduces modulo the width:

    digest     = blake2b(element, digest_size=8), little-endian
    row_seed_k = fmix64(seed XOR ((k + 1) * 0x9E3779B97F4A7C15 mod 2^64))
    column_k   = fmix64(digest XOR row_seed_k) mod width

fmix64 is the splitmix64 finalizer.  The digest is seed-independent, so a
caller feeding one stream into several sketches may hash each element once
and reuse the digest (see update_prehashed / query_prehashed).
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

import numpy as np

from .counters import CounterSemantics, Mode, cell_value, increase_decision
from .rng import MASK64, Xoroshiro128Plus, fmix64

_ROW_GAMMA = 0x9E3779B97F4A7C15

SNAPSHOT_MAGIC = b"CMLS"
SNAPSHOT_VERSION = 1

# magic, version, mode, cell_bits, reserved, depth, width, base, seed,
# rng_s0, rng_s1, update_count -- all little-endian, then cells row-major.
_HEADER = struct.Struct("<4sBBBBIQdQQQQ")

_CELL_DTYPES = {8: np.dtype("<u1"), 16: np.dtype("<u2"), 32: np.dtype("<u4")}


class SnapshotError(ValueError):
    """A snapshot byte stream could not be decoded."""


@dataclass(frozen=True)
class SketchConfig:
    semantics: CounterSemantics
    depth: int
    width: int
    seed: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        if not 0 <= self.seed <= MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def storage_bytes(self) -> int:
        """Cell storage only; header/metadata excluded."""
        return self.depth * self.width * (self.semantics.cell_bits // 8)


def width_for_budget(budget_bytes: int, depth: int, cell_bits: int) -> int:
    """Widest grid whose cell storage fits the byte budget."""
    width = budget_bytes // (depth * (cell_bits // 8))
    if width < 1:
        raise ValueError(
            f"budget of {budget_bytes} bytes is too small for depth {depth} "
            f"with {cell_bits}-bit cells"
        )
    return width


def digest64(element: bytes) -> int:
    """Seed-independent 64-bit content digest of an element."""
    return int.from_bytes(hashlib.blake2b(element, digest_size=8).digest(), "little")


def row_seed(seed: int, row: int) -> int:
    return fmix64(seed ^ ((row + 1) * _ROW_GAMMA & MASK64))


def row_index(element: bytes, row: int, config: SketchConfig) -> int:
    """Column of `element` in the given row; deterministic in (element, row, seed)."""
    if not 0 <= row < config.depth:
        raise ValueError(f"row must be in [0, {config.depth}), got {row}")
    return fmix64(digest64(element) ^ row_seed(config.seed, row)) % config.width


class Sketch:
    """A d x w grid of counters with conservative update.

    Mutation is single-writer: update() touches the grid and the RNG.
    Queries never mutate and may run concurrently with each other.
    """

    def __init__(self, config: SketchConfig):
        self.config = config
        self.grid: list[list[int]] = [[0] * config.width for _ in range(config.depth)]
        self.rng = Xoroshiro128Plus(config.seed)
        self.update_count = 0
        self._row_seeds = [row_seed(config.seed, k) for k in range(config.depth)]

    def columns(self, element: bytes) -> list[int]:
        """Per-row columns owned by `element`."""
        return self._columns(digest64(element))

    def _columns(self, digest: int) -> list[int]:
        w = self.config.width
        return [fmix64(digest ^ rs) % w for rs in self._row_seeds]

    def update(self, element: bytes) -> None:
        self.update_prehashed(digest64(element))

    def update_prehashed(self, digest: int) -> None:
        """Update by precomputed digest64(element); one RNG draw at most."""
        cols = self._columns(digest)
        grid = self.grid
        c = min(grid[k][col] for k, col in enumerate(cols))
        if increase_decision(c, self.config.semantics, self.rng):
            nxt = c + 1
            for k, col in enumerate(cols):
                if grid[k][col] == c:
                    grid[k][col] = nxt
            self.update_count += 1

    def query(self, element: bytes) -> float:
        return self.query_prehashed(digest64(element))

    def query_prehashed(self, digest: int) -> float:
        grid = self.grid
        c = min(grid[k][col] for k, col in enumerate(self._columns(digest)))
        return cell_value(c, self.config.semantics)

    def to_bytes(self) -> bytes:
        """Serialize to the CMLS snapshot format (see from_bytes)."""
        cfg = self.config
        sem = cfg.semantics
        header = _HEADER.pack(
            SNAPSHOT_MAGIC,
            SNAPSHOT_VERSION,
            int(sem.mode),
            sem.cell_bits,
            0,
            cfg.depth,
            cfg.width,
            sem.base,
            cfg.seed,
            self.rng.s0,
            self.rng.s1,
            self.update_count,
        )
        cells = np.asarray(self.grid, dtype=_CELL_DTYPES[sem.cell_bits])
        return header + cells.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "Sketch":
        """Decode a snapshot; the round trip is bit-exact including RNG state.

        Layout (little-endian): magic "CMLS", version u8, mode u8,
        cell_bits u8, reserved u8 = 0, depth u32, width u64, base f64,
        seed u64, rng state as two u64 words (s0 then s1), update_count u64,
        then depth*width cells row-major at cell_bits/8 bytes each.
        """
        if len(data) < _HEADER.size:
            raise SnapshotError(f"truncated snapshot: {len(data)} bytes, need at least {_HEADER.size}")
        (magic, version, mode, cell_bits, reserved, depth, width, base, seed,
         s0, s1, update_count) = _HEADER.unpack_from(data)
        if magic != SNAPSHOT_MAGIC:
            raise SnapshotError(f"bad magic {magic!r}")
        if version != SNAPSHOT_VERSION:
            raise SnapshotError(f"unsupported snapshot version {version}")
        if mode not in (0, 1):
            raise SnapshotError(f"unknown counter mode {mode}")
        if cell_bits not in _CELL_DTYPES:
            raise SnapshotError(f"unsupported cell width: {cell_bits} bits")
        if reserved != 0:
            raise SnapshotError(f"reserved header byte must be 0, got {reserved}")
        if depth < 1:
            raise SnapshotError("depth must be >= 1")
        if width < 1:
            raise SnapshotError("width must be >= 1")
        if mode == Mode.LOGARITHMIC and not base > 1.0:
            raise SnapshotError(f"logarithmic mode requires base > 1, got {base}")
        if s0 == 0 and s1 == 0:
            raise SnapshotError("all-zero rng state")
        expected = _HEADER.size + depth * width * (cell_bits // 8)
        if len(data) != expected:
            raise SnapshotError(f"truncated or oversized snapshot: {len(data)} bytes, expected {expected}")
        cells = np.frombuffer(data, dtype=_CELL_DTYPES[cell_bits], offset=_HEADER.size)
        max_cell = (1 << cell_bits) - 1
        if cells.size and int(cells.max()) > max_cell:
            # Unreachable while cell_bits matches the storage dtype exactly;
            # kept as a guard for future packed layouts.
            raise SnapshotError("cell value exceeds the mode maximum")
        config = SketchConfig(
            semantics=CounterSemantics(Mode(mode), base, cell_bits),
            depth=depth,
            width=width,
            seed=seed,
        )
        sketch = cls(config)
        sketch.grid = cells.reshape(depth, width).tolist()
        sketch.rng = Xoroshiro128Plus.from_state(s0, s1)
        sketch.update_count = update_count
        return sketch


def save_snapshot(sketch: Sketch, path) -> None:
    with open(path, "wb") as fh:
        fh.write(sketch.to_bytes())


def load_snapshot(path) -> Sketch:
    with open(path, "rb") as fh:
        return Sketch.from_bytes(fh.read())
