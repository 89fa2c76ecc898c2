"""Streaming sketch: k projected coordinates plus an exact running sum.

Each stream update (i, I) adds I * r_ij to coordinate j for j = 1..k,
where r_ij is a maximally-skewed stable draw.  Projection entries are
never stored: the pair (seed, i, j) is hashed by a splitmix64-style
avalanche chain to two 53-bit uniforms which feed the
Chambers-Mallows-Stuck transform, so any entry can be regenerated
bit-exactly on demand.  Memory stays O(k) regardless of the domain size.

Coordinates accumulate in exact fixed-point integers (units of 2^-1074,
the spacing of subnormal doubles), so the sketch state is independent of
update order and of how a stream is split across shards: summing the same
multiset of per-update terms in any order yields the identical rendered
float64 coordinate.  Rendering rounds the exact integer sum once,
correctly.  Serialization stores the rendered coordinates; a deserialized
sketch therefore starts from the rounded snapshot.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, DecodeError, MergeError, UpdateError
from .stable import _stable_from_uniforms

__all__ = [
    "StreamUpdate",
    "SketchConfig",
    "Sketch",
    "new_sketch",
    "from_vector",
    "merge",
    "serialize",
    "deserialize",
    "projection_entry",
    "MAGIC",
    "FORMAT_VERSION",
]

MAGIC = b"CCSK"
FORMAT_VERSION = 1

_U64_MAX = (1 << 64) - 1

# splitmix64 finalizer constants plus distinct odd multipliers for the
# row/cell/word injection steps
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GOLD = np.uint64(0x9E3779B97F4A7C15)
_CELL = np.uint64(0xD6E8FEB86659FD93)
_GOLD2 = np.uint64((2 * 0x9E3779B97F4A7C15) & _U64_MAX)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_U53 = 2.0**-53

# exact coordinate accumulator: fixed point in units of 2^-1074
_UNIT_BITS = 1074
_UNIT_DEN = 1 << _UNIT_BITS


def _float_to_units(v: float) -> int:
    n, d = v.as_integer_ratio()
    return n << (_UNIT_BITS - (d.bit_length() - 1))


def _units_to_float(n: int) -> float:
    # int/int true division rounds the exact ratio once, to nearest-even
    return n / _UNIT_DEN


def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _uniform_pair(cell_state):
    w1 = _mix64(cell_state + _GOLD)
    w2 = _mix64(cell_state + _GOLD2)
    u1 = ((w1 >> _S11).astype(np.float64) + 0.5) * _U53
    u2 = ((w2 >> _S11).astype(np.float64) + 0.5) * _U53
    return u1, u2


def _row_uniforms(seed: int, i: int, k: int):
    """Uniform pairs for cells (i, 1..k)."""
    with np.errstate(over="ignore"):
        row = _mix64(_mix64(np.uint64(seed)) ^ (np.uint64(i) * _GOLD))
        js = np.arange(1, k + 1, dtype=np.uint64)
        return _uniform_pair(_mix64(row ^ (js * _CELL)))


def _column_uniforms(seed: int, rows: np.ndarray, j: int):
    """Uniform pairs for cells (rows, j); `rows` is a uint64 array."""
    with np.errstate(over="ignore"):
        row = _mix64(_mix64(np.uint64(seed)) ^ (rows * _GOLD))
        return _uniform_pair(_mix64(row ^ (np.uint64(j) * _CELL)))


def projection_entry(seed: int, i: int, j: int, alpha: float) -> float:
    """The projection matrix entry r_ij ~ S(alpha, 1, 1).

    Deterministic: identical (seed, i, j, alpha) always reproduce the
    identical value bit-exactly, with no state.
    """
    if i < 1 or j < 1:
        raise UpdateError(f"indices are 1-based; got i={i}, j={j}")
    with np.errstate(over="ignore"):
        row = _mix64(_mix64(np.uint64(seed)) ^ (np.uint64(i) * _GOLD))
        u1, u2 = _uniform_pair(_mix64(row ^ (np.uint64(j) * _CELL)))
    return float(_stable_from_uniforms(alpha, u1, u2))


def _direct_coordinates(seed: int, alpha: float, k: int) -> np.ndarray:
    # Reserved row 0 of the keyed generator: i.i.d. S(alpha, 1, 1) draws used
    # by the Monte-Carlo harness; never collides with stream rows (i >= 1).
    u1, u2 = _row_uniforms(seed, 0, k)
    return _stable_from_uniforms(alpha, u1, u2)


@dataclass(frozen=True)
class StreamUpdate:
    """One turnstile increment: 1-based index and a signed amount."""

    index: int
    increment: float

    def __post_init__(self) -> None:
        if not isinstance(self.index, int) or self.index < 1:
            raise UpdateError(f"index must be a positive integer, got {self.index!r}")
        if not math.isfinite(self.increment):
            raise UpdateError(f"increment must be finite, got {self.increment!r}")


@dataclass(frozen=True)
class SketchConfig:
    """Immutable identity of a sketch; two sketches merge iff configs match.

    k >= 2 because the bias-corrected estimators divide by k and evaluate
    Gamma(1 - 1/k), which is undefined at k = 1.
    """

    alpha: float
    k: int
    seed: int
    domain_size: int

    def __post_init__(self) -> None:
        if not (isinstance(self.k, int) and self.k >= 2):
            raise ConfigError(f"k must be an integer >= 2, got {self.k!r}")
        alpha = float(self.alpha)
        if not (math.isfinite(alpha) and 0.0 < alpha < 2.0):
            raise ConfigError(f"alpha must lie in (0, 2), got {self.alpha!r}")
        if alpha == 1.0:
            raise ConfigError("alpha == 1 is excluded (the running sum is exact already)")
        if not (isinstance(self.seed, int) and 0 <= self.seed <= _U64_MAX):
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not (isinstance(self.domain_size, int) and self.domain_size >= 1):
            raise ConfigError(f"domain_size must be an integer >= 1, got {self.domain_size!r}")


class Sketch:
    """Projected vector x in R^k plus the exact running sum of increments.

    Single-writer: concurrent updates to one sketch are unsupported.  Shard
    instead: update independent sketches with identical configs and merge.
    """

    __slots__ = ("config", "_units", "_f1_units", "_x_cache")

    def __init__(self, config: SketchConfig):
        self.config = config
        self._units: list[int] = [0] * config.k
        self._f1_units: int = 0
        self._x_cache: np.ndarray | None = None

    @classmethod
    def from_state(cls, config: SketchConfig, x: Sequence[float], f1: float) -> "Sketch":
        """Build a sketch directly from a coordinate snapshot."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (config.k,):
            raise ConfigError(f"x must have shape ({config.k},), got {x.shape}")
        if not np.all(np.isfinite(x)) or not math.isfinite(f1):
            raise ConfigError("coordinates and f1 must be finite")
        sk = cls(config)
        sk._units = [_float_to_units(v) for v in x.tolist()]
        sk._f1_units = _float_to_units(float(f1))
        return sk

    @property
    def x(self) -> np.ndarray:
        """Rendered coordinates (read-only float64 view)."""
        if self._x_cache is None:
            arr = np.array([_units_to_float(n) for n in self._units], dtype=np.float64)
            arr.flags.writeable = False
            self._x_cache = arr
        return self._x_cache

    @property
    def f1(self) -> float:
        """Exact running sum of all applied increments."""
        return _units_to_float(self._f1_units)

    def update(self, u: StreamUpdate) -> None:
        """Apply one turnstile increment in Theta(k) time."""
        if u.index > self.config.domain_size:
            raise UpdateError(
                f"index {u.index} exceeds the declared domain size {self.config.domain_size}"
            )
        u1, u2 = _row_uniforms(self.config.seed, u.index, self.config.k)
        terms = _stable_from_uniforms(self.config.alpha, u1, u2) * u.increment
        units = self._units
        for j, t in enumerate(terms.tolist()):
            units[j] += _float_to_units(t)
        self._f1_units += _float_to_units(u.increment)
        self._x_cache = None

    def apply(self, updates: Iterable[StreamUpdate]) -> None:
        for u in updates:
            self.update(u)


def new_sketch(config: SketchConfig) -> Sketch:
    """A fresh sketch: all-zero coordinates, zero running sum."""
    return Sketch(config)


def from_vector(config: SketchConfig, a: Sequence[float]) -> Sketch:
    """Batch-sketch an explicit vector.

    Produces the same rendered coordinates as streaming one update per
    nonzero index (any order), because both paths sum the identical
    multiset of per-entry products exactly before rounding once.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.shape != (config.domain_size,):
        raise ConfigError(
            f"vector length {a.shape} does not match domain_size {config.domain_size}"
        )
    if not np.all(np.isfinite(a)):
        raise ConfigError("vector entries must be finite")
    nz = np.nonzero(a)[0]
    sk = Sketch(config)
    if nz.size == 0:
        return sk
    rows = (nz + 1).astype(np.uint64)
    vals = a[nz]
    for j in range(1, config.k + 1):
        u1, u2 = _column_uniforms(config.seed, rows, j)
        terms = _stable_from_uniforms(config.alpha, u1, u2) * vals
        sk._units[j - 1] = _float_to_units(math.fsum(terms.tolist()))
    sk._f1_units = sum(_float_to_units(v) for v in vals.tolist())
    return sk


def merge(a: Sketch, b: Sketch) -> Sketch:
    """Combine sketches of two stream shards; equals sketching their
    concatenation."""
    if a.config != b.config:
        raise MergeError(f"config mismatch: {a.config} vs {b.config}")
    out = Sketch(a.config)
    out._units = [ua + ub for ua, ub in zip(a._units, b._units)]
    out._f1_units = a._f1_units + b._f1_units
    return out


_HEADER = struct.Struct("<4sI")
_CONFIG = struct.Struct("<dQQQ")
_FIELD = struct.Struct("<d")


def serialize(sketch: Sketch) -> bytes:
    """Snapshot wire format (all little-endian):

    magic "CCSK" (4) | version u32 | alpha f64 | k u64 | seed u64 |
    domain_size u64 | f1 f64 | x[0..k) f64 each
    """
    cfg = sketch.config
    parts = [
        _HEADER.pack(MAGIC, FORMAT_VERSION),
        _CONFIG.pack(cfg.alpha, cfg.k, cfg.seed, cfg.domain_size),
        _FIELD.pack(sketch.f1),
        sketch.x.astype("<f8").tobytes(),
    ]
    return b"".join(parts)


def deserialize(data: bytes) -> Sketch:
    if len(data) < _HEADER.size + _CONFIG.size + _FIELD.size:
        raise DecodeError(f"payload too short ({len(data)} bytes)")
    magic, version = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise DecodeError(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise DecodeError(f"unsupported format version {version}")
    alpha, k, seed, domain_size = _CONFIG.unpack_from(data, _HEADER.size)
    if k > (len(data) - _HEADER.size - _CONFIG.size - _FIELD.size) // 8:
        raise DecodeError("payload truncated: fewer coordinates than k")
    expected = _HEADER.size + _CONFIG.size + _FIELD.size + 8 * k
    if len(data) != expected:
        raise DecodeError(f"payload length {len(data)} != expected {expected}")
    (f1,) = _FIELD.unpack_from(data, _HEADER.size + _CONFIG.size)
    x = np.frombuffer(data, dtype="<f8", count=k, offset=_HEADER.size + _CONFIG.size + _FIELD.size)
    try:
        config = SketchConfig(alpha=alpha, k=int(k), seed=int(seed), domain_size=int(domain_size))
        return Sketch.from_state(config, x.astype(np.float64), f1)
    except ConfigError as exc:
        raise DecodeError(f"payload carries an invalid configuration: {exc}") from exc
