"""VBR traces, cumulative buffer curves and the per-slot rate window."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, NamedTuple, Union

import numpy as np


class TraceError(ValueError):
    """A trace file that cannot be parsed or violates the trace invariants."""


@dataclass(frozen=True, eq=False)
class VideoTrace:
    """Frame sizes in bits, one per frame interval, plus the frame rate."""

    frame_sizes: np.ndarray
    frame_rate: float
    name: str = ""

    def __post_init__(self):
        sizes = np.asarray(self.frame_sizes, dtype=np.int64)
        if sizes.ndim != 1 or sizes.size == 0:
            raise TraceError("empty trace")
        if (sizes < 0).any():
            raise TraceError("frame sizes must be nonnegative")
        if not (math.isfinite(self.frame_rate) and self.frame_rate > 0):
            raise TraceError(f"frame rate must be positive, got {self.frame_rate!r}")
        sizes.setflags(write=False)
        object.__setattr__(self, "frame_sizes", sizes)

    @property
    def L(self) -> int:
        return int(self.frame_sizes.size)

    @property
    def tau(self) -> float:
        """Slot duration in seconds (one frame interval)."""
        return 1.0 / self.frame_rate

    @property
    def total_bits(self) -> int:
        return int(self.frame_sizes.sum())

    @property
    def max_frame(self) -> int:
        return int(self.frame_sizes.max())


def _lines(source) -> Iterable[str]:
    if isinstance(source, (bytes, bytearray)):
        source = source.decode("utf-8")
    if isinstance(source, str):
        return io.StringIO(source)
    return source


def load_trace(source: Union[str, bytes, IO], name: str = "") -> VideoTrace:
    """Parse a trace: first data line is the frame rate, then one frame size per line.

    Blank lines and lines starting with ``#`` are skipped. CRLF endings are fine.
    """
    fps = None
    sizes = []
    for lineno, raw in enumerate(_lines(source), start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if fps is None:
            try:
                fps = float(line)
            except ValueError:
                raise TraceError(f"line {lineno}: frame rate {line!r} is not a number") from None
            if not (math.isfinite(fps) and fps > 0):
                raise TraceError(f"line {lineno}: frame rate must be positive, got {line!r}")
            continue
        try:
            size = int(line)
        except ValueError:
            raise TraceError(f"line {lineno}: frame size {line!r} is not an integer") from None
        if size < 0:
            raise TraceError(f"line {lineno}: negative frame size {size}")
        sizes.append(size)
    if fps is None or not sizes:
        raise TraceError("empty trace")
    if not any(sizes):
        raise TraceError("trace has no nonzero frame")
    return VideoTrace(np.array(sizes, dtype=np.int64), fps, name)


def read_trace(path: Union[str, Path]) -> VideoTrace:
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        try:
            return load_trace(fh, name=path.stem)
        except TraceError as exc:
            raise TraceError(f"{path}: {exc}") from None


def write_trace(trace: VideoTrace, path: Union[str, Path], comment: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        fh.write(f"{trace.frame_rate!r}\n")
        fh.write("\n".join(str(int(s)) for s in trace.frame_sizes))
        fh.write("\n")


def synthetic_trace(n_frames: int, mean_bits: float, seed: int, frame_rate: float = 30.0,
                    tail_index: float = 2.5, gop: int = 12, i_frame_gain: float = 3.0,
                    name: str = "synthetic") -> VideoTrace:
    """Heavy-tailed VBR trace: Pareto frame sizes with a periodic I-frame boost.

    ``tail_index`` is the Pareto shape (finite mean needs > 1). Sizes are scaled
    so the long-run mean is ``mean_bits``.
    """
    if tail_index <= 1:
        raise ValueError("tail_index must exceed 1 for a finite mean")
    rng = np.random.default_rng(seed)
    # numpy's pareto is Lomax; +1 gives classic Pareto with x_m = 1
    base = rng.pareto(tail_index, n_frames) + 1.0
    weights = np.ones(n_frames)
    weights[::gop] = i_frame_gain
    raw = base * weights
    expected = tail_index / (tail_index - 1.0) * weights.mean()
    sizes = np.maximum(np.rint(raw * (mean_bits / expected)), 1).astype(np.int64)
    return VideoTrace(sizes, frame_rate, name)


@dataclass(eq=False)
class BufferCurves:
    """Consumption (U), overflow (O) and delivered (A) curves for one receiver.

    Arrays are indexed by slot ``0..horizon``. ``A[:last + 1]`` is filled in;
    ``last`` is the most recent slot that :func:`advance` has processed.
    """

    U: np.ndarray
    O: np.ndarray
    b: int
    A: np.ndarray = field(default=None)
    last: int = 0

    def __post_init__(self):
        if self.A is None:
            self.A = np.zeros(len(self.U), dtype=np.float64)

    @property
    def horizon(self) -> int:
        return len(self.U) - 1


def build_curves(trace: VideoTrace, buffer_bits: int, prefetch: int = 0) -> BufferCurves:
    """Cumulative curves for one trace and playout buffer of ``buffer_bits``.

    With ``prefetch`` > 0 playback starts that many slots late, so the horizon
    grows to ``L + prefetch`` and the first ``prefetch`` slots consume nothing.
    """
    if buffer_bits <= 0:
        raise ValueError("buffer_bits must be positive")
    if prefetch < 0:
        raise ValueError("prefetch must be nonnegative")
    U = np.zeros(trace.L + prefetch + 1, dtype=np.int64)
    U[prefetch + 1:] = np.cumsum(trace.frame_sizes)
    total = int(U[-1])
    # O(t) = min(U(t-1) + b, U(L)), with U(-1) = 0
    prev = np.concatenate(([0], U[:-1]))
    O = np.minimum(prev + int(buffer_bits), total)
    return BufferCurves(U=U, O=O, b=int(buffer_bits))


class RateWindow(NamedTuple):
    alpha: float
    beta: float


def rate_window(curves: BufferCurves, t: int, tau: float) -> RateWindow:
    """Feasible rate range (bits/s) for slot ``t`` given ``A(t-1)``."""
    if not 1 <= t <= curves.horizon:
        raise IndexError(f"slot {t} outside 1..{curves.horizon}")
    if t - 1 > curves.last:
        raise IndexError(f"A({t - 1}) not yet known; last advanced slot is {curves.last}")
    prev = float(curves.A[t - 1])
    alpha = max(0.0, (float(curves.U[t]) - prev) / tau)
    beta = (float(curves.O[t]) - prev) / tau
    return RateWindow(alpha, beta)


class SlotBufferOutcome(NamedTuple):
    delivered: float
    underflow: bool
    clipped: bool
    clipped_bits: float


SNAP_TOL = 1e-9


def advance(curves: BufferCurves, t: int, rate: float, tau: float) -> SlotBufferOutcome:
    """Deliver ``rate * tau`` bits in slot ``t`` and update ``A(t)``.

    Bits beyond the overflow curve are dropped and flagged. Deliveries within a
    relative 1e-9 of either curve land on it exactly.
    """
    if rate < 0:
        raise ValueError("rate must be nonnegative")
    if t != curves.last + 1:
        raise IndexError(f"slot {t} advanced out of order (last was {curves.last})")
    if t > curves.horizon:
        raise IndexError(f"slot {t} beyond horizon {curves.horizon}")
    prev = float(curves.A[t - 1])
    room = float(curves.O[t]) - prev
    need = float(curves.U[t]) - prev
    requested = rate * tau
    delivered = requested
    tol = SNAP_TOL * max(room, 0.0)
    clipped = False
    if delivered > room:
        clipped = delivered - room > tol
        delivered = room
    elif room - delivered <= tol:
        delivered = room
    if need > 0.0 and abs(delivered - need) <= tol:
        delivered = need
    A_t = prev + delivered
    curves.A[t] = A_t
    curves.last = t
    return SlotBufferOutcome(delivered, A_t < float(curves.U[t]),
                             clipped, requested - delivered if clipped else 0.0)


def buffer_bits_for(trace: VideoTrace, factor: float) -> int:
    """Playout buffer sized as ``factor`` times the largest frame (at least one bit)."""
    return max(1, int(math.ceil(factor * trace.max_frame)))
