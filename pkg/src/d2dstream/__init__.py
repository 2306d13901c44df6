"""Power control and mode selection for streaming stored VBR video to one
cellular user and one D2D pair over Rayleigh block fading."""
from ._backend import COMPILED
from .channel import ChannelState, FadingConfig, sample_block, sample_slot
from .engine import Scenario, SimulationResult, SlotRecord, buffer_utilization, run
from .optimizer import (
    BoundaryCase,
    Mode,
    PowerDecision,
    RateWindowPair,
    select_mode,
    solve_cellular,
    solve_dedicated,
    solve_reuse,
    solve_reuse_boundary,
    solve_reuse_interior,
)
from .rates import PowerVector, RadioParams, rates_cellular, rates_dedicated, rates_reuse
from .trace import (
    BufferCurves,
    VideoTrace,
    advance,
    build_curves,
    load_trace,
    rate_window,
    read_trace,
    synthetic_trace,
)

__version__ = "0.1.0"
