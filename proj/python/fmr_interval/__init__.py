"""Guaranteed resonance-field enclosures by interval branch-and-bound."""

from ._core import (
    BranchJump,
    FieldDirection,
    Interval,
    ListOverflow,
    MaterialParams,
    OracleRoot,
    OrientationReport,
    ResonanceResult,
    ResonanceStatus,
    SolverConfig,
    SweepOverflow,
    SweepReport,
    SweepSpec,
    cos,
    hull,
    intersect,
    oracle_equilibrium,
    oracle_scan,
    parse_csv,
    preset,
    preset_ids,
    run_sweep,
    sin,
    solve_orientation,
    sqr,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
