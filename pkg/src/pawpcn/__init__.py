"""Pinching-antenna-aided wireless powered communication network simulator.

Computes waveguide-fed near-field channels, nonlinear harvested energy, and
TDMA/NOMA sum rates, and maximizes the sum rate by alternating convex
resource allocation with antenna-placement search.
"""

__version__ = "0.1.0"

from .allocator import (BracketingError, InfeasibleAllocationError,
                        NomaAllocation, TdmaAllocation, solve_noma,
                        solve_tdma, tdma_equal_snr_closed_form)
from .model import (ChannelState, EhParams, Scenario, SystemConfig,
                    channel_state, dbm_to_watts, gains_for_positions,
                    harvested_power, harvested_powers, noma_rates,
                    noma_sum_rate, pa_channel, tdma_rates)
from .orchestrator import (AoReport, SweepSpec, ao_solve,
                           baseline_fixed_antenna, generate_scenario,
                           run_sweep)
from .placement import (EwConfig, InfeasibleGeometryError, PlacementProblem,
                        PlacementResult, SpdeConfig, ew_optimize, repair,
                        spde_optimize, uniform_spread)

__all__ = [name for name in dir() if not name.startswith("_")]
