"""Physical-layer model: waveguide-fed antenna channels, nonlinear energy
harvesting, and TDMA/NOMA uplink rate expressions.

Positions are in meters, powers in watts, rates in bits (period-normalized).
Antennas sit on the waveguide line y = 0 at height d; devices lie in the
z = 0 plane.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SPEED_OF_LIGHT = 299792458.0


class DegenerateGeometryError(ValueError):
    """A device coincides with an antenna position (zero link distance)."""


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * np.log10(watts) + 30.0


@dataclass(frozen=True)
class SystemConfig:
    """Physical and protocol constants shared by every scenario."""

    carrier_frequency_hz: float = 28e9
    effective_index: float = 1.4          # refractive index of the waveguide
    delta: float = 0.6                    # power distribution factor in [0, 1]
    mu_db_per_m: float = 0.2              # waveguide propagation loss
    hap_power_w: float = 10.0             # downlink transmit power P0
    noise_power_w: float = 1e-15          # per-device receiver noise
    min_spacing_m: float | None = None    # antenna spacing floor; default lambda/2
    waveguide_span_m: float = 10.0
    waveguide_height_m: float = 3.0
    feed_x_m: float = 0.0
    period_s: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must be in [0, 1], got {self.delta}")
        for name in ("carrier_frequency_hz", "effective_index", "hap_power_w",
                     "noise_power_w", "waveguide_span_m", "waveguide_height_m",
                     "period_s"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.mu_db_per_m < 0:
            raise ValueError("mu_db_per_m must be nonnegative")
        if self.min_spacing_m is None:
            object.__setattr__(self, "min_spacing_m", self.wavelength_m / 2.0)
        if self.min_spacing_m <= 0:
            raise ValueError("min_spacing_m must be strictly positive")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency_hz

    @property
    def guided_wavelength_m(self) -> float:
        return self.wavelength_m / self.effective_index

    @property
    def eta_sqrt(self) -> float:
        # free-space amplitude constant c / (4 pi f_c)
        return SPEED_OF_LIGHT / (4.0 * np.pi * self.carrier_frequency_hz)


@dataclass(frozen=True)
class EhParams:
    """Nonlinear energy-harvesting sigmoid parameters (a, b, saturation z)."""

    a: float = 150.0
    b: float = 0.014
    z: float = 0.024

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0 or self.z <= 0:
            raise ValueError("EH parameters a, b, z must be strictly positive")


@dataclass(frozen=True)
class Scenario:
    """One problem instance: antenna positions, device positions, EH hardware."""

    pa_positions_m: tuple[float, ...]
    device_positions_m: tuple[tuple[float, float], ...]
    eh: tuple[EhParams, ...]
    circuit_power_w: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "pa_positions_m", tuple(float(x) for x in self.pa_positions_m))
        object.__setattr__(self, "device_positions_m",
                           tuple((float(x), float(y)) for x, y in self.device_positions_m))
        eh = self.eh if isinstance(self.eh, (tuple, list)) else (self.eh,) * len(self.device_positions_m)
        if len(eh) == 1 and len(self.device_positions_m) > 1:
            eh = tuple(eh) * len(self.device_positions_m)
        object.__setattr__(self, "eh", tuple(eh))
        pc = self.circuit_power_w
        if np.isscalar(pc):
            pc = (float(pc),) * len(self.device_positions_m)
        object.__setattr__(self, "circuit_power_w", tuple(float(p) for p in pc))
        if self.n_antennas < 1 or self.k_devices < 1:
            raise ValueError("need at least one antenna and one device")
        if len(self.eh) != self.k_devices or len(self.circuit_power_w) != self.k_devices:
            raise ValueError("eh and circuit_power_w must have one entry per device")
        if any(p < 0 for p in self.circuit_power_w):
            raise ValueError("circuit power must be nonnegative")

    @property
    def n_antennas(self) -> int:
        return len(self.pa_positions_m)

    @property
    def k_devices(self) -> int:
        return len(self.device_positions_m)

    def validate_geometry(self, config: SystemConfig):
        """Check spacing and span constraints against a config."""
        x = np.asarray(self.pa_positions_m)
        if np.any(x < -1e-12) or np.any(x > config.waveguide_span_m + 1e-12):
            raise ValueError("antenna positions must lie in [0, waveguide_span_m]")
        if self.n_antennas > 1 and np.any(np.diff(x) < config.min_spacing_m - 1e-12):
            raise ValueError("antenna positions violate the minimum spacing")


@dataclass(frozen=True)
class ChannelState:
    """Per-(antenna, device) channels plus per-device aggregates."""

    per_pa: np.ndarray    # (N, K) complex
    aggregate: np.ndarray  # (K,) complex
    gain: np.ndarray       # (K,) real, |aggregate|^2


def beta_fractions(n_antennas: int, delta: float) -> np.ndarray:
    """Per-antenna radiated power ratios beta_n = delta^2 (1 - delta^2)^(n-1)."""
    n = np.arange(n_antennas)
    return delta ** 2 * (1.0 - delta ** 2) ** n


def per_pa_channels(pa_x: np.ndarray, devices_xy: np.ndarray,
                    config: SystemConfig) -> np.ndarray:
    """Complex channels h_{n,k} for antenna x-positions (..., N) and K devices.

    Broadcasts over leading axes of ``pa_x``; returns shape (..., N, K).
    """
    pa_x = np.asarray(pa_x, dtype=float)
    devices_xy = np.atleast_2d(np.asarray(devices_xy, dtype=float))
    d = config.waveguide_height_m
    dx = pa_x[..., :, None] - devices_xy[:, 0]            # (..., N, K)
    dist = np.sqrt(dx ** 2 + devices_xy[:, 1] ** 2 + d ** 2)
    if np.any(dist == 0.0):
        raise DegenerateGeometryError("device coincides with an antenna position")
    guided = np.abs(pa_x - config.feed_x_m)               # (..., N)
    beta = beta_fractions(pa_x.shape[-1], config.delta)
    loss = 10.0 ** (-config.mu_db_per_m * guided / 10.0)
    amp = (config.eta_sqrt / dist) * np.sqrt(beta)[..., :, None] \
        * np.sqrt(loss)[..., :, None]
    phase = (-2.0 * np.pi / config.wavelength_m) * dist \
        + (-2.0 * np.pi / config.guided_wavelength_m) * guided[..., :, None]
    return amp * np.exp(1j * phase)


def pa_channel(n: int, scenario: Scenario, config: SystemConfig,
               device_index: int) -> complex:
    """Channel between the n-th antenna and one device (both 1-based)."""
    if not 1 <= n <= scenario.n_antennas:
        raise IndexError(f"antenna index {n} out of range")
    if not 1 <= device_index <= scenario.k_devices:
        raise IndexError(f"device index {device_index} out of range")
    h = per_pa_channels(np.asarray(scenario.pa_positions_m),
                        np.asarray(scenario.device_positions_m), config)
    return complex(h[n - 1, device_index - 1])


def channel_state(scenario: Scenario, config: SystemConfig) -> ChannelState:
    """All per-antenna channels, their coherent sums, and aggregate gains."""
    scenario.validate_geometry(config)
    per_pa = per_pa_channels(np.asarray(scenario.pa_positions_m),
                             np.asarray(scenario.device_positions_m), config)
    aggregate = per_pa.sum(axis=0)
    return ChannelState(per_pa=per_pa, aggregate=aggregate,
                        gain=np.abs(aggregate) ** 2)


def gains_for_positions(pa_x: np.ndarray, devices_xy: np.ndarray,
                        config: SystemConfig) -> np.ndarray:
    """Aggregate channel gains |h_k|^2 for a batch of antenna placements.

    ``pa_x`` has shape (..., N); the result has shape (..., K).
    """
    h = per_pa_channels(pa_x, devices_xy, config).sum(axis=-2)
    return np.abs(h) ** 2


def harvested_power(received_power_w, eh: EhParams):
    """Nonlinear EH output for a given received RF power (scalar or array).

    Sigmoidal with exact zero at zero input and saturation at ``eh.z``.
    """
    p = np.asarray(received_power_w, dtype=float)
    if np.any(p < 0):
        raise ValueError("received power must be nonnegative")
    omega = 1.0 / (1.0 + np.exp(eh.a * eh.b))
    # normalized sigmoid so that p == 0 reproduces omega bitwise and phi(0) == 0
    sig = 1.0 / (1.0 + np.exp(-eh.a * (p - eh.b)))
    out = eh.z * (sig - omega) / (1.0 - omega)
    return float(out) if np.isscalar(received_power_w) else out


def harvested_powers(gains: np.ndarray, scenario: Scenario,
                     config: SystemConfig) -> np.ndarray:
    """Per-device EH output when the HAP radiates its full power budget."""
    return np.array([harvested_power(config.hap_power_w * g, eh)
                     for g, eh in zip(gains, scenario.eh)])


def tdma_rates(alloc, gains: np.ndarray, noise_power_w: float) -> np.ndarray:
    """Per-device rates t_k * log2(1 + p_k |h_k|^2 / sigma^2)."""
    t = np.asarray(alloc.t, dtype=float)
    p = np.asarray(alloc.p, dtype=float)
    rates = np.zeros_like(t)
    on = t > 0
    rates[on] = t[on] * np.log2(1.0 + p[on] * np.asarray(gains)[on] / noise_power_w)
    return rates


def noma_rates(alloc, gains: np.ndarray, noise_power_w: float,
               decode_order: Sequence[int]) -> np.ndarray:
    """Per-device SIC rates; interference comes from devices decoded later.

    ``decode_order`` is a 0-based permutation of the device indices, first
    decoded first.
    """
    gains = np.asarray(gains, dtype=float)
    p = np.asarray(alloc.p, dtype=float)
    order = list(decode_order)
    if sorted(order) != list(range(len(gains))):
        raise ValueError("decode_order must be a permutation of the devices")
    received = p * gains
    rates = np.zeros_like(gains)
    if alloc.t1 <= 0:
        return rates
    for pos, k in enumerate(order):
        interference = received[order[pos + 1:]].sum()
        rates[k] = alloc.t1 * np.log2(1.0 + received[k] / (interference + noise_power_w))
    return rates


def noma_sum_rate(alloc, gains: np.ndarray, noise_power_w: float) -> float:
    """Closed-form NOMA sum rate; independent of the SIC decoding order."""
    if alloc.t1 <= 0:
        return 0.0
    total = float(np.dot(np.asarray(alloc.p, dtype=float), np.asarray(gains, dtype=float)))
    return alloc.t1 * np.log2(1.0 + total / noise_power_w)


def descending_gain_order(gains: np.ndarray) -> list[int]:
    """Default SIC order: strongest aggregate gain decoded first."""
    return list(np.argsort(-np.asarray(gains), kind="stable"))
