"""Multi-sine rhythm synthesis: random superpositions of sine waves.

Frequencies are confined to the band [1/N, 1/(2t)] so every component
completes at least one cycle inside the window while staying below the
Nyquist limit; the superposition is min-max normalized onto [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np
from numpy.random import Generator

from .core import minmax01
from .errors import InvalidWindow

TWO_PI = 2.0 * np.pi


def frequency_bounds(window_len: int, sample_period: float = 1.0) -> tuple[float, float]:
    """Admissible frequency band (f_min, f_max) = (1/N, 1/(2t)) in cycles/sample."""
    if sample_period <= 0:
        raise InvalidWindow("sample period must be positive")
    f_min = 1.0 / window_len
    f_max = 1.0 / (2.0 * sample_period)
    if f_min >= f_max:
        raise InvalidWindow(
            f"window of {window_len} samples leaves no usable band (f_min >= f_max)"
        )
    return f_min, f_max


@dataclass(frozen=True)
class RhythmParams:
    """One rhythm draw: k sines with per-sine frequency, amplitude, phase."""

    frequencies: np.ndarray  # cycles per sample, inside [f_min, f_max]
    amplitudes: np.ndarray   # in [0, 1]
    phases: np.ndarray       # in [0, 2*pi)

    @property
    def sine_count(self) -> int:
        return len(self.frequencies)


def sample_rhythm_params(
    n: int, rng: Generator, k_range: tuple[int, int] = (3, 10)
) -> RhythmParams:
    """Draw a rhythm spec: uniform sine count, frequencies, amplitudes, phases."""
    k_min, k_max = k_range
    if not 1 <= k_min <= k_max <= 32:
        raise InvalidWindow("sine-count range must lie within [1, 32]")
    f_min, f_max = frequency_bounds(n)
    k = int(rng.integers(k_min, k_max + 1))
    freqs = rng.uniform(f_min, f_max, size=k)
    amps = rng.uniform(0.0, 1.0, size=k)
    phases = rng.uniform(0.0, TWO_PI, size=k)
    # canonical slot order: ascending frequency, triples kept paired. The
    # rendered sum is unchanged; label slots become identifiable functions
    # of the signal (unordered slots are exchangeable, so nothing could
    # learn them).
    order = np.argsort(freqs, kind="stable")
    return RhythmParams(
        frequencies=freqs[order], amplitudes=amps[order], phases=phases[order]
    )


def superpose_sines(
    freqs: np.ndarray, amps: np.ndarray, phases: np.ndarray, n: int
) -> np.ndarray:
    """Evaluate sum_i a_i * sin(2*pi*f_i*x + phi_i) on x = 0..n-1."""
    x = np.arange(n)
    args = TWO_PI * np.multiply.outer(np.asarray(freqs), x) + np.asarray(phases)[:, None]
    return (np.asarray(amps)[:, None] * np.sin(args)).sum(axis=0)


def render_rhythm(params: RhythmParams, n: int) -> np.ndarray:
    """Render the superposition and min-max normalize it onto [0, 1]."""
    raw = superpose_sines(params.frequencies, params.amplitudes, params.phases, n)
    return minmax01(raw)
