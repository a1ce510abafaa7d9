#!/usr/bin/env python3
"""Sample rhythm parameters and render the superposed-sine component."""

import numpy as np

from tsynth.core import TAG_RHYTHM, component_rng
from tsynth.rhythm import frequency_bounds, render_rhythm, sample_rhythm_params

BARS = " .:-=+*#%@"


def spark(y, width=72):
    idx = np.linspace(0, y.size - 1, width).astype(int)
    lo, hi = y.min(), y.max()
    span = (hi - lo) or 1.0
    return "".join(BARS[int((v - lo) / span * (len(BARS) - 1))] for v in y[idx])


def main():
    for n in (64, 256, 1024):
        f_min, f_max = frequency_bounds(n)
        print(f"N={n:5d}  admissible frequency band [{f_min:.6f}, {f_max:.3f}]")

    n = 256
    for i in range(3):
        rng = component_rng(seed=2024, stream_id=i, tag=TAG_RHYTHM)
        params = sample_rhythm_params(n, rng)
        y = render_rhythm(params, n)
        print(f"\nsample {i}: {params.sine_count} sines")
        print(f"  freqs  {np.array2string(params.frequencies, precision=4)}")
        print(f"  amps   {np.array2string(params.amplitudes, precision=3)}")
        print(f"  range  [{y.min():.3f}, {y.max():.3f}]")
        print(f"  {spark(y)}")

    # identical seed and stream id give the identical waveform
    a = render_rhythm(sample_rhythm_params(n, component_rng(2024, 0, TAG_RHYTHM)), n)
    b = render_rhythm(sample_rhythm_params(n, component_rng(2024, 0, TAG_RHYTHM)), n)
    print(f"\nreplay identical: {np.array_equal(a, b)}")


if __name__ == "__main__":
    main()
