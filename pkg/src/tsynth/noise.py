"""Noise synthesis from a fixed roster of 15 distributions in 5 categories.

The roster and each distribution's parameter priors are a versioned contract:
label encoding maps parameters affinely from these prior ranges, so reordering
or re-ranging anything here is a schema break.

Rendering runs the three-step pipeline: draw N i.i.d. samples with randomized
distribution parameters, optionally reflect about the normalized midline
("y-axis inversion"), then smooth with a random-width boxcar. Raw draws are
winsorized at the 0.1%/99.9% batch quantiles so a single heavy-tail outlier
(Cauchy, Pareto) cannot crush the rest of the window to a near-constant.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from numpy.random import Generator

from .core import minmax01

CATEGORIES = ("CCD", "CDD", "HTD", "DRND", "SPD")


@dataclass(frozen=True)
class Distribution:
    """Roster entry: name, category, and parameter priors (name, lo, hi)."""

    name: str
    category: str
    params: tuple[tuple[str, float, float], ...]


# Category key: CCD common continuous, CDD common discrete, HTD heavy-tailed,
# DRND normal-related, SPD shape-parameter. Index order is frozen (labels
# encode the index); params are sampled uniformly from their (lo, hi) prior.
DISTRIBUTIONS: tuple[Distribution, ...] = (
    Distribution("uniform", "CCD", ()),
    Distribution("normal", "CCD", (("sigma", 0.5, 2.0),)),
    Distribution("exponential", "CCD", (("rate", 0.5, 20.0),)),
    Distribution("bernoulli", "CDD", (("p", 0.05, 0.95),)),
    Distribution("geometric", "CDD", (("p", 0.05, 0.95),)),
    Distribution("poisson", "CDD", (("rate", 0.5, 20.0),)),
    Distribution("laplace", "HTD", (("scale", 0.5, 2.0),)),
    Distribution("cauchy", "HTD", (("scale", 0.5, 2.0),)),
    Distribution("pareto", "HTD", (("shape", 0.5, 5.0), ("scale", 0.5, 2.0))),
    Distribution("student_t", "DRND", (("dof", 2.5, 30.0),)),
    Distribution("chi_squared", "DRND", (("dof", 1.0, 10.0),)),
    Distribution("lognormal", "DRND", (("sigma", 0.5, 2.0),)),
    Distribution("beta", "SPD", (("alpha", 0.5, 5.0), ("beta", 0.5, 5.0))),
    Distribution("gamma", "SPD", (("shape", 0.5, 5.0), ("scale", 0.5, 2.0))),
    Distribution("weibull", "SPD", (("shape", 0.5, 5.0), ("scale", 0.5, 2.0))),
)

CATEGORY_INDEX = {c: i for i, c in enumerate(CATEGORIES)}
DISTRIBUTION_INDEX = {d.name: i for i, d in enumerate(DISTRIBUTIONS)}
MAX_DIST_PARAMS = 3


@dataclass(frozen=True)
class NoiseSpec:
    """One noise draw: distribution, its sampled parameters, inversion, kernel."""

    distribution: str
    dist_params: tuple[float, ...]
    invert: bool
    smooth_kernel: int

    @property
    def category(self) -> str:
        return DISTRIBUTIONS[DISTRIBUTION_INDEX[self.distribution]].category


def noise_kernel_cap(n: int, max_kernel_frac: float = 0.05) -> int:
    """Largest smoothing kernel allowed for noise; kept <= frac*N (floor), >= 1."""
    return max(1, math.floor(max_kernel_frac * n))


def sample_dist_params(dist: Distribution, rng: Generator) -> tuple[float, ...]:
    """Draw each parameter uniformly from its prior range."""
    return tuple(float(rng.uniform(lo, hi)) for _, lo, hi in dist.params)


def sample_noise_spec(
    n: int, rng: Generator, max_kernel_frac: float = 0.05
) -> NoiseSpec:
    """Draw a noise spec: uniform distribution choice, priors, inversion, kernel."""
    dist = DISTRIBUTIONS[int(rng.integers(0, len(DISTRIBUTIONS)))]
    params = sample_dist_params(dist, rng)
    invert = bool(rng.integers(0, 2))
    kernel = int(rng.integers(1, noise_kernel_cap(n, max_kernel_frac) + 1))
    return NoiseSpec(
        distribution=dist.name, dist_params=params, invert=invert, smooth_kernel=kernel
    )


def draw_raw(spec: NoiseSpec, n: int, rng: Generator) -> np.ndarray:
    """Draw n i.i.d. samples from the spec's distribution, native units."""
    name = spec.distribution
    p = spec.dist_params
    if name == "uniform":
        return rng.uniform(0.0, 1.0, n)
    if name == "normal":
        return rng.normal(0.0, p[0], n)
    if name == "exponential":
        return rng.exponential(1.0 / p[0], n)
    if name == "bernoulli":
        return rng.binomial(1, p[0], n).astype(float)
    if name == "geometric":
        return rng.geometric(p[0], n).astype(float)
    if name == "poisson":
        return rng.poisson(p[0], n).astype(float)
    if name == "laplace":
        return rng.laplace(0.0, p[0], n)
    if name == "cauchy":
        return p[0] * rng.standard_cauchy(n)
    if name == "pareto":
        # numpy's pareto() is the Lomax form; 1 + Lomax is Pareto-I at x_m = 1
        return p[1] * (1.0 + rng.pareto(p[0], n))
    if name == "student_t":
        return rng.standard_t(p[0], n)
    if name == "chi_squared":
        return rng.chisquare(p[0], n)
    if name == "lognormal":
        return rng.lognormal(0.0, p[0], n)
    if name == "beta":
        return rng.beta(p[0], p[1], n)
    if name == "gamma":
        return rng.gamma(p[0], p[1], n)
    if name == "weibull":
        return p[1] * rng.weibull(p[0], n)
    raise KeyError(f"unknown distribution {name!r}")


def winsorize(x: np.ndarray, lo_q: float = 0.001, hi_q: float = 0.999) -> np.ndarray:
    """Clip to the batch's [lo_q, hi_q] empirical quantiles."""
    lo, hi = np.quantile(x, [lo_q, hi_q])
    return np.clip(x, lo, hi)


def boxcar_smooth(x: np.ndarray, width: int) -> np.ndarray:
    """Uniform moving average of the given width with edge-replication padding."""
    if width <= 1:
        return np.asarray(x, dtype=float).copy()
    left = (width - 1) // 2
    right = width // 2
    padded = np.pad(np.asarray(x, dtype=float), (left, right), mode="edge")
    return np.convolve(padded, np.full(width, 1.0 / width), mode="valid")


def render_noise(spec: NoiseSpec, n: int, rng: Generator) -> np.ndarray:
    """Run the full pipeline; output lies in [0, 1] and is finite.

    Steps: raw draw -> winsorize -> min-max to [0,1] -> optional reflection
    y <- 1-y -> boxcar smooth -> min-max re-normalize. A degenerate all-equal
    draw collapses to all zeros by the constant rule.
    """
    raw = draw_raw(spec, n, rng)
    y = minmax01(winsorize(raw))
    if spec.invert:
        y = 1.0 - y
    y = boxcar_smooth(y, spec.smooth_kernel)
    return minmax01(y)
