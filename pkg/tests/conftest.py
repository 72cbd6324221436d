"""Shared fixtures: seed configurations and deterministic sample points.

The deep-chain configuration uses geometrically spaced spectral constants
and moderate amplitudes: the n-step transformation amplifies souls by
roughly (lambda_0 + lambda_j)/(lambda_j - lambda_0) per step, so clustered
constants make the 1e-10 absolute residual gates unreachable in float64
while a ratio-spaced set keeps every coefficient O(10^3) or below.
"""

from __future__ import annotations

import numpy as np
import pytest

from susygordon.darboux import SeedParams, generator_set
from susygordon.jets import DEFAULT_SPEC
from susygordon.superfield import SuperspacePoint


def deep_seeds() -> list[SeedParams]:
    lams = [0.12, 0.42, 1.5, 5.2]
    return [SeedParams(lam=l, c=5.0 * (1 + 0.05j * (-1) ** j),
                       b=0.03 * (1 + 0.3j) * (-1) ** j, a=f"a{j}")
            for j, l in enumerate(lams)]


def sample_grid(gens, count=20, seed=42, x_half_width=0.03, lam_range=(0.5, 2.0),
                spec=DEFAULT_SPEC):
    rng = np.random.default_rng(seed)
    return [SuperspacePoint(complex(rng.uniform(-x_half_width, x_half_width)),
                            complex(rng.uniform(-x_half_width, x_half_width)),
                            complex(rng.uniform(*lam_range)), spec=spec, gens=gens)
            for _ in range(count)]


@pytest.fixture(scope="session")
def deep():
    seeds = deep_seeds()
    return seeds, generator_set(seeds)


@pytest.fixture(scope="session")
def deep_points(deep):
    _, gens = deep
    return sample_grid(gens)
