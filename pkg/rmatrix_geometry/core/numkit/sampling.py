from __future__ import annotations

import math
import zlib
from typing import Any

import numpy as np

from rmatrix_geometry.core.numkit.precision import PrecComplex, context_for


def derive_rng(seed: int, *keys: str | int) -> np.random.Generator:
    """Independent generator for (seed, keys); stable across runs and platforms."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for k in keys:
        entropy.append(
            zlib.crc32(k.encode("utf-8")) if isinstance(k, str) else int(k) & 0xFFFFFFFFFFFFFFFF
        )
    return np.random.default_rng(np.random.SeedSequence(entropy))


def random_complex(rng: np.random.Generator, bits: int = 53) -> PrecComplex:
    """Magnitude log-uniform in [1/2, 2], argument uniform."""
    ctx = context_for(bits)
    r = math.exp(rng.uniform(math.log(0.5), math.log(2.0)))
    theta = rng.uniform(0.0, 2.0 * math.pi)
    return ctx.mpc(r * math.cos(theta), r * math.sin(theta))


def random_normal_complex(rng: np.random.Generator, size: Any) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)
