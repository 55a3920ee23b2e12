"""Reproducible Rayleigh fading samples.

Randomness is addressed rather than consumed: every quantity of a trial
block (``g0``, ``g1``, ``g2``, ``h2``, ``h12``, each candidate phase set)
comes from its own Philox stream keyed by ``(seed, stream_id, substream)``.
Results therefore do not depend on which other quantities were drawn, on
evaluation order, or on how blocks are spread over workers.

Fading entries are unit-variance CN(0, 1); path loss is applied by the
caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

# substream ids inside one stream
SUB_G0 = 0
SUB_G1 = 1
SUB_G2 = 2
SUB_H2 = 3
SUB_H12 = 4
SUB_PHASE = 16  # candidate k uses SUB_PHASE + k

_HALF_SQRT = np.sqrt(0.5)

# trials per stream; trial t lives in stream t // BLOCK_SIZE
BLOCK_SIZE = 8192


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream selected by ``(seed, stream_id)``."""

    seed: int
    stream_id: int = 0

    def generator(self, substream: int = 0) -> np.random.Generator:
        seq = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id), int(substream)))
        return np.random.Generator(np.random.Philox(seq))


def as_generator(rng, substream: int = 0) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator(substream)
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


def sample_cn01(rng, size=None):
    """Draw CN(0, 1) samples: independent N(0, 1/2) real and imaginary parts."""
    gen = as_generator(rng)
    shape = () if size is None else tuple(np.atleast_1d(size))
    z = gen.standard_normal(shape + (2,)).view(np.complex128)[..., 0] * _HALF_SQRT
    return complex(z) if size is None else z


@dataclass(frozen=True)
class ChannelRealization:
    """Fading of one trial, or of a batch when arrays carry a leading axis."""

    g0: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    h2: complex | np.ndarray
    h12: complex | np.ndarray

    @property
    def n_elements(self) -> int:
        return self.g0.shape[-1]


class ChannelSampler:
    """Lazy per-quantity draws for a block of ``size`` trials.

    Each attribute is generated on first access from its own substream, so a
    scheme that never looks at ``g2`` pays nothing for it and still sees the
    same ``g0``/``g1`` as one that does.
    """

    def __init__(self, rng: RngStream, n_elements: int, size: int):
        self.rng = rng
        self.n_elements = int(n_elements)
        self.size = int(size)
        # scratch space for per-block results shared by several evaluations
        self.cache: dict = {}

    def _vector(self, sub):
        return sample_cn01(self.rng.generator(sub), (self.size, self.n_elements))

    def _scalar(self, sub):
        return sample_cn01(self.rng.generator(sub), (self.size,))

    @cached_property
    def g0(self):
        return self._vector(SUB_G0)

    @cached_property
    def g1(self):
        return self._vector(SUB_G1)

    @cached_property
    def g2(self):
        return self._vector(SUB_G2)

    @cached_property
    def h2(self):
        return self._scalar(SUB_H2)

    @cached_property
    def h12(self):
        return self._scalar(SUB_H12)

    def phase_generator(self, candidate: int) -> np.random.Generator:
        return self.rng.generator(SUB_PHASE + int(candidate))

    def realization(self) -> ChannelRealization:
        return ChannelRealization(g0=self.g0, g1=self.g1, g2=self.g2, h2=self.h2, h12=self.h12)


def block_sizes(trials: int) -> list[int]:
    """Sizes of the consecutive trial blocks covering ``trials`` trials."""
    full, rest = divmod(int(trials), BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def draw_realization(cfg, rng: RngStream, size: int | None = None) -> ChannelRealization:
    """Draw all fading gains for ``cfg.N`` reflecting elements.

    With ``size=None`` a single trial is returned (vectors of length N and
    complex scalars); otherwise every field gains a leading batch axis.
    """
    sampler = ChannelSampler(rng, cfg.N, 1 if size is None else size)
    real = sampler.realization()
    if size is None:
        return ChannelRealization(
            g0=real.g0[0], g1=real.g1[0], g2=real.g2[0], h2=complex(real.h2[0]), h12=complex(real.h12[0])
        )
    return real
