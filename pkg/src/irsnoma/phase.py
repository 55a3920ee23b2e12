"""IRS phase-shift designs and the effective cascaded channel.

The effective channel of user ``i`` is ``xi = sum_n exp(-1j*theta_n) * g0_n * gi_n``.
``gi`` enters unconjugated; writing it as ``gi^H Theta g0`` with a conjugate
only relabels a CN(0, 1) variable, so every distribution is the same.

All functions broadcast over leading batch axes; the element axis is last.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .channel import SUB_PHASE, RngStream, as_generator

TWO_PI = 2.0 * np.pi


class EffectiveGain(NamedTuple):
    xi: complex | np.ndarray
    gain_sq: float | np.ndarray


def _check_lengths(g0, gi, theta=None):
    n = np.shape(g0)[-1]
    if np.shape(gi)[-1] != n or (theta is not None and np.shape(theta)[-1] != n):
        raise ValueError("g0, gi and theta must have the same number of elements")


def effective_gain(g0, gi, theta) -> EffectiveGain:
    g0 = np.asarray(g0, dtype=complex)
    gi = np.asarray(gi, dtype=complex)
    theta = np.asarray(theta, dtype=float)
    _check_lengths(g0, gi, theta)
    xi = np.sum(np.exp(-1j * theta) * g0 * gi, axis=-1)
    gain_sq = xi.real**2 + xi.imag**2
    if xi.ndim == 0:
        return EffectiveGain(complex(xi), float(gain_sq))
    return EffectiveGain(xi, gain_sq)


def coherent_phases(g0, gi):
    """Phases that co-phase every reflected path, so ``xi = sum |g0_n gi_n|``."""
    g0 = np.asarray(g0, dtype=complex)
    gi = np.asarray(gi, dtype=complex)
    _check_lengths(g0, gi)
    # angle(0) == 0, so a zero entry just contributes a zero summand
    return np.mod(np.angle(g0 * gi), TWO_PI)


def coherent_gain_sq(g0, gi):
    """``|xi|^2`` under coherent phasing without forming the phases."""
    return np.sum(np.abs(g0 * gi), axis=-1) ** 2


def random_phases(n: int, rng, size=None):
    """I.i.d. uniform phases on ``[0, 2*pi)``; shape ``(n,)`` or ``(*size, n)``."""
    if n < 1:
        raise ValueError("need at least one reflecting element")
    shape = (n,) if size is None else tuple(np.atleast_1d(size)) + (n,)
    theta = as_generator(rng).uniform(0.0, TWO_PI, shape)
    # guard against uniform() rounding up to the open end
    return np.where(theta >= TWO_PI, 0.0, theta)


def candidate_phases(n: int, q: int, rng, size=None):
    """The ``q`` random pilot phase sets, stacked on a new leading axis.

    With an :class:`RngStream`, candidate ``k`` always comes from the same
    substream, so the first ``q`` candidates are shared by any larger ``q``.
    """
    if q < 1:
        raise ValueError("need at least one candidate phase set")
    if isinstance(rng, RngStream):
        sets = [random_phases(n, rng.generator(SUB_PHASE + k), size) for k in range(q)]
    else:
        gen = as_generator(rng)
        sets = [random_phases(n, gen, size) for _ in range(q)]
    return np.stack(sets)


def select_phases(g0, g1, q: int, rng):
    """Pick, among ``q`` random phase sets, the one maximising ``|xi|`` for U1.

    Ties go to the lowest candidate index.
    """
    g0 = np.asarray(g0, dtype=complex)
    g1 = np.asarray(g1, dtype=complex)
    _check_lengths(g0, g1)
    size = g0.shape[:-1] or None
    cands = candidate_phases(g0.shape[-1], q, rng, size)
    gains = effective_gain(g0, g1, cands).gain_sq
    best = np.argmax(gains, axis=0)
    if np.ndim(best) == 0:
        return cands[best]
    return np.take_along_axis(cands, best[None, ..., None], axis=0)[0]


def rotated_sum(prod, theta):
    """``sum_n exp(-1j*theta_n) * prod_n`` for large Monte Carlo batches.

    The trigonometric part runs in single precision, which is several times
    faster and changes ``xi`` by about 1e-7 relative.
    """
    t32 = theta.astype(np.float32)
    c = np.cos(t32)
    s = np.sin(t32)
    pr = prod.real
    pi = prod.imag
    re = np.einsum("...n,...n->...", c, pr) + np.einsum("...n,...n->...", s, pi)
    im = np.einsum("...n,...n->...", c, pi) - np.einsum("...n,...n->...", s, pr)
    return re + 1j * im
