"""Seed derivation.

Every random stream is a PCG64 generator keyed by a ``SeedSequence`` built from
``(seed, crc32(purpose_tag), index)``. SeedSequence hashes its entropy, so
streams for different tags or indices are independent and the draws for trial
``i`` never depend on which worker ran trial ``i - 1``.
"""
import zlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _tag(tag):
    return zlib.crc32(tag.encode("utf-8"))


def stream(seed, tag, index=0):
    """Generator for the stream ``(seed, tag, index)``."""
    ss = np.random.SeedSequence([int(seed) & _MASK64, _tag(tag), int(index)])
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed, tag, index=0):
    """A 64-bit child seed, used to hand whole sub-experiments their own seed."""
    ss = np.random.SeedSequence([int(seed) & _MASK64, _tag(tag), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def complex_normal(rng, size, variance=1.0):
    """CN(0, variance) draws: real and imaginary parts each N(0, variance/2)."""
    scale = np.sqrt(variance / 2.0)
    re = rng.standard_normal(size)
    im = rng.standard_normal(size)
    return scale * (re + 1j * im)
