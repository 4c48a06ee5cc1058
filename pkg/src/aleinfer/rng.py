"""Seeded PCG32 random streams.

Every random draw in the package goes through :class:`Pcg32`.  A generator
is identified by a 64-bit ``seed`` (the initial state) and a ``stream``
selector (the LCG increment), so different purposes (row resampling,
normal draws) never share a sequence even under the same seed.

Loops derive per-iteration seeds with :func:`stream_seed`, which makes the
result of iteration ``i`` independent of execution order and thread count.

Block generation is vectorised with LCG jump-ahead tables; the scalar
:meth:`Pcg32.next_u32` is the reference path and both produce the same
sequence.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
MULTIPLIER = 6364136223846793005
GOLDEN = 0x9E3779B97F4A7C15

STREAM_RESAMPLE = 1
STREAM_NORMAL = 2


def stream_seed(master_seed: int, i: int) -> int:
    """Seed for iteration ``i`` of a loop driven by ``master_seed``."""
    return (int(master_seed) ^ (GOLDEN * (int(i) + 1))) & MASK64


def _jump(steps: int, inc: int) -> tuple[int, int]:
    """Return (A, C) such that ``state_{k+steps} = A*state_k + C`` mod 2**64."""
    acc_mult, acc_plus = 1, 0
    cur_mult, cur_plus = MULTIPLIER, inc
    while steps:
        if steps & 1:
            acc_mult = (acc_mult * cur_mult) & MASK64
            acc_plus = (acc_plus * cur_mult + cur_plus) & MASK64
        cur_plus = ((cur_mult + 1) * cur_plus) & MASK64
        cur_mult = (cur_mult * cur_mult) & MASK64
        steps >>= 1
    return acc_mult, acc_plus


def _output(states: np.ndarray) -> np.ndarray:
    # XSH-RR output permutation on the pre-advance state.
    xorshifted = (((states >> np.uint64(18)) ^ states) >> np.uint64(27)) & np.uint64(0xFFFFFFFF)
    rot = states >> np.uint64(59)
    left = (np.uint64(32) - rot) & np.uint64(31)
    out = ((xorshifted >> rot) | (xorshifted << left)) & np.uint64(0xFFFFFFFF)
    return out.astype(np.uint32)


class Pcg32:
    """PCG32 (XSH-RR, 64-bit state) generator.

    Initialisation follows the reference ``pcg32_srandom_r(initstate, initseq)``.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.inc = ((int(stream) << 1) | 1) & MASK64
        self.state = 0
        self._advance(1)
        self.state = (self.state + (int(seed) & MASK64)) & MASK64
        self._advance(1)

    def _advance(self, steps: int) -> None:
        mult, plus = _jump(steps, self.inc)
        self.state = (mult * self.state + plus) & MASK64

    def next_u32(self) -> int:
        old = self.state
        self.state = (old * MULTIPLIER + self.inc) & MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & 0xFFFFFFFF

    def u32_array(self, n: int) -> np.ndarray:
        """Next ``n`` outputs as a uint32 array (same sequence as ``next_u32``)."""
        n = int(n)
        if n <= 0:
            return np.empty(0, dtype=np.uint32)
        mults = np.ones(1, dtype=np.uint64)
        pluses = np.zeros(1, dtype=np.uint64)
        while mults.size < n:
            m_mult, m_plus = _jump(mults.size, self.inc)
            mults = np.concatenate([mults, mults * np.uint64(m_mult)])
            pluses = np.concatenate([pluses, mults[: pluses.size] * np.uint64(m_plus) + pluses])
        states = mults[:n] * np.uint64(self.state) + pluses[:n]
        self._advance(n)
        return _output(states)

    def integers(self, bound: int, n: int) -> np.ndarray:
        """``n`` unbiased draws from ``{0, ..., bound-1}`` (rejection on the low tail)."""
        bound = int(bound)
        if not 1 <= bound <= 0xFFFFFFFF:
            raise ValueError(f"bound must be in [1, 2**32), got {bound}")
        threshold = (0x100000000 - bound) % bound
        out = np.empty(0, dtype=np.int64)
        while out.size < n:
            draws = self.u32_array(n - out.size).astype(np.int64)
            draws = draws[draws >= threshold]
            out = np.concatenate([out, draws % bound])
        return out

    def uniform(self, n: int) -> np.ndarray:
        """``n`` doubles in [0, 1) with 53 random bits each."""
        raw = self.u32_array(2 * int(n)).astype(np.uint64)
        hi = raw[0::2] >> np.uint64(5)
        lo = raw[1::2] >> np.uint64(6)
        return (hi.astype(np.float64) * 67108864.0 + lo.astype(np.float64)) / 9007199254740992.0

    def normal(self, n: int) -> np.ndarray:
        """``n`` standard-normal draws via the Box-Muller transform."""
        pairs = (int(n) + 1) // 2
        u = self.uniform(2 * pairs)
        u1 = 1.0 - u[0::2]
        u2 = u[1::2]
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        out = np.empty(2 * pairs)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[: int(n)]
