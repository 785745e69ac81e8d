"""Pure-Python fallback for the seeded sampling kernel.

Must stay bit-identical to the Cython extension in ``_rngkernel.pyx``:
every method consumes the same number of raw draws in the same order, and
all float arithmetic is plain double precision.
"""

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_INV_2_53 = 1.0 / (1 << 53)


def _mix64(x: int) -> int:
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(seed: int, ident: str) -> int:
    """Stable 64-bit mix of a global seed and a sentence identifier."""
    h = _FNV_OFFSET
    for b in ident.encode("utf-8"):
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return _mix64(_mix64(h) ^ _mix64((seed ^ _GAMMA) & _MASK64))


class Rng:
    """splitmix64 stream with the draw primitives the planners need."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix64(self._state)

    def next_float(self) -> float:
        # 53 high bits -> double in [0, 1)
        return (self.next_u64() >> 11) * _INV_2_53

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randbelow needs n >= 1")
        return self.next_u64() % n

    def bernoulli_indices(self, n: int, p: float) -> list:
        """Indices 0..n-1 that pass an independent Bernoulli(p) draw."""
        out = []
        for i in range(n):
            if self.next_float() < p:
                out.append(i)
        return out

    def weighted_index(self, weights) -> int:
        """One draw from a categorical given unnormalized weights."""
        total = 0.0
        for w in weights:
            total += w
        r = self.next_float() * total
        acc = 0.0
        last = len(weights) - 1
        for i, w in enumerate(weights):
            acc += w
            if r < acc:
                return i
        return last
