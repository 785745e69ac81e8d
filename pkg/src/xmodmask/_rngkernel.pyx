# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled seeded sampling kernel. Mirrors ``_rng_py`` exactly:
same stream, same draw order, same double-precision arithmetic."""

from libc.stdint cimport uint64_t

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t FNV_OFFSET = 0xCBF29CE484222325ULL
cdef uint64_t FNV_PRIME = 0x100000001B3ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t x) nogil:
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL
    return x ^ (x >> 31)


def derive_seed(seed, ident):
    """Stable 64-bit mix of a global seed and a sentence identifier."""
    cdef uint64_t h = FNV_OFFSET
    cdef uint64_t s = <uint64_t> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef bytes data = ident.encode("utf-8")
    cdef unsigned char b
    for b in data:
        h = (h ^ b) * FNV_PRIME
    return mix64(mix64(h) ^ mix64(s ^ GAMMA))


cdef class Rng:
    """splitmix64 stream with the draw primitives the planners need."""

    cdef uint64_t _state

    def __init__(self, seed):
        self._state = <uint64_t> (seed & 0xFFFFFFFFFFFFFFFF)

    cdef inline uint64_t _next(self) nogil:
        self._state += GAMMA
        return mix64(self._state)

    def next_u64(self):
        return self._next()

    def next_float(self):
        return <double> (self._next() >> 11) * INV_2_53

    def randbelow(self, n):
        if n <= 0:
            raise ValueError("randbelow needs n >= 1")
        return self._next() % (<uint64_t> n)

    def bernoulli_indices(self, n, p):
        """Indices 0..n-1 that pass an independent Bernoulli(p) draw."""
        cdef Py_ssize_t i, count = n
        cdef double prob = p
        out = []
        for i in range(count):
            if (<double> (self._next() >> 11) * INV_2_53) < prob:
                out.append(i)
        return out

    def weighted_index(self, weights):
        """One draw from a categorical given unnormalized weights."""
        cdef double total = 0.0, acc = 0.0, r, w
        cdef Py_ssize_t i, last = len(weights) - 1
        for w in weights:
            total += w
        r = (<double> (self._next() >> 11) * INV_2_53) * total
        for i in range(last + 1):
            acc += <double> weights[i]
            if r < acc:
                return i
        return last
