"""SplitMix64: a counter-based 64-bit generator.

Output i of the stream seeded with ``s`` is ``mix64(s + (i + 1) * GAMMA)``
(mod 2**64), where ``mix64`` is the SplitMix64 finalizer (Steele, Lea and
Flood 2014).  Being a pure function of (seed, counter), the stream is easy to
reproduce in any language.
"""

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z):
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def derive_seed(master, index):
    """Seed for trial ``index`` of a run with seed ``master``."""
    return mix64(mix64(master) ^ mix64((index + 1) * GAMMA))


class SplitMix64:
    def __init__(self, seed):
        self.seed = seed & MASK
        self.counter = 0

    def next_u64(self):
        self.counter += 1
        return mix64(self.seed + self.counter * GAMMA)

    def below(self, n):
        """Uniform integer in [0, n) by Lemire's multiply-shift with rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        m = self.next_u64() * n
        low = m & MASK
        if low < n:
            threshold = (1 << 64) % n
            while low < threshold:
                m = self.next_u64() * n
                low = m & MASK
        return m >> 64

    def random(self):
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def permutation(self, n):
        """Fisher-Yates shuffle of range(n)."""
        p = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            p[i], p[j] = p[j], p[i]
        return p

    def integers(self, lo, hi, size):
        return [lo + self.below(hi - lo) for _ in range(size)]
