"""Deterministic seed derivation shared by every randomized operation."""

_MASK = (1 << 64) - 1
# splitmix64 increment (golden-ratio constant)
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    z = (x + GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mix_seed(seed: int, index: int) -> int:
    """Sub-seed for stream ``index`` under master ``seed``; stable across platforms."""
    return splitmix64(splitmix64(seed & _MASK) ^ (index & _MASK))
