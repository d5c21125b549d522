from typing import List
import numpy as np

from semirank.utils.errors import ConfigError


def _entropy(seed: int, keys: tuple) -> List[int]:
    entropy = []
    for name, value in [('seed', seed)] + [('key', k) for k in keys]:
        if isinstance(value, (bool, np.bool_)) or not isinstance(value, (int, np.integer)) or value < 0:
            raise ConfigError("{} must be a non-negative integer, got {!r}".format(name, value))
        entropy.append(int(value))
    return entropy


def derive_seed(seed: int, *keys: int) -> int:
    r"""
    Overview:
        Derive an independent 63-bit seed for the substream keyed by ``(seed, *keys)``.
        Results do not depend on the order in which substreams are requested.
    Raises:
        - ConfigError: ``seed`` or a key is not a non-negative integer
    """
    ss = np.random.SeedSequence(_entropy(seed, keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(_entropy(seed, keys)))
