import hashlib

import numpy as np


def derive_seed(master_seed: int, subsystem: str, index: int = 0) -> int:
    """Stable 63-bit seed for ``(master_seed, subsystem, index)``."""
    token = f"{int(master_seed)}:{subsystem}:{int(index)}".encode()
    return int.from_bytes(hashlib.sha256(token).digest()[:8], "big") >> 1


def make_rng(master_seed: int, subsystem: str, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master_seed, subsystem, index))
