import numpy as np


def derive_seed(master, *keys):
    """Stable 64-bit seed mixed from a master seed and integer keys.

    Independent of call order, so parallel and serial runs agree.
    """
    ss = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def rng_for(seed):
    return np.random.default_rng(int(seed))
