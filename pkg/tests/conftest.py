import os

# One BLAS thread: reproducible reductions and no oversubscription on small
# matrices.  Must happen before numpy first loads its BLAS.
os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=12345))


def random_symmetric(rng, n, scale=1.0):
    m = rng.standard_normal((n, n))
    return (m + m.T) * (scale / 2.0)


def random_skew(rng, n, scale=1.0):
    m = rng.standard_normal((n, n))
    return (m - m.T) * (scale / 2.0)


def random_spd(rng, n, cond=10.0):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    d = np.exp(np.linspace(0.0, np.log(cond), n))
    b = (q * d) @ q.T
    return (b + b.T) / 2.0
