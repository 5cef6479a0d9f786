"""Seeded random matrix generators used by the verification sweeps."""
from __future__ import annotations

import numpy as np


def rng_for(seed: int, *offsets: int) -> np.random.Generator:
    """Generator seeded by (seed, *offsets); fixed offsets keep sweeps independent."""
    return np.random.default_rng([int(seed), *(int(k) for k in offsets)])


def ginibre(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Complex matrix with iid standard Gaussian real and imaginary parts."""
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = ginibre(n, rng, scale)
    return (g + g.conj().T) / 2


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with the standard phase fix."""
    q, r = np.linalg.qr(ginibre(n, rng))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_positive_definite(n: int, rng: np.random.Generator, ridge: float = 0.1) -> np.ndarray:
    g = ginibre(n, rng)
    return g @ g.conj().T + ridge * np.eye(n)


def random_invertible(n: int, rng: np.random.Generator, min_sv_ratio: float = 1e-6) -> np.ndarray:
    while True:
        g = ginibre(n, rng)
        sv = np.linalg.svd(g, compute_uv=False)
        if sv[-1] > min_sv_ratio * sv[0]:
            return g


def cauchy_scaled_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian sample with a heavy-tailed overall scale."""
    return random_hermitian(n, rng) * abs(rng.standard_cauchy())
