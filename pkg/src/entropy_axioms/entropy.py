"""Entropy functionals on density matrices and probability vectors.

All functionals return a plain ``float`` in units of ``kb`` (default 1, i.e.
nats); ``math.inf`` is the only non-finite value ever returned.
"""

import math

import numpy as np

from . import linalg
from .errors import AlphaInvalid, DimensionMismatch, NotNormalized
from .states import DensityMatrix, spectrum

BOLTZMANN = 1.380649e-23  # J/K, exact in the 2019 SI
CLIP = 1e-12  # eigenvalues below this count as exact zeros
KERNEL_WEIGHT_TOL = 1e-8


def _xlogx_sum(p: np.ndarray) -> float:
    p = p[p >= CLIP]
    return float(math.fsum(-p * np.log(p)))


def von_neumann(rho: DensityMatrix, kb: float = 1.0) -> float:
    """``-kb * Tr(rho ln rho)`` with ``0 ln 0 = 0``."""
    return kb * max(_xlogx_sum(spectrum(rho)), 0.0)


def boltzmann_planck(N: int, kb: float = 1.0) -> float:
    if N < 1:
        raise ValueError("N must be >= 1")
    return kb * math.log(N)


def shannon(p, kb: float = 1.0) -> float:
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or abs(math.fsum(p) - 1.0) > 1e-10:
        raise NotNormalized(f"not a probability vector (sum {math.fsum(p)!r})")
    return kb * max(_xlogx_sum(p), 0.0)


def renyi_of_spectrum(p, alpha: float, kb: float = 1.0) -> float:
    if alpha <= 0 or alpha == 1:
        raise AlphaInvalid(f"alpha must be > 0 and != 1, got {alpha}")
    p = np.asarray(p, dtype=float)
    p = p[p >= CLIP]
    return kb * max(math.log(math.fsum(p**alpha)) / (1.0 - alpha), 0.0)


def renyi(rho: DensityMatrix, alpha: float, kb: float = 1.0) -> float:
    """Renyi entropy of order ``alpha``; ``alpha = 1`` is rejected, not special-cased."""
    return renyi_of_spectrum(spectrum(rho), alpha, kb)


def _check_layout(a: DensityMatrix, b: DensityMatrix) -> None:
    la = [(lab, A.shape[0]) for lab, A in a.blocks]
    lb = [(lab, B.shape[0]) for lab, B in b.blocks]
    if la != lb:
        raise DimensionMismatch(f"block layouts differ: {la} vs {lb}")


def relative_entropy(omega: DensityMatrix, sigma: DensityMatrix) -> float:
    """``Tr(omega (ln omega - ln sigma))``, or ``inf`` when the support test fails.

    The support test projects ``omega`` onto the numerical kernel of
    ``sigma`` (eigenvalues below ``CLIP``); weight above 1e-8 means infinity.
    """
    _check_layout(omega, sigma)
    total = 0.0
    for (_, W), ew, (_, S), es in zip(omega.blocks, omega.eigens, sigma.blocks, sigma.eigens):
        ker = es.eigenvectors[:, es.eigenvalues < CLIP]
        if ker.shape[1]:
            weight = float(np.trace(ker.conj().T @ W @ ker).real)
            if weight > KERNEL_WEIGHT_TOL:
                return math.inf
        w = ew.eigenvalues[ew.eigenvalues >= CLIP]
        tr_w_ln_w = math.fsum(w * np.log(w))
        ln_sigma = linalg.spectral_apply(S, np.log, CLIP, eigen=es)
        tr_w_ln_s = float(np.trace(W @ ln_sigma).real)
        total += tr_w_ln_w - tr_w_ln_s
    return total
