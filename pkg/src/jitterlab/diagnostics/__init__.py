"""Multi-chain convergence diagnostics"""

from .psrf import ChainTraces, PsrfResult, inter_chain_cov, intra_chain_cov, psrf, spectral_norm

__all__ = [
    "ChainTraces",
    "PsrfResult",
    "inter_chain_cov",
    "intra_chain_cov",
    "psrf",
    "spectral_norm",
]
