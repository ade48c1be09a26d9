"""8x8 forward and inverse discrete cosine transform."""

import numpy as np

N = 8


def _basis_matrix() -> np.ndarray:
    # M[u, x] = 0.5 * c_u * cos((2x+1) u pi / 16), c_0 = 1/sqrt(2), else 1.
    # M is orthonormal, so the inverse transform is its transpose.
    u = np.arange(N)[:, None]
    x = np.arange(N)[None, :]
    m = 0.5 * np.cos((2 * x + 1) * u * np.pi / 16)
    m[0, :] /= np.sqrt(2)
    return m


DCT_MATRIX = _basis_matrix()


def forward_dct(block: np.ndarray) -> np.ndarray:
    """Transform one zero-shifted 8x8 block into its 64 coefficients."""
    b = np.asarray(block, dtype=np.float64)
    if b.shape != (N, N):
        raise ValueError(f"expected an 8x8 block, got {b.shape}")
    return DCT_MATRIX @ b @ DCT_MATRIX.T


def inverse_dct(coeffs: np.ndarray) -> np.ndarray:
    """Rebuild the 8x8 spatial block from its coefficients."""
    c = np.asarray(coeffs, dtype=np.float64)
    if c.shape != (N, N):
        raise ValueError(f"expected an 8x8 block, got {c.shape}")
    return DCT_MATRIX.T @ c @ DCT_MATRIX


def forward_dct_blocks(blocks: np.ndarray) -> np.ndarray:
    """Vectorised forward transform of a (B, 8, 8) stack."""
    return DCT_MATRIX @ blocks @ DCT_MATRIX.T


def inverse_dct_blocks(coeffs: np.ndarray) -> np.ndarray:
    """Vectorised inverse transform of a (B, 8, 8) stack."""
    return DCT_MATRIX.T @ coeffs @ DCT_MATRIX
