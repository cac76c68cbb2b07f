"""Dilation-matrix arithmetic.

A dilation is an invertible real d x d matrix acting on R^d. Everything
downstream needs its integer powers (cached, capped), the moduli of its
eigenvalues, and a coarse spectral classification: expansive matrices
push every frequency orbit to infinity, contractive ones pull every
orbit to zero, and mixed/boundary spectra do neither.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULTS
from .errors import NumericError, TruncationRangeError


def _char_poly_moduli(m: np.ndarray) -> np.ndarray:
    """Eigenvalue moduli via explicit characteristic-polynomial coefficients (d <= 3)."""
    d = m.shape[0]
    if d == 1:
        return np.array([abs(m[0, 0])])
    if d == 2:
        tr = m[0, 0] + m[1, 1]
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        coeffs = [1.0, -tr, det]
    else:
        tr = np.trace(m)
        # sum of principal 2x2 minors
        c2 = 0.0
        for a in range(3):
            for b in range(a + 1, 3):
                c2 += m[a, a] * m[b, b] - m[a, b] * m[b, a]
        coeffs = [1.0, -tr, c2, -np.linalg.det(m)]
    return np.abs(np.roots(coeffs))


def _eig_moduli(m: np.ndarray) -> np.ndarray:
    if m.shape[0] <= 3:
        moduli = _char_poly_moduli(m)
    else:
        moduli = np.abs(np.linalg.eigvals(m))
    return np.sort(moduli)[::-1]


@dataclass(frozen=True)
class DilationDescriptor:
    """Immutable wrapper around a dilation matrix with an eager power cache.

    Powers A^j for |j| <= power_cap are computed at construction by
    repeated multiplication (positive from A, negative from A^{-1}) and
    served read-only.
    """

    matrix: np.ndarray
    dim: int
    det: float
    inv: np.ndarray
    eig_moduli: np.ndarray
    power_cap: int
    _powers: tuple = field(repr=False)  # index j + power_cap -> A^j

    @classmethod
    def from_matrix(cls, matrix, power_cap: int = DEFAULTS.power_cap) -> "DilationDescriptor":
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"dilation matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NumericError("dilation matrix has non-finite entries")
        det = float(np.linalg.det(m))
        if det == 0.0 or not np.isfinite(det):
            raise NumericError("dilation matrix is singular")
        inv = np.linalg.inv(m)
        d = m.shape[0]
        resid = np.max(np.abs(m @ inv - np.eye(d)))
        if resid > DEFAULTS.inverse_product_tol:
            raise NumericError(
                f"matrix times computed inverse deviates from identity by {resid:.3e}"
            )
        moduli = _eig_moduli(m)
        prod = float(np.prod(moduli))
        if abs(prod - abs(det)) > DEFAULTS.moduli_product_rtol * abs(det):
            raise NumericError(
                f"eigenvalue moduli product {prod!r} inconsistent with |det| {abs(det)!r}"
            )
        powers = [np.eye(d)]
        for _ in range(power_cap):
            powers.append(m @ powers[-1])
        neg = [np.eye(d)]
        for _ in range(power_cap):
            neg.append(inv @ neg[-1])
        table = tuple(
            _frozen(neg[-j] if j < 0 else powers[j])
            for j in range(-power_cap, power_cap + 1)
        )
        for arr in (m, inv, moduli):
            arr.setflags(write=False)
        return cls(
            matrix=m,
            dim=d,
            det=det,
            inv=inv,
            eig_moduli=moduli,
            power_cap=power_cap,
            _powers=table,
        )

    def power(self, j: int) -> np.ndarray:
        """A^j from the cache; |j| beyond the cap is a truncation-range error."""
        if abs(j) > self.power_cap:
            raise TruncationRangeError(
                f"|j|={abs(j)} exceeds the power cap {self.power_cap}"
            )
        return self._powers[j + self.power_cap]

    def transpose_power(self, j: int) -> np.ndarray:
        """(A^T)^j, served from the same cache since (A^T)^j = (A^j)^T."""
        return self.power(j).T

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "matrix": self.matrix.tolist(),
            "det": self.det,
            "eig_moduli": self.eig_moduli.tolist(),
        }


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def as_dilation(A, power_cap: int = DEFAULTS.power_cap) -> DilationDescriptor:
    """Coerce a matrix-like or descriptor to a DilationDescriptor."""
    if isinstance(A, DilationDescriptor):
        return A
    return DilationDescriptor.from_matrix(A, power_cap=power_cap)


def matrix_power(A, j: int) -> np.ndarray:
    """Cached integer power of a dilation."""
    return as_dilation(A).power(j)


def classify_dilation(A, tol: float = DEFAULTS.classify_tol) -> str:
    """One of 'expansive', 'contractive', 'mixed', 'boundary'.

    Expansive means every eigenvalue modulus exceeds 1+tol, contractive
    means all fall below 1-tol; any modulus inside the tol band makes
    the spectrum 'boundary', everything else is 'mixed'.
    """
    moduli = as_dilation(A).eig_moduli
    if moduli.min() > 1.0 + tol:
        return "expansive"
    if moduli.max() < 1.0 - tol:
        return "contractive"
    if np.any(np.abs(moduli - 1.0) <= tol):
        return "boundary"
    return "mixed"


def preserves_integer_lattice(A, tol: float = DEFAULTS.integer_tol) -> bool:
    """True when every entry sits within tol of an integer (so A Z^d <= Z^d)."""
    m = as_dilation(A).matrix
    return bool(np.all(np.abs(m - np.round(m)) <= tol))
