"""Fixed overcomplete 2-D DCT dictionary."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Bumped whenever the atom construction changes; written to run metadata.
DICTIONARY_VERSION = "odct-kron-meanfree-v1"


@dataclass(frozen=True, eq=False)
class Dictionary:
    """Column-atom dictionary for ``patch_edge x patch_edge`` patches.

    Atom ``n = k_row * atoms_per_axis + k_col`` pairs vertical frequency
    ``k_row`` with horizontal frequency ``k_col``; patches are vectorized
    row-major, matching :mod:`ictsparse.patches`.
    """

    atoms: np.ndarray
    patch_edge: int
    atoms_per_axis: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.atoms.shape

    @property
    def n_features(self) -> int:
        return self.atoms.shape[0]

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[1]

    def apply(self, coeffs: np.ndarray) -> np.ndarray:
        """``A @ coeffs``; ``coeffs`` may be a vector or a (N, T) batch."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape[0] != self.n_atoms:
            raise ValueError(
                f"expected {self.n_atoms} coefficients, got {coeffs.shape[0]}")
        return self.atoms @ coeffs

    def adjoint(self, residual: np.ndarray) -> np.ndarray:
        """``A.T @ residual``."""
        residual = np.asarray(residual, dtype=float)
        if residual.shape[0] != self.n_features:
            raise ValueError(
                f"expected {self.n_features} samples, got {residual.shape[0]}")
        return self.atoms.T @ residual

    def spectral_norm(self) -> float:
        return float(np.linalg.norm(self.atoms, 2))


def overcomplete_dct_1d(patch_edge: int, atoms_per_axis: int) -> np.ndarray:
    """``patch_edge x atoms_per_axis`` cosine atoms, non-DC atoms mean-free."""
    i = np.arange(patch_edge)[:, None]
    k = np.arange(atoms_per_axis)[None, :]
    d1 = np.cos(i * k * np.pi / atoms_per_axis)
    d1[:, 1:] -= d1[:, 1:].mean(axis=0)
    return d1


def build_overcomplete_dct(patch_edge: int = 8, atoms_per_axis: int = 12) -> Dictionary:
    if patch_edge < 1:
        raise ValueError(f"patch_edge must be positive, got {patch_edge}")
    if atoms_per_axis < patch_edge:
        raise ValueError(
            f"atoms_per_axis ({atoms_per_axis}) < patch_edge ({patch_edge}) "
            "would give an undercomplete dictionary")
    d1 = overcomplete_dct_1d(patch_edge, atoms_per_axis)
    atoms = np.kron(d1, d1)
    atoms /= np.linalg.norm(atoms, axis=0)
    atoms.setflags(write=False)
    return Dictionary(atoms=atoms, patch_edge=patch_edge, atoms_per_axis=atoms_per_axis)


def apply(dictionary: Dictionary, coeffs: np.ndarray) -> np.ndarray:
    return dictionary.apply(coeffs)
