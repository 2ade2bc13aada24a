"""
Permittivity models on the imaginary-frequency axis.

With omega = -i c k (k real, >= 0) every oscillator term is real and
non-negative, so all evaluation here is plain real numpy arithmetic.

Two models are supported:
- small density:      eps = 1 + chi_free + S
- Clausius-Mossotti:  eps = (1 + 2S/3) / (1 - S/3) + chi_free

where S = sum_m k_p^2 / (k_r^2 + k^2 + k_c*k) over the bound terms.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    BoundDrudeDenominatorError,
    ClausiusMossottiError,
    DrudeAtZeroError,
    InvalidParameterError,
)


logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


class PermittivityModel(str, Enum):
    SMALL_DENSITY = "small_density"
    CLAUSIUS_MOSSOTTI = "clausius_mossotti"


@dataclass(frozen=True)
class OscillatorTerm:
    """
    One Lorentz term, parameterized by wavenumbers in 1/nm.

    A free-carrier (Drude) term is an OscillatorTerm with k_r = 0.
    """
    k_p: float
    k_r: float = 0.0
    k_c: float = 0.0

    def __post_init__(self):
        for name in ("k_p", "k_r", "k_c"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise InvalidParameterError(f"{name} must be finite and >= 0, got {value!r}")

    @property
    def is_free(self) -> bool:
        return self.k_r == 0.0


@dataclass(frozen=True)
class Material:
    """
    A dielectric described by bound oscillator terms plus an optional
    free-carrier term.

    When `k_s` is set the free-carrier term is evaluated in its bound
    form k_p^2 / (k_s^2 + k^2 - k_c*k), which is finite at k = 0.
    """
    bound_terms: Tuple[OscillatorTerm, ...] = field(default_factory=tuple)
    drude: Optional[OscillatorTerm] = None
    k_s: Optional[float] = None
    model: PermittivityModel = PermittivityModel.SMALL_DENSITY
    name: str = "custom"

    def __post_init__(self):
        # accept lists from callers but store an immutable tuple
        object.__setattr__(self, "bound_terms", tuple(self.bound_terms))
        object.__setattr__(self, "model", PermittivityModel(self.model))

        for term in self.bound_terms:
            if term.is_free:
                raise InvalidParameterError(
                    "bound oscillator terms need k_r > 0; put free carriers in `drude`"
                )
        if self.drude is not None and not self.drude.is_free:
            raise InvalidParameterError("the free-carrier term must have k_r = 0")
        if self.k_s is not None:
            if self.drude is None:
                raise InvalidParameterError("k_s given without a free-carrier term")
            if not self.k_s > 0:
                raise InvalidParameterError(f"k_s must be > 0, got {self.k_s!r}")

    # ----- Derived properties -----

    @property
    def is_vacuum(self) -> bool:
        return not self.bound_terms and self.drude is None

    @property
    def has_unbound_drude(self) -> bool:
        return self.drude is not None and self.k_s is None

    @property
    def k_r_max(self) -> float:
        return max((term.k_r for term in self.bound_terms), default=0.0)

    @property
    def spectral_edges(self) -> Tuple[float, ...]:
        """Wavenumbers where eps(k) changes character: k_c of the free term and every k_r."""
        edges = {term.k_r for term in self.bound_terms}
        if self.drude is not None and self.drude.k_c > 0:
            edges.add(self.drude.k_c)
        return tuple(sorted(edges))

    def with_bound_drude(self, k_s: Optional[float] = None) -> "Material":
        """Return a copy whose free-carrier term uses the bound variant (k_s defaults to k_c)."""
        if self.drude is None:
            return self
        if k_s is None:
            k_s = self.k_s if self.k_s is not None else self.drude.k_c
        if not k_s > 0:
            raise InvalidParameterError(
                "bound free-carrier variant needs k_s > 0 (k_c is zero, set k_s explicitly)"
            )
        return replace(self, k_s=k_s)

    def without_drude(self) -> "Material":
        return replace(self, drude=None, k_s=None)


VACUUM = Material(name="vacuum")


# ----- Susceptibilities -----


def chi_drude_unbound(term: OscillatorTerm, k: ArrayLike) -> np.ndarray:
    """k_p^2 / (k^2 + k_c*k); pole at k = 0."""
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise DrudeAtZeroError()
    return term.k_p ** 2 / (k * k + term.k_c * k)


def chi_drude_bound(term: OscillatorTerm, k_s: float, k: ArrayLike):
    """
    Bound free-carrier susceptibility k_p^2 / (k_s^2 + k^2 - k_c*k).

    The -k_c*k sign is kept as written for the bound variant; the
    denominator is guarded instead.
    """
    if not k_s > 0:
        raise InvalidParameterError(f"k_s must be > 0, got {k_s!r}")
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < 0):
        raise InvalidParameterError("wavenumber k must be >= 0")
    denom = k_s * k_s + k_arr * k_arr - term.k_c * k_arr
    if np.any(denom <= 0):
        raise BoundDrudeDenominatorError(
            f"k_s^2 + k^2 - k_c*k <= 0 for k_s={k_s}, k_c={term.k_c}"
        )
    chi = term.k_p ** 2 / denom
    return float(chi) if np.ndim(k) == 0 else chi


def _bound_sum(terms: Sequence[OscillatorTerm], k: np.ndarray) -> np.ndarray:
    total = np.zeros_like(k)
    for term in terms:
        total = total + term.k_p ** 2 / (term.k_r ** 2 + k * k + term.k_c * k)
    return total


def _free_carrier(material: Material, k: np.ndarray) -> np.ndarray:
    if material.drude is None:
        return np.zeros_like(k)
    if material.k_s is not None:
        return chi_drude_bound(material.drude, material.k_s, k)
    return chi_drude_unbound(material.drude, k)


# ----- Permittivity -----


def eps_imag_axis(material: Material, k: ArrayLike):
    """
    Permittivity eps(k) at imaginary frequency omega = -i c k.

    Args:
        material: The dielectric.
        k: Wavenumber(s) in 1/nm, scalar or array, all >= 0.

    Returns:
        A float for scalar input, an ndarray with the shape of `k` otherwise.

    Raises:
        DrudeAtZeroError: k = 0 with an unbound free-carrier term.
        ClausiusMossottiError: 1 - S/3 <= 0 under the Clausius-Mossotti model.
    """
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < 0):
        raise InvalidParameterError("wavenumber k must be >= 0 on the imaginary axis")

    s = _bound_sum(material.bound_terms, k_arr)
    chi_free = _free_carrier(material, k_arr)

    if material.model is PermittivityModel.CLAUSIUS_MOSSOTTI:
        local = 1.0 - s / 3.0
        if np.any(local <= 0):
            raise ClausiusMossottiError(
                "Clausius-Mossotti denominator 1 - S/3 is non-positive "
                f"(max S = {float(np.max(s)):.6g}); the oscillator sum reaches 3"
            )
        eps = (1.0 + 2.0 * s / 3.0) / local + chi_free
    else:
        eps = 1.0 + s + chi_free

    return float(eps) if np.ndim(k) == 0 else eps


def eps_static(material: Material) -> float:
    """eps(0) = 1 + sum k_p^2 / k_r^2 (plus a bound free-carrier term when k_s is set)."""
    return eps_imag_axis(material, 0.0)
