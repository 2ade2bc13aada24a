import math
from typing import Dict

from core_logic.errors import InvalidParameterError
from core_logic.permittivity import VACUUM, Material, OscillatorTerm


# --- Reference dielectric (wavenumbers in 1/nm) ---


# six bound transitions with equal strength k_p = 0.05 and tiny damping;
# eps(0) = 1 + sum (0.05 / k_r)^2 = 37.98
SIX_OSCILLATOR_K_R = (0.01, 0.02, 0.03, 0.04, 0.05, 0.08)
SIX_OSCILLATOR_K_P = 0.05
SIX_OSCILLATOR_K_C = 1.0e-6

SIX_OSCILLATOR = Material(
    bound_terms=tuple(
        OscillatorTerm(k_p=SIX_OSCILLATOR_K_P, k_r=k_r, k_c=SIX_OSCILLATOR_K_C)
        for k_r in SIX_OSCILLATOR_K_R
    ),
    name="six_oscillator",
)

SIX_OSCILLATOR_DRUDE = Material(
    bound_terms=SIX_OSCILLATOR.bound_terms,
    drude=OscillatorTerm(k_p=0.05, k_r=0.0, k_c=1.0e-6),
    name="six_oscillator_drude",
)


def single_oscillator(eps_static: float, k_r: float, k_c: float = 0.0, name: str = "") -> Material:
    """
    One bound term with k_p chosen so that eps(0) = eps_static.
    """
    if not eps_static >= 1:
        raise InvalidParameterError(f"eps_static must be >= 1, got {eps_static!r}")
    if not k_r > 0:
        raise InvalidParameterError(f"k_r must be > 0, got {k_r!r}")
    if eps_static == 1:
        return VACUUM
    term = OscillatorTerm(k_p=k_r * math.sqrt(eps_static - 1.0), k_r=k_r, k_c=k_c)
    return Material(bound_terms=(term,), name=name or f"single_oscillator(eps0={eps_static:g})")


# eps(0) = 5.6 with a single UV transition near 20 eV
DIAMOND = single_oscillator(5.6, k_r=0.1, name="diamond")


MATERIALS: Dict[str, Material] = {
    "vacuum": VACUUM,
    "six_oscillator": SIX_OSCILLATOR,
    "six_oscillator_drude": SIX_OSCILLATOR_DRUDE,
    "diamond": DIAMOND,
}

DEFAULT_MATERIAL_NAME: str = "six_oscillator"


def get_material(name: str) -> Material:
    """Return a named material; unknown names are an error, not a silent default."""
    key = name.strip().lower()
    if key in MATERIALS:
        return MATERIALS[key]
    known = ", ".join(sorted(MATERIALS))
    raise InvalidParameterError(f"unknown material '{name}' (known: {known})")
