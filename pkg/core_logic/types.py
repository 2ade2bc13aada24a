"""
Shared domain types: the plate geometries, the assembled Configuration and
the PressureResult every integrator returns.

Lengths are in nm, pressures in N/m^2 (negative = attraction).
"""

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple, Union

from .errors import GapZeroError, InvalidParameterError
from .permittivity import VACUUM, Material


# ----- Geometries -----


@dataclass(frozen=True)
class IdealCasimir:
    """Two perfectly conducting plates."""
    kind = "ideal"


@dataclass(frozen=True)
class SlabSlab:
    """
    Two identical dielectric slabs of thickness t in vacuum.

    Only equal thicknesses have a characteristic function; t2 is accepted
    so that configs can state it, but it must match t1.
    """
    t1: float
    t2: Optional[float] = None
    kind = "slabs"

    def __post_init__(self):
        if not self.t1 > 0:
            raise InvalidParameterError(f"slab thickness must be > 0, got {self.t1!r}")
        if self.t2 is not None and not math.isclose(self.t2, self.t1, rel_tol=1e-12):
            raise InvalidParameterError(
                f"unequal slab thicknesses ({self.t1}, {self.t2}) are not supported; "
                "the t1*t2 law is available only through the thin-plate asymptote"
            )

    @property
    def t(self) -> float:
        return self.t1


@dataclass(frozen=True)
class HalfSpaces:
    """Two dielectric half-spaces (the t -> infinity slab limit)."""
    kind = "halfspaces"


@dataclass(frozen=True)
class FilledGap:
    """Two slabs of thickness t with the gap filled by `gap_material`."""
    t: float
    gap_material: Material
    kind = "filled_gap"

    def __post_init__(self):
        if not self.t >= 0:
            raise InvalidParameterError(f"plate thickness must be >= 0, got {self.t!r}")


@dataclass(frozen=True)
class FilmInVacuum:
    """A free-standing film of thickness d made of `film_material`."""
    film_material: Material
    kind = "film"


@dataclass(frozen=True)
class ConductiveSheets:
    """Two infinitely thin sheets with normalized conductivity zeta."""
    zeta: float
    kind = "sheets"

    def __post_init__(self):
        if not self.zeta > 0:
            raise InvalidParameterError(f"sheet conductivity zeta must be > 0, got {self.zeta!r}")


Geometry = Union[IdealCasimir, SlabSlab, HalfSpaces, FilledGap, FilmInVacuum, ConductiveSheets]


@dataclass(frozen=True)
class Configuration:
    """Geometry + plate material + gap width d (nm)."""
    geometry: Geometry
    d: float
    plate_material: Material = VACUUM

    def __post_init__(self):
        if not self.d > 0:
            raise GapZeroError(self.d)

    @property
    def gap_material(self) -> Optional[Material]:
        if isinstance(self.geometry, FilledGap):
            return self.geometry.gap_material
        if isinstance(self.geometry, FilmInVacuum):
            return self.geometry.film_material
        return None

    @property
    def materials(self) -> Tuple[Material, ...]:
        """Materials whose permittivity enters the integrand."""
        if isinstance(self.geometry, (IdealCasimir, ConductiveSheets)):
            return ()
        if isinstance(self.geometry, FilmInVacuum):
            return (self.geometry.film_material,)
        if isinstance(self.geometry, FilledGap):
            return (self.plate_material, self.geometry.gap_material)
        return (self.plate_material,)

    @property
    def spectral_edges(self) -> Tuple[float, ...]:
        edges = set()
        for material in self.materials:
            edges.update(material.spectral_edges)
        return tuple(sorted(edges))

    @property
    def k_r_max(self) -> float:
        return max((m.k_r_max for m in self.materials), default=0.0)

    def with_gap(self, d: float) -> "Configuration":
        return replace(self, d=d)

    def with_thickness(self, t: float) -> "Configuration":
        geometry = self.geometry
        if isinstance(geometry, SlabSlab):
            return replace(self, geometry=SlabSlab(t1=t))
        if isinstance(geometry, FilledGap):
            return replace(self, geometry=replace(geometry, t=t))
        raise InvalidParameterError(
            f"geometry '{geometry.kind}' has no thickness to vary"
        )

    def map_materials(self, fn) -> "Configuration":
        """Apply `fn` to every material of the configuration (used for n = 0 conventions)."""
        geometry = self.geometry
        if isinstance(geometry, FilledGap):
            geometry = replace(geometry, gap_material=fn(geometry.gap_material))
        elif isinstance(geometry, FilmInVacuum):
            geometry = replace(geometry, film_material=fn(geometry.film_material))
        return replace(self, geometry=geometry, plate_material=fn(self.plate_material))


# ----- Results -----


@dataclass(frozen=True)
class PressureResult:
    pressure: float
    est_error: float
    tail_fraction: float = 0.0
    evaluations: int = 0
    chi_max: float = math.nan
    n_theta: int = 0
    n_chi: int = 0
    method: str = ""
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def magnitude(self) -> float:
        return abs(self.pressure)
