# helpers/run_schema.py

"""
Structured run configuration.

The config parser turns a run file into plain dicts; these models validate
them and build the engine objects (Material, Configuration,
QuadratureSettings).
"""

from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core_logic.errors import ConfigError, GapZeroError, InvalidParameterError
from core_logic.permittivity import Material, OscillatorTerm, PermittivityModel
from core_logic.quadrature import QuadratureSettings
from core_logic.thermal import ZeroFrequency
from core_logic.types import (
    ConductiveSheets,
    Configuration,
    FilledGap,
    FilmInVacuum,
    HalfSpaces,
    IdealCasimir,
    SlabSlab,
)

from .materials import DEFAULT_MATERIAL_NAME, get_material


class _Block(BaseModel):
    # typos in a run file are errors, not silently ignored keys
    model_config = ConfigDict(extra="forbid")


class OscillatorSpec(_Block):
    """One bound Lorentz term."""
    k_p: float = Field(..., ge=0, description="Oscillator strength wavenumber (1/nm).")
    k_r: float = Field(..., gt=0, description="Resonance wavenumber (1/nm).")
    k_c: float = Field(0.0, ge=0, description="Damping wavenumber (1/nm).")

    def to_term(self) -> OscillatorTerm:
        return OscillatorTerm(k_p=self.k_p, k_r=self.k_r, k_c=self.k_c)


class DrudeSpec(_Block):
    """Free-carrier term."""
    k_p: float = Field(..., ge=0, description="Plasma wavenumber (1/nm).")
    k_c: float = Field(0.0, ge=0, description="Damping wavenumber (1/nm).")
    k_s: Optional[float] = Field(
        None,
        gt=0,
        description="Binding wavenumber of the bound variant; setting it makes eps(0) finite.",
    )
    bound: bool = Field(
        False,
        description="Use the bound variant; k_s defaults to k_c when not given.",
    )

    def resolved_k_s(self) -> Optional[float]:
        if self.k_s is not None:
            return self.k_s
        if self.bound:
            return self.k_c
        return None


class MaterialSpec(_Block):
    """A material block: an optional registry preset plus explicit terms."""
    preset: Optional[str] = Field(
        None,
        description="Registry name used as the starting point (see helpers.materials).",
    )
    model: PermittivityModel = Field(
        PermittivityModel.SMALL_DENSITY,
        description="Permittivity model: small_density or clausius_mossotti.",
    )
    oscillators: List[OscillatorSpec] = Field(
        default_factory=list,
        description="Bound terms; when given they replace the preset's bound terms.",
    )
    drude: Optional[DrudeSpec] = Field(
        None,
        description="Free-carrier term; when given it replaces the preset's.",
    )

    @field_validator("preset")
    @classmethod
    def _known_preset(cls, value: Optional[str]) -> Optional[str]:
        if value is not None:
            get_material(value)
        return value

    def to_material(self) -> Material:
        base = get_material(self.preset) if self.preset else None
        bound_terms = tuple(o.to_term() for o in self.oscillators)
        if not bound_terms and base is not None:
            bound_terms = base.bound_terms

        drude, k_s = None, None
        if self.drude is not None:
            drude = OscillatorTerm(k_p=self.drude.k_p, k_r=0.0, k_c=self.drude.k_c)
            k_s = self.drude.resolved_k_s()
        elif base is not None:
            drude, k_s = base.drude, base.k_s

        name = base.name if base is not None and not self.oscillators and self.drude is None else "custom"
        if k_s is not None and not k_s > 0:
            raise ConfigError("bound free-carrier term needs k_s > 0 (k_c is zero, set k_s explicitly)")
        return Material(bound_terms=bound_terms, drude=drude, k_s=k_s, model=self.model, name=name)


GeometryType = Literal["ideal", "slabs", "halfspaces", "filled_gap", "film", "sheets"]


class GeometrySpec(_Block):
    type: GeometryType = Field(..., description="Plate geometry.")
    d: float = Field(..., description="Gap width (nm).")
    t: Optional[float] = Field(None, description="Plate thickness (nm) for slabs and filled gaps.")
    t1: Optional[float] = Field(None, description="First slab thickness (nm); alias of t.")
    t2: Optional[float] = Field(None, description="Second slab thickness (nm); must equal t1.")
    zeta: Optional[float] = Field(None, description="Normalized sheet conductivity.")

    @model_validator(mode="after")
    def _required_keys(self) -> "GeometrySpec":
        if self.type in ("slabs", "filled_gap") and self.thickness is None:
            raise ValueError(f"geometry '{self.type}' needs a thickness t")
        if self.type == "sheets" and self.zeta is None:
            raise ValueError("geometry 'sheets' needs zeta")
        return self

    @property
    def thickness(self) -> Optional[float]:
        return self.t if self.t is not None else self.t1


class QuadratureSpec(_Block):
    n_theta: Optional[int] = Field(None, description="Angular node budget.")
    n_chi: Optional[int] = Field(None, description="Radial node budget.")
    theta0: Optional[float] = Field(None, description="Width of the small-angle strip (rad).")
    rel_tol: Optional[float] = Field(None, description="Relative tolerance of the tail and refinement checks.")

    def overrides(self) -> dict:
        return self.model_dump(exclude_none=True)


class ThermalSpec(_Block):
    T: Optional[float] = Field(None, ge=0, description="Temperature (K); absent or 0 means T = 0.")
    zero_frequency: ZeroFrequency = Field(
        ZeroFrequency.STATIC,
        description="Treatment of the n = 0 Matsubara term: static, drude_bound or omit.",
    )
    method: Literal["matsubara", "high_t", "low_t"] = Field(
        "matsubara",
        description="Finite-T method: full Matsubara sum, classical limit or low-T correction.",
    )


class SweepSpec(_Block):
    variable: Literal["d", "t", "T"] = Field(..., description="Swept quantity.")
    start: float = Field(..., gt=0, description="First value.")
    stop: float = Field(..., gt=0, description="Last value.")
    points: int = Field(..., ge=1, description="Number of sweep points (endpoints included).")
    spacing: Literal["linear", "log"] = Field("linear", description="Point spacing.")

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start])
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


class OutputSpec(_Block):
    path: Optional[str] = Field(None, description="CSV destination of a sweep.")


class RunConfig(_Block):
    """Everything one `compute` or `sweep` run needs."""
    material: MaterialSpec = Field(
        default_factory=lambda: MaterialSpec(preset=DEFAULT_MATERIAL_NAME),
        description="Plate material.",
    )
    gap_material: Optional[MaterialSpec] = Field(
        None,
        description="Gap filler (filled_gap) or film material (film).",
    )
    geometry: GeometrySpec = Field(..., description="Plate geometry and gap width.")
    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec, description="Quadrature overrides.")
    thermal: ThermalSpec = Field(default_factory=ThermalSpec, description="Temperature settings.")
    sweep: Optional[SweepSpec] = Field(None, description="Sweep block; required by the sweep command.")
    output: OutputSpec = Field(default_factory=OutputSpec, description="Output settings.")

    @model_validator(mode="after")
    def _consistent(self) -> "RunConfig":
        if self.geometry.type in ("filled_gap", "film") and self.gap_material is None:
            raise ValueError(f"geometry '{self.geometry.type}' needs a [gap_material] block")
        if self.sweep is not None:
            if self.sweep.variable == "t" and self.geometry.type not in ("slabs", "filled_gap"):
                raise ValueError(f"a thickness sweep needs slabs or filled_gap, not '{self.geometry.type}'")
        # out-of-range values are configuration errors; a zero gap is left to the
        # pressure computation, which reports the divergence
        try:
            self.to_settings()
            self.to_configuration()
        except InvalidParameterError as exc:
            raise ValueError(str(exc)) from exc
        except GapZeroError:
            pass
        return self

    # ----- Engine objects -----

    @property
    def temperature(self) -> float:
        return self.thermal.T or 0.0

    def to_configuration(self) -> Configuration:
        g = self.geometry
        plate = self.material.to_material()
        if g.type == "ideal":
            geometry = IdealCasimir()
        elif g.type == "slabs":
            geometry = SlabSlab(t1=g.thickness, t2=g.t2)
        elif g.type == "halfspaces":
            geometry = HalfSpaces()
        elif g.type == "filled_gap":
            geometry = FilledGap(t=g.thickness, gap_material=self.gap_material.to_material())
        elif g.type == "film":
            geometry = FilmInVacuum(film_material=self.gap_material.to_material())
        else:
            geometry = ConductiveSheets(zeta=g.zeta)
        return Configuration(geometry=geometry, d=g.d, plate_material=plate)

    def to_settings(self, workers: Optional[int] = None) -> QuadratureSettings:
        overrides = self.quadrature.overrides()
        if workers is not None:
            overrides["workers"] = workers
        return QuadratureSettings().with_overrides(**overrides)

    def with_variable(self, variable: str, value: float) -> "RunConfig":
        """Copy with one sweep variable set."""
        if variable == "d":
            return self.model_copy(update={"geometry": self.geometry.model_copy(update={"d": value})})
        if variable == "t":
            geometry = self.geometry.model_copy(update={"t": value, "t1": None, "t2": None})
            return self.model_copy(update={"geometry": geometry})
        if variable == "T":
            return self.model_copy(update={"thermal": self.thermal.model_copy(update={"T": value})})
        raise ConfigError(f"unknown sweep variable {variable!r}")
