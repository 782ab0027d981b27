"""Exact classical and delta-shock Riemann solutions of the isentropic Euler
equations with polytropic pressure ``p = rho**gamma``."""

__version__ = "0.1.0"

from .classical import ClassicalSolution, sample_classical, solve_classical
from .classify import (Brackets, CaseRow, ExistenceReport, Region, RegionLabel, brackets,
                       classify, delta_existence)
from .curves import CurveId, CurvePoint, eval_curve, sample_curve
from .delta import DeltaShockPath, EntropyInterval, construct, convexity, entropy_interval
from .errors import DomainError, NoDeltaShock, NoMeasureSolution
from .gas import GasLaw, GasState, RiemannData, eigenvalues, pressure, sound_speed
from .measure import (MeasureSolution, SampledProfile, SolutionPlan, sample_solution,
                      solve_measure, solve_singular)

__all__ = [
    "Brackets", "CaseRow", "ClassicalSolution", "CurveId", "CurvePoint", "DeltaShockPath",
    "DomainError", "EntropyInterval", "ExistenceReport", "GasLaw", "GasState", "MeasureSolution",
    "NoDeltaShock", "NoMeasureSolution", "Region", "RegionLabel", "RiemannData", "SampledProfile",
    "SolutionPlan", "brackets", "classify", "construct", "convexity", "delta_existence",
    "eigenvalues", "entropy_interval", "eval_curve", "pressure", "sample_classical",
    "sample_curve", "sample_solution", "solve_classical", "solve_measure", "solve_singular",
    "sound_speed",
]
