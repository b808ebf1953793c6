"""Grids, sequence parameters, spectral bases and test-function families."""

import itertools
import math
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator


class QuarterPlaneGrid(BaseModel):
    """Graded tensor grid on (0, X) x (0, Y) in the (x_n, y) plane."""
    X: float = Field(..., gt=0.0)
    Y: float = Field(..., gt=0.0)
    nx: int = Field(..., ge=2)
    ny: int = Field(..., ge=2)
    grading_exponent: float = Field(default=1.0, ge=1.0)

    class Config:
        frozen = True

    def x_nodes(self) -> np.ndarray:
        return self.X * (np.arange(self.nx + 1) / self.nx) ** self.grading_exponent

    def y_nodes(self) -> np.ndarray:
        return self.Y * (np.arange(self.ny + 1) / self.ny) ** self.grading_exponent


class SequenceParams(BaseModel):
    """Regularization and cutoff parameters of an extremizing sequence."""
    epsilon: float = Field(..., gt=0.0)
    delta: float = Field(default=1.0, gt=0.0, description="Cutoff plateau radius")
    cutoff_smoothness: int = Field(default=1, ge=1, description="Transition width is delta / smoothness")

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check(self) -> "SequenceParams":
        if not self.epsilon < self.delta:
            raise ValueError(f"epsilon ({self.epsilon}) must be smaller than delta ({self.delta})")
        return self


class SpectralBasis(BaseModel):
    """Finite sine expansion on an interval or a box with Dirichlet conditions."""
    lengths: List[float] = Field(..., min_length=1, max_length=3, description="Edge lengths")
    modes: List[List[int]] = Field(..., description="Multi-index of each mode, entries >= 1")
    coefficients: List[float] = Field(..., description="Coefficient of each mode")

    @model_validator(mode="after")
    def _check(self) -> "SpectralBasis":
        if any(length <= 0 for length in self.lengths):
            raise ValueError("Edge lengths must be positive")
        if len(self.modes) != len(self.coefficients):
            raise ValueError("modes and coefficients differ in length")
        for mode in self.modes:
            if len(mode) != len(self.lengths) or min(mode) < 1:
                raise ValueError(f"Invalid mode {mode}")
        return self

    @classmethod
    def interval(cls, length: float, coefficients: Sequence[float]) -> "SpectralBasis":
        return cls(lengths=[length], modes=[[i + 1] for i in range(len(coefficients))],
                   coefficients=list(coefficients))

    @classmethod
    def box(cls, lengths: Sequence[float], coefficients: np.ndarray) -> "SpectralBasis":
        """Box basis from a coefficient array indexed by (i1 - 1, i2 - 1, ...)."""
        coefficients = np.asarray(coefficients, dtype=float)
        if coefficients.ndim != len(lengths):
            raise ValueError("Coefficient array rank must match the number of edges")
        modes, coeffs = [], []
        for index in itertools.product(*(range(m) for m in coefficients.shape)):
            modes.append([i + 1 for i in index])
            coeffs.append(float(coefficients[index]))
        return cls(lengths=list(lengths), modes=modes, coefficients=coeffs)

    @property
    def dimension(self) -> int:
        return len(self.lengths)

    @property
    def domain_length(self) -> float:
        return self.lengths[0]

    @property
    def mode_count(self) -> int:
        return len(self.modes)

    def eigenvalues(self) -> np.ndarray:
        modes = np.asarray(self.modes, dtype=float)
        lengths = np.asarray(self.lengths, dtype=float)
        return np.sum((modes * math.pi / lengths) ** 2, axis=1)

    def rescaled(self, factor: float) -> "SpectralBasis":
        """Same coefficients on the domain stretched by factor."""
        return SpectralBasis(lengths=[length * factor for length in self.lengths],
                             modes=self.modes, coefficients=self.coefficients)

    def evaluate(self, *coords: np.ndarray) -> np.ndarray:
        """f at points of the domain (one array per coordinate)."""
        coords = [np.asarray(c, dtype=float) for c in coords]
        total = np.zeros(np.broadcast(*coords).shape)
        for mode, c in zip(self.modes, self.coefficients):
            if c == 0.0:
                continue
            term = np.full(total.shape, c)
            for k, (x, length) in enumerate(zip(coords, self.lengths)):
                term = term * math.sqrt(2.0 / length) * np.sin(mode[k] * math.pi * x / length)
            total = total + term
        return total


class TestFamily(str, Enum):
    """Parametrized test-function families."""
    CUTOFF_I = "cutoff_I"
    CUTOFF_II = "cutoff_II"
    GAUSSIAN_BUMP = "gaussian_bump"
    PHI_I_BUMP = "phi_I_bump"
    GAUSSIAN = "gaussian"
    SINE_SERIES_RANDOM = "sine_series_random"


class TestFunctionSpec(BaseModel):
    """One member of a test-function family.

    Parameters per family:
        gaussian_bump / phi_I_bump: c0, c1 (center, last coordinate is the
            normal one), width (support radius)
        gaussian: center, sigma
        sine_series_random: length, modes (coefficients drawn from seed)
        cutoff_I / cutoff_II: epsilon, delta, smoothness
    """
    __test__ = False

    family: TestFamily
    params: Dict[str, float] = Field(default_factory=dict)
    seed: int = Field(default=0)

    class Config:
        use_enum_values = True

    def param(self, name: str, default: Optional[float] = None) -> float:
        if name in self.params:
            return float(self.params[name])
        if default is None:
            raise ValueError(f"Family {self.family} needs parameter '{name}'")
        return default


TestFamily.__test__ = False
