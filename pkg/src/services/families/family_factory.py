"""
Family Factory - turns TestFunctionSpecs into evaluable fields, spectral bases
and sequence parameters, and draws seeded random members for scans.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from ...models.geometry import SequenceParams, SpectralBasis, TestFamily, TestFunctionSpec
from ...models.order import Order
from ...utils.error_handling import DomainError
from ..base_service import BaseService
from .fields import BumpField, CutoffField, GaussianField, PhiBumpField

DEFAULT_WIDTH_RANGE = (0.1, 0.5)


class FamilyFactory(BaseService):
    """
    Test-function builder.

    Responsibilities:
    - Build bump, phi-I bump, Gaussian and cutoff fields from specs
    - Expand sine_series_random specs into SpectralBases
    - Draw reproducible random members (per seed) for property scans
    """

    def __init__(self, profile_engine=None, settings=None):
        super().__init__("FamilyFactory", settings)
        self._profile_engine = profile_engine

    @property
    def profile_engine(self):
        if self._profile_engine is None:
            from ..profiles import ProfileEngine
            self._profile_engine = ProfileEngine(self.settings)
        return self._profile_engine

    def build(self, spec: TestFunctionSpec, s: Optional[Order] = None, dimension: int = 2):
        """
        Evaluable field for a spec.

        Args:
            spec: family member
            s: order, needed by phi_I_bump and the cutoff families
            dimension: 1 or 2 for bumps (a 1D bump is centered at 'center')

        Raises:
            DomainError: when the family has no field form (sine_series_random,
                cutoff_II) or s is missing
        """
        family = TestFamily(spec.family)
        if family == TestFamily.GAUSSIAN_BUMP:
            if dimension == 1:
                return BumpField((spec.param("center", spec.params.get("c1")),), spec.param("width", 0.3))
            return BumpField((spec.param("c0"), spec.param("c1")), spec.param("width", 0.3))
        if family == TestFamily.GAUSSIAN:
            return GaussianField(spec.param("center", 0.0), spec.param("sigma", 1.0))
        if s is None:
            raise DomainError(f"Family {family.value} needs the order s")
        if family == TestFamily.PHI_I_BUMP:
            return PhiBumpField((spec.param("c0", 1.0), spec.param("c1", 0.0)), spec.param("width", 0.5),
                                self.profile_engine, s)
        if family == TestFamily.CUTOFF_I:
            p = self.sequence_params(spec)
            return CutoffField(self.profile_engine, s, p.epsilon, p.delta, p.cutoff_smoothness)
        raise DomainError(f"Family {family.value} has no pointwise field")

    def sequence_params(self, spec: TestFunctionSpec) -> SequenceParams:
        """epsilon, delta and smoothness of a cutoff family member."""
        family = TestFamily(spec.family)
        if family not in (TestFamily.CUTOFF_I, TestFamily.CUTOFF_II):
            raise DomainError(f"Family {family.value} is not a cutoff sequence")
        return SequenceParams(
            epsilon=spec.param("epsilon"),
            delta=spec.param("delta", 1.0),
            cutoff_smoothness=int(spec.param("smoothness", 1)),
        )

    def spectral_basis(self, spec: TestFunctionSpec) -> SpectralBasis:
        """
        Sine expansion with coefficients uniform(-1, 1) * i^-2 drawn from the
        seed (box: (i1 i2)^-2). Uses 'length', optional 'length2' and 'modes'.
        """
        if TestFamily(spec.family) != TestFamily.SINE_SERIES_RANDOM:
            raise DomainError(f"Family {spec.family} is not a sine series")
        rng = np.random.default_rng(spec.seed)
        modes = int(spec.param("modes", float(self.settings.spectral_modes)))
        length = spec.param("length", np.pi)
        index = np.arange(1, modes + 1, dtype=float)
        if "length2" in spec.params:
            decay = np.outer(index, index) ** -2.0
            coefficients = rng.uniform(-1.0, 1.0, size=(modes, modes)) * decay
            return SpectralBasis.box([length, spec.param("length2")], coefficients)
        coefficients = rng.uniform(-1.0, 1.0, size=modes) * index ** -2.0
        return SpectralBasis.interval(length, coefficients)

    def random_bumps(
        self,
        count: int,
        seed: int,
        c0_range: Tuple[float, float],
        c1_range: Tuple[float, float],
        width_range: Tuple[float, float] = DEFAULT_WIDTH_RANGE,
        family: TestFamily = TestFamily.GAUSSIAN_BUMP,
    ) -> List[TestFunctionSpec]:
        """Bumps with centers and widths drawn uniformly from the given ranges."""
        rng = np.random.default_rng(seed)
        specs = []
        for k in range(count):
            c0, c1 = rng.uniform(*c0_range), rng.uniform(*c1_range)
            width = rng.uniform(*width_range)
            specs.append(TestFunctionSpec(family=family, params={"c0": c0, "c1": c1, "width": width},
                                          seed=seed + k))
        return specs

    def random_sine_series(self, count: int, seed: int, length: float = np.pi,
                           modes: Optional[int] = None,
                           lengths: Optional[Sequence[float]] = None) -> List[SpectralBasis]:
        """count random sine expansions, seeds seed, seed + 1, ..."""
        params = {"length": float(length), "modes": float(modes or self.settings.spectral_modes)}
        if lengths is not None:
            params["length"], params["length2"] = float(lengths[0]), float(lengths[1])
        return [self.spectral_basis(TestFunctionSpec(family=TestFamily.SINE_SERIES_RANDOM,
                                                     params=params, seed=seed + k))
                for k in range(count)]
