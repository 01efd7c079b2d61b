"""
Built-in test-case registry.

Presets 13-21 cover the convergence grid (three initial data times three
kernels, two species), NLTL2-NLTL7 the localization ladder (three
species, kernel families parameterized by the localization radius alpha),
and SEG2/SEG3 the segregation runs (sigma = 0, unit couplings, scaled
indicator kernel).  Parameter values are fixed by the registry; callers
only choose mesh scale and output paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import mobility
from .initial import HarmonicProfile, HatProfile, IndicatorProfile, InitialData
from .kernels import KernelSpec
from .model import ModelParams


@dataclass(frozen=True)
class Preset:
    name: str
    family: str  # "convergence" | "localization" | "segregation"
    description: str
    n: int
    A: tuple
    pi: tuple
    sigma: float
    initial: InitialData
    mobility_rule: str = mobility.UPWIND
    hypothesis_mode: str = "strict"
    kernel: KernelSpec | None = None
    kernel_family: Callable[[float], KernelSpec] | None = None
    N: int = 0  # default mesh at paper scale
    dt: float = 0.0
    T: float = 1.0

    def model(self, kernel: KernelSpec | None = None) -> ModelParams:
        spec = kernel if kernel is not None else self.kernel
        if spec is None:
            raise ValueError(f"preset {self.name} needs a kernel (alpha not chosen?)")
        return ModelParams.with_shared_kernel(
            n=self.n,
            A=np.array(self.A),
            pi=np.array(self.pi),
            sigma=self.sigma,
            kernel=spec,
            mobility_rule=self.mobility_rule,
            hypothesis_mode=self.hypothesis_mode,
        )

    def model_local(self) -> ModelParams:
        """Local reference variant: every cross-kernel replaced by a Dirac."""
        return self.model(KernelSpec.dirac())


_CONV_A = ((0.1251, 0.25), (1.0, 2.0))
_CONV_PI = (4.0, 1.0)

_LOC_A = ((0.5, 0.2, 0.125), (0.4, 1.0, 0.2), (0.25, 0.2, 1.0))
_LOC_PI = (4.0, 2.0, 2.0)


def _conv_initial(which: str) -> InitialData:
    if which == "nonsmooth":
        return InitialData(
            (
                IndicatorProfile(((0.25, 0.75),)),
                IndicatorProfile(((0.0, 0.25), (0.75, 1.0))),
            )
        )
    if which == "smooth":
        # cos(2 pi x) + 1 and sin(2 pi x - pi/2) + 1 = 1 - cos(2 pi x)
        return InitialData((HarmonicProfile(1.0, 1.0, 0.0), HarmonicProfile(1.0, -1.0, 0.0)))
    if which == "continuous":
        return InitialData(
            (HatProfile(center=0.5, halfwidth=0.5), HatProfile(center=0.0, halfwidth=0.5))
        )
    raise ValueError(which)


def _loc_initial(which: str) -> InitialData:
    if which == "nonsmooth":
        return InitialData(
            (
                IndicatorProfile(((3.0 / 6.0, 5.0 / 6.0),)),
                IndicatorProfile(((0.0, 1.0 / 6.0), (5.0 / 6.0, 1.0))),
                IndicatorProfile(((1.0 / 6.0, 3.0 / 6.0),)),
            )
        )
    if which == "smooth":
        return InitialData(
            (
                HarmonicProfile(1.0, 1.0, 0.0),
                HarmonicProfile(1.0, 0.0, 1.0),
                HarmonicProfile(1.0, 0.5, 0.5),
            )
        )
    raise ValueError(which)


_CONV_KERNELS = {
    "indicator": KernelSpec.indicator(0.3),
    "triangle": KernelSpec.triangle(0.3, amplitude=2.0),
    "gaussian": KernelSpec.gaussian(1e-3),
}

_LOC_FAMILIES = {
    "indicator": lambda alpha: KernelSpec.indicator(alpha, amplitude=0.5 / alpha),
    "triangle": lambda alpha: KernelSpec.triangle(alpha, amplitude=1.0 / alpha),
    "gaussian": lambda alpha: KernelSpec.gaussian(alpha),
}


def _build_registry() -> dict[str, Preset]:
    registry: dict[str, Preset] = {}

    conv_grid = {
        "13": ("nonsmooth", "indicator"),
        "14": ("smooth", "indicator"),
        "15": ("continuous", "indicator"),
        "16": ("nonsmooth", "triangle"),
        "17": ("smooth", "triangle"),
        "18": ("continuous", "triangle"),
        "19": ("nonsmooth", "gaussian"),
        "20": ("smooth", "gaussian"),
        "21": ("continuous", "gaussian"),
    }
    for name, (init_kind, kern_kind) in conv_grid.items():
        registry[name] = Preset(
            name=name,
            family="convergence",
            description=f"two-species convergence run, {init_kind} data, {kern_kind} kernel",
            n=2,
            A=_CONV_A,
            pi=_CONV_PI,
            sigma=1e-4,
            initial=_conv_initial(init_kind),
            # triangle/gaussian kernels exceed 1 pointwise, which makes the
            # pair matrices indefinite at fine meshes; only the indicator
            # column satisfies the coercivity hypothesis discretely
            hypothesis_mode="strict" if kern_kind == "indicator" else "warn",
            kernel=_CONV_KERNELS[kern_kind],
            N=32,
            dt=1.0 / 64.0,
            T=1.0,
        )

    loc_grid = {
        "NLTL2": ("nonsmooth", "indicator"),
        "NLTL3": ("smooth", "indicator"),
        "NLTL4": ("nonsmooth", "triangle"),
        "NLTL5": ("smooth", "triangle"),
        "NLTL6": ("nonsmooth", "gaussian"),
        "NLTL7": ("smooth", "gaussian"),
    }
    for name, (init_kind, kern_kind) in loc_grid.items():
        registry[name] = Preset(
            name=name,
            family="localization",
            description=f"three-species localization ladder, {init_kind} data, {kern_kind} family",
            n=3,
            A=_LOC_A,
            pi=_LOC_PI,
            sigma=1e-4,
            initial=_loc_initial(init_kind),
            # the localization families scale like 1/alpha, so the pair
            # matrices turn indefinite once alpha is small enough
            hypothesis_mode="warn",
            kernel_family=_LOC_FAMILIES[kern_kind],
            N=512,
            dt=1e-3,
            T=1.0,
        )

    seg_kernel = KernelSpec.indicator(0.1, amplitude=100.0)
    registry["SEG2"] = Preset(
        name="SEG2",
        family="segregation",
        description="two-species segregation, sigma = 0, scaled indicator kernel",
        n=2,
        A=((1.0, 1.0), (1.0, 1.0)),
        pi=(1.0, 1.0),
        sigma=0.0,
        initial=InitialData(
            (IndicatorProfile(((0.1, 0.4),)), IndicatorProfile(((0.6, 0.8),)))
        ),
        hypothesis_mode="warn",
        kernel=seg_kernel,
        N=512,
        dt=1e-4,
        T=0.2,
    )
    registry["SEG3"] = Preset(
        name="SEG3",
        family="segregation",
        description="three-species segregation, sigma = 0, scaled indicator kernel",
        n=3,
        A=tuple(tuple(1.0 for _ in range(3)) for _ in range(3)),
        pi=(1.0, 1.0, 1.0),
        sigma=0.0,
        initial=InitialData(
            (
                IndicatorProfile(((0.5, 0.6),)),
                IndicatorProfile(((0.8, 0.9),)),
                IndicatorProfile(((0.1, 0.2),)),
            )
        ),
        hypothesis_mode="warn",
        kernel=seg_kernel,
        N=512,
        dt=1e-4,
        T=0.2,
    )
    return registry


REGISTRY: dict[str, Preset] = _build_registry()


def get_preset(name: str) -> Preset:
    if name not in REGISTRY:
        raise KeyError(f"unknown test case {name!r}; see list-testcases")
    return REGISTRY[name]
