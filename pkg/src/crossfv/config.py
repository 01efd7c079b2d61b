"""
Run configuration: strict JSON parsing into model, mesh, time, initial
data, and output settings.

Unknown keys anywhere in the document are errors; a typo must fail before
any computation starts.  A configuration either names a registry preset or
spells out the model and initial data in full.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import mobility
from .initial import HarmonicProfile, HatProfile, IndicatorProfile, InitialData, Profile
from .kernels import KernelSpec
from .model import ModelParams
from .presets import get_preset


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass
class OutputConfig:
    directory: str = "out"
    run_id: str = "run"
    snapshot_times: tuple[float, ...] = ()
    figures: bool = True


@dataclass
class RunConfig:
    model: ModelParams
    initial: InitialData
    N: int
    T: float
    dt: float
    outputs: OutputConfig = field(default_factory=OutputConfig)
    experiment: str = "single"


_TOP_KEYS = {"preset", "model", "mesh", "time", "initial", "outputs", "experiment"}
_MODEL_KEYS = {"n", "A", "pi", "sigma", "kernels", "mobility", "hypothesis_mode"}
_KERNEL_KEYS = {"kind", "radius", "width", "amplitude", "table"}
_OUTPUT_KEYS = {"dir", "run_id", "snapshot_times", "figures"}
_EXPERIMENTS = {"single", "convergence", "localization", "segregation"}


def _check_keys(obj: dict, allowed: set, where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def parse_kernel(obj: dict) -> KernelSpec:
    _check_keys(obj, _KERNEL_KEYS, "kernel spec")
    kind = obj.get("kind")
    try:
        if kind == "dirac":
            return KernelSpec.dirac()
        if kind == "indicator":
            return KernelSpec.indicator(obj["radius"], obj.get("amplitude", 1.0))
        if kind == "triangle":
            return KernelSpec.triangle(obj["radius"], obj.get("amplitude", 1.0))
        if kind == "gaussian":
            return KernelSpec.gaussian(obj["width"], obj.get("amplitude", 1.0))
        if kind == "custom":
            return KernelSpec.custom(obj["table"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad kernel spec: {exc}") from exc
    raise ConfigError(f"unknown kernel kind {kind!r}")


def _parse_profile(obj: dict) -> Profile:
    kind = obj.get("kind")
    try:
        if kind == "indicator":
            _check_keys(obj, {"kind", "intervals", "height"}, "indicator profile")
            return IndicatorProfile(
                tuple(tuple(iv) for iv in obj["intervals"]), obj.get("height", 1.0)
            )
        if kind == "harmonic":
            _check_keys(obj, {"kind", "const", "cos_amp", "sin_amp", "freq"}, "harmonic profile")
            return HarmonicProfile(
                obj.get("const", 0.0),
                obj.get("cos_amp", 0.0),
                obj.get("sin_amp", 0.0),
                obj.get("freq", 1),
            )
        if kind == "hat":
            _check_keys(obj, {"kind", "center", "halfwidth", "height"}, "hat profile")
            return HatProfile(obj["center"], obj["halfwidth"], obj.get("height", 1.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad initial profile: {exc}") from exc
    raise ConfigError(f"unknown initial profile kind {kind!r}")


def _parse_model(obj: dict) -> ModelParams:
    _check_keys(obj, _MODEL_KEYS, "model")
    try:
        n = int(obj["n"])
        kernels_obj = obj.get("kernels", {"default": {"kind": "dirac"}})
        if "default" in kernels_obj:
            if set(kernels_obj) != {"default"}:
                raise ConfigError("kernels: give either 'default' or explicit 'i,j' pairs")
            spec = parse_kernel(kernels_obj["default"])
            kernels = {(i, j): spec for i in range(n) for j in range(n) if i != j}
        else:
            kernels = {}
            for key, val in kernels_obj.items():
                i, j = (int(s) for s in key.split(","))
                kernels[(i - 1, j - 1)] = parse_kernel(val)
        return ModelParams(
            n=n,
            A=np.array(obj["A"], dtype=float),
            pi=np.array(obj["pi"], dtype=float),
            sigma=float(obj.get("sigma", 0.0)),
            kernels=kernels,
            mobility_rule=obj.get("mobility", mobility.UPWIND),
            hypothesis_mode=obj.get("hypothesis_mode", "strict"),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad model section: {exc}") from exc


def parse_config(doc: dict) -> RunConfig:
    """Validate and build a RunConfig from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration document must be a JSON object")
    _check_keys(doc, _TOP_KEYS, "top level")

    preset = get_preset(doc["preset"]) if "preset" in doc else None
    if preset is not None:
        if preset.kernel is None:
            raise ConfigError(
                f"preset {preset.name} is a kernel family; use the localization study driver"
            )
        model = preset.model()
        initial = preset.initial
        N, T, dt = preset.N, preset.T, preset.dt
    else:
        if "model" not in doc or "initial" not in doc:
            raise ConfigError("configuration needs either a preset or model+initial")
        model = _parse_model(doc["model"])
        init_obj = doc["initial"]
        if "preset" in init_obj:
            raise ConfigError("initial presets are selected via the top-level preset key")
        _check_keys(init_obj, {"species"}, "initial")
        profiles = tuple(_parse_profile(p) for p in init_obj["species"])
        if len(profiles) != model.n:
            raise ConfigError(
                f"{len(profiles)} initial profiles for {model.n} species"
            )
        initial = InitialData(profiles)
        N, T, dt = 0, 0.0, 0.0

    if "mesh" in doc:
        _check_keys(doc["mesh"], {"N"}, "mesh")
        N = int(doc["mesh"]["N"])
    if "time" in doc:
        _check_keys(doc["time"], {"T", "dt"}, "time")
        T = float(doc["time"].get("T", T))
        dt = float(doc["time"].get("dt", dt))
    if N < 3:
        raise ConfigError(f"mesh N={N} invalid (need N >= 3)")
    if T <= 0.0 or dt <= 0.0:
        raise ConfigError(f"time grid T={T}, dt={dt} invalid")

    outputs = OutputConfig()
    if "outputs" in doc:
        obj = doc["outputs"]
        _check_keys(obj, _OUTPUT_KEYS, "outputs")
        outputs = OutputConfig(
            directory=obj.get("dir", "out"),
            run_id=obj.get("run_id", "run"),
            snapshot_times=tuple(float(t) for t in obj.get("snapshot_times", ())),
            figures=bool(obj.get("figures", True)),
        )

    experiment = doc.get("experiment", "single")
    if isinstance(experiment, dict):
        _check_keys(experiment, {"kind"}, "experiment")
        experiment = experiment["kind"]
    if experiment not in _EXPERIMENTS:
        raise ConfigError(f"unknown experiment kind {experiment!r}")

    return RunConfig(
        model=model, initial=initial, N=N, T=T, dt=dt, outputs=outputs, experiment=experiment
    )


def kernel_to_dict(spec: KernelSpec) -> dict:
    if spec.kind == "dirac":
        return {"kind": "dirac"}
    if spec.kind == "indicator":
        return {"kind": "indicator", "radius": spec.radius, "amplitude": spec.amplitude}
    if spec.kind == "triangle":
        return {"kind": "triangle", "radius": spec.radius, "amplitude": spec.amplitude}
    if spec.kind == "gaussian":
        return {"kind": "gaussian", "width": spec.width, "amplitude": spec.amplitude}
    return {"kind": "custom", "table": list(spec.table)}


def profile_to_dict(profile: Profile) -> dict:
    if isinstance(profile, IndicatorProfile):
        return {
            "kind": "indicator",
            "intervals": [list(iv) for iv in profile.intervals],
            "height": profile.height,
        }
    if isinstance(profile, HarmonicProfile):
        return {
            "kind": "harmonic",
            "const": profile.const,
            "cos_amp": profile.cos_amp,
            "sin_amp": profile.sin_amp,
            "freq": profile.freq,
        }
    if isinstance(profile, HatProfile):
        return {
            "kind": "hat",
            "center": profile.center,
            "halfwidth": profile.halfwidth,
            "height": profile.height,
        }
    raise ConfigError(f"cannot serialize profile {type(profile).__name__}")


def preset_to_config(name: str, alpha: float | None = None) -> dict:
    """Expand a registry preset into a fully explicit configuration dict.

    Localization presets need alpha to pin the kernel from the family.
    """
    preset = get_preset(name)
    if preset.kernel is not None:
        kernel = preset.kernel
    else:
        if alpha is None:
            raise ConfigError(f"preset {name} is a kernel family; pass alpha")
        kernel = preset.kernel_family(alpha)
    model = preset.model(kernel)
    return {
        "model": {
            "n": model.n,
            "A": [list(row) for row in model.A],
            "pi": list(model.pi),
            "sigma": model.sigma,
            "kernels": {"default": kernel_to_dict(kernel)},
            "mobility": model.mobility_rule,
            "hypothesis_mode": model.hypothesis_mode,
        },
        "mesh": {"N": preset.N},
        "time": {"T": preset.T, "dt": preset.dt},
        "initial": {"species": [profile_to_dict(p) for p in preset.initial.profiles]},
        "outputs": {"run_id": name},
        "experiment": "single",
    }


def load_config(path) -> RunConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(doc)
