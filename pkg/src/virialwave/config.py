"""Run configuration: a single JSON-compatible document, strictly validated.

Unknown keys are rejected at every level, the schema is versioned, and every
failure message names the offending key.  The scenario registry maps initial
condition tags to field builders; `virialwave --help` prints one line per tag.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .spectral import PeriodicGrid, SurfaceField, field_from_modes
from .dtn import Depth
from .dynamics import SurfaceState, cfl_limit
from .diagnostics import IDENTITIES, applicable_identities
from .standing import StandingWaveExpansion, eval_surface

__all__ = ["SimConfig", "SCHEMA_VERSION", "INITIAL_CONDITIONS", "build_initial_state"]

SCHEMA_VERSION = 1


def _reject_unknown(d: dict, allowed, where: str):
    unknown = set(d) - set(allowed)
    if unknown:
        raise ValueError(f"unknown key(s) {sorted(unknown)} in {where}")


def _parse_depth(d: dict) -> Depth:
    if not isinstance(d, dict) or "kind" not in d:
        raise ValueError("config key 'depth' must be an object with a 'kind'")
    if d["kind"] == "finite":
        _reject_unknown(d, {"kind", "h"}, "depth")
        return Depth.finite(float(d["h"]))
    if d["kind"] == "infinite":
        _reject_unknown(d, {"kind", "h_eff"}, "depth")
        return Depth.infinite_depth(float(d.get("h_eff", 10.0)))
    raise ValueError(f"depth kind must be 'finite' or 'infinite', got {d['kind']!r}")


def _depth_dict(depth: Depth) -> dict:
    if depth.infinite:
        return {"kind": "infinite", "h_eff": depth.h}
    return {"kind": "finite", "h": depth.h}


# -- initial condition registry -------------------------------------------------

def _ic_rest(params, grid, config):
    return grid.zero_field(), grid.zero_field()


def _ic_linear_standing(params, grid, config):
    eps, k = float(params["eps"]), int(params.get("k", 1))
    return field_from_modes(grid, cosines={k: eps}), grid.zero_field()


def _ic_standing_wave_expansion(params, grid, config):
    if not config.depth.infinite or config.g != 1.0:
        raise ValueError("initial_condition 'standing_wave_expansion' needs "
                         "infinite depth and g = 1")
    exp = StandingWaveExpansion(epsilon=float(params["eps"]))
    return eval_surface(exp, 0.0, grid)


def _ic_stokes(params, grid, config):
    # third-order deep-water progressive wave: surface harmonics
    # a cos(kx) + (k a^2/2) cos 2kx + (3 k^2 a^3/8) cos 3kx with the potential
    # (a w / k) e^{k eta} sin(kx), w = sqrt(g k) (1 + (ka)^2/2)
    if not config.depth.infinite:
        raise ValueError("initial_condition 'stokes' uses the deep-water expansion; "
                         "depth must be infinite")
    if config.g <= 0:
        raise ValueError("initial_condition 'stokes' needs g > 0")
    a, k = float(params["eps"]), int(params.get("k", 1))
    x = grid.nodes
    ka = k * a
    eta = a * (np.cos(k * x) + 0.5 * ka * np.cos(2 * k * x)
               + 0.375 * ka ** 2 * np.cos(3 * k * x))
    eta -= np.mean(eta)
    w = np.sqrt(config.g * k) * (1.0 + 0.5 * ka ** 2)
    psi = (a * w / k) * np.exp(k * eta) * np.sin(k * x)
    return SurfaceField(grid, eta), SurfaceField(grid, psi)


def _ic_custom(params, grid, config):
    def modes(d):
        return {int(k): float(v) for k, v in (d or {}).items()}
    eta = field_from_modes(grid, cosines=modes(params.get("eta_cos")),
                           sines=modes(params.get("eta_sin")))
    psi = field_from_modes(grid, cosines=modes(params.get("psi_cos")),
                           sines=modes(params.get("psi_sin")))
    return SurfaceField(grid, eta.values - np.mean(eta.values)), psi


INITIAL_CONDITIONS = {
    "rest": (_ic_rest, set(), "flat surface at rest: eta = 0, psi = 0"),
    "linear_standing": (_ic_linear_standing, {"eps", "k"},
                        "eta = eps cos(kx), psi = 0 (linear standing wave seed)"),
    "standing_wave_expansion": (_ic_standing_wave_expansion, {"eps"},
                                "third-order standing-wave expansion at phase 0 "
                                "(infinite depth, g = 1)"),
    "stokes": (_ic_stokes, {"eps", "k"},
               "third-order deep-water progressive (Stokes-type) wave"),
    "custom": (_ic_custom, {"eta_cos", "eta_sin", "psi_cos", "psi_sin"},
               "explicit cosine/sine mode tables for eta and psi"),
}

_TOP_KEYS = {"schema_version", "n_x", "n_z", "depth", "g", "dt", "t_end",
             "output_stride", "initial_condition", "filter", "identity_set",
             "seed", "dealias", "c_cfl", "stencil_order"}


@dataclass(frozen=True)
class SimConfig:
    n_x: int
    n_z: int
    depth: Depth
    g: float
    dt: float
    t_end: float
    output_stride: float
    initial_condition: dict
    filter_strength: Optional[float] = None
    identity_set: tuple = ()
    seed: int = 0
    dealias: bool = True
    c_cfl: float = 0.5
    stencil_order: int = 4

    def __post_init__(self):
        grid = PeriodicGrid(self.n_x)
        if self.n_z < 8:
            raise ValueError("config key 'n_z' must be >= 8")
        if self.dt <= 0 or self.t_end <= 0:
            raise ValueError("config keys 'dt' and 't_end' must be positive")
        lim = cfl_limit(grid, self.g, self.c_cfl)
        if self.dt > lim * (1 + 1e-12):
            raise ValueError(f"config key 'dt' = {self.dt:g} violates the CFL guard "
                             f"{lim:g} at n_x = {self.n_x}, g = {self.g:g}")
        ratio = self.output_stride / self.dt
        if abs(ratio - round(ratio)) > 1e-9 or ratio < 1 - 1e-9:
            raise ValueError("config key 'output_stride' must be a positive "
                             "integer multiple of 'dt'")
        if self.g < 0:
            if self.filter_strength is None:
                raise ValueError("config: g < 0 requires filter 'exponential' "
                                 "(the unfiltered problem is ill-posed)")
            if self.t_end > 1.0 + 1e-12:
                raise ValueError("config: g < 0 requires t_end <= 1")
        kind = self.initial_condition.get("kind")
        if kind not in INITIAL_CONDITIONS:
            raise ValueError(f"initial_condition kind {kind!r} is not one of "
                             f"{sorted(INITIAL_CONDITIONS)}")
        _, allowed, _ = INITIAL_CONDITIONS[kind]
        _reject_unknown(self.initial_condition, allowed | {"kind"}, "initial_condition")
        if kind == "standing_wave_expansion" and (not self.depth.infinite or self.g != 1.0):
            raise ValueError("initial_condition 'standing_wave_expansion' needs "
                             "infinite depth and g = 1")
        if kind == "stokes" and (not self.depth.infinite or self.g <= 0):
            raise ValueError("initial_condition 'stokes' uses the deep-water "
                             "expansion; depth must be infinite and g > 0")
        if self.stencil_order not in (2, 4):
            raise ValueError("config key 'stencil_order' must be 2 or 4")
        ok = applicable_identities(self.depth, self.g)
        for name in self.identity_set:
            if name not in IDENTITIES:
                raise ValueError(f"identity_set entry {name!r} is not a known "
                                 f"identity (see docs/identities.md)")
            if name not in ok:
                raise ValueError(f"identity_set entry {name!r} does not apply to "
                                 f"depth {self.depth.label()}, g = {self.g:g}")

    @property
    def grid(self) -> PeriodicGrid:
        return PeriodicGrid(self.n_x)

    @staticmethod
    def from_dict(d: dict) -> "SimConfig":
        if not isinstance(d, dict):
            raise ValueError("config must be a JSON object")
        _reject_unknown(d, _TOP_KEYS, "config")
        version = d.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ValueError(f"config schema_version {version} is not supported "
                             f"(this build reads version {SCHEMA_VERSION})")
        for key in ("n_x", "n_z", "depth", "g", "dt", "t_end", "output_stride",
                    "initial_condition"):
            if key not in d:
                raise ValueError(f"config key {key!r} is required")
        filt = d.get("filter", {"kind": "off"})
        _reject_unknown(filt, {"kind", "strength"}, "filter")
        if filt.get("kind") == "off":
            strength = None
        elif filt.get("kind") == "exponential":
            strength = float(filt.get("strength", 36.0))
        else:
            raise ValueError(f"filter kind must be 'off' or 'exponential', "
                             f"got {filt.get('kind')!r}")
        ids = d.get("identity_set", [])
        depth = _parse_depth(d["depth"])
        g = float(d["g"])
        if ids == "all":
            ids = applicable_identities(depth, g)
        return SimConfig(
            n_x=int(d["n_x"]), n_z=int(d["n_z"]), depth=depth, g=g,
            dt=float(d["dt"]), t_end=float(d["t_end"]),
            output_stride=float(d["output_stride"]),
            initial_condition=dict(d["initial_condition"]),
            filter_strength=strength, identity_set=tuple(ids),
            seed=int(d.get("seed", 0)), dealias=bool(d.get("dealias", True)),
            c_cfl=float(d.get("c_cfl", 0.5)),
            stencil_order=int(d.get("stencil_order", 4)))

    def to_dict(self) -> dict:
        filt = {"kind": "off"} if self.filter_strength is None else \
            {"kind": "exponential", "strength": self.filter_strength}
        return {
            "schema_version": SCHEMA_VERSION, "n_x": self.n_x, "n_z": self.n_z,
            "depth": _depth_dict(self.depth), "g": self.g, "dt": self.dt,
            "t_end": self.t_end, "output_stride": self.output_stride,
            "initial_condition": dict(self.initial_condition), "filter": filt,
            "identity_set": list(self.identity_set), "seed": self.seed,
            "dealias": self.dealias, "c_cfl": self.c_cfl,
            "stencil_order": self.stencil_order,
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]

    def scaled(self, level: int) -> "SimConfig":
        """Refinement level for convergence studies: halve (dt, 1/n_x, 1/n_z)."""
        f = 2 ** level
        return SimConfig(
            n_x=self.n_x * f, n_z=self.n_z * f, depth=self.depth, g=self.g,
            dt=self.dt / f, t_end=self.t_end, output_stride=self.output_stride / f,
            initial_condition=dict(self.initial_condition),
            filter_strength=self.filter_strength, identity_set=self.identity_set,
            seed=self.seed, dealias=self.dealias, c_cfl=self.c_cfl,
            stencil_order=self.stencil_order)


def build_initial_state(config: SimConfig) -> SurfaceState:
    grid = config.grid
    kind = config.initial_condition["kind"]
    builder, _, _ = INITIAL_CONDITIONS[kind]
    eta, psi = builder(config.initial_condition, grid, config)
    return SurfaceState(eta=eta, psi=psi, t=0.0, g=config.g, depth=config.depth)
