"""Config-driven command line front end.

Usage::

    twobosonwalk run.json [--verify] [--prefix out/run]

The config is JSON; see the README for the full schema. Exit codes: 0 on
success, 1 when an oracle verification fails, 2 for config errors, 3 for
unphysical states, 4 when the Bessel form is asked to go past its
wrap-around margin.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .correlation import CorrelationMatrix, gamma_bessel, gamma_family, gamma_general
from .errors import ConfigError, MarginError, PhysicalityError
from .io import load_density_file, write_csv, write_json
from .lattice import DECISION_TREE, Lattice, LatticeSpec, build_lattice, single_particle_matrix
from .observables import avg_distance, entropy_series
from .oracle import run_verification
from .propagator import WRAP_MARGIN, bessel_margin_ok, propagate_bessel, spectral_factory
from .states import (
    BeamParams,
    CoherenceFamilyParams,
    TwoBosonDensityMatrix,
    coherence_eta,
    density_from_beams,
    density_from_family,
    density_from_pure,
    pure_state,
)

__all__ = ["Scenario", "RunConfig", "parse_config", "run", "main"]

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_CONFIG, EXIT_PHYSICALITY, EXIT_MARGIN = 0, 1, 2, 3, 4


class Scenario(str, Enum):
    CORRELATE = "correlate"
    DISTANCE = "distance"
    ENTROPY = "entropy"
    VERIFY = "verify"
    SWEEP = "sweep"


STATE_KINDS = ("family", "beams", "pure", "densityfile")


@dataclass(frozen=True)
class RunConfig:
    lattice: LatticeSpec
    state_kind: str
    state: Any
    origin: int | None
    times: tuple[float, ...]
    scenario: Scenario
    eta_grid: tuple[float, ...] | None = None
    phi_grid: tuple[float, ...] | None = None
    cut: int | None = None
    method: str = "auto"
    prefix: str = "twobosonwalk"
    format: str = "csv"
    verify: dict = field(default_factory=lambda: {"num_sites": 6, "samples": 100, "seed": 20160101})
    resolved: dict = field(default_factory=dict, repr=False)


def _reject_unknown(section: dict, allowed: set[str], where: str) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{where} must be an object")
    extra = sorted(set(section) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(extra)}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    if not np.isfinite(value):
        raise ConfigError(f"{where} must be finite")
    return float(value)


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _grid(spec, where: str, *, increasing: bool) -> tuple[float, ...]:
    """Explicit list, or ``{"start", "stop", "count"}`` evenly spaced."""
    if isinstance(spec, dict):
        _reject_unknown(spec, {"start", "stop", "count"}, where)
        missing = {"start", "stop", "count"} - set(spec)
        if missing:
            raise ConfigError(f"{where} grid is missing {', '.join(sorted(missing))}")
        count = _integer(spec["count"], f"{where}.count")
        if count < 1:
            raise ConfigError(f"{where}.count must be >= 1")
        values = np.linspace(_number(spec["start"], where), _number(spec["stop"], where), count)
    elif isinstance(spec, list):
        values = np.array([_number(v, where) for v in spec])
    else:
        raise ConfigError(f"{where} must be a list or a start/stop/count object")
    if values.size == 0:
        raise ConfigError(f"{where} must not be empty")
    if increasing and np.any(np.diff(values) <= 0):
        raise ConfigError(f"{where} must be strictly increasing")
    return tuple(float(v) for v in values)


def _parse_lattice(sec: dict) -> tuple[LatticeSpec, dict]:
    _reject_unknown(sec, {"num_sites", "boundary", "coupling", "couplings", "onsite", "site_offset"}, "lattice")
    if "num_sites" not in sec:
        raise ConfigError("lattice.num_sites is required")
    if "coupling" in sec and "couplings" in sec:
        raise ConfigError("give either lattice.coupling (uniform) or lattice.couplings (per bond), not both")
    L = _integer(sec["num_sites"], "lattice.num_sites")
    couplings = sec.get("couplings", sec.get("coupling", 1.0))
    if isinstance(couplings, list):
        couplings = [_number(c, "lattice.couplings") for c in couplings]
    else:
        couplings = _number(couplings, "lattice.coupling")
    onsite = sec.get("onsite", DECISION_TREE)
    if isinstance(onsite, dict):
        _reject_unknown(onsite, {"constant", "custom"}, "lattice.onsite")
        if len(onsite) != 1:
            raise ConfigError("lattice.onsite object needs exactly one of constant/custom")
        if "constant" in onsite:
            onsite = _number(onsite["constant"], "lattice.onsite.constant")
        else:
            onsite = [_number(v, "lattice.onsite.custom") for v in onsite["custom"]]
    elif onsite != DECISION_TREE:
        raise ConfigError(f"lattice.onsite must be {DECISION_TREE!r} or an object, got {onsite!r}")
    offset = _integer(sec.get("site_offset", 0), "lattice.site_offset")
    spec = LatticeSpec(L, sec.get("boundary", "periodic"), couplings, onsite, offset)
    build_lattice(spec)  # validate early
    resolved = {
        "num_sites": L,
        "boundary": str(spec.boundary.value if hasattr(spec.boundary, "value") else spec.boundary),
        "couplings": couplings,
        "onsite": onsite if not isinstance(onsite, float) else {"constant": onsite},
        "site_offset": offset,
    }
    return spec, resolved


def _parse_state(sec: dict):
    _reject_unknown(sec, set(STATE_KINDS) | {"origin"}, "state")
    kinds = [k for k in STATE_KINDS if k in sec]
    if len(kinds) != 1:
        raise ConfigError(f"state needs exactly one of {', '.join(STATE_KINDS)}; got {kinds or 'none'}")
    kind = kinds[0]
    body = sec[kind]
    origin = _integer(sec["origin"], "state.origin") if "origin" in sec else None
    if kind == "family":
        _reject_unknown(body, {"alpha", "eta", "phi"}, "state.family")
        value = {k: _number(body[k], f"state.family.{k}") for k in ("alpha", "eta") if k in body}
        if len(value) != 2:
            raise ConfigError("state.family needs alpha and eta")
        value["phi"] = _number(body.get("phi", 0.0), "state.family.phi")
    elif kind == "beams":
        _reject_unknown(body, {"delta", "theta", "phi"}, "state.beams")
        if not {"delta", "theta"} <= set(body):
            raise ConfigError("state.beams needs delta and theta")
        value = {k: _number(body.get(k, 0.0), f"state.beams.{k}") for k in ("delta", "theta", "phi")}
    elif kind == "pure":
        if not isinstance(body, list) or not body:
            raise ConfigError("state.pure must be a non-empty list of [q, r, re, im]")
        value = []
        for item in body:
            if not isinstance(item, list) or len(item) not in (3, 4):
                raise ConfigError("state.pure entries must be [q, r, re] or [q, r, re, im]")
            q, r = _integer(item[0], "state.pure q"), _integer(item[1], "state.pure r")
            re = _number(item[2], "state.pure re")
            im = _number(item[3], "state.pure im") if len(item) == 4 else 0.0
            value.append([q, r, re, im])
    else:
        if not isinstance(body, str):
            raise ConfigError("state.densityfile must be a path")
        value = body
    return kind, value, origin


def parse_config(text: str, base_dir: str | Path | None = None) -> RunConfig:
    """Parse and validate a JSON run configuration.

    Unknown keys anywhere are an error. ``base_dir`` resolves a relative
    ``state.densityfile``.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    _reject_unknown(raw, {"lattice", "state", "times", "scenario", "sweep", "cut", "method", "output", "verify"}, "config")
    try:
        scenario = Scenario(raw.get("scenario", "correlate"))
    except ValueError as exc:
        raise ConfigError(f"unknown scenario {raw.get('scenario')!r}") from exc

    verify = {"num_sites": 6, "samples": 100, "seed": 20160101}
    if "verify" in raw:
        _reject_unknown(raw["verify"], set(verify), "verify")
        verify.update({k: _integer(v, f"verify.{k}") for k, v in raw["verify"].items()})
        if verify["num_sites"] < 2 or verify["samples"] < 1:
            raise ConfigError("verify needs num_sites >= 2 and samples >= 1")

    out = raw.get("output", {})
    _reject_unknown(out, {"prefix", "format"}, "output")
    prefix = out.get("prefix", "twobosonwalk")
    if not isinstance(prefix, str) or not prefix:
        raise ConfigError("output.prefix must be a non-empty string")
    fmt_ = out.get("format", "csv")
    if fmt_ not in ("csv", "json"):
        raise ConfigError(f"output.format must be csv or json, got {fmt_!r}")

    method = raw.get("method", "auto")
    if method not in ("auto", "bessel", "spectral"):
        raise ConfigError(f"method must be auto, bessel or spectral, got {method!r}")

    resolved: dict[str, Any] = {
        "scenario": scenario.value,
        "method": method,
        "output": {"prefix": prefix, "format": fmt_},
        "verify": verify,
    }
    if scenario is Scenario.VERIFY:
        lattice_spec = LatticeSpec(verify["num_sites"])
        return RunConfig(lattice_spec, "none", None, None, (0.0,), scenario, method=method,
                         prefix=prefix, format=fmt_, verify=verify, resolved=resolved)

    for key in ("lattice", "state", "times"):
        if key not in raw:
            raise ConfigError(f"config.{key} is required for scenario {scenario.value}")
    lattice_spec, resolved["lattice"] = _parse_lattice(raw["lattice"])
    kind, value, origin = _parse_state(raw["state"])
    if kind == "densityfile" and base_dir is not None and not Path(value).is_absolute():
        value = str(Path(base_dir) / value)
    L = lattice_spec.num_sites
    if origin is None and kind in ("family", "beams"):
        centre = -lattice_spec.site_offset
        origin = centre if 0 <= centre < L - 1 else 0
    if origin is not None and not 0 <= origin < L - 1:
        raise ConfigError(f"state.origin must lie in 0..{L - 2} so that sites origin, origin+1 exist")
    resolved["state"] = {kind: value, **({"origin": origin} if origin is not None else {})}
    times = _grid(raw["times"], "times", increasing=True)
    if times[0] < 0:
        raise ConfigError("times must be non-negative")
    resolved["times"] = list(times)

    eta_grid = phi_grid = None
    if "sweep" in raw:
        if scenario not in (Scenario.DISTANCE, Scenario.SWEEP):
            raise ConfigError("sweep grids only apply to the distance and sweep scenarios")
        if kind != "family":
            raise ConfigError("sweep grids need a family state")
        _reject_unknown(raw["sweep"], {"eta", "phi"}, "sweep")
        if "eta" in raw["sweep"]:
            eta_grid = _grid(raw["sweep"]["eta"], "sweep.eta", increasing=False)
        if "phi" in raw["sweep"]:
            phi_grid = _grid(raw["sweep"]["phi"], "sweep.phi", increasing=False)
        resolved["sweep"] = {k: list(v) for k, v in (("eta", eta_grid), ("phi", phi_grid)) if v is not None}
    if scenario is Scenario.SWEEP and eta_grid is None and phi_grid is None:
        raise ConfigError("the sweep scenario needs sweep.eta and/or sweep.phi")

    cut = None
    if "cut" in raw:
        cut = _integer(raw["cut"], "cut")
    if scenario is Scenario.ENTROPY:
        cut = L // 2 if cut is None else cut
        if not 0 < cut < L:
            raise ConfigError(f"cut must satisfy 0 < cut < {L}")
        resolved["cut"] = cut
    return RunConfig(
        lattice=lattice_spec,
        state_kind=kind,
        state=value,
        origin=origin,
        times=times,
        scenario=scenario,
        eta_grid=eta_grid,
        phi_grid=phi_grid,
        cut=cut,
        method=method,
        prefix=prefix,
        format=fmt_,
        verify=verify,
        resolved=resolved,
    )


def canonical_config(cfg: RunConfig) -> str:
    return json.dumps(cfg.resolved, sort_keys=True, separators=(",", ":"))


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(canonical_config(cfg).encode()).hexdigest()


def _family_params(cfg: RunConfig, eta=None, phi=None) -> CoherenceFamilyParams:
    s = cfg.state
    p = CoherenceFamilyParams(s["alpha"], s["eta"] if eta is None else eta, s["phi"] if phi is None else phi)
    p.check()
    return p


def build_state(cfg: RunConfig) -> TwoBosonDensityMatrix:
    L = cfg.lattice.num_sites
    if cfg.state_kind == "family":
        return density_from_family(_family_params(cfg), L, cfg.origin)
    if cfg.state_kind == "beams":
        return density_from_beams(BeamParams(**cfg.state), L, cfg.origin)
    if cfg.state_kind == "pure":
        try:
            psi = pure_state([(q, r, re + 1j * im) for q, r, re, im in cfg.state], L)
        except IndexError as exc:
            raise ConfigError(f"state.pure: {exc}") from exc
        return density_from_pure(psi)
    rho = load_density_file(cfg.state)
    if rho.num_sites != L:
        raise ConfigError(f"density file is for {rho.num_sites} sites, lattice has {L}")
    return rho


class _Engine:
    """Chooses between the Bessel closed form and the spectral propagator."""

    def __init__(self, cfg: RunConfig, lattice: Lattice):
        self.cfg = cfg
        self.lattice = lattice
        use_bessel = cfg.method == "bessel" or (cfg.method == "auto" and lattice.is_uniform_ring)
        if cfg.method == "bessel" and not lattice.is_uniform_ring:
            raise ConfigError("method 'bessel' needs a periodic lattice with uniform couplings and on-site energies")
        self.method = "bessel" if use_bessel else "spectral"
        if use_bessel:
            C, L = lattice.uniform_coupling, lattice.num_sites
            t_max = cfg.times[-1]
            if not bessel_margin_ok(C, t_max, L):
                raise MarginError(
                    f"tau = 2Ct = {2 * C * t_max:g} at t = {t_max:g} reaches the wrap-around margin "
                    f"(must stay below L/2 - {WRAP_MARGIN} = {L / 2 - WRAP_MARGIN:g}); enlarge "
                    f"lattice.num_sites to at least {int(4 * C * t_max + 2 * WRAP_MARGIN) + 1} "
                    "or set method to 'spectral'"
                )
        else:
            self._spectral = spectral_factory(single_particle_matrix(lattice))

    def margin_status(self) -> dict:
        lat = self.lattice
        status = {"method": self.method}
        if self.method == "bessel":
            tau_max = 2 * lat.uniform_coupling * self.cfg.times[-1]
            status.update(tau_max=tau_max, limit=lat.num_sites / 2 - WRAP_MARGIN, ok=True)
        return status

    def propagator(self, t):
        if self.method == "bessel":
            return propagate_bessel(self.lattice.uniform_coupling, self.lattice.num_sites, t)
        return self._spectral(t)

    def gamma(self, rho: TwoBosonDensityMatrix, t: float, params: CoherenceFamilyParams | None) -> CorrelationMatrix:
        lat = self.lattice
        if params is not None and self.method == "bessel":
            return gamma_bessel(params, lat.uniform_coupling, t, lat.num_sites, self.cfg.origin)
        if params is not None:
            return gamma_family(params, self.propagator(t), self.cfg.origin, lat.labels)
        return gamma_general(rho, self.propagator(t), lat.labels)


def _time_tag(t: float) -> str:
    return repr(float(t))


def _comments(cfg: RunConfig) -> list[str]:
    return [
        f"twobosonwalk {__version__}",
        f"config_sha256={config_hash(cfg)}",
        f"config={canonical_config(cfg)}",
    ]


def _emit(cfg: RunConfig, name: str, header, rows, outputs: list[str], extra: dict | None = None) -> None:
    path = Path(f"{cfg.prefix}_{name}.{cfg.format}")
    path.parent.mkdir(parents=True, exist_ok=True)
    if cfg.format == "csv":
        write_csv(path, header, rows, _comments(cfg))
    else:
        write_json(path, {
            "meta": {"config": cfg.resolved, "config_sha256": config_hash(cfg), "version": __version__},
            "columns": list(header),
            "rows": [[v if isinstance(v, str) else float(v) if isinstance(v, float) else v for v in row] for row in rows],
            **(extra or {}),
        })
    outputs.append(str(path))


def _grid_points(cfg: RunConfig):
    s = cfg.state
    etas = cfg.eta_grid or (s["eta"],)
    phis = cfg.phi_grid or (s["phi"],)
    return [(e, p) for e in etas for p in phis]


def run(cfg: RunConfig, *, verify: bool = False) -> dict:
    """Execute a scenario and write its outputs; returns the metadata written."""
    meta: dict[str, Any] = {
        "version": __version__,
        "config": cfg.resolved,
        "config_sha256": config_hash(cfg),
    }
    outputs: list[str] = []

    if cfg.scenario is Scenario.VERIFY or verify:
        v = cfg.verify
        rep = run_verification(v["num_sites"], v["samples"], v["seed"])
        meta["verification"] = {
            "num_sites": rep.num_sites,
            "samples": rep.samples,
            "seed": rep.seed,
            "max_gamma_deviation": rep.max_gamma_deviation,
            "max_sum_rule_deviation": float(rep.max_sum_rule_deviation),
            "passed": rep.passed,
        }

    if cfg.scenario is not Scenario.VERIFY:
        lattice = build_lattice(cfg.lattice)
        rho = build_state(cfg)
        meta["state"] = {"eta_check": coherence_eta(rho), "kind": cfg.state_kind}
        family = _family_params(cfg) if cfg.state_kind == "family" else None
        if family is not None:
            meta["state"].update(gamma=family.gamma, eta=family.eta)

        if cfg.scenario is Scenario.ENTROPY:
            reports = entropy_series(rho, lattice, cfg.times, cfg.cut)
            meta["wrap_margin"] = {"method": "spectral"}
            k = reports[0].left_dimension
            header = ["t", "S"] + [f"lambda_{i + 1}" for i in range(k)]
            rows = [[r.time, r.entropy, *r.spectrum] for r in reports]
            _emit(cfg, "entropy", header, rows, outputs)
        else:
            engine = _Engine(cfg, lattice)
            meta["wrap_margin"] = engine.margin_status()
            if cfg.scenario is Scenario.CORRELATE:
                labels = lattice.labels
                for t in cfg.times:
                    g = engine.gamma(rho, t, family)
                    rows = [[int(labels[k]), *g.gamma[k]] for k in range(len(labels))]
                    _emit(cfg, f"gamma_t{_time_tag(t)}", ["site", *map(str, labels)], rows, outputs,
                          {"time": t, "labels": labels.tolist()})
            else:
                rows = []
                if family is not None:
                    points = _grid_points(cfg)
                    params = [_family_params(cfg, e, p) for e, p in points]
                    for t in cfg.times:
                        for (e, ph), prm in zip(points, params):
                            d = avg_distance(engine.gamma(rho, t, prm))
                            rows.append([t, d, e, ph])
                    header = ["t", "d", "eta", "phi"]
                else:
                    rows = [[t, avg_distance(engine.gamma(rho, t, None))] for t in cfg.times]
                    header = ["t", "d"]
                _emit(cfg, "distance", header, rows, outputs)

    meta["outputs"] = outputs
    meta_path = Path(f"{cfg.prefix}_meta.json")
    meta_path.parent.mkdir(parents=True, exist_ok=True)
    write_json(meta_path, _jsonable(meta))
    return meta


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="twobosonwalk", description=__doc__.splitlines()[0])
    ap.add_argument("config", help="JSON run configuration")
    ap.add_argument("--verify", action="store_true", help="also run the oracle equivalence suite")
    ap.add_argument("--prefix", help="override output.prefix")
    args = ap.parse_args(argv)
    path = Path(args.config)
    try:
        cfg = parse_config(path.read_text(), base_dir=path.parent)
        if args.prefix:
            resolved = {**cfg.resolved, "output": {**cfg.resolved["output"], "prefix": args.prefix}}
            cfg = replace(cfg, prefix=args.prefix, resolved=resolved)
        meta = run(cfg, verify=args.verify)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PhysicalityError as exc:
        print(f"physicality error: {exc}", file=sys.stderr)
        return EXIT_PHYSICALITY
    except MarginError as exc:
        print(f"margin error: {exc}", file=sys.stderr)
        return EXIT_MARGIN
    for out in meta["outputs"]:
        print(out)
    ver = meta.get("verification")
    if ver is not None:
        print(f"oracle max deviation {ver['max_gamma_deviation']:.3e} over {ver['samples']} samples")
        if not ver["passed"]:
            return EXIT_VERIFY_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
