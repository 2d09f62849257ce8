"""Named checks for the command line: input schema, generators and runner.

Every check consumes a dict of named inputs.  Inputs come either from JSON
files (in schema order) or from a seeded generator; either way they can be
serialized back for reproducing a violation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import holevo, inequalities as ineq, io, sampling
from .channels import Ensemble, random_channel, random_ensemble, random_povm
from .equality import make_markov_state, make_product_split_state, random_markov_distribution
from .errors import BadDimensions, InvariantError
from .reports import VerdictReport
from .tensor import MultipartiteState

# serializers / parsers per input kind
_KINDS: dict[str, tuple[Callable, Callable]] = {
    "state": (io.state_to_json, io.state_from_json),
    "matrix": (io.matrix_to_json, io.hermitian_from_json),
    "operator": (io.matrix_to_json, io.matrix_from_json),
    "channel": (io.channel_to_json, io.channel_from_json),
    "povm": (io.povm_to_json, io.povm_from_json),
    "ensemble": (io.ensemble_to_json, io.ensemble_from_json),
    "params": (dict, dict),
}

ENTROPIC = {"ssa", "subadd", "triangle", "araki-lieb", "mpt", "jc", "mono", "holevo", "hall"}


@dataclass(frozen=True)
class Check:
    name: str
    schema: tuple[tuple[str, str], ...]
    run: Callable[[dict, float | None], VerdictReport]
    generate: Callable[[np.random.Generator, "GenConfig"], dict]
    modes: tuple[str, ...] = ("random",)
    defaults: dict[str, Any] | None = None


@dataclass(frozen=True)
class GenConfig:
    mode: str = "random"
    dims: tuple[int, ...] | None = None
    dim: int | None = None


def _dims(cfg: GenConfig, n: int, default: tuple[int, ...]) -> tuple[int, ...]:
    dims = cfg.dims or default
    if len(dims) != n:
        raise BadDimensions(f"expected {n} subsystem dimensions, got {list(dims)}")
    return tuple(dims)


def _dim(cfg: GenConfig, default: int) -> int:
    d = cfg.dim or default
    if d < 1:
        raise BadDimensions(f"dimension must be positive, got {d}")
    return d


def _random_state(gen, dims) -> MultipartiteState:
    return MultipartiteState(sampling.random_density(int(np.prod(dims)), gen), dims)


# generators ------------------------------------------------------------------


def _gen_tripartite(gen, cfg: GenConfig) -> dict:
    if cfg.mode == "markov":
        dims = _dims(cfg, 3, (2, 3, 2))
        return {"state": make_markov_state(random_markov_distribution(dims, gen))}
    if cfg.mode == "product-split":
        dims = _dims(cfg, 4, (2, 2, 2, 2))
        a = _random_state(gen, dims[:2])
        b = _random_state(gen, dims[2:])
        return {"state": make_product_split_state(a, b)}
    return {"state": _random_state(gen, _dims(cfg, 3, (2, 2, 2)))}


def _gen_bipartite(gen, cfg: GenConfig) -> dict:
    return {"state": _random_state(gen, _dims(cfg, 2, (2, 2)))}


def _gen_mpt(gen, cfg: GenConfig) -> dict:
    dims = _dims(cfg, 2, (2, 2))
    return {"rho": _random_state(gen, dims), "gamma": _random_state(gen, dims)}


def _gen_jc(gen, cfg: GenConfig) -> dict:
    d = _dim(cfg, 2)
    n = int(gen.integers(2, 4))
    w = tuple(sampling.random_weights(n, gen))
    rhos = tuple(sampling.random_density(d, gen) for _ in range(n))
    gammas = tuple(sampling.random_density(d, gen) for _ in range(n))
    return {"rho_mix": Ensemble(w, rhos), "gamma_mix": Ensemble(w, gammas)}


def _gen_mono(gen, cfg: GenConfig) -> dict:
    d = _dim(cfg, 2)
    m = int(gen.integers(1, 4))
    out = int(gen.integers(max(1, -(-d // m)), d + 2))
    return {
        "channel": random_channel(d, out, m, gen),
        "rho": sampling.random_density(d, gen),
        "gamma": sampling.random_density(d, gen),
    }


def _gen_pair_hermitian(gen, cfg: GenConfig) -> dict:
    d = _dim(cfg, 2)
    return {"A": sampling.random_hermitian(d, gen), "B": sampling.random_hermitian(d, gen)}


def _gen_klein(gen, cfg: GenConfig) -> dict:
    d = _dim(cfg, 2)
    return {"A": sampling.random_positive(d, gen), "B": sampling.random_positive(d, gen)}


def _gen_lieb(gen, cfg: GenConfig) -> dict:
    d = _dim(cfg, 3)
    return {k: sampling.random_positive(d, gen) for k in ("R", "S", "T")}


def _gen_holevo(gen, cfg: GenConfig) -> dict:
    d = _dim(cfg, 2)
    n = int(gen.integers(2, 5))
    k = int(gen.integers(2, 5))
    return {"ensemble": random_ensemble(d, n, gen), "povm": random_povm(d, k, gen)}


def _gen_exp(gen, cfg: GenConfig) -> dict:
    d = _dim(cfg, 2)
    return {
        "K": sampling.random_hermitian(d, gen),
        "A1": sampling.random_positive(d, gen),
        "A2": sampling.random_positive(d, gen),
        "params": {"lambda": float(gen.uniform(0.05, 0.95))},
    }


def _gen_wyd(gen, cfg: GenConfig) -> dict:
    d = _dim(cfg, 2)
    out = {k: sampling.random_positive(d, gen) for k in ("A1", "B1", "A2", "B2")}
    out["K"] = sampling.ginibre(d, d, gen)
    out["params"] = {"s": float(gen.uniform(0.05, 0.95)), "lambda": float(gen.uniform(0.05, 0.95))}
    return out


def _gen_herglotz(gen, cfg: GenConfig) -> dict:
    d = _dim(cfg, 2)
    return {
        "K": sampling.random_hermitian(d, gen),
        "A": sampling.random_positive(d, gen),
        "B": sampling.random_hermitian(d, gen),
    }


# runners ---------------------------------------------------------------------


def _jc_components(inp):
    a, b = inp["rho_mix"], inp["gamma_mix"]
    if len(a) != len(b) or not np.allclose(a.weights, b.weights, atol=1e-12, rtol=0):
        raise InvariantError("rho and gamma mixtures must share their weights")
    return list(zip(a.weights, a.states, b.states))


def _info_verdict(name, info, bound, tol) -> VerdictReport:
    report = VerdictReport.compare(
        name, info.accessible_info, bound, tol, residuals=dict(info.equality_residuals)
    )
    report.meta.update(chi=info.chi, hall_bound=info.hall_bound)
    return report


def _run_holevo(inp, tol):
    info = holevo.info_report(inp["ensemble"], inp["povm"])
    return _info_verdict("holevo", info, info.chi, holevo.HOLEVO_TOL if tol is None else tol)


def _run_hall(inp, tol):
    info = holevo.info_report(inp["ensemble"], inp["povm"])
    return _info_verdict("hall", info, info.hall_bound, holevo.HOLEVO_TOL if tol is None else tol)


def _run_herglotz(inp, tol):
    kwargs = {} if tol is None else {"tol": tol}
    return ineq.epstein_herglotz_probe(inp["K"], inp["A"], inp["B"], **kwargs)


CHECKS: dict[str, Check] = {
    c.name: c
    for c in [
        Check("ssa", (("state", "state"),), lambda i, t: ineq.check_ssa(i["state"], t),
              _gen_tripartite, ("random", "markov", "product-split")),
        Check("subadd", (("state", "state"),), lambda i, t: ineq.check_subadditivity(i["state"], t),
              _gen_bipartite),
        Check("triangle", (("state", "state"),), lambda i, t: ineq.check_triangle(i["state"], t),
              _gen_bipartite),
        Check("araki-lieb", (("state", "state"),), lambda i, t: ineq.check_araki_lieb(i["state"], t),
              _gen_tripartite, ("random", "markov", "product-split")),
        Check("mpt", (("rho", "state"), ("gamma", "state")),
              lambda i, t: ineq.check_mpt(i["rho"], i["gamma"], t), _gen_mpt),
        Check("jc", (("rho_mix", "ensemble"), ("gamma_mix", "ensemble")),
              lambda i, t: ineq.check_joint_convexity(_jc_components(i), t), _gen_jc),
        Check("mono", (("channel", "channel"), ("rho", "matrix"), ("gamma", "matrix")),
              lambda i, t: ineq.check_monotonicity(i["channel"], i["rho"], i["gamma"], t), _gen_mono),
        Check("gt", (("A", "matrix"), ("B", "matrix")),
              lambda i, t: ineq.golden_thompson_gap(i["A"], i["B"], t), _gen_pair_hermitian),
        Check("lieb3", (("R", "matrix"), ("S", "matrix"), ("T", "matrix")),
              lambda i, t: ineq.lieb_triple_gap(i["R"], i["S"], i["T"], t), _gen_lieb),
        Check("klein", (("A", "matrix"), ("B", "matrix")),
              lambda i, t: ineq.check_klein(i["A"], i["B"], t), _gen_klein),
        Check("holevo", (("ensemble", "ensemble"), ("povm", "povm")), _run_holevo, _gen_holevo),
        Check("hall", (("ensemble", "ensemble"), ("povm", "povm")), _run_hall, _gen_holevo),
        Check("exp-concavity", (("K", "matrix"), ("A1", "matrix"), ("A2", "matrix"), ("params", "params")),
              lambda i, t: ineq.exp_log_concavity_probe(i["K"], i["A1"], i["A2"], i["params"]["lambda"], t),
              _gen_exp, defaults={"params": {"lambda": 0.5}}),
        Check("wyd", (("A1", "matrix"), ("B1", "matrix"), ("A2", "matrix"), ("B2", "matrix"),
                      ("K", "operator"), ("params", "params")),
              lambda i, t: ineq.wyd_concavity_probe(i["A1"], i["B1"], i["A2"], i["B2"], i["K"],
                                                    i["params"]["s"], i["params"]["lambda"], t),
              _gen_wyd, defaults={"params": {"s": 0.5, "lambda": 0.5}}),
        Check("herglotz", (("K", "matrix"), ("A", "matrix"), ("B", "matrix")), _run_herglotz,
              _gen_herglotz),
    ]
}


def load_inputs(check: Check, paths) -> dict:
    """Parse input files in schema order; trailing ``params`` may be omitted."""
    schema = list(check.schema)
    defaults = dict(check.defaults or {})
    required = [s for s in schema if s[0] not in defaults]
    if not len(required) <= len(paths) <= len(schema):
        names = ", ".join(f"{n} ({k})" for n, k in schema)
        raise InvariantError(f"'{check.name}' takes inputs: {names}; got {len(paths)} file(s)")
    inputs = dict(defaults)
    for (name, kind), path in zip(schema, paths):
        inputs[name] = _KINDS[kind][1](io.load(path))
    return inputs


def dump_inputs(check: Check, inputs: dict) -> dict:
    return {name: _KINDS[kind][0](inputs[name]) for name, kind in check.schema if name in inputs}
