"""JSON problem documents.

A document looks like::

    {
      "graph": "klein16",                      # catalog name, graph file, or
                                               # {"points": N, "edges": [[u, v], ...]}
      "coefficients": {"uniform": 0.1},        # or a dense 2-D list, or
                                               # {"sparse": [[p, k, c], ...], "complete_diagonal": true}
      "class": "wave",                         # or "hyperbolic"
      "f0": {"7": 16},                         # sparse point -> value, or a full list
      "f1": {"9": 16},
      "boundary": {"0": 0.0, "9": [0.0, ...]}, # optional: constant or per-step sequence
      "steps": 100
    }

Point identifiers are 0-based.
"""

from __future__ import annotations

import copy
import json
import os
from typing import Any, Mapping

from .catalog import catalog
from .graph import Graph, graph_from_edges, read_graph
from .wave import WAVE, ProblemSpec, Scheme, impulse, scheme_from_triples, uniform_scheme, validate_scheme


class ConfigError(ValueError):
    pass


def _graph(spec: Any, base_dir: str) -> Graph:
    if isinstance(spec, str):
        path = os.path.join(base_dir, spec)
        if os.path.exists(path):
            return read_graph(path)
        try:
            return catalog(spec).graph
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
    if isinstance(spec, Mapping):
        if "file" in spec:
            return read_graph(os.path.join(base_dir, spec["file"]))
        if "catalog" in spec:
            return catalog(spec["catalog"]).graph
        try:
            return graph_from_edges(int(spec["points"]), spec.get("edges", []))
        except KeyError:
            raise ConfigError("inline graph needs a 'points' count") from None
    raise ConfigError(f"cannot interpret graph specification {spec!r}")


def _scheme(graph: Graph, spec: Any, kind: str) -> Scheme:
    if isinstance(spec, list):
        return validate_scheme(graph, spec, kind)
    if not isinstance(spec, Mapping):
        raise ConfigError(f"cannot interpret coefficients {spec!r}")
    if "uniform" in spec:
        return uniform_scheme(graph, float(spec["uniform"]))
    if "dense" in spec:
        return validate_scheme(graph, spec["dense"], kind)
    if "sparse" in spec:
        return scheme_from_triples(graph, spec["sparse"], kind, bool(spec.get("complete_diagonal", False)))
    raise ConfigError("coefficients need one of 'uniform', 'dense' or 'sparse'")


def _point_values(graph: Graph, spec: Any, key: str):
    if spec is None:
        return impulse(graph)
    if isinstance(spec, list):
        if len(spec) != graph.n:
            raise ConfigError(f"'{key}' has {len(spec)} values for {graph.n} points")
        return [float(x) for x in spec]
    if isinstance(spec, Mapping):
        try:
            return impulse(graph, {int(p): float(v) for p, v in spec.items()})
        except ValueError as exc:
            raise ConfigError(f"'{key}': {exc}") from None
    raise ConfigError(f"cannot interpret '{key}' = {spec!r}")


def problem_from_config(cfg: Mapping[str, Any], base_dir: str = ".") -> ProblemSpec:
    """Build a validated :class:`ProblemSpec`; scheme errors propagate as ``SchemeError``."""
    for key in ("graph", "coefficients", "steps"):
        if key not in cfg:
            raise ConfigError(f"missing key {key!r}")
    graph = _graph(cfg["graph"], base_dir)
    scheme = _scheme(graph, cfg["coefficients"], cfg.get("class", WAVE))
    boundary = {int(p): v for p, v in (cfg.get("boundary") or {}).items()}
    try:
        steps = int(cfg["steps"])
        return ProblemSpec(
            scheme,
            _point_values(graph, cfg.get("f0"), "f0"),
            _point_values(graph, cfg.get("f1"), "f1"),
            steps,
            boundary,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def load_config(path) -> tuple[dict, str]:
    with open(path, encoding="utf-8") as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return cfg, os.path.dirname(os.path.abspath(path))


def parse_override(text: str) -> tuple[str, Any]:
    """``key.sub=value``; the value is read as JSON when possible, else as a string."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not of the form key=value")
    key, raw = text.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigError(f"override {text!r} has an empty key")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def apply_overrides(cfg: Mapping[str, Any], overrides) -> dict:
    """Return a copy of ``cfg`` with dotted-path assignments applied."""
    out = copy.deepcopy(dict(cfg))
    for key, value in overrides:
        parts = key.split(".")
        node = out
        for part in parts[:-1]:
            child = node.get(part)
            if not isinstance(child, dict):
                child = {}
                node[part] = child
            node = child
        node[parts[-1]] = value
    return out
