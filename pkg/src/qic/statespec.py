"""JSON state specification files.

Two forms are accepted::

    {"dims": [na, nb], "mixture": [{"weight": w, "vector": [[re, im], ...]}, ...]}
    {"coupled": {"two_l": 2l, "two_s": 2s, "weights": [{"two_j": .., "two_m": .., "p": ..}, ...]}}

Structural problems raise :class:`SpecParseError`; well-formed input that
violates a state invariant raises :class:`~qic.core.ValidationError`.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channel import BipartiteDims, BipartiteState, CoupledWeights
from .core import StateVector, density_from_mixture
from .representation import SpinLabel


class SpecParseError(ValueError):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise SpecParseError(msg)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def parse_spec(doc) -> CoupledWeights | BipartiteState:
    _require(isinstance(doc, dict), "state spec must be a JSON object")
    forms = [k for k in ("mixture", "coupled") if k in doc]
    _require(len(forms) == 1, "state spec needs exactly one of 'mixture' or 'coupled'")
    if forms[0] == "coupled":
        c = doc["coupled"]
        _require(isinstance(c, dict), "'coupled' must be an object")
        _require(_is_int(c.get("two_l")) and _is_int(c.get("two_s")), "'two_l' and 'two_s' must be integers")
        _require(isinstance(c.get("weights"), list), "'coupled.weights' must be a list")
        weights: dict[tuple[int, int], float] = {}
        for item in c["weights"]:
            _require(isinstance(item, dict), "each coupled weight must be an object")
            _require(_is_int(item.get("two_j")) and _is_int(item.get("two_m")), "'two_j'/'two_m' must be integers")
            _require(_is_num(item.get("p")), "'p' must be a number")
            key = (item["two_j"], item["two_m"])
            weights[key] = weights.get(key, 0.0) + float(item["p"])
        return CoupledWeights(SpinLabel(c["two_l"]), SpinLabel(c["two_s"]), weights)

    dims = doc.get("dims")
    _require(isinstance(dims, list) and len(dims) == 2 and all(_is_int(d) for d in dims),
             "'dims' must be a list of two integers")
    mix = doc["mixture"]
    _require(isinstance(mix, list) and mix, "'mixture' must be a non-empty list")
    ws, vecs = [], []
    for item in mix:
        _require(isinstance(item, dict), "each mixture entry must be an object")
        _require(_is_num(item.get("weight")), "'weight' must be a number")
        vec = item.get("vector")
        _require(isinstance(vec, list) and vec, "'vector' must be a non-empty list")
        amps = []
        for z in vec:
            _require(isinstance(z, list) and len(z) == 2 and all(_is_num(x) for x in z),
                     "amplitudes must be [re, im] pairs")
            amps.append(complex(z[0], z[1]))
        ws.append(float(item["weight"]))
        vecs.append(StateVector(np.array(amps)))
    bd = BipartiteDims(*dims)
    return BipartiteState(bd, density_from_mixture(ws, vecs))


def load_spec(path: str | Path) -> CoupledWeights | BipartiteState:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON in {path}: {exc}") from exc
    return parse_spec(doc)


def complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def dump_state(state: BipartiteState) -> dict:
    """Mixture-form spec built from the spectrum; zero-weight terms are dropped."""
    spec = state.rho.spectrum
    weights = np.clip(spec.eigenvalues, 0.0, None)
    mixture = [
        {"weight": float(w), "vector": [complex_pair(z) for z in v.amplitudes]}
        for w, v in zip(weights, spec.eigenvectors)
        if w > 0
    ]
    return {"dims": [state.dims.na, state.dims.nb], "mixture": mixture}


def dump_coupled(cw: CoupledWeights) -> dict:
    return {
        "coupled": {
            "two_l": cw.l.two_j,
            "two_s": cw.s.two_j,
            "weights": [{"two_j": j, "two_m": m, "p": p} for (j, m), p in sorted(cw.weights.items(), reverse=True)],
        }
    }
