"""JSON formats for states, protocols and probability vectors.

Complex numbers are written as ``[re, im]`` pairs and matrices as nested
lists of those pairs, row-major. Floats go through ``repr`` so a
save/load round trip is exact.

State::

    {"dim_a": 2, "dim_b": 2, "amplitudes": [[[0.7071, 0.0], [0.0, 0.0]], ...]}

Protocol::

    {"dim_a": 2, "dim_b": 2,
     "steps": [
       {"type": "local_unitary", "party": "A", "unitary": M},
       {"type": "measurement", "party": "A", "label": "m0", "operators": [M, M]},
       {"type": "message", "from": "A", "to": "B", "label": "m0"},
       {"type": "conditional_unitary", "party": "B", "label": "m0",
        "table": {"0": M, "1": M}}],
     "synthesis": [{"block": [0, 1], "alpha_plus": ..., "delta": ...}]}

``synthesis`` is optional metadata written by the synthesizer.
"""
from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .exceptions import InvalidProtocol, ParseError
from .protocol import (ClassicalMessage, ConditionalUnitary, LocalUnitary,
                       Measurement, Protocol, SynthesisStepParams, validate)
from .specvec import check_prob_vector
from .states import PureState


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data, what="matrix") -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: not a nested [re, im] array ({exc})") from None
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ParseError(f"{what}: expected shape (rows, cols, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _require(d, key, what):
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"{what}: missing field {key!r}")
    return d[key]


def state_to_dict(s: PureState) -> dict:
    return {"dim_a": s.dim_a, "dim_b": s.dim_b, "amplitudes": encode_matrix(s.amplitudes)}


def state_from_dict(d) -> PureState:
    dim_a = _require(d, "dim_a", "state")
    dim_b = _require(d, "dim_b", "state")
    amp = decode_matrix(_require(d, "amplitudes", "state"), "state amplitudes")
    if amp.shape != (dim_a, dim_b):
        raise ParseError(f"state: amplitudes shape {amp.shape} != ({dim_a}, {dim_b})")
    return PureState(amp)


def _step_to_dict(step) -> dict:
    if isinstance(step, LocalUnitary):
        return {"type": step.kind, "party": step.party, "unitary": encode_matrix(step.unitary)}
    if isinstance(step, Measurement):
        return {"type": step.kind, "party": step.party, "label": step.label,
                "operators": [encode_matrix(m) for m in step.operators]}
    if isinstance(step, ClassicalMessage):
        return {"type": step.kind, "from": step.sender, "to": step.receiver, "label": step.label}
    if isinstance(step, ConditionalUnitary):
        return {"type": step.kind, "party": step.party, "label": step.label,
                "table": {str(k): encode_matrix(u) for k, u in sorted(step.table.items())}}
    raise TypeError(f"unknown step {step!r}")


def _step_from_dict(d, idx):
    what = f"step {idx}"
    kind = _require(d, "type", what)
    if kind == "local_unitary":
        return LocalUnitary(_require(d, "party", what),
                            decode_matrix(_require(d, "unitary", what), what))
    if kind == "measurement":
        ops = _require(d, "operators", what)
        if not isinstance(ops, list):
            raise ParseError(f"{what}: operators must be a list")
        return Measurement(_require(d, "party", what),
                           tuple(decode_matrix(m, what) for m in ops),
                           str(_require(d, "label", what)))
    if kind == "message":
        return ClassicalMessage(_require(d, "from", what), _require(d, "to", what),
                                str(_require(d, "label", what)))
    if kind == "conditional_unitary":
        table = _require(d, "table", what)
        if not isinstance(table, dict):
            raise ParseError(f"{what}: table must be an object")
        try:
            decoded = {int(k): decode_matrix(u, what) for k, u in table.items()}
        except ValueError as exc:
            raise ParseError(f"{what}: outcome keys must be integers ({exc})") from None
        return ConditionalUnitary(_require(d, "party", what), str(_require(d, "label", what)),
                                  decoded)
    raise ParseError(f"{what}: unknown step type {kind!r}")


def protocol_to_dict(p: Protocol) -> dict:
    out = {"dim_a": p.dim_a, "dim_b": p.dim_b,
           "steps": [_step_to_dict(s) for s in p.steps]}
    if p.synthesis:
        out["synthesis"] = [asdict(sp) for sp in p.synthesis]
    return out


def protocol_from_dict(d, check: bool = True) -> Protocol:
    """Parse a protocol; with ``check`` it must also pass :func:`validate`."""
    steps = _require(d, "steps", "protocol")
    if not isinstance(steps, list):
        raise ParseError("protocol: steps must be a list")
    params = []
    for sp in d.get("synthesis", []):
        try:
            sp = dict(sp, block=tuple(sp["block"]))
            params.append(SynthesisStepParams(**sp))
        except (TypeError, KeyError) as exc:
            raise ParseError(f"protocol: bad synthesis entry ({exc})") from None
    p = Protocol(int(_require(d, "dim_a", "protocol")), int(_require(d, "dim_b", "protocol")),
                 tuple(_step_from_dict(s, i) for i, s in enumerate(steps)), tuple(params))
    if check:
        report = validate(p)
        if not report.valid:
            raise InvalidProtocol("invalid protocol: " + "; ".join(report.failures()), report)
    return p


def _read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def load_state(path) -> PureState:
    return state_from_dict(_read_json(path))


def save_state(s: PureState, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(s)))


def load_protocol(path) -> Protocol:
    return protocol_from_dict(_read_json(path))


def save_protocol(p: Protocol, path) -> None:
    Path(path).write_text(json.dumps(protocol_to_dict(p)))


def parse_vector(text: str) -> np.ndarray:
    """A probability vector given inline as a JSON array or as a file holding one."""
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed vector {text!r}: {exc.msg}") from None
    else:
        data = _read_json(text)
    return check_prob_vector(data)
