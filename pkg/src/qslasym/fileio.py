"""JSON file formats.

Complex numbers are two-element ``[re, im]`` arrays and matrices are
row-major nested lists of them. Floats are written with ``repr`` so a
write/read cycle reproduces every bit.

Problem file::

    {"hamiltonian": M, "state": M, "label": [2, 3], "name": "...", "seed": 7}

Channel file::

    {"kraus": [M, ...], "omega": [w, ...]}        # omega optional

Dilation file::

    {"env_hamiltonian": M, "unitary": M, "env_initial_index": 0}
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channels import QuantumChannel, StinespringDilation
from .config import DEFAULT
from .errors import ParseError
from .states import CompositeLabel, DensityMatrix, Hamiltonian


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(obj) -> np.ndarray:
    try:
        arr = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"matrix is not a nested numeric array: {exc}") from None
    if arr.ndim == 2:
        # Plain real matrix.
        return arr.astype(complex)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"matrix must be rows of [re, im] pairs, got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def jsonable(x):
    """Convert numpy scalars/arrays and infinities to plain JSON values."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=False, allow_nan=False) + "\n"


def _load(source):
    if isinstance(source, (dict, list)):
        return source
    if isinstance(source, str) and source.lstrip()[:1] in ("{", "["):
        text = source
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _require(obj, key):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing field {key!r}")
    return obj[key]


@dataclass
class Problem:
    hamiltonian: Hamiltonian
    state: DensityMatrix
    label: CompositeLabel = None
    name: str = ""
    seed: int = None

    def to_json(self) -> dict:
        out = {"hamiltonian": encode_matrix(self.hamiltonian.matrix),
               "state": encode_matrix(self.state.matrix)}
        if self.label is not None:
            out["label"] = list(self.label.dims)
        if self.name:
            out["name"] = self.name
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def load_hamiltonian(source, tol=DEFAULT) -> Hamiltonian:
    """A bare matrix, or any object with a ``hamiltonian`` field."""
    obj = _load(source)
    m = obj["hamiltonian"] if isinstance(obj, dict) else obj
    return Hamiltonian(decode_matrix(m), tol)


def load_problem(source, tol=DEFAULT) -> Problem:
    obj = _load(source)
    h = Hamiltonian(decode_matrix(_require(obj, "hamiltonian")), tol)
    rho = DensityMatrix(decode_matrix(_require(obj, "state")), tol)
    h.check_dim(rho.dim)
    label = CompositeLabel(tuple(obj["label"])) if obj.get("label") else None
    if label is not None and label.total != h.dim:
        raise ParseError(f"label {label.dims} inconsistent with dimension {h.dim}")
    return Problem(h, rho, label, obj.get("name", ""), obj.get("seed"))


def channel_to_json(ch: QuantumChannel) -> dict:
    out = {"kraus": [encode_matrix(k) for k in ch.kraus]}
    if ch.omega is not None:
        out["omega"] = [float(w) for w in ch.omega]
    return out


def load_channel(source) -> QuantumChannel:
    obj = _load(source)
    kraus = [decode_matrix(k) for k in _require(obj, "kraus")]
    return QuantumChannel(kraus, obj.get("omega"), name=obj.get("name", ""))


def dilation_to_json(dil: StinespringDilation) -> dict:
    return {
        "env_hamiltonian": encode_matrix(dil.env_hamiltonian.matrix),
        "unitary": encode_matrix(dil.joint_unitary),
        "env_initial_index": int(dil.env_initial_index),
    }


def load_dilation(source, tol=DEFAULT) -> StinespringDilation:
    obj = _load(source)
    h_env = Hamiltonian(decode_matrix(_require(obj, "env_hamiltonian")), tol)
    v = decode_matrix(_require(obj, "unitary"))
    idx = _require(obj, "env_initial_index")
    if not isinstance(idx, int):
        raise ParseError("env_initial_index must be an integer")
    return StinespringDilation(h_env, v, idx)
