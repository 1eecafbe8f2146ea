"""
Genotype checkpoints.

A checkpoint is a binary file holding a little-endian uint64 length header
followed by that many little-endian float64 values, plus a YAML sidecar
(`<name>.meta.yaml`) with the network shape and normalizer statistics.
"""

import struct
from pathlib import Path

import numpy as np
import yaml

from evolab.policy.mlp import as_parameter_vector
from evolab.policy.mlp import MlpSpec
from evolab.policy.mlp import ObsNormalizer
from evolab.policy.mlp import ParameterVector
from evolab.utils.csvio import write_bytes_atomic
from evolab.utils.csvio import write_text_atomic
from evolab.utils.errors import CheckpointNotFoundError
from evolab.utils.errors import FormatError

_HEADER = struct.Struct("<Q")


def encode_parameters(params: ParameterVector) -> bytes:
    values = np.ascontiguousarray(params, dtype="<f8")
    return _HEADER.pack(values.size) + values.tobytes()


def decode_parameters(payload: bytes) -> ParameterVector:
    if len(payload) < _HEADER.size:
        raise FormatError("checkpoint is shorter than its length header")
    (count,) = _HEADER.unpack_from(payload)
    body = payload[_HEADER.size :]
    if len(body) != 8 * count:
        raise FormatError(f"checkpoint announces {count} values but holds {len(body) // 8}")
    return np.frombuffer(body, dtype="<f8").astype(float)


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".meta.yaml")


def save_checkpoint(
    path: str | Path,
    params: ParameterVector,
    spec: MlpSpec | None = None,
    normalizer: ObsNormalizer | None = None,
    extra: dict | None = None,
) -> Path:
    """
    Writes a genotype and its sidecar metadata.

    Args:
        path (str | Path): Destination of the binary file.
        params (ParameterVector): The genotype.
        spec (MlpSpec | None, optional): Network shape; None for genotypes scored directly.
        normalizer (ObsNormalizer | None, optional): Observation statistics of the run.
        extra (dict | None, optional): Additional metadata, e.g. generation and fitness.

    Returns:
        Path: The binary file's path.
    """
    params = as_parameter_vector(params, spec)
    meta: dict = {"length": int(params.size)}
    if spec is not None:
        meta["mlp"] = {
            "obs_dim": spec.obs_dim,
            "action_dim": spec.action_dim,
            "hidden_dim": spec.hidden_dim,
        }
    if normalizer is not None:
        meta["normalizer"] = {
            "mean": [float(v) for v in normalizer.mean],
            "std": [float(v) for v in normalizer.std],
            "reference_count": int(normalizer.reference_count),
        }
    if extra:
        meta.update(extra)

    write_text_atomic(sidecar_path(path), yaml.safe_dump(meta, sort_keys=False))
    return write_bytes_atomic(path, encode_parameters(params))


def load_checkpoint(path: str | Path):
    """
    Reads a genotype and its sidecar.

    Returns:
        tuple: (params, spec or None, normalizer or None, metadata dict).

    Raises:
        CheckpointNotFoundError: If the binary file does not exist.
    """
    path = Path(path)
    if not path.is_file():
        raise CheckpointNotFoundError(f"no checkpoint at {path}")
    params = decode_parameters(path.read_bytes())

    meta: dict = {}
    meta_path = sidecar_path(path)
    if meta_path.is_file():
        meta = yaml.safe_load(meta_path.read_text()) or {}

    spec = MlpSpec(**meta["mlp"]) if "mlp" in meta else None
    normalizer = None
    if "normalizer" in meta:
        normalizer = ObsNormalizer(
            mean=np.array(meta["normalizer"]["mean"], dtype=float),
            std=np.array(meta["normalizer"]["std"], dtype=float),
            reference_count=meta["normalizer"]["reference_count"],
        )
    return params, spec, normalizer, meta
