"""Versioned binary checkpoint container.

Layout, byte-exact:

    offset 0   8 bytes   magic b"MOLBRIDG"
    offset 8   4 bytes   format version, uint32 little-endian (currently 1)
    offset 12  4 bytes   header length in bytes, uint32 little-endian
    offset 16  header    UTF-8 JSON, keys sorted, no trailing newline
    then       payload   all parameter values as float64 little-endian,
                         row-major, in header order

The header object holds:
    "model_config": the ModelConfig fields
    "extra":        free-form run metadata (JSON-serializable)
    "params":       list of {"name", "rows", "cols", "offset"} where
                    offset counts float64 elements from payload start

Identical params and config produce identical bytes, so checkpoints can
be compared with a plain file hash.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import CheckpointError, VersionMismatchError
from .model import ModelConfig, ModelParams, init_params

MAGIC = b"MOLBRIDG"
VERSION = 1


def save_checkpoint(path, params: ModelParams, extra: dict | None = None) -> None:
    entries = []
    offset = 0
    chunks = []
    for name, p in params.named():
        rows, cols = p.shape
        entries.append({"name": name, "rows": rows, "cols": cols,
                        "offset": offset})
        chunks.append(np.ascontiguousarray(p.value, dtype="<f8").tobytes())
        offset += rows * cols
    header = {
        "model_config": {
            "feature_dim": params.config.feature_dim,
            "dim": params.config.dim,
            "heads": params.config.heads,
            "layers": params.config.layers,
            "d_hid": params.config.d_hid,
            "classes": params.config.classes,
            "seed": params.config.seed,
        },
        "extra": extra or {},
        "params": entries,
    }
    header_bytes = json.dumps(header, sort_keys=True,
                              separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", VERSION))
        fh.write(struct.pack("<I", len(header_bytes)))
        fh.write(header_bytes)
        for chunk in chunks:
            fh.write(chunk)


def load_checkpoint(path) -> tuple[ModelParams, dict]:
    raw = Path(path).read_bytes()
    if len(raw) < 16 or raw[:8] != MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint file")
    (version,) = struct.unpack("<I", raw[8:12])
    if version != VERSION:
        raise VersionMismatchError(
            f"{path}: format version {version}, expected {VERSION}")
    (header_len,) = struct.unpack("<I", raw[12:16])
    if len(raw) < 16 + header_len:
        raise CheckpointError(f"{path}: truncated header")
    try:
        header = json.loads(raw[16:16 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"{path}: unreadable header: {exc}") from exc

    config = ModelConfig(**header["model_config"])
    params = init_params(config)
    by_name = dict(params.named())
    if set(by_name) != {e["name"] for e in header["params"]}:
        raise CheckpointError(f"{path}: parameter names do not match config")

    payload = raw[16 + header_len:]
    for entry in header["params"]:
        p = by_name[entry["name"]]
        rows, cols = entry["rows"], entry["cols"]
        if p.shape != (rows, cols):
            raise CheckpointError(
                f"{path}: {entry['name']} has shape {rows}x{cols}, "
                f"expected {p.shape[0]}x{p.shape[1]}")
        start = entry["offset"] * 8
        end = start + rows * cols * 8
        if end > len(payload):
            raise CheckpointError(f"{path}: truncated payload")
        p.value[...] = np.frombuffer(
            payload[start:end], dtype="<f8").reshape(rows, cols)
    return params, header["extra"]
