"""Parameter checkpoint container.

Layout: one compact JSON line (architecture spec, tensor table with byte
offsets, endianness tag) terminated by a newline, followed by the raw
little-endian float32 payload. load(save(net)) is bit-exact.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .tensor import require

FORMAT_VERSION = 1


def save_checkpoint(path: str | Path, architecture: dict,
                    params: dict[str, np.ndarray]) -> None:
    tensors = []
    offset = 0
    payload = []
    for name in sorted(params):
        arr = np.ascontiguousarray(params[name], dtype="<f4")
        raw = arr.tobytes()
        tensors.append({
            "name": name,
            "shape": list(arr.shape),
            "offset": offset,
            "nbytes": len(raw),
        })
        payload.append(raw)
        offset += len(raw)
    header = {
        "format_version": FORMAT_VERSION,
        "endianness": "little",
        "dtype": "float32",
        "architecture": architecture,
        "tensors": tensors,
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode() + b"\n"
    with open(path, "wb") as fh:
        fh.write(blob)
        for raw in payload:
            fh.write(raw)


def load_checkpoint(path: str | Path) -> tuple[dict, dict[str, np.ndarray]]:
    with open(path, "rb") as fh:
        header_line = fh.readline()
        header = json.loads(header_line.decode())
        require(header.get("format_version") == FORMAT_VERSION,
                f"unsupported checkpoint format version {header.get('format_version')}")
        require(header.get("endianness") == "little",
                f"unsupported endianness {header.get('endianness')}")
        body = fh.read()
    params = {}
    for entry in header["tensors"]:
        start, n = entry["offset"], entry["nbytes"]
        arr = np.frombuffer(body[start:start + n], dtype="<f4")
        params[entry["name"]] = arr.reshape(entry["shape"]).copy()
    return header["architecture"], params
