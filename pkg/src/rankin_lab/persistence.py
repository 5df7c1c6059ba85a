"""
Binary cache and text import for tau tables.

Cache layout (little-endian):

    offset  size  field
    0       4     magic b"RST1"
    4       2     format version (uint16, currently 1)
    6       8     n_max (uint64)
    14      2     kappa (uint16)
    16      8     checksum (uint64): BLAKE2b-64 digest of the payload
    24      16*n  payload: tau(1..n_max) as signed 128-bit integers

Only tau is stored; c, b, and prefix sums are rebuilt on load.
"""

from __future__ import annotations

import hashlib
import os
import struct
from pathlib import Path
from typing import Union

import numpy as np

from .coefficients import KAPPA, CoefficientTable, build_table, check_int128, sieve_tau
from .errors import CorruptCacheError, CrossCheckError, FormatError

MAGIC = b"RST1"
VERSION = 1
HEADER = struct.Struct("<4sHQHQ")
RECORD = 16
CROSS_CHECK_LIMIT = 10_000

PathLike = Union[str, os.PathLike]


def checksum(payload: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def encode_tau(tau) -> bytes:
    check_int128(tau[1:])
    return b"".join(int(v).to_bytes(RECORD, "little", signed=True) for v in tau[1:])


def save_table(path: PathLike, table: CoefficientTable) -> None:
    payload = encode_tau(table.tau)
    header = HEADER.pack(MAGIC, VERSION, table.n_max, table.kappa, checksum(payload))
    tmp = Path(f"{path}.tmp")
    tmp.write_bytes(header + payload)
    os.replace(tmp, path)


def load_tau(path: PathLike):
    """Return (tau array, kappa) after validating header, length, and checksum."""
    raw = Path(path).read_bytes()
    if len(raw) < HEADER.size:
        raise CorruptCacheError(f"{path}: file shorter than header")
    magic, version, n_max, kappa, digest = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CorruptCacheError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CorruptCacheError(f"{path}: unsupported version {version}")
    payload = raw[HEADER.size:]
    if len(payload) != RECORD * n_max:
        raise CorruptCacheError(
            f"{path}: payload is {len(payload)} bytes, expected {RECORD * n_max}")
    if checksum(payload) != digest:
        raise CorruptCacheError(f"{path}: checksum mismatch")
    tau = np.zeros(n_max + 1, dtype=object)
    tau[0] = 0
    tau[1:] = [int.from_bytes(payload[i:i + RECORD], "little", signed=True)
               for i in range(0, len(payload), RECORD)]
    return tau, kappa


def load_table(path: PathLike) -> CoefficientTable:
    tau, kappa = load_tau(path)
    return build_table(len(tau) - 1, kappa=kappa, tau=tau)


def parse_tau_text(lines) -> np.ndarray:
    """Parse "n tau(n)" lines, contiguous from n = 1.

    Blank lines and lines starting with '#' are ignored.
    """
    values = [0]
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) != 2:
            raise FormatError(f"expected 'n tau(n)', got {text!r}", lineno)
        try:
            n, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"not an integer pair: {text!r}", lineno) from None
        if n != len(values):
            raise FormatError(f"expected n = {len(values)}, got {n}", lineno)
        values.append(v)
    if len(values) == 1:
        raise FormatError("no coefficients found")
    tau = np.zeros(len(values), dtype=object)
    tau[:] = values
    return tau


def import_external_tau(path: PathLike, *, kappa: int = KAPPA,
                        cross_check: int = CROSS_CHECK_LIMIT) -> CoefficientTable:
    """Build a table from a text file of "n tau(n)" pairs.

    The first min(n_max, cross_check) values must equal the bundled sieve.
    """
    with open(path, encoding="utf-8") as fh:
        tau = parse_tau_text(fh)
    n_max = len(tau) - 1
    m = min(n_max, cross_check)
    if m >= 1:
        ref = sieve_tau(m)
        for n in range(1, m + 1):
            if int(tau[n]) != int(ref[n]):
                raise CrossCheckError(
                    f"imported tau({n}) = {tau[n]} disagrees with sieve value {ref[n]}")
    return build_table(n_max, kappa=kappa, tau=tau)
