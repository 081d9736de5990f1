"""Python access to the ldpc_audit core.

Matrices are lists of '0'/'1' row strings. Report functions return the same
JSON documents the command line tool writes, decoded into dicts.
"""

import json

from . import _core
from ._core import (
    DepthLimitError,
    DimensionError,
    Error,
    FormatError,
    IndexError,
    PreconditionError,
    SCHEMA_VERSION,
    WiringError,
    build,
    encode,
    kernel_dim,
    rank,
    read_matrix,
    trace_text,
    write_matrix,
)

__all__ = [
    "DepthLimitError",
    "DimensionError",
    "Error",
    "FormatError",
    "IndexError",
    "PreconditionError",
    "SCHEMA_VERSION",
    "WiringError",
    "build",
    "decompose",
    "encode",
    "kernel_dim",
    "rank",
    "read_matrix",
    "run_ensemble",
    "trace_text",
    "verify_encoder",
    "verify_lemma",
    "verify_theorem",
    "write_matrix",
]


def decompose(rows, policy="in-order", seed=0, removal="lowest", depth_limit=32):
    """DECOMPOSE report; policy is in-order, lightest-first, random or replay."""
    return json.loads(_core.decompose_json(list(rows), policy, seed, removal, depth_limit))


def verify_theorem(N):
    return json.loads(_core.verify_theorem_json(N))


def verify_lemma(N):
    return json.loads(_core.verify_lemma_json(N))


def verify_encoder(rows, force=True, samples=0, seed=0):
    """Checks the greedy (or, with force, the composed) encoder against Ker(M).

    samples=0 enumerates every message; otherwise that many random messages
    are drawn from seed.
    """
    return json.loads(_core.verify_encoder_json(list(rows), force, samples, seed))


def run_ensemble(n=300, trials=50, seed=42, dv=3, dc=6, threads=1):
    return json.loads(_core.ensemble_json(n, trials, seed, dv, dc, threads))
