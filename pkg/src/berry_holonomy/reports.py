"""Report dataclasses and deterministic JSON helpers.

Every report that crosses the CLI boundary serializes complex numbers as
two-element [re, im] arrays and matrices as row-major nested lists, so the
output is plain JSON with no custom decoder needed on the other side.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np


def complex_pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def matrix_payload(m) -> list:
    """Row-major nested lists of [re, im] pairs."""
    arr = np.asarray(m, dtype=complex)
    return [[complex_pair(v) for v in row] for row in arr]


def dump_json(obj: Any, path=None) -> str:
    """Canonical dump: sorted keys, fixed separators. Identical input
    objects produce byte-identical text."""
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
            fh.write("\n")
    return text


@dataclass
class IdentityReport:
    """Outcome of an identity check split into a trusted interior block and
    the truncation-polluted boundary."""

    interior_dev: float
    boundary_dev: float
    D: int
    buffer: int
    label: str = ""
    extras: dict = field(default_factory=dict)

    def to_payload(self) -> dict:
        return {
            "interior_dev": self.interior_dev,
            "boundary_dev": self.boundary_dev,
            "D": self.D,
            "buffer": self.buffer,
            "label": self.label,
            "extras": self.extras,
        }


@dataclass
class SpectrumReport:
    matched_count: int
    max_dev: float
    kernel_dim_estimate: int

    def to_payload(self) -> dict:
        return {
            "matched_count": self.matched_count,
            "max_dev": self.max_dev,
            "kernel_dim_estimate": self.kernel_dim_estimate,
        }


@dataclass
class ConvergenceReport:
    dims: list
    deviations: list
    converged: bool

    def to_payload(self) -> dict:
        return {
            "dims": list(self.dims),
            "deviations": [float(d) for d in self.deviations],
            "converged": self.converged,
        }
