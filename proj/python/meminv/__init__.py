# Copyright 2026 The meminv Authors
# SPDX-License-Identifier: Apache-2.0
"""Fixed-point inversion with self-organizing logic circuits."""

from ._meminv import (
    MeminvError,
    count_assignments,
    enumerate_solutions,
    export_netlist,
    gate_census,
    invert,
    invert_matrix,
    oracle_divide,
    roundtrip_netlist,
)

__all__ = [
    "MeminvError",
    "count_assignments",
    "enumerate_solutions",
    "export_netlist",
    "gate_census",
    "invert",
    "invert_matrix",
    "oracle_divide",
    "roundtrip_netlist",
]
