"""Derive the gadget byproduct tables by exhaustive branch enumeration.

Builds each teleportation gadget with an *empty* correction table,
enumerates every measurement branch for a batch of random input states,
solves for the unique output Pauli that repairs each branch, and fits a
per-sector affine GF(2) model (sector = outcome of the gadget's first
measurement, which selects the routing pattern).  The fitted model is
printed in the exact form frozen into ``icmform.gadgets``.

Run from the repository root:  python3 scripts/derive_corrections.py
"""

from __future__ import annotations

import itertools
import sys

import numpy as np

from icmform.gadgets import SIMPLE_KINDS, build_gadget
from icmform.ir import (
    ConditionalMeasurement,
    GateKind,
    IcmCircuit,
    InitState,
    PauliFrame,
)
from icmform.simulator import (
    GATE_MATRIX,
    enumerate_branches,
    fidelity,
    random_states,
)

TRIALS = 12
SEED = 2024


def stripped(icm: IcmCircuit) -> IcmCircuit:
    """Same circuit with all frame updates removed."""
    meas = tuple(
        ConditionalMeasurement(m.id, m.qubit, m.selector, ())
        for m in icm.measurements
    )
    return IcmCircuit(
        icm.num_qubits, icm.inits, icm.cnots, meas, icm.outputs, icm.final_frame
    )


def gadget_circuit(kind: GateKind) -> IcmCircuit:
    g = build_gadget(kind, 0, 1, 0)
    n = 1 + len(g.ancillas)
    return IcmCircuit(
        num_qubits=n,
        inits=(InitState.INPUT,) + g.inits,
        cnots=g.cnots,
        measurements=g.measurements,
        outputs=(("out", g.output_qubit),),
        final_frame=PauliFrame.identity(n),
    )


PAULI2 = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (0, 1): np.diag([1, -1]).astype(complex),
    (1, 1): np.array([[0, 1], [1, 0]]) @ np.diag([1, -1]).astype(complex),
}


def solve_branch_corrections(kind: GateKind) -> dict[tuple[int, ...], tuple[int, int]]:
    """Map raw outcome tuple -> (x, z) correction on the gadget output."""
    icm = stripped(gadget_circuit(kind))
    target = GATE_MATRIX[kind]
    n_meas = len(icm.measurements)
    table: dict[tuple[int, ...], tuple[int, int]] = {}
    for psi in random_states(1, TRIALS, SEED):
        want = target @ psi
        for br in enumerate_branches(icm, psi):
            key = tuple(bit for _, bit in br.outcomes)
            if abs(br.probability - 0.5**n_meas) > 1e-9:
                raise SystemExit(f"{kind}: branch {key} probability {br.probability}")
            hits = [
                (x, z)
                for (x, z), mat in PAULI2.items()
                if fidelity(mat @ br.state, want) > 1 - 1e-9
            ]
            if len(hits) != 1:
                raise SystemExit(f"{kind}: branch {key} has corrections {hits}")
            if key in table and table[key] != hits[0]:
                raise SystemExit(f"{kind}: branch {key} correction is input-dependent")
            table[key] = hits[0]
    return table


def fit_affine(rows: list[tuple[tuple[int, ...], int]], n_vars: int) -> tuple[int, ...]:
    """Fit bit = c + sum a_k m_k (mod 2); exact fit required."""
    coeffs = [0] * (n_vars + 1)
    base = dict(rows)[tuple([0] * n_vars)]
    coeffs[0] = base
    for k in range(n_vars):
        probe = tuple(1 if j == k else 0 for j in range(n_vars))
        coeffs[k + 1] = dict(rows)[probe] ^ base
    for key, bit in rows:
        pred = coeffs[0] ^ int(np.bitwise_xor.reduce([c & m for c, m in zip(coeffs[1:], key)] or [0]))
        pred = coeffs[0]
        for c, m in zip(coeffs[1:], key):
            pred ^= c & m
        if pred != bit:
            raise SystemExit(f"correction table is not affine: {key} -> {bit} vs {pred}")
    return tuple(coeffs)


def derive_t_table(kind: GateKind) -> list[tuple[tuple[tuple[int, int], ...], str]]:
    table = solve_branch_corrections(kind)
    entries: list[tuple[tuple[tuple[int, int], ...], str]] = []
    for sector in (0, 1):
        rows = [(key[1:], xz) for key, xz in table.items() if key[0] == sector]
        for bit_idx, name in ((0, "x"), (1, "z")):
            data = [(key, xz[bit_idx]) for key, xz in rows]
            coeffs = fit_affine(data, 4)
            if coeffs[0]:
                entries.append((((0, sector),), name))
            for k, c in enumerate(coeffs[1:], start=1):
                if c:
                    entries.append((((0, sector), (k, 1)), name))
    # Merge duplicate condition sets into a single Pauli.
    merged: dict[tuple[tuple[int, int], ...], set[str]] = {}
    for conds, component in entries:
        merged.setdefault(conds, set()).add(component)
    out = []
    for conds in sorted(merged):
        comp = merged[conds]
        pauli = "XZ" if comp == {"x", "z"} else ("X" if comp == {"x"} else "Z")
        out.append((conds, pauli))
    return out


def derive_simple_table(kind: GateKind) -> list[tuple[tuple[tuple[int, int], ...], str]]:
    table = solve_branch_corrections(kind)
    out = []
    for outcome in (0, 1):
        x, z = table[(outcome,)]
        if x or z:
            pauli = "XZ" if x and z else ("X" if x else "Z")
            out.append(((((0, outcome),)), pauli))
    return out


def main() -> int:
    for kind in sorted(SIMPLE_KINDS, key=lambda k: k.value):
        rows = derive_simple_table(kind)
        print(f"GateKind.{kind.name}: (")
        for conds, pauli in rows:
            print(f"    ({conds!r}, Pauli.{pauli}),")
        print("),")
    for kind in (GateKind.T, GateKind.TDG):
        rows = derive_t_table(kind)
        print(f"GateKind.{kind.name}: (")
        for conds, pauli in rows:
            print(f"    ({conds!r}, Pauli.{pauli}),")
        print("),")
    return 0


if __name__ == "__main__":
    sys.exit(main())
