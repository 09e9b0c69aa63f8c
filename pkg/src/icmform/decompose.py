"""Gate rewrite passes down to the teleportable set.

Toffoli, controlled-V and Hadamard are rewritten into
{CNOT, P, Pdg, T, Tdg, V, Vdg} (X and Z pass through; they are absorbed
into the Pauli frame later).  Every sequence here is locked in by a
matrix-equality oracle in the test suite, not by how a diagram happens
to be drawn, and is correct up to global phase.
"""

from __future__ import annotations

from .ir import Circuit, Gate, GateKind, UGS_KINDS


def _g(kind: GateKind, *qubits: int) -> Gate:
    return Gate(kind, tuple(qubits))


def decompose_toffoli_quantum(c1: int, c2: int, t: int) -> list[Gate]:
    """Toffoli over {CNOT, T, Tdg, H, P}: 6 CNOTs, 7 T-type, 2 H, 1 P."""
    if len({c1, c2, t}) != 3:
        raise ValueError("toffoli operands must be distinct")
    return [
        _g(GateKind.H, t),
        _g(GateKind.CNOT, c2, t),
        _g(GateKind.TDG, t),
        _g(GateKind.CNOT, c1, t),
        _g(GateKind.T, t),
        _g(GateKind.CNOT, c2, t),
        _g(GateKind.TDG, t),
        _g(GateKind.CNOT, c1, t),
        _g(GateKind.T, t),
        _g(GateKind.TDG, c2),
        _g(GateKind.H, t),
        _g(GateKind.CNOT, c1, c2),
        _g(GateKind.TDG, c2),
        _g(GateKind.CNOT, c1, c2),
        _g(GateKind.T, c1),
        _g(GateKind.P, c2),
    ]


def decompose_toffoli_reversible(c1: int, c2: int, t: int) -> list[Gate]:
    """Toffoli over {CNOT, CV, CVdg}: 2 CNOTs, 3 controlled-V-type."""
    if len({c1, c2, t}) != 3:
        raise ValueError("toffoli operands must be distinct")
    return [
        _g(GateKind.CV, c2, t),
        _g(GateKind.CNOT, c1, c2),
        _g(GateKind.CVDG, c2, t),
        _g(GateKind.CNOT, c1, c2),
        _g(GateKind.CV, c1, t),
    ]


def decompose_cv(ctrl: int, tgt: int) -> list[Gate]:
    """Controlled-V over {CNOT, T, Tdg, H}: 2 CNOTs, 3 T-type, 2 H.

    The inner CNOTs run from the target wire onto the control wire.
    """
    if ctrl == tgt:
        raise ValueError("controlled-V operands must be distinct")
    return [
        _g(GateKind.T, ctrl),
        _g(GateKind.H, tgt),
        _g(GateKind.CNOT, tgt, ctrl),
        _g(GateKind.TDG, ctrl),
        _g(GateKind.T, tgt),
        _g(GateKind.CNOT, tgt, ctrl),
        _g(GateKind.H, tgt),
    ]


def decompose_cvdg(ctrl: int, tgt: int) -> list[Gate]:
    """Adjoint of :func:`decompose_cv` (T and Tdg exchanged)."""
    if ctrl == tgt:
        raise ValueError("controlled-V operands must be distinct")
    return [
        _g(GateKind.TDG, ctrl),
        _g(GateKind.H, tgt),
        _g(GateKind.CNOT, tgt, ctrl),
        _g(GateKind.T, ctrl),
        _g(GateKind.TDG, tgt),
        _g(GateKind.CNOT, tgt, ctrl),
        _g(GateKind.H, tgt),
    ]


def decompose_h(q: int) -> list[Gate]:
    """Hadamard as the rotation sandwich P.V.P (application order P, V, P)."""
    return [_g(GateKind.P, q), _g(GateKind.V, q), _g(GateKind.P, q)]


def lower_to_ugs(c: Circuit, toffoli_mode: str = "reversible") -> Circuit:
    """Rewrite until only {CNOT, P/Pdg, T/Tdg, V/Vdg, X, Z} remain.

    ``toffoli_mode`` picks the quantum (H/T based) or reversible
    (controlled-V based) Toffoli expansion.  Deterministic: identical
    input yields an identical gate list.
    """
    if toffoli_mode not in ("quantum", "reversible"):
        raise ValueError(f"unknown toffoli_mode {toffoli_mode!r}")

    stage1: list[Gate] = []
    for g in c.gates:
        if g.kind is GateKind.TOFFOLI:
            c1, c2, t = g.qubits
            if toffoli_mode == "quantum":
                stage1.extend(decompose_toffoli_quantum(c1, c2, t))
            else:
                stage1.extend(decompose_toffoli_reversible(c1, c2, t))
        else:
            stage1.append(g)

    stage2: list[Gate] = []
    for g in stage1:
        if g.kind is GateKind.CV:
            stage2.extend(decompose_cv(*g.qubits))
        elif g.kind is GateKind.CVDG:
            stage2.extend(decompose_cvdg(*g.qubits))
        else:
            stage2.append(g)

    stage3: list[Gate] = []
    for g in stage2:
        if g.kind is GateKind.H:
            stage3.extend(decompose_h(g.qubits[0]))
        else:
            stage3.append(g)

    assert all(g.kind in UGS_KINDS for g in stage3)
    return Circuit(
        num_qubits=c.num_qubits,
        gates=tuple(stage3),
        qubit_names=c.qubit_names,
        constants=c.constants,
        garbage=c.garbage,
    )
