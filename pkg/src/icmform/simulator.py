"""Dense state-vector simulation with exhaustive measurement branching.

Used only for verification: matrix oracles for the decomposition passes
and a branch-enumeration oracle that checks every measurement outcome of
an ICM circuit against the intended gate, after applying the tracked
Pauli frame.  Qubit ``q`` owns bit ``q`` of the amplitude index
(little-endian).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ir import (
    Basis,
    Circuit,
    Conditioned,
    Gate,
    GateKind,
    IcmCircuit,
    InitState,
    PauliFrame,
    Static,
)

SQ2 = 1.0 / math.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
X_M = np.array([[0, 1], [1, 0]], dtype=complex)
Y_M = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z_M = np.array([[1, 0], [0, -1]], dtype=complex)
H_M = SQ2 * np.array([[1, 1], [1, -1]], dtype=complex)
P_M = np.array([[1, 0], [0, 1j]], dtype=complex)
T_M = np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex)
PDG_M = P_M.conj().T
TDG_M = T_M.conj().T
# Exact square root of X (equal to Rx(pi/2) up to global phase).  The
# controlled gate is built from this branch of the root so that two
# controlled-V make a CNOT exactly.
V_M = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)
VDG_M = V_M.conj().T


def rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.array([[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]], dtype=complex)


def controlled(u: np.ndarray) -> np.ndarray:
    d = u.shape[0]
    out = np.eye(2 * d, dtype=complex)
    out[d:, d:] = u
    return out


CNOT_M = controlled(X_M)
CV_M = controlled(V_M)
CVDG_M = controlled(VDG_M)
TOFFOLI_M = controlled(CNOT_M)

GATE_MATRIX: dict[GateKind, np.ndarray] = {
    GateKind.X: X_M,
    GateKind.Z: Z_M,
    GateKind.H: H_M,
    GateKind.P: P_M,
    GateKind.PDG: PDG_M,
    GateKind.T: T_M,
    GateKind.TDG: TDG_M,
    GateKind.V: V_M,
    GateKind.VDG: VDG_M,
    GateKind.CNOT: CNOT_M,
    GateKind.CV: CV_M,
    GateKind.CVDG: CVDG_M,
    GateKind.TOFFOLI: TOFFOLI_M,
}

INIT_VECTOR: dict[InitState, np.ndarray] = {
    InitState.ZERO: np.array([1, 0], dtype=complex),
    InitState.PLUS: np.array([SQ2, SQ2], dtype=complex),
    InitState.Y: np.array([SQ2, SQ2 * 1j], dtype=complex),
    InitState.A: np.array([SQ2, SQ2 * np.exp(1j * np.pi / 4)], dtype=complex),
}


class CapExceededError(RuntimeError):
    """Circuit too large for dense branch enumeration."""


def apply_unitary(state: np.ndarray, u: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Apply ``u`` on ``qubits`` (qubits[0] = most significant index of u)."""
    k = len(qubits)
    psi = state.reshape([2] * n)
    # numpy axis for qubit q is n-1-q (index bit q is the q-th least
    # significant bit of the flat amplitude index).
    axes = [n - 1 - q for q in qubits]
    tensor = u.reshape([2] * (2 * k))
    psi = np.tensordot(tensor, psi, axes=(list(range(k, 2 * k)), axes))
    psi = np.moveaxis(psi, list(range(k)), axes)
    return psi.reshape(-1)


def apply_gate(state: np.ndarray, g: Gate, n: int) -> np.ndarray:
    """Amplitude transform of one gate on an n-qubit state."""
    for q in g.qubits:
        if not 0 <= q < n:
            raise ValueError(f"operand {q} out of range for {n} qubits")
    return apply_unitary(state, GATE_MATRIX[g.kind], g.qubits, n)


def circuit_unitary(gates: "tuple[Gate, ...] | list[Gate]", n: int) -> np.ndarray:
    """Dense 2^n x 2^n matrix of a gate list (small n only)."""
    if n > 10:
        raise ValueError("dense unitary construction capped at 10 qubits")
    dim = 1 << n
    cols = np.eye(dim, dtype=complex)
    for j in range(dim):
        col = cols[:, j].copy()
        for g in gates:
            col = apply_gate(col, g, n)
        cols[:, j] = col
    return cols


def run_circuit(c: Circuit, state: np.ndarray) -> np.ndarray:
    for g in c.gates:
        state = apply_gate(state, g, c.num_qubits)
    return state


def measure_branch(
    state: np.ndarray, qubit: int, basis: Basis, forced_outcome: int, n: int
) -> tuple[float, np.ndarray]:
    """Project onto one outcome; probability may be 0 (branch pruned).

    The returned state is renormalised with the measured qubit collapsed
    to |0>/|1> (Z) or |+>/|-> (X).
    """
    if basis is Basis.X:
        work = apply_unitary(state, H_M, (qubit,), n)
    else:
        work = state
    psi = work.reshape([2] * n)
    axis = n - 1 - qubit
    sel = [slice(None)] * n
    sel[axis] = 1 - forced_outcome
    psi = psi.copy()
    psi[tuple(sel)] = 0.0
    flat = psi.reshape(-1)
    prob = float(np.vdot(flat, flat).real)
    if prob <= 0.0:
        return 0.0, flat
    flat = flat / math.sqrt(prob)
    if basis is Basis.X:
        flat = apply_unitary(flat, H_M, (qubit,), n)
    return prob, flat


def _extract_unmeasured(
    state: np.ndarray, n: int, collapsed: dict[int, tuple[Basis, int]]
) -> np.ndarray:
    """Slice collapsed product-state qubits out, keeping the rest in order."""
    work = state
    for q, (basis, _outcome) in collapsed.items():
        if basis is Basis.X:
            work = apply_unitary(work, H_M, (q,), n)
    psi = work.reshape([2] * n)
    sel: list[object] = [slice(None)] * n
    for q, (basis, outcome) in collapsed.items():
        sel[n - 1 - q] = outcome
    return psi[tuple(sel)].reshape(-1)


@dataclass(frozen=True)
class BranchOutcome:
    """One measurement-outcome combination of an enumerated circuit."""

    outcomes: tuple[tuple[int, int], ...]  # (measurement id, raw outcome)
    probability: float
    state: np.ndarray  # restricted to unmeasured qubits, ascending order
    frame: PauliFrame  # full-width accumulated frame
    unmeasured: tuple[int, ...]

    @property
    def outcomes_map(self) -> dict[int, int]:
        return dict(self.outcomes)


def initial_state(c: IcmCircuit, input_state: np.ndarray | None) -> np.ndarray:
    """Product of magic/zero/plus inits with ``input_state`` on the input wires."""
    n = c.num_qubits
    inputs = c.input_qubits
    if inputs:
        if input_state is None:
            raise ValueError("circuit has input wires but no input state was given")
        input_state = np.asarray(input_state, dtype=complex).reshape(-1)
        if input_state.shape[0] != 1 << len(inputs):
            raise ValueError(
                f"input state covers {input_state.shape[0]} amplitudes, expected {1 << len(inputs)}"
            )
    state = np.ones(1, dtype=complex)
    placed: list[int] = []
    # Build ancilla product state, then weave the (possibly entangled)
    # input state in via a qubit permutation.
    for q in range(n):
        if c.inits[q] is InitState.INPUT:
            continue
        state = np.kron(INIT_VECTOR[c.inits[q]], state)
        placed.append(q)
    if inputs:
        state = np.kron(input_state, state) if state.size else input_state
        order = list(placed) + list(inputs)  # qubit owning each tensor slot, low->high
        psi = state.reshape([2] * n)
        # slot i (low bit i) holds qubit order[i]; numpy axis of slot i is n-1-i.
        perm = [n - 1 - order.index(q) for q in range(n - 1, -1, -1)]
        psi = psi.transpose(perm)
        state = psi.reshape(-1)
    return state


def _selected_basis(m_selector, eff: dict[int, int]) -> Basis:
    if isinstance(m_selector, Static):
        return m_selector.basis
    if isinstance(m_selector, Conditioned):
        return m_selector.if_zero if eff[m_selector.on] == 0 else m_selector.if_one
    raise TypeError(f"unknown selector {m_selector!r}")


def enumerate_branches(
    c: IcmCircuit,
    input_state: np.ndarray | None = None,
    cap: int = 16,
    prune_tol: float = 1e-12,
) -> list[BranchOutcome]:
    """Depth-first enumeration of every measurement outcome combination.

    Honors feedforward basis selection and frame updates; zero-probability
    branches are pruned.  Frame updates and basis conditions read effective
    outcomes (raw XOR pending frame bit of the measured qubit).
    """
    n = c.num_qubits
    if n > cap:
        raise CapExceededError(f"{n} qubits exceeds enumeration cap {cap}")
    state0 = initial_state(c, input_state)
    for ctrl, tgt in c.cnots:
        state0 = apply_unitary(state0, CNOT_M, (ctrl, tgt), n)

    measured_qubits = [m.qubit for m in c.measurements]
    unmeasured = tuple(q for q in range(n) if q not in measured_qubits)
    results: list[BranchOutcome] = []

    def walk(
        idx: int,
        state: np.ndarray,
        prob: float,
        raw: dict[int, int],
        eff: dict[int, int],
        fx: bytearray,
        fz: bytearray,
        collapsed: dict[int, tuple[Basis, int]],
    ) -> None:
        if idx == len(c.measurements):
            rest = _extract_unmeasured(state, n, collapsed) if collapsed else state.copy()
            results.append(
                BranchOutcome(
                    outcomes=tuple(sorted(raw.items())),
                    probability=prob,
                    state=rest,
                    frame=PauliFrame(bytes(fx), bytes(fz)),
                    unmeasured=unmeasured,
                )
            )
            return
        m = c.measurements[idx]
        basis = _selected_basis(m.selector, eff)
        for outcome in (0, 1):
            p, nxt = measure_branch(state, m.qubit, basis, outcome, n)
            if p <= prune_tol:
                continue
            flip = fz[m.qubit] if basis is Basis.X else fx[m.qubit]
            e = outcome ^ flip
            raw2 = dict(raw)
            raw2[m.id] = outcome
            eff2 = dict(eff)
            eff2[m.id] = e
            fx2, fz2 = bytearray(fx), bytearray(fz)
            for u in m.frame_updates:
                if all(eff2[mid] == bit for mid, bit in u.conditions):
                    fx2[u.target] ^= u.pauli.x_bit
                    fz2[u.target] ^= u.pauli.z_bit
            coll2 = dict(collapsed)
            coll2[m.qubit] = (basis, outcome)
            walk(idx + 1, nxt, prob * p, raw2, eff2, fx2, fz2, coll2)

    walk(0, state0, 1.0, {}, {}, bytearray(c.final_frame.x), bytearray(c.final_frame.z), {})
    return results


def frame_correction_matrix(frame: PauliFrame, qubits: tuple[int, ...]) -> np.ndarray:
    """Dense X^x Z^z correction over the listed qubits (ascending order)."""
    mat = np.ones((1, 1), dtype=complex)
    for q in qubits:
        x, z = frame.bits(q)
        local = np.eye(2, dtype=complex)
        if z:
            local = Z_M @ local
        if x:
            local = X_M @ local
        mat = np.kron(local, mat)
    return mat


def corrected_branch_state(branch: BranchOutcome) -> np.ndarray:
    """Branch output with its accumulated Pauli frame applied."""
    return frame_correction_matrix(branch.frame, branch.unmeasured) @ branch.state


def corrected_output_state(c: IcmCircuit, branch: BranchOutcome) -> np.ndarray:
    """Frame-corrected branch state with bit k owned by the k-th output wire."""
    state = corrected_branch_state(branch)
    outs = c.output_qubits
    if set(outs) != set(branch.unmeasured):
        raise ValueError("branch unmeasured qubits differ from circuit outputs")
    m = len(outs)
    pos = {q: j for j, q in enumerate(branch.unmeasured)}  # bit j of `state`
    psi = state.reshape([2] * m)
    # tensor axis a holds bit m-1-a; we want new bit k = old bit pos(outs[k]).
    perm = [m - 1 - pos[outs[m - 1 - a]] for a in range(m)]
    return psi.transpose(perm).reshape(-1)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 with both states normalised (global phase irrelevant)."""
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("cannot compare zero-norm states")
    return float(abs(np.vdot(a, b) / (na * nb)) ** 2)


def equal_up_to_global_phase(u: np.ndarray, w: np.ndarray, tol: float = 1e-10) -> bool:
    """True when w = e^{i phi} u entrywise within tol."""
    if u.shape != w.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {w.shape}")
    idx = np.unravel_index(np.argmax(np.abs(u)), u.shape)
    if abs(u[idx]) < 1e-14:
        raise ValueError("zero reference matrix")
    phase = w[idx] / u[idx]
    if abs(abs(phase) - 1.0) > tol:
        return False
    return bool(np.max(np.abs(w - phase * u)) <= tol)


@dataclass(frozen=True)
class MatrixEquivReport:
    passed: bool
    max_error: float


def assert_matrix_equiv(
    gates: "tuple[Gate, ...] | list[Gate]", target: np.ndarray, n: int, tol: float = 1e-10
) -> MatrixEquivReport:
    """Composed matrix of ``gates`` equals ``target`` up to global phase."""
    if n > 3:
        raise ValueError("dense product oracle limited to 3 qubits")
    u = circuit_unitary(gates, n)
    if u.shape != target.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {target.shape}")
    idx = np.unravel_index(np.argmax(np.abs(target)), target.shape)
    phase = u[idx] / target[idx]
    phase /= abs(phase)
    err = float(np.max(np.abs(u - phase * target)))
    return MatrixEquivReport(passed=err <= tol, max_error=err)


def random_states(num_qubits: int, trials: int, seed: int) -> list[np.ndarray]:
    """Seeded Haar-ish random pure states (complex normal, normalised)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(trials):
        v = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
        out.append(v / np.linalg.norm(v))
    return out


@dataclass(frozen=True)
class GadgetFailure:
    trial: int
    outcomes: tuple[tuple[int, int], ...]
    fidelity: float


@dataclass(frozen=True)
class GadgetEquivReport:
    passed: bool
    kind: GateKind
    trials: int
    branches_checked: int
    min_fidelity: float
    first_failure: GadgetFailure | None
    balanced_measurements: bool


def assert_gadget_equiv(
    kind: GateKind,
    target: np.ndarray,
    trials: int = 20,
    tol: float = 1e-10,
    seed: int = 7,
    check_balance: bool = True,
) -> GadgetEquivReport:
    """Every branch of the teleportation gadget must reproduce ``target``.

    Builds the single-gate circuit, transforms it, and enumerates all
    measurement branches for ``trials`` random input states; each branch's
    frame-corrected output is compared to target|psi> by fidelity.  Also
    checks that every measurement splits 50/50 for these generic inputs.
    """
    from .transform import transform_to_icm  # local import, no cycle at module load

    circuit = Circuit(num_qubits=1, gates=(Gate(kind, (0,)),))
    icm = transform_to_icm(circuit)
    n_meas = len(icm.measurements)
    min_fid = 1.0
    first_failure: GadgetFailure | None = None
    balanced = True
    checked = 0
    for trial, psi in enumerate(random_states(1, trials, seed)):
        want = target @ psi
        branches = enumerate_branches(icm, psi)
        total = 0.0
        for br in branches:
            checked += 1
            total += br.probability
            if abs(br.probability - 0.5**n_meas) > 1e-10:
                balanced = False
            fid = fidelity(corrected_branch_state(br), want)
            if fid < min_fid:
                min_fid = fid
            if fid < 1.0 - tol and first_failure is None:
                first_failure = GadgetFailure(trial, br.outcomes, fid)
        if abs(total - 1.0) > 1e-10:
            balanced = False
    passed = first_failure is None and (balanced or not check_balance)
    return GadgetEquivReport(
        passed=passed,
        kind=kind,
        trials=trials,
        branches_checked=checked,
        min_fidelity=min_fid,
        first_failure=first_failure,
        balanced_measurements=balanced,
    )
