"""Source- and ICM-level circuit representations.

``Circuit`` is the pre-transform IR: an ordered gate list over named
qubits.  ``IcmCircuit`` is the canonical target form: per-qubit
initialisations, a CNOT-only network, and a staggered measurement
schedule whose basis choices feed forward on earlier outcomes.
``PauliFrame`` is the classical record of pending X/Z byproducts that
are tracked instead of being applied as gates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class GateKind(Enum):
    X = "x"
    Z = "z"
    CNOT = "cnot"
    TOFFOLI = "toffoli"
    CV = "cv"
    CVDG = "cvdg"
    H = "h"
    P = "p"
    PDG = "pdg"
    T = "t"
    TDG = "tdg"
    V = "v"
    VDG = "vdg"


#: Number of operands per gate kind (controls listed before targets).
GATE_ARITY: dict[GateKind, int] = {
    GateKind.X: 1,
    GateKind.Z: 1,
    GateKind.H: 1,
    GateKind.P: 1,
    GateKind.PDG: 1,
    GateKind.T: 1,
    GateKind.TDG: 1,
    GateKind.V: 1,
    GateKind.VDG: 1,
    GateKind.CNOT: 2,
    GateKind.CV: 2,
    GateKind.CVDG: 2,
    GateKind.TOFFOLI: 3,
}

#: Gate set allowed after lowering (single-qubit teleportable rotations,
#: CNOTs, and the Paulis that get absorbed into the frame).
UGS_KINDS = frozenset(
    {
        GateKind.CNOT,
        GateKind.P,
        GateKind.PDG,
        GateKind.T,
        GateKind.TDG,
        GateKind.V,
        GateKind.VDG,
        GateKind.X,
        GateKind.Z,
    }
)

T_TYPE = frozenset({GateKind.T, GateKind.TDG})
P_TYPE = frozenset({GateKind.P, GateKind.PDG})
V_TYPE = frozenset({GateKind.V, GateKind.VDG})
CV_TYPE = frozenset({GateKind.CV, GateKind.CVDG})


@dataclass(frozen=True)
class Gate:
    """One gate application; ``qubits`` lists controls before targets."""

    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        arity = GATE_ARITY[self.kind]
        if len(self.qubits) != arity:
            raise ValueError(
                f"{self.kind.value} takes {arity} operand(s), got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.value} operands must be distinct: {self.qubits}")


def gate(kind: GateKind, *qubits: int) -> Gate:
    return Gate(kind, tuple(qubits))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``num_qubits`` wires.

    ``constants`` holds the optional classical 0/1 initialisation of each
    wire (``None`` marks a live input), ``garbage`` flags wires whose
    output value is irrelevant.  Gate order is significant everywhere.
    """

    num_qubits: int
    gates: tuple[Gate, ...] = ()
    qubit_names: tuple[str, ...] = ()
    constants: tuple[int | None, ...] = ()
    garbage: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        if not self.qubit_names:
            object.__setattr__(
                self, "qubit_names", tuple(f"q{i}" for i in range(self.num_qubits))
            )
        if not self.constants:
            object.__setattr__(self, "constants", (None,) * self.num_qubits)
        if not self.garbage:
            object.__setattr__(self, "garbage", (False,) * self.num_qubits)
        if len(self.qubit_names) != self.num_qubits:
            raise ValueError("qubit_names length must equal num_qubits")
        if len(self.constants) != self.num_qubits:
            raise ValueError("constants length must equal num_qubits")
        if len(self.garbage) != self.num_qubits:
            raise ValueError("garbage length must equal num_qubits")
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"gate {g} references qubit {q} out of range")

    def count(self, *kinds: GateKind) -> int:
        wanted = set(kinds)
        return sum(1 for g in self.gates if g.kind in wanted)


class InitState(Enum):
    """Initial state of an ICM wire.

    ``Y`` is (|0> + i|1>)/sqrt(2) and ``A`` is (|0> + e^{i pi/4}|1>)/sqrt(2);
    ``INPUT`` marks a data wire fed from outside.
    """

    ZERO = "zero"
    PLUS = "plus"
    Y = "Y"
    A = "A"
    INPUT = "input"


class Basis(Enum):
    X = "X"
    Z = "Z"


class Pauli(Enum):
    """Byproduct operator recorded by a frame update (XZ means X.Z)."""

    X = (1, 0)
    Z = (0, 1)
    XZ = (1, 1)

    @property
    def x_bit(self) -> int:
        return self.value[0]

    @property
    def z_bit(self) -> int:
        return self.value[1]

    @staticmethod
    def from_bits(x: int, z: int) -> "Pauli":
        return {(1, 0): Pauli.X, (0, 1): Pauli.Z, (1, 1): Pauli.XZ}[(x, z)]


@dataclass(frozen=True)
class Static:
    """Fixed measurement basis."""

    basis: Basis


@dataclass(frozen=True)
class Conditioned:
    """Basis chosen by feedforward on an earlier measurement outcome."""

    on: int
    if_zero: Basis
    if_one: Basis


Selector = Static | Conditioned


@dataclass(frozen=True)
class FrameUpdate:
    """Pauli recorded on ``target`` when every (measurement, bit) condition holds.

    Conditions refer to effective outcomes (raw outcome XOR the pending
    frame bit of the measured qubit), which is what makes gadget chains
    compose without rewriting each other's tables.
    """

    conditions: tuple[tuple[int, int], ...]
    target: int
    pauli: Pauli


@dataclass(frozen=True)
class ConditionalMeasurement:
    id: int
    qubit: int
    selector: Selector
    frame_updates: tuple[FrameUpdate, ...] = ()


@dataclass(frozen=True)
class PauliFrame:
    """Per-qubit pending byproduct X^x Z^z, composed by XOR."""

    x: bytes
    z: bytes

    def __post_init__(self) -> None:
        if len(self.x) != len(self.z):
            raise ValueError("x and z bit strings must have equal length")
        if any(b not in (0, 1) for b in self.x) or any(b not in (0, 1) for b in self.z):
            raise ValueError("frame entries must be bits")

    @staticmethod
    def identity(num_qubits: int) -> "PauliFrame":
        return PauliFrame(bytes(num_qubits), bytes(num_qubits))

    @staticmethod
    def from_bits(x: "list[int] | tuple[int, ...]", z: "list[int] | tuple[int, ...]") -> "PauliFrame":
        return PauliFrame(bytes(x), bytes(z))

    @property
    def num_qubits(self) -> int:
        return len(self.x)

    def bits(self, qubit: int) -> tuple[int, int]:
        return self.x[qubit], self.z[qubit]

    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)


def frame_compose(a: PauliFrame, b: PauliFrame) -> PauliFrame:
    """Composition of two byproduct records (per-qubit XOR)."""
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"frame size mismatch: {a.num_qubits} != {b.num_qubits}")
    x = bytes(p ^ q for p, q in zip(a.x, b.x))
    z = bytes(p ^ q for p, q in zip(a.z, b.z))
    return PauliFrame(x, z)


def frame_track_cnot(f: PauliFrame, control: int, target: int) -> PauliFrame:
    """Push a frame through CNOT: X spreads control->target, Z target->control."""
    if control == target:
        raise ValueError("control and target must differ")
    x = bytearray(f.x)
    z = bytearray(f.z)
    x[target] ^= x[control]
    z[control] ^= z[target]
    return PauliFrame(bytes(x), bytes(z))


@dataclass(frozen=True)
class IcmCircuit:
    """Canonical form: all inits, then only CNOTs, then only measurements.

    The type is constructive: no other gate kind can be represented, so
    the structural part of the canon holds by construction and
    :func:`validate_icm` checks the remaining bookkeeping invariants.
    """

    num_qubits: int
    inits: tuple[InitState, ...]
    cnots: tuple[tuple[int, int], ...]
    measurements: tuple[ConditionalMeasurement, ...]
    outputs: tuple[tuple[str, int], ...]
    final_frame: PauliFrame

    @property
    def outputs_map(self) -> dict[str, int]:
        return dict(self.outputs)

    @property
    def output_qubits(self) -> tuple[int, ...]:
        return tuple(q for _, q in self.outputs)

    @property
    def input_qubits(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.inits) if s is InitState.INPUT)


def validate_icm(c: IcmCircuit) -> list[str]:
    """Check every IcmCircuit invariant; each violation names the offender."""
    issues: list[str] = []
    n = c.num_qubits
    if len(c.inits) != n:
        issues.append(f"inits length {len(c.inits)} != num_qubits {n}")
        return issues
    if c.final_frame.num_qubits != n:
        issues.append(f"final_frame covers {c.final_frame.num_qubits} qubits, expected {n}")

    for i, (ctrl, tgt) in enumerate(c.cnots):
        if ctrl == tgt:
            issues.append(f"cnot {i}: control equals target ({ctrl})")
        for q in (ctrl, tgt):
            if not 0 <= q < n:
                issues.append(f"cnot {i}: qubit {q} out of range")

    position_of: dict[int, int] = {}
    measured_at: dict[int, int] = {}
    for pos, m in enumerate(c.measurements):
        if m.id != pos:
            issues.append(f"measurement at position {pos} has id {m.id}, expected {pos}")
        position_of[m.id] = pos
        if not 0 <= m.qubit < n:
            issues.append(f"measurement m{m.id}: qubit {m.qubit} out of range")
        elif m.qubit in measured_at:
            issues.append(f"measurement m{m.id}: qubit {m.qubit} measured more than once")
        else:
            measured_at[m.qubit] = pos
        if isinstance(m.selector, Conditioned):
            if m.selector.on not in position_of or position_of[m.selector.on] >= pos:
                issues.append(
                    f"measurement m{m.id}: condition on m{m.selector.on} is not earlier"
                )

    for pos, m in enumerate(c.measurements):
        for u in m.frame_updates:
            for mid, bit in u.conditions:
                if mid not in position_of or position_of[mid] > pos:
                    issues.append(
                        f"frame update on m{m.id}: condition m{mid} not resolved yet"
                    )
                if bit not in (0, 1):
                    issues.append(f"frame update on m{m.id}: condition bit {bit}")
            if not 0 <= u.target < n:
                issues.append(f"frame update on m{m.id}: target {u.target} out of range")
            elif u.target in measured_at and measured_at[u.target] <= pos:
                issues.append(
                    f"frame update on m{m.id}: target qubit {u.target} already measured"
                )

    out_qubits = [q for _, q in c.outputs]
    out_labels = [lbl for lbl, _ in c.outputs]
    if len(set(out_qubits)) != len(out_qubits):
        issues.append("duplicate output qubits")
    if len(set(out_labels)) != len(out_labels):
        issues.append("duplicate output labels")
    for lbl, q in c.outputs:
        if not 0 <= q < n:
            issues.append(f"output {lbl}: qubit {q} out of range")
        elif q in measured_at:
            issues.append(f"output {lbl}: qubit {q} is measured")
    unmeasured = set(range(n)) - set(measured_at)
    for q in sorted(unmeasured - set(out_qubits)):
        issues.append(f"qubit {q} is neither measured nor an output")
    return issues
