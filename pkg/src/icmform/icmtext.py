"""Line-oriented text format for ICM circuits (bit-exact round trip).

Grammar::

    .icm v1
    .qubits <n>
    .init q<i> <input|zero|plus|Y|A>         one per qubit, ascending i
    .cnot q<c> q<t>                          ordered
    .measure m<k> q<i> <X|Z|cond(m<j>:B0,B1)>
    .frame m<j>=<b>[,m<j>=<b>] -> <X|Z|XZ> q<i>
    .pauli <X|Z|XZ> q<i>                     static frame, ascending i
    .output <label> q<i>

``.frame`` lines follow the measurement that owns them (the one whose
outcome resolves last among the conditions); conditions read effective
outcomes.  ``.pauli`` lines carry the unconditional final frame so a
parse of an emission reproduces every field.  Measurement ids are
consecutive from 0 in schedule order.
"""

from __future__ import annotations

import re

from .ir import (
    Basis,
    Conditioned,
    ConditionalMeasurement,
    FrameUpdate,
    IcmCircuit,
    InitState,
    Pauli,
    PauliFrame,
    Static,
    validate_icm,
)

_INIT_NAMES = {
    InitState.INPUT: "input",
    InitState.ZERO: "zero",
    InitState.PLUS: "plus",
    InitState.Y: "Y",
    InitState.A: "A",
}
_INIT_BY_NAME = {v: k for k, v in _INIT_NAMES.items()}

_QUBIT_RE = re.compile(r"^q(\d+)$")
_MEAS_RE = re.compile(r"^m(\d+)$")
_COND_RE = re.compile(r"^cond\(m(\d+):([XZ]),([XZ])\)$")
_FRAME_COND_RE = re.compile(r"^m(\d+)=([01])$")


class IcmParseError(ValueError):
    """Malformed ``.icm`` input; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def emit_icm(c: IcmCircuit) -> str:
    """Serialize; requires a circuit that passes :func:`validate_icm`."""
    issues = validate_icm(c)
    if issues:
        raise ValueError("refusing to emit invalid circuit: " + "; ".join(issues))
    lines = [".icm v1", f".qubits {c.num_qubits}"]
    for i, state in enumerate(c.inits):
        lines.append(f".init q{i} {_INIT_NAMES[state]}")
    for ctrl, tgt in c.cnots:
        lines.append(f".cnot q{ctrl} q{tgt}")
    for m in c.measurements:
        if isinstance(m.selector, Static):
            basis = m.selector.basis.value
        else:
            basis = f"cond(m{m.selector.on}:{m.selector.if_zero.value},{m.selector.if_one.value})"
        lines.append(f".measure m{m.id} q{m.qubit} {basis}")
        for u in m.frame_updates:
            conds = ",".join(f"m{mid}={bit}" for mid, bit in u.conditions)
            lines.append(f".frame {conds} -> {u.pauli.name} q{u.target}")
    for q in range(c.num_qubits):
        x, z = c.final_frame.bits(q)
        if x or z:
            lines.append(f".pauli {Pauli.from_bits(x, z).name} q{q}")
    for label, q in c.outputs:
        if not label or any(ch.isspace() for ch in label):
            raise ValueError(f"output label {label!r} is not serializable")
        lines.append(f".output {label} q{q}")
    return "\n".join(lines) + "\n"


def _req_qubit(line_no: int, token: str) -> int:
    m = _QUBIT_RE.match(token)
    if not m:
        raise IcmParseError(line_no, f"expected qubit like q3, got {token!r}")
    return int(m.group(1))


def parse_icm(text: str) -> IcmCircuit:
    """Parse; ``parse_icm(emit_icm(c)) == c`` for every valid circuit."""
    num_qubits: int | None = None
    inits: dict[int, InitState] = {}
    cnots: list[tuple[int, int]] = []
    measurements: list[ConditionalMeasurement] = []
    outputs: list[tuple[str, int]] = []
    frame_x: dict[int, int] = {}
    frame_z: dict[int, int] = {}
    seen_header = False
    measured_qubits: set[int] = set()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if not seen_header:
            if head != ".icm" or tokens[1:] != ["v1"]:
                raise IcmParseError(line_no, "file must start with '.icm v1'")
            seen_header = True
            continue
        if head == ".qubits":
            if num_qubits is not None:
                raise IcmParseError(line_no, "duplicate .qubits")
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise IcmParseError(line_no, ".qubits expects one integer")
            num_qubits = int(tokens[1])
            continue
        if num_qubits is None:
            raise IcmParseError(line_no, ".qubits must precede other sections")

        if head == ".init":
            if len(tokens) != 3:
                raise IcmParseError(line_no, ".init expects qubit and state")
            q = _req_qubit(line_no, tokens[1])
            if tokens[2] not in _INIT_BY_NAME:
                raise IcmParseError(line_no, f"unknown init state {tokens[2]!r}")
            if q in inits:
                raise IcmParseError(line_no, f"duplicate init for qubit {q}")
            inits[q] = _INIT_BY_NAME[tokens[2]]
        elif head == ".cnot":
            if len(tokens) != 3:
                raise IcmParseError(line_no, ".cnot expects two qubits")
            cnots.append((_req_qubit(line_no, tokens[1]), _req_qubit(line_no, tokens[2])))
        elif head == ".measure":
            if len(tokens) != 4:
                raise IcmParseError(line_no, ".measure expects id, qubit, basis")
            mid_match = _MEAS_RE.match(tokens[1])
            if not mid_match:
                raise IcmParseError(line_no, f"expected measurement id like m0, got {tokens[1]!r}")
            mid = int(mid_match.group(1))
            if mid != len(measurements):
                raise IcmParseError(
                    line_no, f"measurement ids must be consecutive; expected m{len(measurements)}"
                )
            q = _req_qubit(line_no, tokens[2])
            if q in measured_qubits:
                raise IcmParseError(line_no, f"qubit {q} measured more than once")
            measured_qubits.add(q)
            spec = tokens[3]
            selector: Static | Conditioned
            if spec in ("X", "Z"):
                selector = Static(Basis(spec))
            else:
                cond = _COND_RE.match(spec)
                if not cond:
                    raise IcmParseError(line_no, f"malformed basis {spec!r}")
                on = int(cond.group(1))
                if on >= mid:
                    raise IcmParseError(
                        line_no, f"measurement m{mid} conditioned on m{on} which is not earlier"
                    )
                selector = Conditioned(on, Basis(cond.group(2)), Basis(cond.group(3)))
            measurements.append(ConditionalMeasurement(mid, q, selector))
        elif head == ".frame":
            if len(tokens) != 5 or tokens[2] != "->":
                raise IcmParseError(line_no, ".frame expects 'conds -> PAULI qubit'")
            if not measurements:
                raise IcmParseError(line_no, ".frame line before any .measure")
            conds = []
            for part in tokens[1].split(","):
                cm = _FRAME_COND_RE.match(part)
                if not cm:
                    raise IcmParseError(line_no, f"malformed condition {part!r}")
                conds.append((int(cm.group(1)), int(cm.group(2))))
            if tokens[3] not in Pauli.__members__:
                raise IcmParseError(line_no, f"unknown Pauli {tokens[3]!r}")
            owner = measurements[-1]
            update = FrameUpdate(tuple(conds), _req_qubit(line_no, tokens[4]), Pauli[tokens[3]])
            for mid, _ in update.conditions:
                if mid > owner.id:
                    raise IcmParseError(line_no, f"condition m{mid} is not resolved yet")
            measurements[-1] = ConditionalMeasurement(
                owner.id, owner.qubit, owner.selector, owner.frame_updates + (update,)
            )
        elif head == ".pauli":
            if len(tokens) != 3:
                raise IcmParseError(line_no, ".pauli expects Pauli and qubit")
            if tokens[1] not in Pauli.__members__:
                raise IcmParseError(line_no, f"unknown Pauli {tokens[1]!r}")
            q = _req_qubit(line_no, tokens[2])
            p = Pauli[tokens[1]]
            frame_x[q] = frame_x.get(q, 0) ^ p.x_bit
            frame_z[q] = frame_z.get(q, 0) ^ p.z_bit
        elif head == ".output":
            if len(tokens) != 3:
                raise IcmParseError(line_no, ".output expects label and qubit")
            outputs.append((tokens[1], _req_qubit(line_no, tokens[2])))
        else:
            raise IcmParseError(line_no, f"unknown line kind {head!r}")

    if num_qubits is None:
        raise IcmParseError(0, "missing .qubits")
    init_list = []
    for q in range(num_qubits):
        if q not in inits:
            raise IcmParseError(0, f"missing .init for qubit {q}")
        init_list.append(inits[q])
    fx = bytes(frame_x.get(q, 0) for q in range(num_qubits))
    fz = bytes(frame_z.get(q, 0) for q in range(num_qubits))
    circuit = IcmCircuit(
        num_qubits=num_qubits,
        inits=tuple(init_list),
        cnots=tuple(cnots),
        measurements=tuple(measurements),
        outputs=tuple(outputs),
        final_frame=PauliFrame(fx, fz),
    )
    issues = validate_icm(circuit)
    if issues:
        raise IcmParseError(0, "; ".join(issues))
    return circuit
