"""Source circuit -> ICM canonical form.

Lower to the teleportable set, then replace every P/V/T rotation with
its gadget in gate order; each gadget's output wire takes over the
logical wire it acted on.  X and Z are absorbed into the running Pauli
frame at zero cost.

Byproduct bookkeeping: a gadget's outcome-conditioned corrections arise
(conceptually) right after its own CNOT block, but the serialized ICM
form lists every CNOT before every measurement.  Commuting a pending
Pauli past the later CNOT blocks conjugates it, so the transform keeps
each correction as a pending layer and tracks it through every CNOT
emitted afterwards, exactly like the unconditional frame.  The frozen
frame updates in the output therefore hold verbatim (plain XOR at
measurement time) for the fully serialized circuit.
"""

from __future__ import annotations

from dataclasses import replace

from .decompose import lower_to_ugs
from .gadgets import GADGET_KINDS, build_gadget
from .ir import (
    Circuit,
    ConditionalMeasurement,
    FrameUpdate,
    GateKind,
    IcmCircuit,
    InitState,
    Pauli,
    PauliFrame,
    validate_icm,
)


class TransformError(RuntimeError):
    """Internal invariant broken while building the ICM form."""


class _Layer:
    """One outcome-conditioned Pauli string being tracked through CNOTs."""

    __slots__ = ("conditions", "x", "z")

    def __init__(self, conditions: tuple[tuple[int, int], ...], target: int, pauli: Pauli):
        self.conditions = conditions
        self.x: set[int] = {target} if pauli.x_bit else set()
        self.z: set[int] = {target} if pauli.z_bit else set()

    @property
    def owner(self) -> int:
        return max(mid for mid, _ in self.conditions)

    def support(self) -> set[int]:
        return self.x | self.z


def transform_to_icm(c: Circuit, toffoli_mode: str = "reversible") -> IcmCircuit:
    """Gadget replacement in gate order with staggered measurements.

    Basis conditions only ever point backward, so the feedforward
    schedule is acyclic by construction; the output always passes
    :func:`icmform.ir.validate_icm`.
    """
    lowered = lower_to_ugs(c, toffoli_mode)
    n_src = lowered.num_qubits

    inits: list[InitState] = []
    fx = bytearray(n_src)
    fz = bytearray(n_src)
    for q in range(n_src):
        const = lowered.constants[q]
        if const is None:
            inits.append(InitState.INPUT)
        else:
            # Classical 1 is |0> plus a pending X byproduct, keeping the
            # initialisation alphabet minimal.
            inits.append(InitState.ZERO)
            if const == 1:
                fx[q] ^= 1

    carrier = list(range(n_src))
    cnots: list[tuple[int, int]] = []
    measurements: list[ConditionalMeasurement] = []
    layers: list[_Layer] = []
    touching: dict[int, set[int]] = {}  # qubit -> indices of layers with support there

    def index_layer(idx: int, qubit: int) -> None:
        touching.setdefault(qubit, set()).add(idx)

    def emit_cnot(ctrl: int, tgt: int) -> None:
        cnots.append((ctrl, tgt))
        fx[tgt] ^= fx[ctrl]
        fz[ctrl] ^= fz[tgt]
        affected = touching.get(ctrl, set()) | touching.get(tgt, set())
        for idx in affected:
            layer = layers[idx]
            if ctrl in layer.x:
                layer.x.symmetric_difference_update((tgt,))
                index_layer(idx, tgt)
            if tgt in layer.z:
                layer.z.symmetric_difference_update((ctrl,))
                index_layer(idx, ctrl)

    for g in lowered.gates:
        kind = g.kind
        if kind is GateKind.X:
            fx[carrier[g.qubits[0]]] ^= 1
        elif kind is GateKind.Z:
            fz[carrier[g.qubits[0]]] ^= 1
        elif kind is GateKind.CNOT:
            emit_cnot(carrier[g.qubits[0]], carrier[g.qubits[1]])
        elif kind in GADGET_KINDS:
            wire = g.qubits[0]
            gadget = build_gadget(kind, carrier[wire], len(inits), len(measurements))
            for _ in gadget.ancillas:
                fx.append(0)
                fz.append(0)
            inits.extend(gadget.inits)
            for ctrl, tgt in gadget.cnots:
                emit_cnot(ctrl, tgt)
            measurements.extend(gadget.measurements)
            # Pending corrections are anchored after the gadget's block:
            # created only now, they are conjugated by later CNOTs only.
            for conditions, pauli in gadget.byproducts:
                layer = _Layer(conditions, gadget.output_qubit, pauli)
                layers.append(layer)
                for qb in layer.support():
                    index_layer(len(layers) - 1, qb)
            carrier[wire] = gadget.output_qubit
        else:
            raise TransformError(f"gate kind {kind} survived lowering")

    # Freeze pending layers as frame updates on their owner measurements.
    by_owner: dict[int, list[FrameUpdate]] = {}
    for layer in layers:
        for q in sorted(layer.support()):
            x = 1 if q in layer.x else 0
            z = 1 if q in layer.z else 0
            if x or z:
                by_owner.setdefault(layer.owner, []).append(
                    FrameUpdate(layer.conditions, q, Pauli.from_bits(x, z))
                )
    if by_owner:
        measurements = [
            replace(m, frame_updates=tuple(by_owner.get(m.id, ()))) for m in measurements
        ]

    outputs = tuple((lowered.qubit_names[w], carrier[w]) for w in range(n_src))
    icm = IcmCircuit(
        num_qubits=len(inits),
        inits=tuple(inits),
        cnots=tuple(cnots),
        measurements=tuple(measurements),
        outputs=outputs,
        final_frame=PauliFrame(bytes(fx), bytes(fz)),
    )
    issues = validate_icm(icm)
    if issues:
        raise TransformError("transform produced an invalid circuit: " + "; ".join(issues))
    return icm
