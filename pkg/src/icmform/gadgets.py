"""Teleportation gadget library.

Each gadget replaces one single-qubit rotation with ancilla
initialisations, CNOTs and measurements.  P/V variants consume one
|Y>-state ancilla and one CNOT; T variants consume five ancillae and six
CNOTs (the teleported-T core plus selective destination and selective
source teleportation, with the third destination wire initialised
directly into |Y> so the CNOT block stays CNOT-only).

The outcome->byproduct tables below were derived once by exhaustive
branch enumeration against the target rotation (see
``scripts/derive_corrections.py``) and are frozen here; every entry
records a Pauli on the gadget output conditioned on effective
measurement outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ir import (
    Basis,
    Conditioned,
    ConditionalMeasurement,
    GateKind,
    InitState,
    Pauli,
    Static,
)

#: Gate kinds realised by teleportation gadgets.
GADGET_KINDS = frozenset(
    {GateKind.P, GateKind.PDG, GateKind.V, GateKind.VDG, GateKind.T, GateKind.TDG}
)

SIMPLE_KINDS = frozenset({GateKind.P, GateKind.PDG, GateKind.V, GateKind.VDG})


@dataclass(frozen=True)
class GadgetInstance:
    """One placed gadget: wiring plus its measurement schedule fragment.

    ``byproducts`` lists (conditions over absolute measurement ids,
    Pauli-on-output) pairs.  They are anchored right after the gadget's
    own CNOT block; the transform conjugates them through every CNOT
    emitted later before freezing them as frame updates.
    """

    kind: GateKind
    input_qubit: int
    ancillas: tuple[int, ...]
    inits: tuple[InitState, ...]
    cnots: tuple[tuple[int, int], ...]
    measurements: tuple[ConditionalMeasurement, ...]
    output_qubit: int
    byproducts: tuple[tuple[tuple[tuple[int, int], ...], Pauli], ...]


# Byproduct tables.  Conditions are (measurement role, required effective
# bit) pairs; role k is the gadget's k-th measurement.  The Pauli always
# lands on the gadget output wire.
_TableEntry = tuple[tuple[tuple[int, int], ...], Pauli]

_SIMPLE_TABLE: dict[GateKind, tuple[_TableEntry, ...]] = {
    GateKind.P: ((((0, 1),), Pauli.XZ),),
    GateKind.PDG: ((((0, 0),), Pauli.Z), (((0, 1),), Pauli.X)),
    GateKind.V: ((((0, 0),), Pauli.X), (((0, 1),), Pauli.Z)),
    GateKind.VDG: ((((0, 1),), Pauli.XZ),),
}

_T_TABLE: dict[GateKind, tuple[_TableEntry, ...]] = {
    GateKind.T: (
        (((0, 0), (1, 1)), Pauli.Z),
        (((0, 0), (2, 1)), Pauli.X),
        (((0, 0), (3, 1)), Pauli.X),
        (((0, 0), (4, 1)), Pauli.Z),
        (((0, 1),), Pauli.XZ),
        (((0, 1), (1, 1)), Pauli.XZ),
        (((0, 1), (2, 1)), Pauli.Z),
        (((0, 1), (3, 1)), Pauli.Z),
        (((0, 1), (4, 1)), Pauli.X),
    ),
    GateKind.TDG: (
        (((0, 0),), Pauli.Z),
        (((0, 0), (1, 1)), Pauli.XZ),
        (((0, 0), (2, 1)), Pauli.Z),
        (((0, 0), (3, 1)), Pauli.Z),
        (((0, 0), (4, 1)), Pauli.X),
        (((0, 1),), Pauli.X),
        (((0, 1), (1, 1)), Pauli.Z),
        (((0, 1), (2, 1)), Pauli.X),
        (((0, 1), (3, 1)), Pauli.X),
        (((0, 1), (4, 1)), Pauli.Z),
    ),
}


def _instantiate(
    table: tuple[_TableEntry, ...], mid_base: int
) -> tuple[tuple[tuple[tuple[int, int], ...], Pauli], ...]:
    """Rewrite role-based conditions into absolute measurement ids."""
    return tuple(
        (tuple((mid_base + role, bit) for role, bit in conditions), pauli)
        for conditions, pauli in table
    )


def build_simple_gadget(kind: GateKind, q: int, ancilla: int, mid: int) -> GadgetInstance:
    """Teleported P/Pdg (Z-measured core) or V/Vdg (X-measured core)."""
    if kind not in SIMPLE_KINDS:
        raise ValueError(f"{kind} is not a single-ancilla gadget")
    if kind in (GateKind.P, GateKind.PDG):
        cnots = ((ancilla, q),)
        basis = Basis.Z
    else:
        cnots = ((q, ancilla),)
        basis = Basis.X
    measurement = ConditionalMeasurement(id=mid, qubit=q, selector=Static(basis))
    return GadgetInstance(
        kind=kind,
        input_qubit=q,
        ancillas=(ancilla,),
        inits=(InitState.Y,),
        cnots=cnots,
        measurements=(measurement,),
        output_qubit=ancilla,
        byproducts=_instantiate(_SIMPLE_TABLE[kind], mid),
    )


def build_t_gadget(kind: GateKind, q: int, base: int, mid_base: int) -> GadgetInstance:
    """Teleported T/Tdg with selective destination and source blocks.

    Ancillas (in allocation order): a1 = |A> core resource, a2 = |0>
    destination copy wire, a3 = |Y> correction path, a4 = |+> identity
    path, a5 = |0> output.  The first measurement decides whether the
    phase-correction path is routed (outcome patterns mirror for Tdg).
    """
    if kind not in (GateKind.T, GateKind.TDG):
        raise ValueError(f"{kind} is not a T-type gadget")
    a1, a2, a3, a4, a5 = range(base, base + 5)
    cnots = ((a1, q), (a1, a2), (a3, a1), (a4, a2), (a3, a5), (a4, a5))
    inits = (InitState.A, InitState.ZERO, InitState.Y, InitState.PLUS, InitState.ZERO)

    # Measurement pattern on the correction path: Z(a1) X(a2) then X(a3)
    # Z(a4); the identity path uses the dual pattern.  T takes the
    # correction path on outcome 1, Tdg on outcome 0.
    correct_on = 1 if kind is GateKind.T else 0
    def pick(correction_basis: Basis, identity_basis: Basis) -> Conditioned:
        if correct_on == 1:
            return Conditioned(on=mid_base, if_zero=identity_basis, if_one=correction_basis)
        return Conditioned(on=mid_base, if_zero=correction_basis, if_one=identity_basis)

    measurements = (
        ConditionalMeasurement(id=mid_base, qubit=q, selector=Static(Basis.Z)),
        ConditionalMeasurement(id=mid_base + 1, qubit=a1, selector=pick(Basis.Z, Basis.X)),
        ConditionalMeasurement(id=mid_base + 2, qubit=a2, selector=pick(Basis.X, Basis.Z)),
        ConditionalMeasurement(id=mid_base + 3, qubit=a3, selector=pick(Basis.X, Basis.Z)),
        ConditionalMeasurement(id=mid_base + 4, qubit=a4, selector=pick(Basis.Z, Basis.X)),
    )
    return GadgetInstance(
        kind=kind,
        input_qubit=q,
        ancillas=(a1, a2, a3, a4, a5),
        inits=inits,
        cnots=cnots,
        measurements=measurements,
        output_qubit=a5,
        byproducts=_instantiate(_T_TABLE[kind], mid_base),
    )


def build_gadget(kind: GateKind, q: int, next_qubit: int, next_mid: int) -> GadgetInstance:
    if kind in SIMPLE_KINDS:
        return build_simple_gadget(kind, q, next_qubit, next_mid)
    return build_t_gadget(kind, q, next_qubit, next_mid)


def gadget_cost(kind: GateKind) -> tuple[int, int]:
    """(ancillae, CNOTs) consumed by one gadget."""
    if kind in SIMPLE_KINDS:
        return 1, 1
    if kind in (GateKind.T, GateKind.TDG):
        return 5, 6
    raise ValueError(f"{kind} has no gadget")
