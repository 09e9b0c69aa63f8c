"""Parser for the RevLib ``.real`` subset used by the benchmark corpus.

Accepted gates: ``t1`` (NOT), ``t2`` (CNOT), ``t3`` (Toffoli), ``v`` and
``v+`` (controlled-V and its adjoint).  The last operand of a ``t`` line
is the target, per RevLib convention; ``v``/``v+`` list control then
target.  Mnemonics are case-insensitive, variable names are not.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ir import Circuit, Gate, GateKind


class RealParseError(ValueError):
    """Malformed ``.real`` input; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class RealHeader:
    version: str | None
    numvars: int
    variables: tuple[str, ...]
    constants: str | None
    garbage: str | None


_GATE_MNEMONICS = {
    "t1": (GateKind.X, 1),
    "t2": (GateKind.CNOT, 2),
    "t3": (GateKind.TOFFOLI, 3),
    "v": (GateKind.CV, 2),
    "v+": (GateKind.CVDG, 2),
}

# Header directives we read plus RevLib metadata we accept and ignore.
_IGNORED_DIRECTIVES = {".inputs", ".outputs", ".inputbus", ".outputbus", ".state", ".module"}


def parse_real(text: str) -> Circuit:
    """Parse a ``.real`` file into a :class:`Circuit` (gates in file order)."""
    version: str | None = None
    numvars: int | None = None
    variables: tuple[str, ...] | None = None
    constants: str | None = None
    garbage: str | None = None
    gates: list[Gate] = []
    in_body = False
    saw_begin = False
    saw_end = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if saw_end:
            raise RealParseError(line_no, "content after .end")
        tokens = line.split()
        head = tokens[0]

        if not in_body:
            directive = head.lower()
            if directive == ".version":
                version = " ".join(tokens[1:])
            elif directive == ".numvars":
                if len(tokens) != 2 or not tokens[1].isdigit():
                    raise RealParseError(line_no, ".numvars expects one integer")
                numvars = int(tokens[1])
            elif directive == ".variables":
                variables = tuple(tokens[1:])
            elif directive == ".constants":
                if len(tokens) != 2:
                    raise RealParseError(line_no, ".constants expects one string")
                constants = tokens[1]
            elif directive == ".garbage":
                if len(tokens) != 2:
                    raise RealParseError(line_no, ".garbage expects one string")
                garbage = tokens[1]
            elif directive == ".begin":
                saw_begin = True
                in_body = True
            elif directive in _IGNORED_DIRECTIVES:
                continue
            elif directive.startswith("."):
                raise RealParseError(line_no, f"unknown directive {head}")
            else:
                raise RealParseError(line_no, f"gate line {head!r} before .begin")
            continue

        if head.lower() == ".end":
            saw_end = True
            continue
        if numvars is None or variables is None:
            raise RealParseError(line_no, ".numvars and .variables must precede gates")

        mnemonic = head.lower()
        if mnemonic not in _GATE_MNEMONICS:
            if mnemonic.startswith("t") and mnemonic[1:].isdigit():
                raise RealParseError(
                    line_no, f"multi-controlled gate {head} is not supported"
                )
            raise RealParseError(line_no, f"unknown gate mnemonic {head}")
        kind, arity = _GATE_MNEMONICS[mnemonic]
        operands = tokens[1:]
        if len(operands) != arity:
            raise RealParseError(
                line_no, f"{head} expects {arity} operand(s), got {len(operands)}"
            )
        indices = []
        index_of = {name: i for i, name in enumerate(variables)}
        for name in operands:
            if name.startswith("-"):
                raise RealParseError(line_no, f"negative control {name} is not supported")
            if name not in index_of:
                raise RealParseError(line_no, f"undeclared variable {name}")
            indices.append(index_of[name])
        if len(set(indices)) != len(indices):
            raise RealParseError(line_no, f"{head} operands must be distinct")
        gates.append(Gate(kind, tuple(indices)))

    if not saw_begin:
        raise RealParseError(0, "missing .begin")
    if not saw_end:
        raise RealParseError(0, "missing .end")
    if numvars is None:
        raise RealParseError(0, "missing .numvars")
    if variables is None:
        variables = tuple(f"x{i}" for i in range(numvars))
    if len(variables) != numvars:
        raise RealParseError(0, f".variables lists {len(variables)} names, .numvars is {numvars}")
    for label, value in (("constants", constants), ("garbage", garbage)):
        if value is not None and len(value) != numvars:
            raise RealParseError(0, f".{label} length {len(value)} != .numvars {numvars}")
    if constants is not None and set(constants) - set("01-"):
        raise RealParseError(0, ".constants may contain only 0, 1, -")
    if garbage is not None and set(garbage) - set("1-"):
        raise RealParseError(0, ".garbage may contain only 1, -")

    const_tuple = tuple(
        None if constants is None or ch == "-" else int(ch) for ch in (constants or "-" * numvars)
    )
    garbage_tuple = tuple(ch == "1" for ch in (garbage or "-" * numvars))
    return Circuit(
        num_qubits=numvars,
        gates=tuple(gates),
        qubit_names=variables,
        constants=const_tuple,
        garbage=garbage_tuple,
    )


def header_of(c: Circuit) -> RealHeader:
    """Header view of a parsed circuit (used by reports)."""
    constants = "".join("-" if v is None else str(v) for v in c.constants)
    garbage = "".join("1" if g else "-" for g in c.garbage)
    return RealHeader(
        version=None,
        numvars=c.num_qubits,
        variables=c.qubit_names,
        constants=constants if set(constants) != {"-"} else None,
        garbage=garbage if set(garbage) != {"-"} else None,
    )
