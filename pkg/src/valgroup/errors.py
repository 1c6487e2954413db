"""Exception hierarchy shared by every module."""


class ValgroupError(Exception):
    pass


class FiniteAlgebraError(ValgroupError):
    pass


class InvalidOrderError(FiniteAlgebraError):
    pass


class ClosureError(FiniteAlgebraError):
    pass


class NeutralElementError(FiniteAlgebraError):
    pass


class AssociativityError(FiniteAlgebraError):
    def __init__(self, witness):
        i, j, k = witness
        super().__init__(f"associativity fails for ({i}, {j}, {k})")
        self.witness = witness


class IsoValidationError(FiniteAlgebraError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ContextError(ValgroupError):
    """Atom or element used with the wrong kind of group."""


class CapacityError(ValgroupError):
    def __init__(self, cap, what="ball"):
        super().__init__(f"{what} exceeded the element cap of {cap}")
        self.cap = cap


class DomainError(ValgroupError):
    """Operand outside the set on which an operation is defined."""


class DegenerateInputError(ValgroupError):
    """Zero-length input; ``element`` is its own normal form."""

    def __init__(self, element):
        super().__init__("element has length 0; its normal form is itself")
        self.element = element


class ContractError(ValgroupError):
    pass


class InternalError(ValgroupError):
    pass


class NotFoundError(ValgroupError):
    pass


class RadiusInsufficientError(ValgroupError):
    pass


class IterationCapError(ValgroupError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class CombinatorialCapError(ValgroupError):
    pass


class SpecError(ValgroupError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
        self.bare_message = message


class WordError(ValgroupError):
    def __init__(self, message, position=None):
        where = f"at offset {position}: " if position is not None else ""
        super().__init__(where + message)
        self.position = position
