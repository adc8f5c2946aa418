"""Exception types shared across the package."""


class ZeroDivError(Exception):
    """Base class for all package errors."""


class RingAxiomError(ZeroDivError):
    """A table does not define a commutative unital ring."""

    def __init__(self, axiom, witness, message=None):
        self.axiom = axiom
        self.witness = tuple(witness)
        super().__init__(message or f"{axiom} fails at {self.witness}")


class SpecError(ZeroDivError):
    """A ring spec or partition document is malformed."""


class NotAnIdealError(ZeroDivError):
    pass


class PreconditionError(ZeroDivError):
    """An operation was called outside its domain (named in the message)."""


class BudgetExceeded(ZeroDivError):
    """A bounded search hit its configured cap."""

    def __init__(self, what, cap):
        self.what = what
        self.cap = cap
        super().__init__(f"{what} exceeded budget of {cap}")


class NotZeroDivisorRelation(ZeroDivError):
    def __init__(self, witness):
        self.witness = tuple(witness)
        a, a2, b, b2 = self.witness
        super().__init__(
            f"not a zero-divisor relation: {a}~{a2}, {b}~{b2}, "
            f"{a}*{b}=0 but {a2}*{b2}!=0"
        )


class NotFunctorial(ZeroDivError):
    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__(
            f"relation not preserved: {self.witness[0]} ~ {self.witness[1]} "
            f"but images {self.witness[2]}, {self.witness[3]} are unrelated"
        )


class VerificationError(ZeroDivError):
    """A theorem clause failed on a concrete instance."""

    def __init__(self, clause, detail=""):
        self.clause = clause
        super().__init__(f"{clause}: {detail}" if detail else clause)
