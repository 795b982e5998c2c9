"""Exception types shared across the package."""


class SteinalgError(Exception):
    """Base class for all library errors."""


class GroupoidParseError(SteinalgError):
    """Malformed groupoid or element file (CLI exit code 2)."""


class AxiomError(SteinalgError):
    """A groupoid axiom or structural invariant fails (CLI exit code 3)."""


class ModelMismatch(SteinalgError):
    """Operands belong to different groupoid models."""


class SupportViolation(SteinalgError):
    """A support-containment precondition does not hold."""


class InfiniteFiber(SteinalgError):
    """The requested fiber is infinite; a symbol-based method applies instead."""
