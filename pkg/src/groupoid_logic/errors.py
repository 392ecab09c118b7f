"""Exception hierarchy.  The CLI maps these onto exit codes."""


class GroupoidLogicError(Exception):
    pass


class InputError(GroupoidLogicError):
    """Unparseable or structurally malformed input."""


class StructureError(InputError):
    """Tables that reference unknown objects or morphisms, or have bad shapes."""


class EmptyGroupoidError(InputError):
    pass


class UnknownLabelError(InputError, KeyError):
    pass


class GroupValidationError(InputError):
    pass


class MismatchError(InputError):
    """Sets or functions indexed against different groupoids."""


class PreconditionError(GroupoidLogicError, ValueError):
    pass


class ResourceError(GroupoidLogicError):
    """An input exceeds a configured size cap."""


class MeasureError(GroupoidLogicError):
    """Invalid object measure or Haar system."""


class HaarValidationError(MeasureError):
    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


class PhaseValidationError(MeasureError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ModularDomainError(MeasureError):
    """The modular function is undefined on part of a function's support."""
