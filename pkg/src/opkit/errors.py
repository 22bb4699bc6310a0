"""Exception hierarchy shared by all opkit modules."""


class OpkitError(Exception):
    """Base class for every error raised by opkit."""


class ParseError(OpkitError):
    """Expression text violates the input grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InputError(OpkitError):
    """Arguments violate an operation's preconditions."""


class ResourceLimitError(OpkitError):
    """A desk-scale safety cap was exceeded (term count, ground set, dimension)."""


class VerificationError(OpkitError):
    """An identity that must hold exactly failed to verify."""


class MembershipError(OpkitError):
    """1 does not lie in the ideal generated by a requested factor subset."""


class IntegrabilityError(OpkitError):
    """Constrained-system data violates a necessary consistency condition."""
