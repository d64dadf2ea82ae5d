"""Shared exception types."""


class TheoremViolation(RuntimeError):
    """A cross-checked mathematical statement failed.

    This is never a legitimate mathematical negative (those are ordinary
    return values); it always means a bug somewhere in this library.
    """


class NonFreeActionError(ValueError):
    """A group action required to be free has a fixed object."""

    def __init__(self, element, obj):
        self.element = element
        self.obj = obj
        super().__init__(
            f"action is not free: element {element} fixes object {obj}")
