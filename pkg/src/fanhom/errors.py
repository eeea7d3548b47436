"""Shared exception types."""


class InputError(ValueError):
    """Invalid user input: fan files, preset parameters, coefficient specs."""


class InternalConsistencyError(RuntimeError):
    """A mathematical self-check failed (d^2 != 0, vanishing violated, ...).

    Raising this means the implementation, not the input, is at fault; the
    command line maps it to exit code 2.
    """
