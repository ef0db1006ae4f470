"""Exception hierarchy shared by the modules and the command line."""


class PreconditionError(ValueError):
    """An operation was called on input outside its domain."""
