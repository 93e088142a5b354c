"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: usage problems exit 1,
:class:`DataError` exits 2, :class:`NumericalError` exits 3.
"""


class DecoleError(Exception):
    """Base class for all errors raised by this package."""


class DataError(DecoleError):
    """Invalid input data: schema violations, bad labels, unknown ids."""


class NumericalError(DecoleError):
    """Numerical failure during optimization (non-finite loss, stalled step)."""


class DegenerateScopeError(DecoleError):
    """A pruning scope has no observed positives or no observed negatives.

    Raised by threshold estimation; the group-aware pruner catches it and
    skips the scope with a structured warning instead of aborting.
    """
