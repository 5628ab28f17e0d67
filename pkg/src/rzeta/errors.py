"""Error types shared across the package.

Precondition and domain violations raise plain ``ValueError`` with a
descriptive message.  ``AccuracyError`` is reserved for numerical failures
(quadrature that will not converge, an evaluator whose internal error
estimate exceeds its contract): callers that can retry with better
parameters may catch it, and the CLI maps it to a distinct exit code.
"""


class AccuracyError(RuntimeError):
    """A numerical routine could not meet its accuracy contract."""
