"""cantiq: cantilever / charge-qubit coupled-system simulation toolkit."""

from . import closedform, errors, hilbert, lindblad, model, scenarios, verify

__version__ = "0.1.0"

__all__ = [
    "closedform",
    "errors",
    "hilbert",
    "lindblad",
    "model",
    "scenarios",
    "verify",
    "__version__",
]
