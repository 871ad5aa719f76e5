"""Exception types raised by the simulation layers."""


class SimulationError(Exception):
    """Base class for numerical failures in the simulation core."""


class TruncationInsufficient(SimulationError):
    """Fock-space cutoff too small to represent the requested state or operator.

    Carries the offending weight (lost norm or top-level population) in
    ``loss`` when known.
    """

    def __init__(self, message, loss=None):
        super().__init__(message)
        self.loss = loss


class DimensionMismatch(SimulationError):
    """Operands live in Fock spaces of different dimension."""


class StepSizeUnderflow(SimulationError):
    """Adaptive integrator drove the step size below the resolvable limit."""


class InstabilityRegime(SimulationError):
    """Quadratic Hamiltonian outside its stable (bounded-spectrum) regime."""


class DegenerateBranch(SimulationError):
    """Measurement outcome with zero probability; the collapsed state has no norm."""

    def __init__(self, message, probability=0.0):
        super().__init__(message)
        self.probability = probability


class NegativeDecay(SimulationError):
    """Decay rate must be non-negative."""


class NonPhysicalMoments(SimulationError):
    """Moment set implies a negative position variance beyond tolerance."""


class InvalidDevice(SimulationError):
    """Device geometry or frequencies are non-positive where positivity is required."""


class InvalidCoupling(SimulationError):
    """Coupling constant outside the domain of the requested formula."""


class ConfigError(Exception):
    """Scenario or configuration file is malformed or inconsistent."""
