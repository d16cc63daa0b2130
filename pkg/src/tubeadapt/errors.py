"""Exception types shared across the package."""


class TubeAdaptError(Exception):
    """Base class for all package-specific errors."""


class NonFiniteState(TubeAdaptError):
    """Simulation produced a NaN/Inf state entry."""


class InfeasibleWrench(TubeAdaptError):
    """Requested wrench cannot be realized within motor limits."""


class NotStabilizable(TubeAdaptError):
    """Riccati iteration failed to converge within the iteration budget."""


class UnstableClosedLoop(TubeAdaptError):
    """A closed-loop tube rollout diverged beyond the divergence bound."""


class EmptyTightenedSet(TubeAdaptError):
    """Constraint tightening produced an interval with empty interior."""


class QPInfeasible(TubeAdaptError):
    """The QP solver produced a primal-infeasibility certificate."""


class ShapeMismatch(TubeAdaptError):
    """Network input/target shape does not match the layer specification."""


class DivergedLoss(TubeAdaptError):
    """Training loss became non-finite."""


class WeightFileError(TubeAdaptError):
    """Weight file is corrupted or does not match the expected network."""


class VersionError(WeightFileError):
    """Weight file was written with an incompatible format version."""


class EmptyBenchmark(TubeAdaptError):
    """Benchmark requested with a non-positive sample count."""
