# -*- coding: utf-8 -*-
"""Exceptions raised by lagdyna. Every error the library raises derives from LagdynaError."""


class LagdynaError(Exception):
    """Base class for all lagdyna errors."""


class InputShapeError(LagdynaError, ValueError):
    """An array does not have the dimensions an operation expects."""


class DomainError(LagdynaError, ValueError):
    """An input value is outside the domain of an operation, e.g. NaN or infinity."""


class PreconditionError(LagdynaError, ValueError):
    """An argument violates a documented precondition, e.g. an empty batch."""


class SingularDynamicsError(LagdynaError):
    """The velocity Hessian of a Lagrangian could not be inverted reliably."""

    def __init__(self, condition, message=None):
        self.condition = condition
        super().__init__(message or "velocity Hessian is singular (condition number %.3e)" % condition)


class IntegrationBlowupError(LagdynaError):
    """An integrator produced a non-finite or runaway state."""

    def __init__(self, stage, message=None):
        self.stage = stage
        super().__init__(message or "integration blew up at stage %s" % stage)


class TrainingDivergenceError(LagdynaError):
    """A loss or gradient became non-finite during training."""


class IllConditionedUpdateError(LagdynaError):
    """The innovation covariance of a Kalman update could not be inverted reliably."""

    def __init__(self, condition, sample=None):
        self.condition = condition
        self.sample = sample
        where = "" if sample is None else " at sample %d" % sample
        super().__init__("innovation covariance is ill-conditioned%s (condition number %.3e)" % (where, condition))


class CovarianceError(LagdynaError):
    """A covariance matrix is not symmetric positive semidefinite."""


class InsufficientDataError(LagdynaError):
    """Not enough usable samples remain for an operation."""


class ProvenanceError(LagdynaError):
    """A transition was stored in a replay buffer of the wrong provenance."""


class AlignmentError(LagdynaError):
    """Evaluation curves of compared runs are not on the same env-step grid."""


class ConfigError(LagdynaError):
    """An experiment configuration file is invalid."""

    def __init__(self, message, path=None, line=None, field=None):
        self.path = path
        self.line = line
        self.field = field
        location = ""
        if path is not None:
            location = "%s:%s: " % (path, line if line is not None else 0)
        super().__init__(location + message)


class CheckpointError(LagdynaError, ValueError):
    """A checkpoint file is truncated or not in the LNN1 format."""
