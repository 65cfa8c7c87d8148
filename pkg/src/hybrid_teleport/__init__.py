"""Teleportation of single-rail optical qubits through a hybrid CV-DV channel.

Two independent paths compute every protocol quantity:

* :mod:`hybrid_teleport.analytic` evaluates closed forms built on
  ``Z(y) = 1/sqrt(1 - 4y^2)`` and its derivatives;
* :mod:`hybrid_teleport.fock` simulates the optics in a truncated Fock space.

:mod:`channel`, :mod:`teleporter` and :mod:`recovery` implement the
protocol stages; :mod:`sweep` and :mod:`cli` produce parameter surfaces.
"""

from .channel import ChannelParams, HybridChannel, build_channel_analytic, make_params, prepare_channel_simulated
from .errors import DomainError, InfeasibleError, SingularityError, TruncationError
from .qubit import SingleRailQubit
from .recovery import make_auxiliary, optimize_recovery, recover, total_success_probability
from .teleporter import (
    TeleportResult,
    classify_and_correct,
    enumerate_outcomes,
    teleport_outcome,
    teleport_outcome_analytic,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "HybridChannel",
    "SingleRailQubit",
    "TeleportResult",
    "DomainError",
    "InfeasibleError",
    "SingularityError",
    "TruncationError",
    "build_channel_analytic",
    "make_params",
    "prepare_channel_simulated",
    "teleport_outcome",
    "teleport_outcome_analytic",
    "enumerate_outcomes",
    "classify_and_correct",
    "make_auxiliary",
    "recover",
    "total_success_probability",
    "optimize_recovery",
]
