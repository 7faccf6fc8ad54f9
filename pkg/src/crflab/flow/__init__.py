"""Normalized Chern-Ricci flow through its scalar potential equation."""

from crflab.flow.equation import (
    einstein_residual,
    flow_metric,
    initial_state,
    log_volume_ratio,
    make_state,
    rhs,
    ricci_form,
    snapshot_metric,
)
from crflab.flow.identity import (
    FlowIdentityReport,
    exact_flow_residual,
    verify_flow_identity,
)
from crflab.flow.integrator import rk4_increment, stiffness_bound, step
from crflab.flow.models import (
    FlowConfig,
    FlowState,
    LimitPotential,
    Scheme,
    Snapshot,
    Trajectory,
)
from crflab.flow.oracle import homogeneous_oracle, homogeneous_oracle_rate
from crflab.flow.runner import limit_potential, run, subsample

__all__ = [
    "FlowConfig",
    "FlowIdentityReport",
    "FlowState",
    "LimitPotential",
    "Scheme",
    "Snapshot",
    "Trajectory",
    "einstein_residual",
    "exact_flow_residual",
    "flow_metric",
    "homogeneous_oracle",
    "homogeneous_oracle_rate",
    "initial_state",
    "limit_potential",
    "log_volume_ratio",
    "make_state",
    "rhs",
    "ricci_form",
    "rk4_increment",
    "run",
    "snapshot_metric",
    "step",
    "stiffness_bound",
    "subsample",
    "verify_flow_identity",
]
