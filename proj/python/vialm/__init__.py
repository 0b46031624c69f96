"""Safeguarded augmented Lagrangian solver for constrained variational problems."""

from ._vialm import (
    instance,
    perturbed_kkt_roundtrip,
    probe_error_bound,
    problem_names,
    solve,
    sosc_probe,
    Instance,
)

__all__ = [
    "instance",
    "perturbed_kkt_roundtrip",
    "probe_error_bound",
    "problem_names",
    "solve",
    "sosc_probe",
    "Instance",
]
