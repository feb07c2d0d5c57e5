# this_file: src/robmetro/channels/__init__.py

"""Noise channels, their generators and the time integrator."""

from robmetro.channels.fixed_weight import fixed_weight_z_map
from robmetro.channels.generators import (
    LindbladGenerator,
    bitflip_generator,
    build_generator,
    dephasing_generator,
    explicit_generator,
    mixed_generator,
    mixture_generator,
    pauli_conjugation_terms,
)
from robmetro.channels.integrator import evolve, rk4_step
from robmetro.channels.sampling import sample_copies

__all__ = [
    "LindbladGenerator",
    "bitflip_generator",
    "build_generator",
    "dephasing_generator",
    "evolve",
    "explicit_generator",
    "fixed_weight_z_map",
    "mixed_generator",
    "mixture_generator",
    "pauli_conjugation_terms",
    "rk4_step",
    "sample_copies",
]
