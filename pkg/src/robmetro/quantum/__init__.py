# this_file: src/robmetro/quantum/__init__.py

"""Dense N-qubit operators and states."""

from robmetro.quantum.operators import (
    MAX_QUBITS,
    DensityMatrix,
    PauliLabel,
    hamiltonian,
    hamiltonian_diagonal,
    measure_plus_probability,
    pauli_operator,
    probe_state,
    stabilizer_projector,
)

__all__ = [
    "MAX_QUBITS",
    "DensityMatrix",
    "PauliLabel",
    "hamiltonian",
    "hamiltonian_diagonal",
    "measure_plus_probability",
    "pauli_operator",
    "probe_state",
    "stabilizer_projector",
]
