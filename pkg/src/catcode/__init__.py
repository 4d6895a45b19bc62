"""Repetition-code simulation for coherent-state qubits over lossy channels."""
from .channel import damp_density, damp_entangled, damp_qubit, flip_probability, fock_damp_oracle
from .coherent import LogicalQubit, OrthoFrame, QubitDensity, bloch_antipode, ortho_frame, overlap
from .errors import (CatCodeError, DegenerateQubit, DimensionMismatch, EmptySlice, InvalidSpec, NoConvergence,
                     NonHermitian, NotPSD, TruncationTooSmall)
from .gvr import CodeConfig, Regime, code_success_probability, exact_n3_oracle, logical_flip_prob, transmit
from .hadamard import GateMode, apply_hadamard, hadamard_stats
from .linalg import available_backends, hermitian_eig, psd_sqrt, trace_distance, uhlmann_fidelity, use_backend
from .metrics import (MeritRecord, QuadratureSpec, codeword_overlap, concurrence_general, concurrence_x,
                      entangled_merit, state_fidelity_vs_input, worst_case_fidelity)
from .sweep import SweepSpec, emit_csv, find_crossovers, parse_spec, run_sweep

__version__ = "0.1.0"


def backend():
    """Name of the active Jacobi kernel."""
    from . import linalg
    return linalg.BACKEND
