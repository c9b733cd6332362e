"""Digital-analog counterdiabatic quantum optimization toolkit."""

from .counterdiabatic import (
    Schedule,
    adiabatic_hamiltonian,
    alpha1_analytic,
    alpha1_oracle,
    cd_generator,
    exact_evolution,
    rotated_full_hamiltonian,
)
from .extrapolation import ExtrapolationFit, fit_extrapolation
from .gates import AngleSet, Gate, angle_map, gms_unitary, solve_gms_angles
from .hardware import (
    HardwareSpec,
    RuntimeReport,
    circuit_runtime,
    default_spec,
    enhancement_factor,
)
from .problem import (
    Graph,
    GroundTruth,
    IsingProblem,
    brute_force_ground_state,
    classical_energy,
    mis_to_ising,
    random_spin_glass,
)
from .simulator import (
    NoiseModel,
    RunResult,
    gate_fidelity,
    perturb_analog_block,
    run,
    success_vs_fidelity_sweep,
)
from .synthesis import (
    Circuit,
    DepthReport,
    analytic_depth,
    synthesize_digital_baseline,
    synthesize_homogeneous,
    synthesize_inhomogeneous,
)

__version__ = "0.1.0"
