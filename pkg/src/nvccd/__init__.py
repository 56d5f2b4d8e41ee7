"""Three-level NV spin dynamics under concatenated continuous decoupling.

Closed-system propagation by block decomposition of the evolution operator
(with a direct integration backend for cross-checks), open-system evolution
of the density matrix with a level-exchange collapse operator, exact-step
Ornstein-Uhlenbeck noise for the spin bath and the microwave source, and
reproducible Monte-Carlo ensembles of coherence observables.
"""

__version__ = "0.1.0"

from .drive import DriveConfig, DriveOrder, drive_amplitude
from .ensemble import (EnsembleConfig, EnsembleResult, OrderingReport,
                       coherence_ordering_report, run_ensemble)
from .errors import IntegrationError, RiccatiBlowupError
from .hamiltonian import NVParams, hamiltonian_at
from .lindblad import (LindbladParams, LindbladResult, lindblad_rhs,
                       lindblad_rhs_matrix, propagate_lindblad)
from .noise import OUProcess, from_intensity, realization_seed
from .qutrit import (basis_state, density_from_state, entropy, entropy_series,
                     populations, purity, purity_series)
from .unitary import (PropagationResult, expm_hermitian, propagate_direct,
                      propagate_unitary)

__all__ = [
    "__version__",
    "DriveConfig", "DriveOrder", "drive_amplitude",
    "EnsembleConfig", "EnsembleResult", "OrderingReport",
    "coherence_ordering_report", "run_ensemble",
    "IntegrationError", "RiccatiBlowupError",
    "NVParams", "hamiltonian_at",
    "LindbladParams", "LindbladResult", "lindblad_rhs", "lindblad_rhs_matrix",
    "propagate_lindblad",
    "OUProcess", "from_intensity", "realization_seed",
    "basis_state", "density_from_state", "entropy", "entropy_series",
    "populations", "purity", "purity_series",
    "PropagationResult", "expm_hermitian", "propagate_direct", "propagate_unitary",
]
