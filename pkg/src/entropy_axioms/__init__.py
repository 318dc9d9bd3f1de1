"""Verifiable numerics for the axiomatic construction of quantum entropy."""

__version__ = "0.1.0"

from .axioms import (
    AxiomReport,
    MajorizationVerdict,
    Relation,
    check_axiom_A,
    check_axiom_B,
    check_axiom_C,
    check_axiom_D,
    majorizes,
    renyi_discrimination_report,
    schur_concavity_scan,
    uhlmann_sup_approx,
)
from .entropy import BOLTZMANN, boltzmann_planck, relative_entropy, renyi, shannon, von_neumann
from .large_numbers import (
    ConvergenceRow,
    TypeClass,
    augmented_omega,
    build_omega,
    concentration_sample,
    convergence_table,
    klein_bound_check,
    l_operator_check,
    multinomial,
    semicontinuity_sequence,
    theorem1_bracket,
    type_class_entropy_rate,
    verify_marginals,
)
from .states import (
    DensityMatrix,
    RationalSpectrum,
    conjugate,
    density_matrix,
    from_rational_spectrum,
    pure,
    qlb,
    random_density,
    random_unitary,
    spectrum,
    tensor,
    tensor_power,
)
