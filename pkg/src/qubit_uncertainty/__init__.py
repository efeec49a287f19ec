"""Tight, state-independent uncertainty relations for qubit Pauli observables."""

from .bloch import (
    PauliObservable,
    QubitState,
    UncertaintyMeasure,
    binary_entropy,
    binary_entropy_inverse,
    expectation,
    expectation_from_std,
    f_of_entropy,
    make_observable,
    make_state,
    shannon_entropy,
    std_dev,
)
from .errors import UncertaintyError
from .oracle import Sampler, SamplerMode, TightnessReport, certify_tightness, extremal_scan, sample_states
from .povm import BinaryPovm, GeneralObservable, povm_distribution, povm_pair_relation, reduce_to_pauli
from .pseudo import ObservableSet, build_set, pinv_svd, realizable, reconstruct_state
from .relations import (
    RelationVerdict,
    SignVector,
    boundary_states_stddev,
    ellipsoid_relation,
    entropic_pair_relation,
    exists_sign_assignment,
    expectation_pair_relation,
    monotone_closure_relation,
    n_observable_relation,
    saturating_state_expectations,
    saturating_state_stddev,
    stddev_pair_relation,
    triple_relation,
)

__version__ = "0.1.0"
