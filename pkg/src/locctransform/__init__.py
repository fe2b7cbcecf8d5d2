"""Deciding, synthesizing and verifying LOCC transformations of bipartite pure states."""
from .exceptions import *  # noqa: F401,F403
from .monotones import (MonotoneReport, monotone_report, power_sum,
                        qubit_criterion, shannon_entropy)
from .protocol import (ClassicalMessage, ConditionalUnitary, LocalUnitary,
                       Measurement, NecessityCertificate, Protocol,
                       SynthesisStepParams, ValidationReport, can_transform,
                       communication_cost, correction_unitaries,
                       necessity_certificate, synthesize, validate)
from .simulator import (Branch, Transcript, VerifyReport, enumerate_branches,
                        run, verify_transformation)
from .specvec import (Comparison, CrossingReport, TTransform, apply_t_transform,
                      check_prob_vector, compare, crossing_statistic,
                      decompose_t_transforms, majorizes)
from .states import (PureState, SchmidtForm, fidelity,
                     from_schmidt_coefficients, locally_equivalent,
                     reduced_state_alice, reduced_state_bob, schmidt_decompose,
                     schmidt_spectrum)

__version__ = "0.1.0"
