"""Spark-deficient Gabor analysis operators for compressed sensing.

Builds Gabor frames from eigenvectors of an order-3 metaplectic unitary,
exposes the redundant analysis transform and its adjoint, certifies spark
deficiency at desk scale, and recovers signals from subsampled noisy
measurements via analysis l1-minimization.
"""

from .errors import (BadDimensions, DimensionMismatch, EigensolveFailed,
                     FileTooShort, GaborCSError, Infeasible, IOFailure,
                     NoAdmissibleLength, NotAdmissible, NotInvertible,
                     TooLarge, UnsupportedFormat)
from .gabor import (AnalysisOperator, GaborCoefficients, GaborParams,
                    WindowVector, dgt, dgt_adjoint, frame_matrix, frame_rows,
                    make_window)
from .harness import (CurvePoint, ExperimentPlan, ExperimentResult, emit,
                      read_result_csv, run_experiment)
from .modring import (Factorization, Residue, factorize, is_admissible_length,
                      largest_admissible_at_most, mod_inverse)
from .sensing import (MeasurementOperator, NoiseModel, corrupt,
                      sample_operator)
from .signals import Signal, load_audio, make_synthetic
from .solver import (SolveConfig, SolveResult, mu_from_rule, operator_norm_sq,
                     solve_analysis_l1)
from .spark import SparkReport, deficiency_witness_search, spark_exhaustive
from .zauner import (MetaplecticOperator, StarWindow, SymplecticMatrix,
                     metaplectic, metaplectic_apply, star_window,
                     zauner_matrix)

__version__ = "0.1.0"
