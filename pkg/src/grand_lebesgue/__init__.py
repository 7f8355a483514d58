"""Grand and small Lebesgue norms on finite measure spaces and convolution
multipliers on finite abelian groups."""

from .grand_norm import (EpsilonProfile, embedding_constant, epsilon_profile,
                         grand_norm, phi, vanishing_tail)
from .group_algebra import (ApproximateIdentityFamily, GroupStructure,
                            UnsupportedGroupError, convolve, convolve_fft,
                            fejer_family, fejer_kernel, haar_space, translate,
                            unit)
from .measure_space import (AlignmentError, DomainError, EpsilonGrid,
                            ExponentParams, MeasureSpace, as_function,
                            conjugate_exponent, integrate_product, lp_norm)
from .multipliers import (ConvolutionOperator, OperatorNormReport, apply,
                          approx_identity_convergence, commutation_residual,
                          factorization_density_check, module_inequality_check,
                          multiplier_ratio_report, operator_norm_l1_to,
                          random_search_lower_bound, relative_completion_norm)
from .norms import GrandNorm, LpNorm, SmallNorm, SmallUpperNorm, parse_selector
from .small_norm import (Decomposition, InvalidDecompositionError, NormEstimate,
                         PreconditionError, associate_lower_bound,
                         decomposition_cost, dominated_monotonicity_check,
                         small_norm_estimate, small_norm_upper, term_cost)

__version__ = "0.1.0"
