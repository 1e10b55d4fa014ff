"""Generalized Mordell-Tornheim multiple zeta and L-functions.

Direct summation inside the region of absolute convergence, Mellin-Barnes
continuation outside it, and an atlas of candidate singular hyperplanes.
"""
from .continuation import (ContinuationConfig, MBTerm, eval_auto, eval_batch,
                           integrand_decay_rate, mb_integrand_zeta, mb_quadrature_eval,
                           mt_base_continuation, shifted_eval_l, shifted_eval_zeta)
from .dirichlet import (DirichletCharacter, character, characters_mod, gen_bernoulli,
                        l_at_neg_int, l_line, parse_character_spec, principal_character,
                        totient)
from .errors import (BudgetExceeded, CapExceeded, DepthExceeded, DomainError, MZetaError,
                     NoValidContour, OutOfRegion, PoleError, QuadratureDiverged, SingularPoint,
                     TransversalNotFound)
from .series import (EvalResult, Shape, TruncationConfig, l_mt_hat_direct, region_contains,
                     zeta_av_direct, zeta_ez_direct, zeta_mt_direct, zeta_mt_hat_direct)
from .singularity import (CancellationReport, Hyperplane, PrincipalPattern, cancellation_check,
                          distance_to_atlas, hyperplanes_l, hyperplanes_mt, hyperplanes_zeta,
                          on_singular_set, phi_factor, plane_from, singular_planes_at,
                          transversal)
from .special import (bernoulli_number, bernoulli_poly, complex_binomial, gamma, hurwitz_zeta,
                      log_gamma, rgamma, riemann_zeta, zeta_neg_odd)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
