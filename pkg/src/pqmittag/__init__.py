"""Extended (p, q) Mittag-Leffler function: evaluation, transforms, fractional calculus
and an identity-verification harness."""
from .numcore import DomainError, EvalResult, QuadConfig, Scheme, Status
from .extbeta import beta_classical, beta_p, beta_pq
from .mlcore import (MLParams, SeriesConfig, ml_extended_p, ml_extended_pq, ml_integral_halfline,
                     ml_integral_trig, ml_integral_unit, ml_prabhakar, ml_recurrence_residual,
                     ml_shukla, ml_term_derivative)
from .wright import WrightSpec, mellin_closed_form, wright_psi
from .transforms import MellinPoint, mellin_diag_numeric, mellin_numeric
from .fracderiv import (ExtKernelParams, FracOrder, frac_ml_pair, rl_ext_p, rl_ext_pq, rl_frac,
                        rl_frac_pos)

__version__ = "0.1.0"
