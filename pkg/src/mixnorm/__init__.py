"""Mixed norm spaces of analytic functions on the unit disk.

Norms ``||f||_{p,q,a}``, inclusion/contractivity decisions between pairs of
spaces, counterexample witnesses for non-contractive inclusions, and checks
of the Beta-function inequalities that follow from the contractive cases.
"""

from mixnorm.errors import DivergenceError, DomainError, MixnormError, NonConvergenceError
from mixnorm.funcs import (
    INF,
    BinomialPower,
    MeanResult,
    Monomial,
    NegBinomial,
    Polynomial,
    integral_mean,
    m_small,
    parse_function,
)
from mixnorm.norms import (
    NormResult,
    SpaceParams,
    bergman_norm,
    fn_bergman_norm_w,
    fn_hinfq_norm_q,
    hardy_norm,
    mixed_norm,
    monomial_norm_closed,
)
from mixnorm.classify import Verdict, bergman_contractive, contractive, inclusion
from mixnorm.witness import Witness, check_inequality, verify_witness, witness_qfin, witness_qinf

__all__ = [
    "INF",
    "BinomialPower",
    "DivergenceError",
    "DomainError",
    "MeanResult",
    "MixnormError",
    "Monomial",
    "NegBinomial",
    "NonConvergenceError",
    "NormResult",
    "Polynomial",
    "SpaceParams",
    "Verdict",
    "Witness",
    "bergman_contractive",
    "bergman_norm",
    "check_inequality",
    "contractive",
    "fn_bergman_norm_w",
    "fn_hinfq_norm_q",
    "hardy_norm",
    "inclusion",
    "integral_mean",
    "m_small",
    "mixed_norm",
    "monomial_norm_closed",
    "parse_function",
    "verify_witness",
    "witness_qfin",
    "witness_qinf",
]
