"""MDL structure learning for discrete Bayesian networks, with its sample-complexity bounds."""
from .bounds import (
    Problem,
    Thm39Report,
    asymptotic_reference,
    f_inverse,
    ideal_case_n,
    lemma37_e,
    sample_complexity,
    sanov_bound,
    skew_bound,
    thm39_eval,
)
from .dags import enumerate_dags
from .distributions import (
    JointTable,
    cond_entropy,
    empirical,
    entropy_distance,
    l1_distance,
    ml_parameters,
    net_to_table,
    skewness,
)
from .errors import CapacityError, InputError
from .learner import (
    LearnResult,
    family_sample_size,
    learn,
    learn_exhaustive,
    learn_greedy,
    learn_subsampled,
)
from .network import (
    BayesNet,
    Dataset,
    Schema,
    Structure,
    ancestral_sample,
    is_substructure,
    joint_prob,
    param_count,
)
from .scoring import Ordering, Penalty, ScoreReport, compare, log_likelihood, penalty_weight, score

__version__ = "0.1.0"
