"""Online compression-ratio selection and rate allocation for multi-user
semantic communication, built around a constrained Bayesian-optimization
controller with per-user Gaussian-process quality surrogates."""

from .acquisition import (AcquisitionResult, confidence_to_beta,
                          constraint_satisfied, sample_candidates, select_cr)
from .channel import (ChannelParams, Trajectory, UserChannel,
                      calibrate_noise_power, path_loss_gain, sample_snr,
                      user_position)
from .config import ConfigError, default_config, format_config, load_config
from .environment import (QualityModel, calibrate_default, mean_quality,
                          oracle_predict, sample_quality_pair, true_quality)
from .gp import (GPHyperParams, GPState, InputScaler, ObservationWindow,
                 Posterior, PosteriorSolver, gram_matrix, kernel,
                 log_marginal_likelihood, mll_gradient, posterior,
                 update_hyperparams)
from .harness import (RunSummary, compute_metrics, read_records_csv,
                      run_simulation, sweep, write_outputs)
from .policies import POLICY_TAGS, make_policy
from .rates import RateAllocation, allocate_rates, latency_term
from .types import (SlotDecision, SlotRecord, SystemConfig, UserProfile,
                    feature_length, objective_value)

__version__ = "0.1.0"
