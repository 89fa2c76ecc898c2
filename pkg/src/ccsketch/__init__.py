"""ccsketch: one-pass frequency-moment and entropy sketches.

A turnstile stream is compressed to k running inner products with
regenerable maximally-skewed stable entries plus one exact counter; the
alpha-th frequency moment is then recovered by geometric-mean,
harmonic-mean, optimal-power, or (at alpha = 0.5) maximum-likelihood
estimators, and Shannon entropy by Tsallis/Renyi plug-ins at alpha
near 1.
"""

from .entropy import (
    ENTROPY_ROUTES,
    EntropyEstimate,
    estimate_shannon,
    renyi_from_moments,
    shannon_exact,
    tsallis_from_moments,
)
from .errors import (
    CCSketchError,
    ConfigError,
    DecodeError,
    DegenerateSketchError,
    DivergentMomentError,
    DomainError,
    MergeError,
    ParseError,
    SolverError,
    UpdateError,
)
from .estimators import (
    ESTIMATORS,
    Estimate,
    estimate_gm,
    estimate_hm,
    estimate_mle_half,
    estimate_op,
)
from .harness import (
    CSV_COLUMNS,
    McConfig,
    McReport,
    McRow,
    emit_csv,
    exact_moment,
    generate_zipf,
    ingest_stream,
    run_monte_carlo,
)
from .optpower import (
    ESTIMATOR_KINDS,
    OptimalLambda,
    VarianceCoeffQuery,
    admissible_lambda_range,
    gm_variance_coeff,
    hm_variance_coeff,
    optimal_lambda,
    predicted_variance,
    variance_coeff,
)
from .sketch import (
    FORMAT_VERSION,
    MAGIC,
    Sketch,
    SketchConfig,
    StreamUpdate,
    deserialize,
    from_vector,
    merge,
    new_sketch,
    projection_entry,
    serialize,
)
from .stable import (
    StableParams,
    absolute_moment,
    g_moment_factor,
    kappa,
    levy_cdf,
    levy_pdf,
    log_g_moment_factor,
    sample_skewed_stable,
)

__version__ = "0.1.0"
