"""
STABILITY-CRITICAL: Frozen numeric tolerances and output contracts.

Reproducibility is a PUBLIC CONTRACT of copestop.
The same (config, seed) must produce the same event trace, the same
MetricsReport and the same CSV bytes across runs and machines for as long
as the constants below remain unchanged.

This module is the SINGLE SOURCE OF TRUTH for every value that affects:
  - threshold / stopping-set comparisons    → DECISION_* constants
  - quadrature oracles and look-ahead sums  → QUADRATURE_*, POISSON_*, EXP_TAIL_*
  - value-iteration oracle                  → VALUE_ITERATION_*
  - random streams                          → RNG_*, STREAM_*, SPLITMIX_*
  - energy accounting                       → POWER_*
  - results CSV and report hashing          → CSV_*, CANONICAL_JSON_*, REPORT_HASH_*

CHANGE PROTOCOL, required for every modification:
  1. Bump SCHEMA_VERSION in this file
  2. Re-run `copestop verify` and record the new table in the changelog
  3. If CSV_COLUMNS changes: bump to minor version (x.Y.0)
  4. If the RNG algorithm, splitmix constants or stream codes change: every
     previously published trace is invalidated, bump to minor version
"""

# ---------------------------------------------------------------------------
# DECISION RULE
# ---------------------------------------------------------------------------

# Absolute tolerance on d >= d* and on g >= look-ahead.
# Ties inside the band resolve to Send.
DECISION_TOLERANCE: float = 1e-9

# ---------------------------------------------------------------------------
# NUMERIC ORACLES
# ---------------------------------------------------------------------------

# Target absolute error handed to scipy.integrate.quad.
QUADRATURE_ABS_TOLERANCE: float = 1e-10

# Relative target kept far below the absolute one so epsabs governs.
QUADRATURE_REL_TOLERANCE: float = 1e-12

# A quadrature whose reported error exceeds this is a numeric failure.
QUADRATURE_FAILURE_TOLERANCE: float = 1e-8

# Maximum subintervals for the adaptive scheme.
QUADRATURE_SUBDIVISION_LIMIT: int = 400

# Closed forms and their quadrature oracles must agree to within this.
ORACLE_AGREEMENT_TOLERANCE: float = 1e-9

# Integration stops at T_cut where the exponential tail mass drops below this.
EXP_TAIL_MASS: float = 1e-14

# Poisson series in the look-ahead sum stop once cumulative mass exceeds 1 - this.
POISSON_TRUNCATION_MASS: float = 1e-12

# Residual discounted-kernel mass tolerated when extending beyond d_max.
KERNEL_RESIDUAL_MASS: float = 1e-13

# Hard cap on kernel offsets, as a multiple of d_max.
KERNEL_EXTENSION_FACTOR: int = 10

# ---------------------------------------------------------------------------
# VALUE ITERATION
# ---------------------------------------------------------------------------

VALUE_ITERATION_MAX_ITERATIONS: int = 100_000

# Minimum head-room above ceil(d*) required for d_max.
VALUE_ITERATION_MIN_HEADROOM: int = 10

# Sup-norm change at which the acceptance suite stops value iteration.
VALUE_ITERATION_TOLERANCE: float = 1e-10

# ---------------------------------------------------------------------------
# ESTIMATORS
# ---------------------------------------------------------------------------

LMS_DEFAULT_TAPS: int = 4
LMS_DEFAULT_STEP: float = 0.01

# ---------------------------------------------------------------------------
# RANDOM STREAMS
# STABILITY-CRITICAL: changing any of these changes every trace ever produced.
# ---------------------------------------------------------------------------

# numpy bit generator; PCG64 output is specified and platform independent.
RNG_ALGORITHM: str = "PCG64"

# splitmix64 finaliser (Steele, Lea, Flood). Do not reorder.
SPLITMIX_INCREMENT: int = 0x9E3779B97F4A7C15
SPLITMIX_MULTIPLIER_1: int = 0xBF58476D1CE4E5B9
SPLITMIX_MULTIPLIER_2: int = 0x94D049BB133111EB
SPLITMIX_MASK: int = 0xFFFFFFFFFFFFFFFF

# Spawn-key codes for per-purpose streams. Append only.
STREAM_TOPOLOGY: int = 1
STREAM_FLOWS: int = 2
STREAM_ARRIVALS: int = 3
STREAM_OPPORTUNITIES: int = 4
STREAM_REPORTS: int = 5
STREAM_LINK_LOSS: int = 6
STREAM_PAYLOAD: int = 7

# Width of the XOR-able payload tag.
PAYLOAD_TAG_BITS: int = 64

# ---------------------------------------------------------------------------
# POWER MODEL (milliwatts)
# ---------------------------------------------------------------------------

POWER_TRANSMIT_MW: float = 70.0
POWER_RECEIVE_MW: float = 50.0
POWER_IDLE_MW: float = 25.0
POWER_CIRCUIT_MW: float = 10.0

# ---------------------------------------------------------------------------
# RESULTS CSV
# STABILITY-CRITICAL: column order is a documented schema (docs/FORMATS.md).
# Append only within a major release.
# ---------------------------------------------------------------------------

CSV_COLUMNS: tuple = (
    "scenario",
    "seed",
    "row_seed",
    "cell_seed",
    "policy",
    "flow_count",
    "horizon",
    "coding_gain",
    "zero_transmissions",
    "mean_e2e_delay",
    "throughput",
    "energy_per_node",
    "energy_per_delivered",
    "transmissions",
    "failed_transmissions",
    "generated",
    "delivered",
    "in_flight",
    "dropped",
    "unroutable",
    "decode_failures",
    "degree_histogram",
    "lambda_t_estimate",
    "lambda_d_estimate",
    "p_p",
    "p_r",
    "rng_algorithm",
    "busy_opportunities",
    "waits",
)

# printf-style float format; independent of the process locale.
CSV_FLOAT_FORMAT: str = "%.10g"
CSV_LINE_TERMINATOR: str = "\n"
CSV_ENCODING: str = "utf-8"

# Minimum sample count for QQ output.
QQ_MIN_SAMPLES: int = 100

# ---------------------------------------------------------------------------
# CANONICAL JSON (report hashing, degree-histogram cells)
# ---------------------------------------------------------------------------

CANONICAL_JSON_SORT_KEYS: bool = True
CANONICAL_JSON_SEPARATORS: tuple = (",", ":")
CANONICAL_JSON_ENSURE_ASCII: bool = True

REPORT_HASH_ALGORITHM: str = "sha256"
REPORT_HASH_ENCODING: str = "utf-8"

# ---------------------------------------------------------------------------
# SCHEMA VERSION (bump when any constant above changes)
# ---------------------------------------------------------------------------
SCHEMA_VERSION: str = "1.1.0"
