"""Coherence certificates for design matrices and one-step thresholding."""

from ostcert.errors import (
    DegenerateColumnError,
    DimensionError,
    GuardError,
    HypothesisError,
    OSTError,
    ValidationError,
    ZeroThresholdError,
)
from ostcert.design import (
    DesignMatrix,
    GramDeviation,
    from_dense,
    gen_gaussian,
    gen_rademacher,
    gram_deviation,
    read_matrix_file,
    write_matrix_file,
)
from ostcert.coherence import (
    CoherenceReport,
    average_coherence,
    check_coherence_property,
    worst_case_coherence,
)
from ostcert.signal import SparseSignal, alpha_min, gen_signal, mar, snr_min
from ostcert.ost import (
    Measurement,
    ModelEstimate,
    measure,
    ost,
    threshold_lemma,
    threshold_theorem,
)
from ostcert.stoc import (
    StocEstimate,
    StocVerdict,
    lemma1_failure_bound,
    lemma2_bound,
    lemma3_bound,
    lemma_hypothesis,
    stoc_check,
    stoc_delta_estimate,
    stoc_delta_from_coherence,
)

__version__ = "0.1.0"
