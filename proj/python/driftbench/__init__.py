"""Dataset stability benchmarking toolkit."""

from ._core import (
    Dataset,
    DriftScenario,
    TrainedModel,
    __version__,
    detect,
    f1_scores,
    generate_stream,
    ingest,
    ks_p_value,
    ks_two_sample,
    normalized_wasserstein,
    run_benchmark,
    run_benchmark_to_file,
    train,
    wasserstein_1d,
    write_csv,
    write_report_bundle,
)

__all__ = [
    "Dataset",
    "DriftScenario",
    "TrainedModel",
    "__version__",
    "detect",
    "f1_scores",
    "generate_stream",
    "ingest",
    "ks_p_value",
    "ks_two_sample",
    "normalized_wasserstein",
    "run_benchmark",
    "run_benchmark_to_file",
    "train",
    "wasserstein_1d",
    "write_csv",
    "write_report_bundle",
]
