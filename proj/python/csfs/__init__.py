"""Cost-sensitive feature selection for imbalanced classification."""

from ._csfs import (
    ConfigError,
    CostVariant,
    CostVector,
    DataError,
    Dataset,
    DivergenceError,
    Error,
    EvalOptions,
    EvalReport,
    FitResult,
    LabelDomainError,
    NumericalError,
    ParseError,
    ShapeError,
    SolverConfig,
    Splits,
    SweepOptions,
    SweepRecord,
    SweepResult,
    Task,
    UndefinedMeasureError,
    append_bias,
    baseline_equal_cost,
    build_cost_matrix,
    cost_vector,
    discretize,
    downstream_eval,
    equal_cost_ranking,
    error_profile,
    f_measure,
    fit,
    gen_synthetic_binary,
    load_csv,
    macro_f,
    objective,
    predict,
    rank_features,
    read_manifest,
    run_sweep,
    save_csv,
    select_top_k,
    split,
    write_manifest,
)

__all__ = [name for name in dir() if not name.startswith("_")]
