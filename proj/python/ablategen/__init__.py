"""Grounded n-gram generation with factual-ablation evaluation."""

from ._core import (
    AblationExample,
    DataError,
    DegenerateProbabilityError,
    EmptyKeepSetError,
    Error,
    Example,
    GroundedLM,
    NoEditableFactError,
    ValidationError,
    Vocab,
    accuracy,
    bleu,
    detokenize,
    evaluate,
    fit,
    generate,
    load_model,
    make_desk_corpus,
    margin_accuracy,
    model_from_json,
    model_to_json,
    nist,
    parse_margin,
    pmi_add,
    pmi_interpolate,
    pmi_score,
    quality_filter,
    save_model,
    split_words,
    synth_ablate,
    tokenize,
    top_p_filter,
    train_loss_truncated,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
