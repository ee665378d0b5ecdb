"""SAFE molecular line notation."""

from ._core import (
    NGramModel,
    SafeError,
    TaskPrompt,
    Vocabulary,
    canonical_safe,
    canonical_smiles,
    convert_file,
    cut_bonds,
    decode,
    encode,
    evaluate,
    fragments,
    make_prompt,
    molecular_weight,
    pretokenize,
    property_reward,
    randomize_safe,
)

__all__ = [
    "NGramModel",
    "SafeError",
    "TaskPrompt",
    "Vocabulary",
    "canonical_safe",
    "canonical_smiles",
    "convert_file",
    "cut_bonds",
    "decode",
    "encode",
    "evaluate",
    "fragments",
    "make_prompt",
    "molecular_weight",
    "pretokenize",
    "property_reward",
    "randomize_safe",
]
