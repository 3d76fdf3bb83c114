"""Genetic search over MT hypotheses guided by string metrics.

Cases are plain dicts with the JSONL layout used by the ``metric-ga`` tool:
``{"id", "src", "refs": [...], "hyps": [{"text", "logprob"?, "origin"?}]}``.
Components are ``"bleu"``, ``"chrf"`` or ``"mock:<rule>"``.
"""

import json

from . import _core
from ._core import (
    InvalidArgument,
    ParseError,
    ProtocolError,
    TransportError,
    bootstrap_ci,
    chromosome_length,
    corpus_bleu,
    corpus_chrf,
    encode,
    is_adversarial,
    mock_score,
    paired_bootstrap,
    sentence_bleu,
    sentence_chrf,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "InvalidArgument",
    "ParseError",
    "ProtocolError",
    "TransportError",
    "bootstrap_ci",
    "chromosome_length",
    "corpus_bleu",
    "corpus_chrf",
    "encode",
    "is_adversarial",
    "mine",
    "mock_score",
    "optimize",
    "paired_bootstrap",
    "rerank",
    "sentence_bleu",
    "sentence_chrf",
    "tokenize",
]


def rerank(case, mode="mbr", metric=("chrf",)):
    """Pick one hypothesis. Returns ``{index, text, fitness}``."""
    return _core.rerank_json(json.dumps(case), mode, list(metric))


def optimize(
    case,
    fitness=("chrf",),
    mode="mbr",
    mutation=("init",),
    wordlist=(),
    pop=2000,
    gens=300,
    crossover=0.1,
    length_factor=1.1,
    tournament=3,
    mutation_rate=None,
    seed=0,
):
    """Run the GA on one case; same seeding as ``metric-ga optimize``."""
    return _core.optimize_json(
        json.dumps(case), list(fitness), mode, list(mutation), list(wordlist), pop, gens,
        crossover, length_factor, tournament, mutation_rate, seed,
    )


def mine(
    case,
    objective,
    held_out,
    mutation=("init",),
    wordlist=(),
    pop=2000,
    gens=300,
    mutation_rate=None,
    seed=0,
):
    """Optimise towards ``objective`` and score the result with ``held_out``."""
    return json.loads(
        _core.mine_json(
            json.dumps(case), list(objective), held_out, list(mutation), list(wordlist), pop, gens,
            mutation_rate, seed,
        )
    )
