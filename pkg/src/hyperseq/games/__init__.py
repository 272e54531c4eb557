"""Game engine, strategies, adversaries, and category diagnostics."""
from .adversaries import (InteractiveAdversary, RandomAdversary,
                          ScriptedAdversary, SigmaAdversary,
                          identity_refinement, opening_open)
from .diagnose import diagnose
from .duplicate import (DuplicateMetricStrategy, SigmaDuplicateStrategy,
                        duplicate_metric_strategy, sigma_duplicate_strategy)
from .engine import ADVERSARY_FAULT, FAIL, PASS, Episode, play
from .meager import (DenseOpenOracle, NwdPiece, dense_hit, nwd_avoid,
                     nwd_classify, nwd_decompose)
from .strategies import (ClopenPart, CommittedPointsStrategy, ComposeStrategy,
                         Strategy, baire_strategy_countable_base, clopen_part,
                         compose_strategy, fallback_member)
from .transcript import EMPTY, NONEMPTY, IllegalMove, Move, Transcript

__all__ = [
    "ADVERSARY_FAULT", "ClopenPart", "CommittedPointsStrategy",
    "ComposeStrategy", "DenseOpenOracle", "DuplicateMetricStrategy", "EMPTY",
    "Episode", "FAIL", "IllegalMove", "InteractiveAdversary", "Move",
    "NONEMPTY", "NwdPiece", "PASS", "RandomAdversary", "ScriptedAdversary",
    "SigmaAdversary", "SigmaDuplicateStrategy", "Strategy", "Transcript",
    "baire_strategy_countable_base", "clopen_part", "compose_strategy",
    "dense_hit", "diagnose", "duplicate_metric_strategy", "fallback_member",
    "identity_refinement", "nwd_avoid", "nwd_classify", "nwd_decompose",
    "opening_open", "play", "sigma_duplicate_strategy",
]
