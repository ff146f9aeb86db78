from dflsim.matching.allocation import allocate_resources
from dflsim.matching.association import associate_devices
from dflsim.matching.exchange import Move, MoveKind
from dflsim.matching.outcome import MatchOutcome
from dflsim.matching.preferences import PreferenceProfile, build_rb_preferences, build_sbs_preferences
from dflsim.matching.stability import Mode, find_blocking_improvement

__all__ = [
    "PreferenceProfile",
    "MatchOutcome",
    "Move",
    "MoveKind",
    "Mode",
    "build_rb_preferences",
    "build_sbs_preferences",
    "allocate_resources",
    "associate_devices",
    "find_blocking_improvement",
]
