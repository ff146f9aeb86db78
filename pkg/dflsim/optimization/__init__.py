from dflsim.optimization.baselines import run_baseline
from dflsim.optimization.optimizer import CostTrace, optimize

__all__ = ["CostTrace", "optimize", "run_baseline"]
