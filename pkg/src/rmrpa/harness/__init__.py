from .simulate import DecoderSpec, SimConfig, SweepResult, compare_budget, run_sweep
from .output import emit_results

__all__ = ["DecoderSpec", "SimConfig", "SweepResult", "compare_budget", "emit_results", "run_sweep"]
