from analysis_pipeline.optimize.greedy import GreedyResult, InitKind, MergeRecord, greedy_maximize

__all__ = ["GreedyResult", "InitKind", "MergeRecord", "greedy_maximize"]
