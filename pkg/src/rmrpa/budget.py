from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass
class BudgetReport:
    """Operation counters for one or more decodes.

    One projection (and one aggregation vote) is counted per projected
    sub-word; one FHT per first-order decode.
    """

    fht_calls: int = 0
    projections: int = 0
    aggregations: int = 0

    def __add__(self, other: "BudgetReport") -> "BudgetReport":
        return BudgetReport(
            self.fht_calls + other.fht_calls,
            self.projections + other.projections,
            self.aggregations + other.aggregations,
        )

    def __iadd__(self, other: "BudgetReport") -> "BudgetReport":
        self.fht_calls += other.fht_calls
        self.projections += other.projections
        self.aggregations += other.aggregations
        return self

    def as_dict(self) -> dict:
        return asdict(self)
