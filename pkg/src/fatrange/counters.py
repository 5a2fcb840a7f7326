"""Per-query instrumentation counters.

One Counters instance is created per query (never shared, never global) and
filled by whichever structure answers the query.  Unused fields stay zero so
the CSV schema is identical across structure kinds.
"""

from dataclasses import dataclass, fields


@dataclass
class Counters:
    nodes_visited: int = 0
    structures_probed: int = 0
    candidates_examined: int = 0
    reported_k: int = 0
    raw_multiplicity: int = 0
    # 2-d square pipeline
    corner_rects: int = 0
    internal_rects: int = 0
    spanning_candidates: int = 0
    spanning_true: int = 0
    walk_touched_max: int = 0
    walk_excess_max: int = 0
    # 3-d grid recursion
    slab_probes: int = 0
    label_descents: int = 0
    # stabbing walk
    dominance_probes: int = 0
    # shared micro-table bookkeeping (not part of any bound)
    micro_memo_fills: int = 0

    _MAX_FIELDS = ("walk_touched_max", "walk_excess_max")

    def merge(self, other: "Counters") -> None:
        for f in fields(self):
            if f.name in self._MAX_FIELDS:
                setattr(self, f.name, max(getattr(self, f.name), getattr(other, f.name)))
            else:
                setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def as_row(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


COUNTER_COLUMNS = [f.name for f in fields(Counters)]
