"""Greedy solver for min weighted-completion bin packing with ready times.

Items have sizes, weights, and ready times (earliest usable bin). Bins are
indexed 1, 2, ... and each holds total size at most the capacity; an item
packed into bin j incurs cost weight * j. The greedy packs bins in order,
always placing the eligible item with the largest weight/size ratio, and
closes the current bin the first time that item does not fit.

Eligibility is deliberately coarser than the ready times: an item with ready
time r becomes eligible at the smallest odd bin index >= r. Aligning every
entry to odd indices is what makes consecutive bin pairs overflow the
capacity (see pair_overflow_violations) and yields the factor-2 guarantee
against the fractional relaxation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Packing, PackingInstance


def eligibility_threshold(ready: int) -> int:
    """Smallest odd bin index >= ready. ready must be a positive integer."""
    if ready < 1:
        raise ValueError(f"ready time must be >= 1, got {ready}")
    return (ready // 2) * 2 + 1


@dataclass(frozen=True)
class GreedyStep:
    """One decision of the greedy: place an item, close a bin, or jump."""

    bin: int
    action: str          # "place" | "close" | "jump"
    item: str | None     # placed item, or the item that failed to fit
    eligible: int        # eligible-item count when the decision was made
    detail: str

    def render(self) -> str:
        return f"bin {self.bin}: {self.action} {self.detail}"


@dataclass(frozen=True)
class GreedyTrace:
    steps: tuple[GreedyStep, ...]

    def render(self) -> str:
        """Line-oriented dump, one decision per line."""
        return "\n".join(s.render() for s in self.steps)


def solve_greedy(inst: PackingInstance) -> tuple[Packing, GreedyTrace]:
    """Deterministic greedy packing.

    Ratio ties break toward the earlier item in instance order; comparisons
    are exact integer cross-products. When no unpacked item is eligible for
    the current bin the index jumps straight to the smallest threshold among
    the rest. Replaying the returned trace reproduces the packing.
    """
    items = inst.items
    thresholds = [eligibility_threshold(it.ready) for it in items]
    remaining = list(range(len(items)))
    bins: dict[int, list[str]] = {}
    steps: list[GreedyStep] = []
    j = 1
    load = 0
    last_bin = 0
    while remaining:
        eligible = [i for i in remaining if thresholds[i] <= j]
        if not eligible:
            target = min(thresholds[i] for i in remaining)
            steps.append(GreedyStep(
                bin=j, action="jump", item=None, eligible=0,
                detail=f"no eligible items, jump to bin {target}"))
            j = target
            load = 0
            continue
        best = eligible[0]
        for i in eligible[1:]:
            # w_i / s_i > w_best / s_best, exactly
            if items[i].weight * items[best].size > \
                    items[best].weight * items[i].size:
                best = i
        it = items[best]
        if load + it.size > inst.capacity:
            steps.append(GreedyStep(
                bin=j, action="close", item=it.id, eligible=len(eligible),
                detail=f"close ({it.id} does not fit: "
                       f"{load}+{it.size}>{inst.capacity})"))
            j += 1
            load = 0
            continue
        bins.setdefault(j, []).append(it.id)
        load += it.size
        last_bin = max(last_bin, j)
        remaining.remove(best)
        steps.append(GreedyStep(
            bin=j, action="place", item=it.id, eligible=len(eligible),
            detail=f"place {it.id} (ratio {it.weight}/{it.size}, "
                   f"load {load}/{inst.capacity})"))
    packing = Packing(bins=tuple(
        tuple(bins.get(b, ())) for b in range(1, last_bin + 1)))
    return packing, GreedyTrace(steps=tuple(steps))


def replay_trace(trace: GreedyTrace, inst: PackingInstance) -> Packing:
    """Re-execute a trace. The result must equal the original packing."""
    by_id = inst.item_by_id()
    bins: dict[int, list[str]] = {}
    placed: set[str] = set()
    last_bin = 0
    for step in trace.steps:
        if step.action == "place":
            if step.item is None or step.item not in by_id:
                raise ValueError(f"trace places unknown item {step.item!r}")
            if step.item in placed:
                raise ValueError(f"trace places {step.item!r} twice")
            placed.add(step.item)
            bins.setdefault(step.bin, []).append(step.item)
            last_bin = max(last_bin, step.bin)
        elif step.action not in ("close", "jump"):
            raise ValueError(f"unknown trace action {step.action!r}")
    if placed != set(by_id):
        raise ValueError("trace does not place every item")
    return Packing(bins=tuple(
        tuple(bins.get(b, ())) for b in range(1, last_bin + 1)))


def packing_objective(packing: Packing, inst: PackingInstance) -> int:
    """Sum of weight * bin index over all packed items."""
    by_id = inst.item_by_id()
    total = 0
    for j, bin_ in enumerate(packing.bins, start=1):
        for item_id in bin_:
            if item_id not in by_id:
                raise ValueError(f"unknown item {item_id!r} in bin {j}")
            total += by_id[item_id].weight * j
    return total


def validate_packing(packing: Packing, inst: PackingInstance) -> list[str]:
    """All constraint violations of a packing; empty means feasible."""
    by_id = inst.item_by_id()
    violations: list[str] = []
    seen: dict[str, int] = {}
    for j, bin_ in enumerate(packing.bins, start=1):
        load = 0
        for item_id in bin_:
            it = by_id.get(item_id)
            if it is None:
                violations.append(f"unknown item: bin {j} references {item_id!r}")
                continue
            if item_id in seen:
                violations.append(f"duplicate: item {item_id!r} appears in "
                                  f"bins {seen[item_id]} and {j}")
                continue
            seen[item_id] = j
            load += it.size
            if j < it.ready:
                violations.append(f"ready time: item {item_id!r} in bin {j} "
                                  f"before ready time {it.ready}")
        if load > inst.capacity:
            violations.append(f"capacity: bin {j} holds size {load} > "
                              f"{inst.capacity}")
    for it in inst.items:
        if it.id not in seen:
            violations.append(f"missing: item {it.id!r} unassigned")
    return violations


@dataclass(frozen=True)
class PairRow:
    """Bins 2j-1 and 2j merged; the basis of the factor-2 argument."""

    index: int                 # pair index j
    items: tuple[str, ...]     # contents of both bins, first bin first
    size: int
    weight: int


def paired_view(packing: Packing, inst: PackingInstance) \
        -> tuple[tuple[PairRow, ...], int]:
    """Merge consecutive bin pairs and price pair j at j per unit weight.

    The returned paired objective is a lower bound certificate target: the
    fractional optimum under halved ready times is at least this value, and
    the greedy objective is at most twice it.
    """
    by_id = inst.item_by_id()
    rows: list[PairRow] = []
    total = 0
    npairs = (len(packing.bins) + 1) // 2
    for p in range(1, npairs + 1):
        ids: list[str] = []
        for j in (2 * p - 1, 2 * p):
            if j <= len(packing.bins):
                ids.extend(packing.bins[j - 1])
        size = sum(by_id[i].size for i in ids)
        weight = sum(by_id[i].weight for i in ids)
        rows.append(PairRow(index=p, items=tuple(ids), size=size, weight=weight))
        total += p * weight
    return tuple(rows), total


def pair_overflow_violations(packing: Packing, inst: PackingInstance) -> list[str]:
    """Check that every pair with a non-empty even bin overflows the capacity.

    Greedy outputs satisfy this by construction: entry is aligned to odd
    bins, so an item can only land in bin 2j after some item failed to fit
    in bin 2j-1, and that item is packed no later than bin 2j.
    """
    by_id = inst.item_by_id()
    violations: list[str] = []
    npairs = (len(packing.bins) + 1) // 2
    for p in range(1, npairs + 1):
        even = packing.bins[2 * p - 1] if 2 * p <= len(packing.bins) else ()
        if not even:
            continue
        odd = packing.bins[2 * p - 2]
        size = sum(by_id[i].size for i in odd) + sum(by_id[i].size for i in even)
        if size <= inst.capacity:
            violations.append(f"pair {p}: bins {2 * p - 1},{2 * p} hold size "
                              f"{size} <= capacity {inst.capacity}")
    return violations
