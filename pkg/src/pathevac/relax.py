"""Fractional relaxation: divisible items, exact rational arithmetic.

Dropping indivisibility gives a lower bound on the integral packing optimum.
Reducing every ready time to its pair index relaxes further; the chain

    fractional(reduced tau) <= fractional(tau) <= integral optimum

is what the factor-2 guarantee of the greedy is proved against: merging the
greedy's bins (2j-1, 2j) into pair j keeps the solution feasible for the
reduced instance, and doubling pair indices recovers bin indices.
"""

from __future__ import annotations

from fractions import Fraction

from .model import (FractionalPacking, PackingInstance, PackingItem,
                    fraction_str)


def reduced_ready_times(inst: PackingInstance) -> PackingInstance:
    """Same items with each ready time reduced to its pair index.

    An item with ready time tau first becomes eligible at the smallest odd
    bin >= tau, which lies in pair floor(tau/2) + 1. Plain halving (rounding
    up) would map an even tau one pair earlier, and against that looser
    relaxation the doubled fractional bound is not a valid certificate of
    the greedy (the even-tau counterexample is pinned in the tests).
    """
    return PackingInstance(
        capacity=inst.capacity,
        items=tuple(PackingItem(id=it.id, size=it.size, weight=it.weight,
                                ready=it.ready // 2 + 1)
                    for it in inst.items),
    )


def solve_fractional_greedy(inst: PackingInstance) -> FractionalPacking:
    """Pour mass in weight/size order, earliest bin first.

    Each bin is filled to capacity (or until no ready mass is left) from the
    ready items of the highest remaining ratio; ties break toward the earlier
    item in instance order. This greedy is optimal for the relaxation: if two
    bins carry mass against the ratio order, both items were ready at the
    earlier bin (the greedy never defers ready mass), so swapping equal mass
    between them keeps feasibility and does not increase cost.
    """
    items = inst.items
    order = sorted(range(len(items)),
                   key=lambda i: (Fraction(-items[i].weight, items[i].size), i))
    remaining: dict[int, Fraction] = {
        i: Fraction(items[i].size) for i in range(len(items))}
    left = len(items)
    entries: list[tuple[str, int, Fraction]] = []
    j = 1
    while left:
        ready = [i for i in order if remaining[i] > 0 and items[i].ready <= j]
        if not ready:
            j = min(items[i].ready for i, r in remaining.items() if r > 0)
            continue
        space = Fraction(inst.capacity)
        for i in ready:
            if space == 0:
                break
            take = min(remaining[i], space)
            entries.append((items[i].id, j, take / items[i].size))
            remaining[i] -= take
            space -= take
            if remaining[i] == 0:
                left -= 1
        j += 1
    return FractionalPacking(entries=tuple(entries))


def validate_fractional(fp: FractionalPacking, inst: PackingInstance) -> list[str]:
    """All constraint violations of a fractional packing; empty means feasible."""
    by_id = inst.item_by_id()
    violations: list[str] = []
    assigned: dict[str, Fraction] = {it.id: Fraction(0) for it in inst.items}
    loads: dict[int, Fraction] = {}
    for item_id, j, frac in fp.entries:
        it = by_id.get(item_id)
        if it is None:
            violations.append(f"unknown item: {item_id!r}")
            continue
        if frac <= 0 or frac > 1:
            violations.append(f"fraction: item {item_id!r} carries {frac} "
                              "outside (0, 1]")
            continue
        if j < it.ready:
            violations.append(f"ready time: item {item_id!r} has mass in bin "
                              f"{j} before ready time {it.ready}")
        assigned[item_id] += frac
        loads[j] = loads.get(j, Fraction(0)) + frac * it.size
    for item_id, total in assigned.items():
        if total != 1:
            violations.append(f"conservation: item {item_id!r} assigns total "
                              f"fraction {total}, expected 1")
    for j, load in sorted(loads.items()):
        if load > inst.capacity:
            violations.append(f"capacity: bin {j} holds size {load} > "
                              f"{inst.capacity}")
    return violations


def fractional_objective(fp: FractionalPacking, inst: PackingInstance) -> Fraction:
    """Exact objective of a feasible fractional packing.

    Rejects infeasible input, naming the violated constraint.
    """
    violations = validate_fractional(fp, inst)
    if violations:
        raise ValueError(f"infeasible fractional packing: {violations[0]}")
    by_id = inst.item_by_id()
    return sum((Fraction(j) * by_id[i].weight * frac
                for i, j, frac in fp.entries), start=Fraction(0))


def lower_bound_report(inst: PackingInstance, reduced: bool = False) -> dict:
    """Fractional lower bound as a JSON-ready document."""
    target = reduced_ready_times(inst) if reduced else inst
    fp = solve_fractional_greedy(target)
    value = fractional_objective(fp, target)
    return {"fractional_lb": fraction_str(value), "reduced_tau": reduced}
