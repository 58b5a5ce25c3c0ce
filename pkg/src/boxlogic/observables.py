"""Finite real-valued observables on a logic: moments and uncertainty.

An observable assigns distinct rational values to the blocks of a
partition of the sample space by logic elements.  Means and variances
are exact finite sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import (
    CapExceeded,
    IncompleteCover,
    ObservableError,
    OverlappingSupports,
    SubJoinNotInLogic,
)
from .logic import ConcreteLogic, Logic
from .scenario import AtomId
from .states import LogicState, RationalLike, _as_fraction, point_state

MAX_VALUES = 16


@dataclass(frozen=True, eq=False)
class Observable:
    """Distinct values paired with the logic elements that carry them."""

    logic: ConcreteLogic
    items: tuple[tuple[Fraction, int], ...]

    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for v, _ in self.items)

    def support(self, k: int) -> int:
        return self.items[k][1]

    def shifted(self, offset: RationalLike) -> "Observable":
        c = _as_fraction(offset)
        return Observable(self.logic, tuple((v + c, e) for v, e in self.items))


def make_observable(
    logic: ConcreteLogic, assignment: Iterable[tuple[RationalLike, int]]
) -> Observable:
    """Validate a value-to-element assignment as a partition of the space.

    Checks, in order: distinct values, pairwise disjoint supports, total
    cover of the ground set, and membership in the logic of every union
    of supports (so value subsets always pull back into the logic).
    """
    items = []
    for value, idx in assignment:
        logic._check(idx)
        items.append((_as_fraction(value, " in observable"), idx))
    if len(items) > MAX_VALUES:
        raise CapExceeded(f"{len(items)} values, above the limit of {MAX_VALUES}")
    if not items:
        raise ObservableError("an observable needs at least one value")
    values = [v for v, _ in items]
    if len(set(values)) != len(values):
        raise ObservableError("observable values must be distinct")
    items.sort(key=lambda kv: kv[0])

    union = 0
    for v, idx in items:
        bits = logic.elements[idx]
        if bits & union:
            raise OverlappingSupports(f"support of value {v} overlaps earlier supports")
        union |= bits
    if union != logic.full_mask:
        raise IncompleteCover("supports do not cover the sample space")
    n = len(items)
    for pattern in range(1 << n):
        bits = 0
        for k in range(n):
            if pattern & (1 << k):
                bits |= logic.elements[items[k][1]]
        if bits not in logic.index:
            raise SubJoinNotInLogic(
                f"the union of value subset {pattern:#b} is missing from the logic"
            )
    return Observable(logic, tuple(items))


def mean(obs: Observable, state: LogicState) -> Fraction:
    return sum((v * state.value(e) for v, e in obs.items), Fraction(0))


def variance(obs: Observable, state: LogicState) -> Fraction:
    m = mean(obs, state)
    return sum(((v - m) ** 2 * state.value(e) for v, e in obs.items), Fraction(0))


def heisenberg_infimum_witness(
    logic: ConcreteLogic, x: Observable, y: Observable, *, point: int = 0
) -> tuple[LogicState, Fraction]:
    """A state with vanishing variance product for the given pair.

    Two-valued states of a single sample point concentrate every
    observable on one value, so the product of variances is zero there;
    the product is computed, not assumed.
    """
    state = point_state(logic, point)
    return state, variance(x, state) * variance(y, state)


def input_pair_observables(logic: Logic, a: int, b: int) -> list[Observable]:
    """Every observable whose supports are unions of one input pair's atoms.

    The atoms of a fixed input pair partition the sample space, so each
    set partition of them yields one observable; values are 0, 1, ...
    in canonical order.
    """
    la = logic.spec.left_sizes[a]
    rb = logic.spec.right_sizes[b]
    atoms = [
        logic.atom_element(AtomId(a, alpha, b, beta))
        for alpha in range(la)
        for beta in range(rb)
    ]
    observables = []
    for blocks in _set_partitions(len(atoms)):
        assignment = []
        for value, block in enumerate(blocks):
            bits = 0
            for k in block:
                bits |= logic.elements[atoms[k]]
            assignment.append((Fraction(value), logic.index_of(bits)))
        observables.append(make_observable(logic, assignment))
    return observables


def _set_partitions(n: int) -> list[list[list[int]]]:
    """All partitions of range(n) into blocks, canonically ordered."""
    if n == 0:
        return [[]]
    out: list[list[list[int]]] = []

    def rec(item: int, blocks: list[list[int]]) -> None:
        if item == n:
            out.append([list(b) for b in blocks])
            return
        for b in blocks:
            b.append(item)
            rec(item + 1, blocks)
            b.pop()
        blocks.append([item])
        rec(item + 1, blocks)
        blocks.pop()

    rec(0, [])
    return out
