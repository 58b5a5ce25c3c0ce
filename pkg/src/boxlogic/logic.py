"""Concrete logics over a finite ground set.

A concrete logic is held as a deduplicated table of bit vectors with the
subset order, bitwise complement inside the ground set, and a fixed atom
list used for decompositions.  The table order is canonical: the empty
set first, the full set second, everything else sorted by (popcount,
numeric value).  Absent meets and joins are values (``None``), not
errors.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    ClosureBudgetExceeded,
    ForeignElementError,
    NotAboveError,
    ScenarioError,
    TheoremViolation,
)
from .scenario import (
    AtomId,
    BoxWorldSpec,
    GammaIndex,
    Side,
    all_atom_ids,
    build_gamma,
    make_atom,
    DEFAULT_GAMMA_CAP,
)

DEFAULT_CLOSURE_CAP = 10**6

_WORD = 64
_WORD_MASK = (1 << _WORD) - 1


class ConcreteLogic:
    """Finite family of subsets of ``{0..ground_size-1}`` as a bit-vector table."""

    def __init__(
        self,
        ground_size: int,
        elements: Iterable[int],
        *,
        atom_bits: Optional[Sequence[int]] = None,
    ):
        self.ground_size = ground_size
        self.full_mask = (1 << ground_size) - 1
        uniq = set(elements)
        for e in uniq:
            if e & ~self.full_mask:
                raise ScenarioError("element has bits outside the ground set")
        ordered = sorted(uniq, key=lambda e: (e.bit_count(), e))
        if self.full_mask in uniq and len(ordered) > 1:
            ordered.remove(self.full_mask)
            ordered.insert(1 if ordered[0] == 0 else 0, self.full_mask)
        self.elements: tuple[int, ...] = tuple(ordered)
        self.index: dict[int, int] = {e: i for i, e in enumerate(self.elements)}
        self.complement_map: tuple[Optional[int], ...] = tuple(
            self.index.get(e ^ self.full_mask) for e in self.elements
        )
        if atom_bits is None:
            atom_bits = self._minimal_nonzero()
        else:
            atom_bits = list(atom_bits)
            for a in atom_bits:
                if a not in self.index:
                    raise ForeignElementError(f"atom {a:#x} not in the table")
        self.atom_bits: tuple[int, ...] = tuple(atom_bits)
        self.atom_indices: tuple[int, ...] = tuple(
            self.index[a] for a in self.atom_bits
        )
        self._decomp_cache: dict[int, tuple[tuple[int, ...], ...]] = {}
        self._packed_cache: Optional[np.ndarray] = None
        self._atomistic: Optional[bool] = None
        self._comparable_cache = None
        self._disjoint_cache = None

    # -- basic queries ---------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.elements)

    def index_of(self, bits: int) -> int:
        try:
            return self.index[bits]
        except KeyError:
            raise ForeignElementError(f"bit vector {bits:#x} not in the logic") from None

    def bits_of(self, i: int) -> int:
        self._check(i)
        return self.elements[i]

    def _check(self, i: int) -> None:
        if not 0 <= i < len(self.elements):
            raise ForeignElementError(f"element index {i} out of range")

    def leq(self, i: int, j: int) -> bool:
        """Subset order on table indices."""
        self._check(i)
        self._check(j)
        p, q = self.elements[i], self.elements[j]
        return p & q == p

    def complement(self, i: int) -> Optional[int]:
        self._check(i)
        return self.complement_map[i]

    def is_atom(self, i: int) -> bool:
        self._check(i)
        return i in set(self.atom_indices)

    # -- atoms and decompositions ----------------------------------------

    def _minimal_nonzero(self) -> list[int]:
        atoms: list[int] = []
        for e in self.elements:
            if e == 0:
                continue
            if not any(a & e == a for a in atoms):
                atoms.append(e)
        return atoms

    def atomistic(self) -> bool:
        """Every nonzero element is the union of the atoms below it."""
        if self._atomistic is None:
            ok = True
            for e in self.elements:
                if e == 0:
                    continue
                cover = 0
                for a in self.atom_bits:
                    if a & e == a:
                        cover |= a
                if cover != e:
                    ok = False
                    break
            self._atomistic = ok
        return self._atomistic

    def all_decompositions(self, i: int) -> tuple[tuple[int, ...], ...]:
        """Every partition of element ``i`` into pairwise-disjoint atoms.

        Each partition is a tuple of atom positions (indices into
        ``atom_bits``), sorted; the partitions themselves are sorted
        lexicographically.  The empty element has no partitions.
        """
        self._check(i)
        bits = self.elements[i]
        if bits not in self._decomp_cache:
            self._decomp_cache[bits] = self._enumerate_decompositions(bits)
        return self._decomp_cache[bits]

    def _enumerate_decompositions(self, bits: int) -> tuple[tuple[int, ...], ...]:
        if bits == 0:
            return ()
        atoms = self.atom_bits
        found: list[tuple[int, ...]] = []
        chosen: list[int] = []

        def rec(rem: int) -> None:
            if rem == 0:
                found.append(tuple(sorted(chosen)))
                return
            low = rem & -rem
            for pos, a in enumerate(atoms):
                if a & low and a & rem == a:
                    chosen.append(pos)
                    rec(rem & ~a)
                    chosen.pop()

        rec(bits)
        return tuple(sorted(set(found)))

    def decomposition(self, i: int) -> Optional[tuple[int, ...]]:
        """Canonical (lexicographically least) atomic partition, or None."""
        decs = self.all_decompositions(i)
        if self.elements[i] == 0:
            return ()
        return decs[0] if decs else None

    # -- order operations --------------------------------------------------

    def meet(self, i: int, j: int) -> Optional[int]:
        """Greatest lower bound in the table, or None when there is none.

        The union U of all table elements contained in the set
        intersection is itself contained in it, so the meet exists iff U
        is in the table, and then equals U.  When the table is atomistic
        U is the union of the atoms below the intersection.
        """
        self._check(i)
        self._check(j)
        s = self.elements[i] & self.elements[j]
        return self.index.get(self._downset_union(s))

    def join(self, i: int, j: int) -> Optional[int]:
        """Least upper bound in the table, or None when there is none."""
        self._check(i)
        self._check(j)
        s = self.elements[i] | self.elements[j]
        if all(c is not None for c in self.complement_map):
            m = self.index.get(self._downset_union(s ^ self.full_mask))
            return None if m is None else self.complement_map[m]
        # fall back for tables that are not complement-closed
        meet_of_upper = self.full_mask
        found = False
        for e in self.elements:
            if e & s == s:
                meet_of_upper &= e
                found = True
        if not found:
            return None
        return self.index.get(meet_of_upper) if meet_of_upper & s == s else None

    def _downset_union(self, s: int) -> int:
        if self.atomistic():
            u = 0
            for a in self.atom_bits:
                if a & s == a:
                    u |= a
            return u
        u = 0
        for e in self.elements:
            if e & s == e:
                u |= e
        return u

    # -- packed representation and pair enumeration -----------------------

    def _packed(self) -> np.ndarray:
        if self._packed_cache is None:
            words = max(1, (self.ground_size + _WORD - 1) // _WORD)
            arr = np.zeros((len(self.elements), words), dtype=np.uint64)
            for i, e in enumerate(self.elements):
                for w in range(words):
                    arr[i, w] = (e >> (w * _WORD)) & _WORD_MASK
            arr.setflags(write=False)
            self._packed_cache = arr
        return self._packed_cache

    def comparable_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """All ordered pairs (i, j) with element i a subset of element j."""
        if self._comparable_cache is None:
            packed = self._packed()
            lows, highs = [], []
            for i in range(len(self.elements)):
                row = packed[i]
                mask = np.all((packed & row) == row, axis=1)
                idx = np.nonzero(mask)[0]
                lows.append(np.full(len(idx), i, dtype=np.int64))
                highs.append(idx.astype(np.int64))
            self._comparable_cache = (np.concatenate(lows), np.concatenate(highs))
        return self._comparable_cache

    def disjoint_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """All unordered pairs (i, j), i < j, of disjoint elements."""
        if self._disjoint_cache is None:
            packed = self._packed()
            zero = np.zeros(packed.shape[1], dtype=np.uint64)
            lefts, rights = [], []
            for i in range(len(self.elements)):
                row = packed[i]
                mask = np.all((packed & row) == zero, axis=1)
                idx = np.nonzero(mask)[0]
                idx = idx[idx > i]
                lefts.append(np.full(len(idx), i, dtype=np.int64))
                rights.append(idx.astype(np.int64))
            self._disjoint_cache = (np.concatenate(lefts), np.concatenate(rights))
        return self._disjoint_cache

    def supersets_of(self, i: int) -> np.ndarray:
        self._check(i)
        packed = self._packed()
        row = packed[i]
        mask = np.all((packed & row) == row, axis=1)
        return np.nonzero(mask)[0]

    # -- exports -----------------------------------------------------------

    def covers(self) -> list[tuple[int, int]]:
        """Edges (i, j) of the Hasse diagram: j covers i."""
        edges: list[tuple[int, int]] = []
        for i in range(len(self.elements)):
            sups = [j for j in self.supersets_of(i).tolist() if j != i]
            sups.sort(key=lambda j: (self.elements[j].bit_count(), self.elements[j]))
            accepted: list[int] = []
            for j in sups:
                bj = self.elements[j]
                if not any(self.elements[k] & bj == self.elements[k] for k in accepted):
                    accepted.append(j)
            edges.extend((i, j) for j in accepted)
        edges.sort()
        return edges


class Logic(ConcreteLogic):
    """The closed logic of a two-box scenario."""

    def __init__(self, gamma: GammaIndex, atom_ids: Sequence[AtomId], elements: Iterable[int]):
        bits = [make_atom(gamma, aid) for aid in atom_ids]
        super().__init__(gamma.gamma_size, elements, atom_bits=bits)
        self.gamma = gamma
        self.spec = gamma.spec
        self.atom_ids: tuple[AtomId, ...] = tuple(atom_ids)

    def atom_position(self, atom: AtomId) -> int:
        try:
            return self.atom_ids.index(atom)
        except ValueError:
            raise ForeignElementError(f"{atom} is not an atom of this logic") from None

    def atom_element(self, atom: AtomId) -> int:
        return self.atom_indices[self.atom_position(atom)]


class EvenSetLogic(ConcreteLogic):
    """All even-cardinality subsets of ``{0..2k-1}``."""

    def __init__(self, k: int):
        ground = 2 * k
        elements = [e for e in range(1 << ground) if e.bit_count() % 2 == 0]
        super().__init__(ground, elements)
        self.k = k


def _close_family(ground_size: int, seeds: Iterable[int], *, cap: int) -> set[int]:
    """Smallest family containing the seeds and the empty set that is closed
    under complement and under unions of disjoint members.

    Disjoint unions are produced pairwise; chaining pairwise unions
    reaches every finite disjoint family.
    """
    full = (1 << ground_size) - 1
    known: set[int] = {0}
    known.update(seeds)
    todo: deque[int] = deque(sorted(known))
    while todo:
        e = todo.popleft()
        c = e ^ full
        if c not in known:
            known.add(c)
            todo.append(c)
        snapshot = list(known)
        for f in snapshot:
            if e & f == 0:
                u = e | f
                if u not in known:
                    known.add(u)
                    todo.append(u)
        if len(known) > cap:
            raise ClosureBudgetExceeded(
                f"closure exceeded {cap} elements; raise the cap to continue"
            )
    return known


def close_logic(
    spec: BoxWorldSpec,
    *,
    closure_cap: int = DEFAULT_CLOSURE_CAP,
    gamma_cap: int = DEFAULT_GAMMA_CAP,
) -> Logic:
    """Close the atom family of a scenario under complement and disjoint union."""
    gamma = build_gamma(spec, gamma_cap=gamma_cap)
    atom_ids = all_atom_ids(spec)
    atoms = [make_atom(gamma, aid) for aid in atom_ids]
    elements = _close_family(gamma.gamma_size, atoms, cap=closure_cap)
    return Logic(gamma, atom_ids, elements)


DEFAULT_EVEN_SET_CAP = 6


def even_set_logic(k: int, *, k_cap: int = DEFAULT_EVEN_SET_CAP) -> EvenSetLogic:
    if k < 1:
        raise ScenarioError("k must be at least 1")
    if k > k_cap:
        raise ClosureBudgetExceeded(f"k={k} above the cap of {k_cap}")
    return EvenSetLogic(k)


# -- order classification above an atom ------------------------------------


class OrderKind(Enum):
    ATOM_PLUS_REST = "atom_plus_rest"
    LEFT_LOCALIZED = "left_localized"
    RIGHT_LOCALIZED = "right_localized"
    TOP = "top"


@dataclass(frozen=True)
class OrderClassification:
    """How an element sits above one of its atoms.

    ``base_bits`` is the extracted piece (the atom itself, a one-box
    single-outcome element, or the full set); ``remainder_index`` points
    at the rest, which is disjoint from the base.
    """

    kind: OrderKind
    base_bits: int
    remainder_index: int

    def reconstruct(self, logic: ConcreteLogic) -> int:
        return self.base_bits | logic.elements[self.remainder_index]


def classify_above_atom(logic: Logic, atom_index: int, elem_index: int) -> OrderClassification:
    """Classify an element above an atom, preferring the most informative case.

    Preference: full set, then a left one-box piece, then a right one,
    then the atom itself.
    """
    logic._check(elem_index)
    if atom_index not in logic.atom_indices:
        raise ForeignElementError(f"element {atom_index} is not an atom")
    p = logic.elements[atom_index]
    q = logic.elements[elem_index]
    if p & q != p:
        raise NotAboveError("the atom is not below the element")

    def remainder(base: int) -> int:
        rest = q & ~base
        idx = logic.index.get(rest)
        if idx is None:
            raise TheoremViolation(
                "remainder of an order classification is missing from the logic"
            )
        return idx

    if q == logic.full_mask:
        return OrderClassification(OrderKind.TOP, logic.full_mask, logic.index_of(0))
    aid = logic.atom_ids[logic.atom_indices.index(atom_index)]
    left_piece = logic.gamma.outcome_mask(Side.LEFT, aid.a, aid.alpha)
    if left_piece & q == left_piece:
        return OrderClassification(
            OrderKind.LEFT_LOCALIZED, left_piece, remainder(left_piece)
        )
    right_piece = logic.gamma.outcome_mask(Side.RIGHT, aid.b, aid.beta)
    if right_piece & q == right_piece:
        return OrderClassification(
            OrderKind.RIGHT_LOCALIZED, right_piece, remainder(right_piece)
        )
    return OrderClassification(OrderKind.ATOM_PLUS_REST, p, remainder(p))


# -- verification -----------------------------------------------------------


@dataclass
class CheckResult:
    passed: bool
    checked: int
    counterexample: Optional[dict] = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
            "note": self.note,
        }


@dataclass
class AxiomReport:
    results: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def to_dict(self) -> dict:
        return {name: r.to_dict() for name, r in sorted(self.results.items())}


def verify_axioms(logic: ConcreteLogic) -> AxiomReport:
    """Exhaustively check the order, complement and closure axioms.

    Failures are report entries, never exceptions, so damaged tables can
    be inspected.  For disjoint families only pairs are checked: in a
    finite table closed under pairwise disjoint unions, chaining unions
    two at a time realizes every finite disjoint family, and the report
    records this reduction.
    """
    report = AxiomReport()
    elements = logic.elements
    index = logic.index
    full = logic.full_mask
    n = len(elements)

    # C1: the empty set belongs to the family.
    report.results["C1"] = CheckResult(0 in index, 1)

    # L1: least and greatest elements exist and bound everything.
    bounds_ok = 0 in index and full in index
    counterexample = None
    if bounds_ok:
        for i, e in enumerate(elements):
            if e & full != e:
                bounds_ok = False
                counterexample = {"element": i}
                break
    report.results["L1"] = CheckResult(bounds_ok, n, counterexample)

    # C2: complements stay in the family.
    missing = [i for i, c in enumerate(logic.complement_map) if c is None]
    report.results["C2"] = CheckResult(
        not missing,
        n,
        {"element": missing[0]} if missing else None,
    )

    # L3: the complement map is an involution.
    l3_ok, counterexample = True, None
    for i, c in enumerate(logic.complement_map):
        if c is None or logic.complement_map[c] != i:
            l3_ok, counterexample = False, {"element": i}
            break
    report.results["L3"] = CheckResult(l3_ok, n, counterexample)

    comparable = logic.comparable_pairs()
    lows, highs = (arr.tolist() for arr in comparable)

    # L2: complement reverses the order.
    l2_ok, counterexample, checked = True, None, 0
    comp = logic.complement_map
    for i, j in zip(lows, highs):
        checked += 1
        ci, cj = comp[i], comp[j]
        if ci is None or cj is None:
            l2_ok, counterexample = False, {"pair": [i, j], "reason": "no complement"}
            break
        if elements[cj] & elements[ci] != elements[cj]:
            l2_ok, counterexample = False, {"pair": [i, j]}
            break
    report.results["L2"] = CheckResult(l2_ok, checked, counterexample)

    # L5: below any superset, the set difference is available, which makes
    # q = p v (q ^ p') an identity of set algebra: the difference d is in
    # the table, every lower bound of {q, p'} is a subset of d, and every
    # upper bound of {p, d} contains p|d = q.
    l5_ok, counterexample, checked = True, None, 0
    for i, j in zip(lows, highs):
        checked += 1
        if (elements[j] & ~elements[i]) not in index:
            l5_ok, counterexample = False, {"pair": [i, j]}
            break
    report.results["L5"] = CheckResult(l5_ok, checked, counterexample)

    # C3 and L4 on pairs: disjoint unions exist, hence disjoint joins do.
    disj = logic.disjoint_pairs()
    c3_ok, counterexample, checked = True, None, 0
    for i, j in zip(disj[0].tolist(), disj[1].tolist()):
        checked += 1
        if (elements[i] | elements[j]) not in index:
            c3_ok, counterexample = False, {"pair": [i, j]}
            break
    chain_note = "pairwise unions; chaining covers larger disjoint families"
    report.results["C3"] = CheckResult(c3_ok, checked, counterexample, chain_note)
    report.results["L4"] = CheckResult(
        c3_ok,
        checked,
        counterexample,
        "disjoint unions found in the table are the least upper bounds; " + chain_note,
    )
    return report


def verify_atomic_coverage(logic: ConcreteLogic) -> CheckResult:
    """Every nonzero element is a disjoint union of atoms, reproduced exactly."""
    checked = 0
    for i, e in enumerate(logic.elements):
        if e == 0:
            continue
        checked += 1
        dec = logic.decomposition(i)
        if dec is None:
            return CheckResult(False, checked, {"element": i, "reason": "no partition"})
        union = 0
        for pos in dec:
            a = logic.atom_bits[pos]
            if union & a:
                return CheckResult(False, checked, {"element": i, "reason": "overlap"})
            union |= a
        if union != e:
            return CheckResult(False, checked, {"element": i, "reason": "union mismatch"})
    return CheckResult(True, checked)


def verify_order_classification(logic: Logic) -> tuple[CheckResult, dict[str, int]]:
    """Classify every (atom, superset) pair and verify the witnesses."""
    counts = {kind.value: 0 for kind in OrderKind}
    checked = 0
    for atom_index in logic.atom_indices:
        for j in logic.supersets_of(atom_index).tolist():
            checked += 1
            try:
                cls = classify_above_atom(logic, atom_index, j)
            except TheoremViolation as exc:
                return (
                    CheckResult(False, checked, {"atom": atom_index, "element": j, "reason": str(exc)}),
                    counts,
                )
            rest = logic.elements[cls.remainder_index]
            if cls.base_bits & rest or cls.reconstruct(logic) != logic.elements[j]:
                return (
                    CheckResult(False, checked, {"atom": atom_index, "element": j, "reason": "bad witness"}),
                    counts,
                )
            counts[cls.kind.value] += 1
    return CheckResult(True, checked), counts


def disjoint_atom_union_report(logic: ConcreteLogic) -> dict:
    """Whether every union of pairwise-disjoint atoms lies in the table.

    This converse of atomic coverage is reported, not assumed.
    """
    atoms = logic.atom_bits
    missing = 0
    unions: set[int] = set()

    def rec(start: int, acc: int) -> None:
        nonlocal missing
        unions.add(acc)
        for i in range(start, len(atoms)):
            if acc & atoms[i] == 0:
                rec(i + 1, acc | atoms[i])

    rec(0, 0)
    for u in unions:
        if u not in logic.index:
            missing += 1
    return {
        "holds": missing == 0,
        "distinct_unions": len(unions),
        "missing_from_table": missing,
    }


def is_lattice(logic: ConcreteLogic, *, full_limit: int = 4000) -> Optional[bool]:
    """Whether every pair has a meet and a join.

    A counterexample is first sought among atoms and their complements.
    If none is found the full pair scan runs only for tables up to
    ``full_limit`` elements; beyond that the answer is None (undecided).
    Because complementation is an order anti-isomorphism, scanning meets
    over all pairs also decides all joins.
    """
    candidates = sorted(
        {i for i in logic.atom_indices}
        | {c for i in logic.atom_indices if (c := logic.complement_map[i]) is not None}
    )
    for pos, i in enumerate(candidates):
        for j in candidates[pos:]:
            if logic.meet(i, j) is None or logic.join(i, j) is None:
                return False
    n = len(logic.elements)
    if n > full_limit:
        return None
    if any(c is None for c in logic.complement_map):
        return None
    for i in range(n):
        for j in range(i, n):
            if logic.meet(i, j) is None:
                return False
    return True


def is_boolean(logic: ConcreteLogic, *, size_limit: int = 128) -> Optional[bool]:
    """Lattice plus distributivity over all triples; None when too large to scan."""
    lat = is_lattice(logic)
    if lat is not True:
        return lat
    n = len(logic.elements)
    if n > size_limit:
        return None
    meets = [[logic.meet(i, j) for j in range(n)] for i in range(n)]
    joins = [[logic.join(i, j) for j in range(n)] for i in range(n)]
    for p in range(n):
        for q in range(n):
            for r in range(n):
                if joins[p][meets[q][r]] != meets[joins[p][q]][joins[p][r]]:
                    return False
    return True
