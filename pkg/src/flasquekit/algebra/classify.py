"""Flasque / coflasque verdicts and permutation bases."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from flasquekit.algebra.cohomology import cohomology
from flasquekit.algebra.groups import Subgroup, all_subgroups, coset_table
from flasquekit.algebra.integer_matrix import as_int_matrix, determinant, elementary_divisors, int_matmul
from flasquekit.algebra.lattice import (
    DirectSum,
    GammaLattice,
    LatticeMap,
    direct_sum,
    dual,
    kernel,
    permutation_lattice,
    restrict,
)
from flasquekit.algebra.sparse import EchelonLattice, from_dense
from flasquekit.config.settings import FlasqueKitConfig
from flasquekit.execution.pool import SweepPool
from flasquekit.utils.errors import ConstructionError, InvalidInputError


@dataclass(frozen=True)
class Witness:
    subgroup: tuple[int, ...]
    order: int
    invariant_factors: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "subgroup": list(self.subgroup),
            "order": self.order,
            "invariant_factors": list(self.invariant_factors),
        }


@dataclass(frozen=True)
class Verdict:
    property: str
    holds: bool
    witnesses: tuple[Witness, ...] = ()
    checked: int = 0

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "holds": self.holds,
            "checked_subgroups": self.checked,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def _h1_on(lattice: GammaLattice, subgroup: Subgroup) -> Witness:
    local = restrict(lattice, subgroup)
    h1 = cohomology(local.group, local, 1)
    return Witness(subgroup.elements, subgroup.order, h1.invariant_factors)


def is_coflasque(lattice: GammaLattice, pool: SweepPool | None = None, *, name: str = "coflasque") -> Verdict:
    """H¹(Λ, M) = 0 for every subgroup Λ.

    Subgroups are swept from the largest down and the sweep stops at the
    first failure; the subgroups below it are then scanned from the smallest
    up, so the witnesses always include a smallest failing subgroup.
    """
    subgroups = all_subgroups(lattice.group)
    descending = sorted(subgroups, key=lambda h: (-h.order, h.elements))
    sweep = pool or SweepPool(1)

    def failed(w: Witness) -> bool:
        return bool(w.invariant_factors)

    results, stop = sweep.scan_until(lambda h: _h1_on(lattice, h), descending, failed)
    if stop is None:
        return Verdict(name, True, (), len(results))
    first = results[stop]
    remaining = sorted(descending[stop + 1:], key=lambda h: (h.order, h.elements))
    smaller, low = sweep.scan_until(lambda h: _h1_on(lattice, h), remaining, failed)
    witnesses = (first,) if low is None else (first, smaller[low])
    return Verdict(name, False, witnesses, len(results) + len(smaller))


def is_flasque(lattice: GammaLattice, pool: SweepPool | None = None) -> Verdict:
    """Ĥ⁻¹(Λ, M) = 0 for every Λ, tested as H¹(Λ, M°) = 0."""
    return is_coflasque(dual(lattice), pool, name="flasque")


def certify_permutation(lattice: GammaLattice, basis) -> bool:
    """True when every group element permutes the columns of ``basis``.

    ``basis`` must be a ℤ-basis of the lattice; a non-unimodular matrix is
    rejected rather than answered.
    """
    b = as_int_matrix(basis)
    if b.shape != (lattice.rank, lattice.rank):
        raise InvalidInputError(f"basis has shape {b.shape}, expected a square matrix of size {lattice.rank}")
    det = determinant(b)
    if abs(det) != 1:
        raise InvalidInputError(f"basis is not unimodular (determinant {det})", details={"determinant": int(det)})
    # unimodular, so the columns are distinct
    columns = {tuple(int(x) for x in b[:, j]) for j in range(lattice.rank)}
    for g in lattice.group.elements:
        image = int_matmul(lattice.action[g], b)
        for j in range(lattice.rank):
            if tuple(int(x) for x in image[:, j]) not in columns:
                return False
    return True


def _short_vectors(rank: int) -> Iterator[tuple[int, ...]]:
    """Vectors with entries in {-1, 0, 1}, by support size, then positions, then signs."""
    for support in range(1, rank + 1):
        for positions in itertools.combinations(range(rank), support):
            for signs in itertools.product((1, -1), repeat=support):
                v = [0] * rank
                for p, s in zip(positions, signs):
                    v[p] = s
                yield tuple(v)


def _orbit(lattice: GammaLattice, v: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    column = np.array(v, dtype=np.int64).reshape(-1, 1)
    seen: dict[tuple[int, ...], None] = {}
    for g in lattice.group.elements:
        image = int_matmul(lattice.action[g], column)
        seen.setdefault(tuple(int(x) for x in image[:, 0]), None)
    return tuple(seen)


def search_permutation_basis(
    lattice: GammaLattice,
    effort: int | None = None,
    pool: SweepPool | None = None,
) -> np.ndarray | None:
    """Look for a permuted ℤ-basis among orbits of short vectors.

    ``None`` means nothing was found within the effort bound; it never
    means "not a permutation lattice" by itself.
    """
    if lattice.rank == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if not is_coflasque(lattice, pool).holds or not is_flasque(lattice, pool).holds:
        return None
    budget = effort if effort is not None else FlasqueKitConfig.current().permutation_search_effort
    orbits: list[tuple[tuple[int, ...], ...]] = []
    seen: set[tuple[int, ...]] = set()
    for count, v in enumerate(_short_vectors(lattice.rank)):
        if count >= budget:
            break
        if v in seen:
            continue
        orbit = _orbit(lattice, v)
        seen.update(orbit)
        if len(orbit) <= lattice.rank:
            orbits.append(orbit)

    nodes = 0

    def extend(chosen: list[tuple[int, ...]], echelon: EchelonLattice, start: int) -> list[tuple[int, ...]] | None:
        nonlocal nodes
        if len(chosen) == lattice.rank:
            index = 1
            for row in echelon.rows():
                index *= abs(row[min(row)])
            return list(chosen) if index == 1 else None
        for i in range(start, len(orbits)):
            nodes += 1
            if nodes > budget:
                return None
            orbit = orbits[i]
            if len(chosen) + len(orbit) > lattice.rank:
                continue
            trial = EchelonLattice()
            for row in echelon.rows():
                trial.insert(row)
            if any(trial.insert(from_dense(v)) is not None for v in orbit):
                continue
            found = extend(chosen + list(orbit), trial, i + 1)
            if found is not None:
                return found
        return None

    found = extend([], EchelonLattice(), 0)
    if found is None:
        return None
    found.sort(key=lambda v: tuple(-x for x in v))
    basis = as_int_matrix([list(col) for col in zip(*found)], (lattice.rank, lattice.rank))
    if not certify_permutation(lattice, basis):
        raise ConstructionError("permutation basis search produced an uncertified basis")
    return basis


@dataclass(frozen=True, eq=False)
class CoflasqueCover:
    """0 → Q → P → M → 0 with P a permutation lattice and Q coflasque."""

    permutation: DirectSum
    kernel: GammaLattice
    surjection: LatticeMap
    inclusion: LatticeMap
    pieces: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = field(default=())
    verdict: Verdict | None = None


def coflasque_cover(lattice: GammaLattice, pool: SweepPool | None = None) -> CoflasqueCover:
    """Cover M by ⊕_{Λ, m} ℤ[Γ/Λ], one summand per subgroup Λ and basis vector m of M^Λ.

    ``e_{Λ r}`` goes to r⁻¹·m. Every class of H⁰(Λ, M) then lifts, which
    forces H¹(Λ, Q) = 0 for the kernel Q.
    """
    group = lattice.group
    summands: list[GammaLattice] = []
    blocks: list[np.ndarray] = []
    pieces: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for subgroup in all_subgroups(group):
        local = restrict(lattice, subgroup)
        fixed = cohomology(local.group, local, 0).generators
        if not fixed:
            continue
        perm = permutation_lattice(group, subgroup)
        reps = coset_table(group, subgroup).reps
        for m in fixed:
            vector = np.array([[m.get(i, 0)] for i in range(lattice.rank)], dtype=np.int64)
            block = np.hstack([int_matmul(lattice.action[group.inverse[r]], vector) for r in reps])
            summands.append(perm)
            blocks.append(block.astype(object))
            pieces.append((subgroup.elements, tuple(int(x) for x in vector[:, 0])))
    if not summands:
        raise ConstructionError("lattice has no fixed vectors at all; cannot build a cover")
    total = direct_sum(summands)
    matrix = as_int_matrix(np.hstack(blocks), (lattice.rank, total.lattice.rank))
    surjection = LatticeMap(total.lattice, lattice, matrix)
    divisors = elementary_divisors(matrix)
    if len(divisors) != lattice.rank or any(d != 1 for d in divisors):
        raise ConstructionError("cover map is not surjective", details={"divisors": list(divisors)})
    q, inclusion = kernel(surjection)
    verdict = is_coflasque(q, pool)
    if not verdict.holds:
        raise ConstructionError("kernel of the permutation cover is not coflasque")
    return CoflasqueCover(total, q, surjection, inclusion, tuple(pieces), verdict)


__all__ = [
    "CoflasqueCover",
    "Verdict",
    "Witness",
    "certify_permutation",
    "coflasque_cover",
    "is_coflasque",
    "is_flasque",
    "search_permutation_basis",
]
