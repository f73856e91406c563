"""Γ-lattices: ℤ-free modules of finite rank with an integral action of a finite group.

Action matrices act on column vectors. Every lattice stores the matrix of
every group element, computed once from the generators and then checked on
all pairs.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import InitVar, dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from flasquekit.algebra.groups import (
    FiniteGroup,
    Subgroup,
    coset_table,
    trivial_subgroup,
)
from flasquekit.algebra.integer_matrix import (
    as_int_matrix,
    int_matmul,
    matrix_from_rows,
    smith_decomposition,
    sparse_columns,
    unimodular_inverse,
)
from flasquekit.algebra.sparse import EchelonLattice, from_dense, hermite_basis, kernel_basis
from flasquekit.utils.errors import ConstructionError, InvalidInputError, TorsionError


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class GammaLattice:
    group: FiniteGroup
    rank: int
    action: tuple[np.ndarray, ...]
    label: str = ""
    check: InitVar[bool] = True

    def __post_init__(self, check: bool) -> None:
        if len(self.action) != self.group.order:
            raise InvalidInputError(
                f"expected {self.group.order} action matrices, got {len(self.action)}"
            )
        for matrix in self.action:
            if matrix.shape != (self.rank, self.rank):
                raise InvalidInputError(f"action matrix has shape {matrix.shape}, expected rank {self.rank}")
            _frozen(matrix)
        if check:
            self.validate()

    def validate(self) -> None:
        """Exhaustive representation check: ρ(e) = I and ρ(gh) = ρ(g)ρ(h) for every pair."""
        group = self.group
        if not np.array_equal(self.action[group.identity], np.eye(self.rank, dtype=np.int64)):
            raise InvalidInputError("identity does not act as the identity matrix")
        for g in group.elements:
            for h in group.elements:
                expected = self.action[group.mul[g][h]]
                if not np.array_equal(int_matmul(self.action[g], self.action[h]), expected):
                    raise InvalidInputError(
                        f"action is not a representation: ρ({g}·{h}) ≠ ρ({g})ρ({h})",
                        details={"pair": [g, h]},
                    )

    def matrix(self, g: int) -> np.ndarray:
        return self.action[g]

    @property
    def generator_matrices(self) -> list[np.ndarray]:
        return [self.action[g] for g in self.group.generator_indices]

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha256(self.group.fingerprint.encode())
        digest.update(str(self.rank).encode())
        for matrix in self.action:
            if matrix.dtype == np.int64:
                digest.update(np.ascontiguousarray(matrix).tobytes())
            else:
                digest.update(repr(matrix.tolist()).encode())
        return digest.hexdigest()

    def same_action(self, other: "GammaLattice") -> bool:
        return (
            self.group == other.group
            and self.rank == other.rank
            and all(np.array_equal(a, b) for a, b in zip(self.action, other.action))
        )

    def __repr__(self) -> str:
        return f"GammaLattice({self.label or 'rank ' + str(self.rank)} over {self.group.label or self.group.order})"

    @classmethod
    def from_generators(
        cls,
        group: FiniteGroup,
        generator_matrices: Sequence,
        label: str = "",
        rank: int | None = None,
    ) -> "GammaLattice":
        """Extend generator matrices to all elements by ρ(x·s) = ρ(x)ρ(s), then validate.

        ``rank`` is only needed when the group has no generators.
        """
        if len(generator_matrices) != len(group.generator_indices):
            raise InvalidInputError(
                f"expected {len(group.generator_indices)} generator matrices, got {len(generator_matrices)}"
            )
        mats = [as_int_matrix(m) for m in generator_matrices]
        if rank is None:
            if not mats:
                raise InvalidInputError("rank is required for a group without generators")
            rank = mats[0].shape[0]
        for m in mats:
            if m.shape != (rank, rank):
                raise InvalidInputError(f"generator matrix has shape {m.shape}, expected ({rank}, {rank})")
        return cls(group, rank, _extend_action(group, mats, rank), label)


def _extend_action(group: FiniteGroup, generator_mats: Sequence[np.ndarray], rank: int) -> tuple[np.ndarray, ...]:
    action: list[np.ndarray | None] = [None] * group.order
    action[group.identity] = np.eye(rank, dtype=np.int64)
    queue = deque([group.identity])
    while queue:
        x = queue.popleft()
        for gen, mat in zip(group.generator_indices, generator_mats):
            y = group.mul[x][gen]
            if action[y] is None:
                action[y] = int_matmul(action[x], mat)
                queue.append(y)
    return tuple(action)  # type: ignore[arg-type]


def trivial_lattice(group: FiniteGroup, rank: int = 1) -> GammaLattice:
    if rank < 0:
        raise InvalidInputError("rank must be non-negative")
    eye = np.eye(rank, dtype=np.int64)
    return GammaLattice(group, rank, tuple(eye.copy() for _ in group.elements), "Z" if rank == 1 else f"Z^{rank}", False)


def permutation_lattice(group: FiniteGroup, subgroup: Subgroup) -> GammaLattice:
    """ℤ[G/H] on the right cosets H·r_j, with σ·e_{Hg} = e_{Hgσ⁻¹}."""
    table = coset_table(group, subgroup)
    n = len(table.reps)
    action = []
    for sigma in group.elements:
        inv = group.inverse[sigma]
        matrix = np.zeros((n, n), dtype=np.int64)
        for j, r in enumerate(table.reps):
            matrix[table.coset_of[group.mul[r][inv]], j] = 1
        action.append(matrix)
    if subgroup.is_trivial:
        label = f"Z[{group.label}]" if group.label else "Z[G]"
    elif subgroup.is_whole:
        label = "Z"
    else:
        label = f"Z[G/H{list(subgroup.elements)}]"
    return GammaLattice(group, n, tuple(action), label, False)


def regular_lattice(group: FiniteGroup) -> GammaLattice:
    return permutation_lattice(group, trivial_subgroup(group))


def dual(lattice: GammaLattice) -> GammaLattice:
    """Hom(M, ℤ) with g acting by ρ(g⁻¹)ᵀ."""
    group = lattice.group
    action = tuple(np.array(lattice.action[group.inverse[g]].T) for g in group.elements)
    label = lattice.label[:-1] if lattice.label.endswith("°") else f"{lattice.label or 'M'}°"
    return GammaLattice(group, lattice.rank, action, label, False)


def restrict(lattice: GammaLattice, subgroup: Subgroup) -> GammaLattice:
    """The same lattice viewed over ``subgroup.as_group``; the whole group gives ``lattice`` back."""
    if subgroup.parent != lattice.group:
        raise InvalidInputError("subgroup does not belong to the lattice's group")
    if subgroup.is_whole:
        return lattice
    action = tuple(np.array(lattice.action[g]) for g in subgroup.elements)
    return GammaLattice(subgroup.as_group, lattice.rank, action, f"{lattice.label}|H", False)


def coinduce(subgroup: Subgroup, lattice: GammaLattice, group: FiniteGroup) -> GammaLattice:
    """CoInd_H^G M = {f: G → M | f(hg) = h·f(g)}, with (σf)(g) = f(gσ).

    Coordinates are (coset j, coordinate of f(r_j)); the block (i, j) of
    σ is ρ(h) where r_i·σ = h·r_j.
    """
    if subgroup.parent != group:
        raise InvalidInputError("subgroup does not belong to the group")
    if lattice.group != subgroup.as_group:
        raise InvalidInputError("lattice must be a lattice over the subgroup")
    table = coset_table(group, subgroup)
    n, r = len(table.reps), lattice.rank
    action = []
    for sigma in group.elements:
        matrix = np.zeros((n * r, n * r), dtype=lattice.action[0].dtype if lattice.action else np.int64)
        for i, rep in enumerate(table.reps):
            x = group.mul[rep][sigma]
            j = table.coset_of[x]
            matrix[i * r:(i + 1) * r, j * r:(j + 1) * r] = lattice.action[table.h_part[x]]
        action.append(matrix)
    return GammaLattice(group, n * r, tuple(action), f"CoInd({lattice.label or 'M'})", False)


def transport(lattice: GammaLattice, target: FiniteGroup, hom: Sequence[int]) -> GammaLattice:
    """Pull the action back along ``hom: target → lattice.group``."""
    if len(hom) != target.order:
        raise InvalidInputError("homomorphism must list an image for every element")
    action = tuple(np.array(lattice.action[hom[g]]) for g in target.elements)
    return GammaLattice(target, lattice.rank, action, lattice.label)


@dataclass(frozen=True, eq=False)
class DirectSum:
    lattice: GammaLattice
    summands: tuple[GammaLattice, ...]
    offsets: tuple[int, ...]

    def block(self, i: int) -> slice:
        return slice(self.offsets[i], self.offsets[i] + self.summands[i].rank)

    def injection(self, i: int) -> "LatticeMap":
        matrix = np.zeros((self.lattice.rank, self.summands[i].rank), dtype=np.int64)
        matrix[self.block(i), :] = np.eye(self.summands[i].rank, dtype=np.int64)
        return LatticeMap(self.summands[i], self.lattice, matrix)

    def projection(self, i: int) -> "LatticeMap":
        matrix = np.zeros((self.summands[i].rank, self.lattice.rank), dtype=np.int64)
        matrix[:, self.block(i)] = np.eye(self.summands[i].rank, dtype=np.int64)
        return LatticeMap(self.lattice, self.summands[i], matrix)


def direct_sum(lattices: Sequence[GammaLattice], label: str | None = None) -> DirectSum:
    if not lattices:
        raise InvalidInputError("direct sum of no lattices")
    group = lattices[0].group
    if any(m.group != group for m in lattices):
        raise InvalidInputError("direct summands must share the group")
    offsets, total = [], 0
    for m in lattices:
        offsets.append(total)
        total += m.rank
    dtype = object if any(m.action[0].dtype == object for m in lattices) else np.int64
    action = []
    for g in group.elements:
        matrix = np.zeros((total, total), dtype=dtype)
        for offset, m in zip(offsets, lattices):
            matrix[offset:offset + m.rank, offset:offset + m.rank] = m.action[g]
        action.append(matrix)
    if label is None:
        label = " + ".join(m.label or "M" for m in lattices)
    return DirectSum(GammaLattice(group, total, tuple(action), label, False), tuple(lattices), tuple(offsets))


@dataclass(frozen=True, eq=False)
class LatticeMap:
    """A Γ-equivariant ℤ-linear map; ``matrix`` is target.rank × source.rank."""

    source: GammaLattice
    target: GammaLattice
    matrix: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check: bool) -> None:
        object.__setattr__(self, "matrix", _frozen(as_int_matrix(self.matrix, (self.target.rank, self.source.rank))))
        if self.source.group != self.target.group:
            raise InvalidInputError("map between lattices over different groups")
        if check:
            for g in self.source.group.generator_indices:
                left = int_matmul(self.matrix, self.source.action[g])
                right = int_matmul(self.target.action[g], self.matrix)
                if not np.array_equal(left, right):
                    raise InvalidInputError(f"map is not equivariant for generator {g}", details={"generator": g})

    def compose(self, after: "LatticeMap") -> "LatticeMap":
        """``after ∘ self``."""
        if after.source is not self.target and not after.source.same_action(self.target):
            raise InvalidInputError("maps are not composable")
        return LatticeMap(self.source, after.target, int_matmul(after.matrix, self.matrix), False)


def identity_map(lattice: GammaLattice) -> LatticeMap:
    return LatticeMap(lattice, lattice, np.eye(lattice.rank, dtype=np.int64), False)


def stack_maps(source: GammaLattice, target: DirectSum, maps: Sequence[LatticeMap]) -> LatticeMap:
    """The map into a direct sum whose components are ``maps``."""
    if len(maps) != len(target.summands):
        raise InvalidInputError("one component map per summand is required")
    blocks = []
    for f, summand in zip(maps, target.summands):
        if f.source is not source and not f.source.same_action(source):
            raise InvalidInputError("component maps must share the source")
        if f.target is not summand and not f.target.same_action(summand):
            raise InvalidInputError("component map target does not match its summand")
        blocks.append(f.matrix.astype(object))
    matrix = np.vstack(blocks) if blocks else np.zeros((0, source.rank), dtype=object)
    return LatticeMap(source, target.lattice, as_int_matrix(matrix, (target.lattice.rank, source.rank)))


def sum_maps(source: DirectSum, target: GammaLattice, maps: Sequence[LatticeMap]) -> LatticeMap:
    """The map out of a direct sum whose restrictions are ``maps``."""
    if len(maps) != len(source.summands):
        raise InvalidInputError("one component map per summand is required")
    blocks = [f.matrix.astype(object) for f in maps]
    matrix = np.hstack(blocks) if blocks else np.zeros((target.rank, 0), dtype=object)
    return LatticeMap(source.lattice, target, as_int_matrix(matrix, (target.rank, source.lattice.rank)))


def augmentation(group: FiniteGroup, subgroup: Subgroup) -> LatticeMap:
    """ε: ℤ[G/H] → ℤ, every coset basis vector to 1."""
    perm = permutation_lattice(group, subgroup)
    return LatticeMap(perm, trivial_lattice(group), np.ones((1, perm.rank), dtype=np.int64))


def diagonal_map(group: FiniteGroup, subgroups: Sequence[Subgroup]) -> LatticeMap:
    """Δ: ℤ → ⊕ ℤ[G/H_i], 1 to the sum of all coset basis vectors."""
    target = direct_sum([permutation_lattice(group, h) for h in subgroups])
    return LatticeMap(trivial_lattice(group), target.lattice, np.ones((target.lattice.rank, 1), dtype=np.int64))


def norm_map(group: FiniteGroup) -> LatticeMap:
    """ℤ → ℤ[G], 1 to Σ_g g."""
    regular = regular_lattice(group)
    return LatticeMap(trivial_lattice(group), regular, np.ones((regular.rank, 1), dtype=np.int64))


def scalar_map(group: FiniteGroup, k: int) -> LatticeMap:
    z = trivial_lattice(group)
    return LatticeMap(z, z, np.array([[k]], dtype=np.int64), False)


def image_basis(f: LatticeMap) -> np.ndarray:
    """Hermite basis of the image, as rows."""
    rows = hermite_basis(sparse_columns(f.matrix))
    return matrix_from_rows(rows, f.target.rank)


def _induced_action(lattice: GammaLattice, basis: EchelonLattice, width: int) -> tuple[np.ndarray, ...]:
    """Action on a Γ-stable sublattice in the coordinates of ``basis.rows()``."""
    rows = basis.rows()
    k = len(rows)
    basis_matrix = matrix_from_rows(rows, width).T  # width × k, columns are basis vectors
    action = []
    for g in lattice.group.elements:
        image = int_matmul(lattice.action[g], basis_matrix)
        columns = []
        for j in range(k):
            coords = basis.express(from_dense(image[:, j].tolist()))
            if coords is None:
                raise ConstructionError(f"sublattice is not stable under element {g}")
            columns.append(coords)
        action.append(as_int_matrix(np.array(columns, dtype=object).T if k else np.zeros((0, 0)), (k, k)))
    return tuple(action)


def kernel(f: LatticeMap) -> tuple[GammaLattice, LatticeMap]:
    """ker f with its Hermite basis, plus the inclusion (always a pure sublattice)."""
    vectors = kernel_basis(sparse_columns(f.matrix))
    basis = EchelonLattice()
    for v in vectors:
        basis.insert(v)
    basis.hermite()
    width = f.source.rank
    action = _induced_action(f.source, basis, width)
    label = f"ker({f.source.label or 'M'})"
    ker = GammaLattice(f.source.group, len(basis), action, label)
    inclusion = LatticeMap(ker, f.source, matrix_from_rows(basis.rows(), width).T)
    return ker, inclusion


def cokernel_torsion_free(f: LatticeMap) -> tuple[GammaLattice, LatticeMap]:
    """coker f when f is injective with torsion-free cokernel, with the projection."""
    t, s = f.matrix.shape
    snf = smith_decomposition(f.matrix)
    if snf.rank < s:
        raise TorsionError(
            f"map is not injective (rank {snf.rank} < {s})",
            details={"rank": snf.rank, "source_rank": s},
        )
    bad = [d for d in snf.diagonal if d != 1]
    if bad:
        raise TorsionError(
            f"cokernel has torsion: elementary divisor {bad[0]}",
            details={"divisor": bad[0], "divisors": list(snf.diagonal)},
        )
    left = snf.left
    left_inv = unimodular_inverse(left)
    projection = left[s:, :]
    section = left_inv[:, s:]
    action = tuple(
        int_matmul(int_matmul(projection, f.target.action[g]), section) for g in f.target.group.elements
    )
    coker = GammaLattice(f.target.group, t - s, action, f"coker({f.source.label or 'M'})")
    return coker, LatticeMap(f.target, coker, projection)


def esempio_phi(group: FiniteGroup) -> LatticeMap:
    """φ: ℤ[Λ]² → ℤ[Λ], (n¹, n²) ↦ n¹·(λ₁ − 1) + n²·(λ₂ − 1) for the first two generators."""
    if len(group.generator_indices) < 2:
        raise InvalidInputError("the map needs a group with at least two generators")
    if not group.is_abelian:
        raise InvalidInputError("the map is equivariant only over an abelian group")
    regular = regular_lattice(group)
    table = coset_table(group, trivial_subgroup(group))
    n = regular.rank
    matrix = np.zeros((n, 2 * n), dtype=np.int64)
    for block, gen in enumerate(group.generator_indices[:2]):
        for j, r in enumerate(table.reps):
            matrix[table.coset_of[group.mul[r][gen]], block * n + j] += 1
            matrix[j, block * n + j] -= 1
    source = direct_sum([regular, regular], label=f"{regular.label}^2")
    return LatticeMap(source.lattice, regular, matrix)


__all__ = [
    "DirectSum",
    "GammaLattice",
    "LatticeMap",
    "augmentation",
    "cokernel_torsion_free",
    "coinduce",
    "diagonal_map",
    "direct_sum",
    "dual",
    "esempio_phi",
    "identity_map",
    "image_basis",
    "kernel",
    "norm_map",
    "permutation_lattice",
    "regular_lattice",
    "restrict",
    "scalar_map",
    "stack_maps",
    "sum_maps",
    "transport",
    "trivial_lattice",
]
