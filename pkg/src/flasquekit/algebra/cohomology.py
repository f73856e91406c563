"""Exact group cohomology Hⁿ(G, M) from the normalized bar resolution.

Cochains in degree n are functions on n-tuples of non-identity elements,
flattened as ``tuple_index * rank + coordinate``; tuples are enumerated in
lexicographic order of their element indices.

For n ≥ 1, Hⁿ(G, M) is killed by e = |G|: the transfer cochain c(x) of a
cocycle x satisfies e·x = d c(x). Hⁿ is therefore read off one degree down,
as {y : d y ≡ 0 mod e} modulo the reduced (n-1)-cocycles, with all
arithmetic mod e. Only dⁿ⁻¹ and dⁿ⁻² are assembled as matrices; dⁿ is
applied directly to check cocycles.
"""

from __future__ import annotations

import itertools
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Mapping, Sequence

import numpy as np

from flasquekit.algebra.groups import FiniteGroup, Subgroup, all_subgroups
from flasquekit.algebra.integer_matrix import as_int_matrix, smith_decomposition, unimodular_inverse
from flasquekit.algebra.lattice import DirectSum, GammaLattice, restrict
from flasquekit.algebra.sparse import (
    EchelonLattice,
    HowellLattice,
    SparseVector,
    add_scaled,
    clean,
    kernel_basis,
    kernel_mod,
    reduce_mod,
    scale,
)
from flasquekit.config.settings import FlasqueKitConfig
from flasquekit.execution.pool import SweepPool, run_sweep
from flasquekit.utils.errors import (
    ConstructionError,
    InvalidInputError,
    NotFoundError,
    ResourceLimitError,
)


@dataclass(frozen=True)
class CochainIndexer:
    """Enumeration of normalized n-tuples for one group."""

    group: FiniteGroup
    degree: int
    rank: int
    nonidentity: tuple[int, ...] = field(init=False)
    position: dict[int, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        nonidentity = tuple(g for g in self.group.elements if g != self.group.identity)
        object.__setattr__(self, "nonidentity", nonidentity)
        object.__setattr__(self, "position", {g: i for i, g in enumerate(nonidentity)})

    @property
    def count(self) -> int:
        return len(self.nonidentity) ** self.degree

    @property
    def dimension(self) -> int:
        return self.count * self.rank

    def tuples(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(self.nonidentity, repeat=self.degree)

    def index_of(self, elements: Sequence[int]) -> int | None:
        """Tuple index, or ``None`` when a slot holds the identity (normalized cochains vanish there)."""
        base = len(self.nonidentity)
        idx = 0
        for g in elements:
            pos = self.position.get(g)
            if pos is None:
                return None
            idx = idx * base + pos
        return idx

    def tuple_at(self, idx: int) -> tuple[int, ...]:
        base = len(self.nonidentity)
        out = []
        for _ in range(self.degree):
            idx, pos = divmod(idx, base)
            out.append(self.nonidentity[pos])
        return tuple(reversed(out))


def _action_entries(lattice: GammaLattice) -> list[list[tuple[int, int, int]]]:
    """Per element, the nonzero entries ``(row, col, value)`` of its action matrix."""
    entries = []
    for matrix in lattice.action:
        rows, cols = np.nonzero(matrix)
        entries.append([(int(i), int(j), int(matrix[i, j])) for i, j in zip(rows, cols)])
    return entries


def estimate_boundary_nonzeros(lattice: GammaLattice, n: int) -> int:
    """Upper bound on the nonzero entries of dⁿ: Cⁿ → Cⁿ⁺¹."""
    target = CochainIndexer(lattice.group, n + 1, lattice.rank)
    if target.count == 0:
        return 0
    nonzeros = sum(int(np.count_nonzero(m)) for m in lattice.action)
    per_tuple = nonzeros // max(1, lattice.group.order) + (n + 1) * lattice.rank
    return target.count * per_tuple


def _check_budget(lattice: GammaLattice, n: int, budget: int | None) -> None:
    limit = budget if budget is not None else FlasqueKitConfig.current().nonzero_budget
    estimate = estimate_boundary_nonzeros(lattice, n)
    if estimate > limit:
        raise ResourceLimitError(
            f"boundary d^{n} needs about {estimate} nonzero entries, over the budget of {limit}",
            details={"degree": n, "estimate": estimate, "budget": limit},
        )


def boundary_columns(lattice: GammaLattice, n: int, budget: int | None = None) -> list[SparseVector]:
    """Columns of dⁿ: Cⁿ → Cⁿ⁺¹ as sparse vectors.

    (dⁿf)(g₁..gₙ₊₁) = g₁·f(g₂..) + Σ (-1)^k f(..g_k g_{k+1}..) + (-1)^{n+1} f(g₁..gₙ)
    """
    if n < 0:
        raise InvalidInputError(f"cochain degree must be non-negative, got {n}")
    _check_budget(lattice, n, budget)
    group, rank = lattice.group, lattice.rank
    source = CochainIndexer(group, n, rank)
    target = CochainIndexer(group, n + 1, rank)
    entries = _action_entries(lattice)
    columns: list[SparseVector] = [{} for _ in range(source.dimension)]

    def bump(column: int, row: int, value: int) -> None:
        col = columns[column]
        updated = col.get(row, 0) + value
        if updated:
            col[row] = updated
        else:
            col.pop(row, None)

    for out_idx, gs in enumerate(target.tuples()):
        base = out_idx * rank
        first = source.index_of(gs[1:])
        for i, j, value in entries[gs[0]]:
            bump(first * rank + j, base + i, value)
        for k in range(1, n + 1):
            merged = gs[:k - 1] + (group.mul[gs[k - 1]][gs[k]],) + gs[k + 1:]
            idx = source.index_of(merged)
            if idx is None:
                continue
            sign = -1 if k % 2 else 1
            for c in range(rank):
                bump(idx * rank + c, base + c, sign)
        last = source.index_of(gs[:n])
        sign = -1 if (n + 1) % 2 else 1
        for c in range(rank):
            bump(last * rank + c, base + c, sign)
    return columns


def apply_boundary(lattice: GammaLattice, n: int, cochain: Mapping[int, int]) -> SparseVector:
    """dⁿ applied to one cochain, without assembling the matrix."""
    group, rank = lattice.group, lattice.rank
    source = CochainIndexer(group, n, rank)
    target = CochainIndexer(group, n + 1, rank)
    values = np.zeros((max(source.count, 1), rank), dtype=object)
    for key, value in cochain.items():
        if not 0 <= key < source.dimension:
            raise InvalidInputError(f"cochain coordinate {key} out of range for degree {n}")
        values[divmod(key, rank)] = value
    out: SparseVector = {}
    action = [m.astype(object) for m in lattice.action]
    for out_idx, gs in enumerate(target.tuples()):
        total = action[gs[0]].dot(values[source.index_of(gs[1:])])
        for k in range(1, n + 1):
            merged = gs[:k - 1] + (group.mul[gs[k - 1]][gs[k]],) + gs[k + 1:]
            idx = source.index_of(merged)
            if idx is not None:
                total = total + (values[idx] if k % 2 == 0 else -values[idx])
        last = values[source.index_of(gs[:n])]
        total = total + (last if (n + 1) % 2 == 0 else -last)
        for c in range(rank):
            if total[c]:
                out[out_idx * rank + c] = int(total[c])
    return out


@dataclass(frozen=True, eq=False)
class CochainComplexSlice:
    """Cⁿ⁻¹ → Cⁿ → Cⁿ⁺¹ for one lattice, with both boundaries assembled."""

    lattice: GammaLattice
    degree: int
    incoming: list[SparseVector]
    outgoing: list[SparseVector]

    def composes_to_zero(self) -> bool:
        for column in self.incoming:
            image: SparseVector = {}
            for key, value in column.items():
                add_scaled(image, value, self.outgoing[key])
            if image:
                return False
        return True


def cochain_slice(group: FiniteGroup, lattice: GammaLattice, n: int, budget: int | None = None) -> CochainComplexSlice:
    _check_group(group, lattice)
    if n < 1:
        raise InvalidInputError("a slice needs an incoming boundary, so n ≥ 1")
    return CochainComplexSlice(lattice, n, boundary_columns(lattice, n - 1, budget), boundary_columns(lattice, n, budget))


def _check_group(group: FiniteGroup, lattice: GammaLattice) -> None:
    if group != lattice.group:
        raise InvalidInputError("lattice is not a lattice over this group")


def transfer_cochain(lattice: GammaLattice, n: int, cocycle: Mapping[int, int]) -> SparseVector:
    """c(x)(g₁..gₙ₋₁) = (-1)ⁿ Σ_g x(g₁..gₙ₋₁, g); for an n-cocycle x, |G|·x = dⁿ⁻¹ c(x)."""
    if n < 1:
        raise InvalidInputError(f"transfer needs degree n ≥ 1, got {n}")
    rank = lattice.rank
    base = lattice.group.order - 1
    sign = -1 if n % 2 else 1
    out: SparseVector = {}
    for key, value in cocycle.items():
        tuple_idx, coordinate = divmod(key, rank)
        # the last slot is the least significant digit of the tuple index
        target = (tuple_idx // base) * rank + coordinate
        out[target] = out.get(target, 0) + sign * value
    return clean(out)


class _TorsionQuotient:
    """Hⁿ(G, M) for n ≥ 1 as Y / Z̄ inside Cⁿ⁻¹ mod e = |G|.

    Y = {y : dⁿ⁻¹y ≡ 0 mod e} and Z̄ is ker dⁿ⁻¹ reduced mod e. A cocycle x
    maps to its transfer cochain; y ∈ Y maps back to the cocycle dⁿ⁻¹(y)/e.
    Only kernel generators that enlarge Z̄ get tags, so the relation matrix
    for the Smith decomposition has at most log₂|Hⁿ| columns.
    """

    def __init__(
        self,
        lattice: GammaLattice,
        degree: int,
        exponent: int,
        cocycles: Sequence[Mapping[int, int]],
        kernel: Sequence[Mapping[int, int]],
    ) -> None:
        self.lattice = lattice
        self.degree = degree
        self.exponent = exponent
        span = HowellLattice(exponent)
        for z in cocycles:
            span.insert(z)
        self.kept: list[SparseVector] = []
        for y in kernel:
            remainder, _ = span.reduce(y)
            if remainder:
                span.insert(remainder)
                self.kept.append(reduce_mod(y, exponent))
        self.tagged = HowellLattice(exponent, track=True)
        for z in cocycles:
            self.tagged.insert(z)
        relations: list[SparseVector] = []
        for i, y in enumerate(self.kept):
            relations.extend(self.tagged.insert(y, {i: 1}))
        s = len(self.kept)
        self.diagonal: tuple[int, ...] = ()
        self.right = np.zeros((0, 0), dtype=np.int64)
        self.right_inverse = np.zeros((0, 0), dtype=np.int64)
        if s:
            rows = [[r.get(j, 0) for j in range(s)] for r in relations]
            rows.extend([exponent if i == j else 0 for j in range(s)] for i in range(s))
            snf = smith_decomposition(as_int_matrix(rows, (len(rows), s)))
            self.diagonal = snf.diagonal[:s]
            self.right = snf.right
            self.right_inverse = unimodular_inverse(snf.right)
        self.nontrivial = [i for i, d in enumerate(self.diagonal) if d != 1]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(self.diagonal[i] for i in self.nontrivial)

    def coordinates(self, cocycle: Mapping[int, int]) -> tuple[int, ...]:
        y = transfer_cochain(self.lattice, self.degree, cocycle)
        remainder, combo = self.tagged.reduce(y)
        if remainder:
            raise ConstructionError("transfer of a cocycle is not a cocycle mod |G|")
        coords = []
        for i in self.nontrivial:
            total = sum(c * int(self.right[j, i]) for j, c in combo.items())
            coords.append(total % self.diagonal[i])
        return tuple(coords)

    def generator(self, position: int) -> SparseVector:
        """A cocycle representing the ``position``-th cyclic generator."""
        e = self.exponent
        row = self.right_inverse[self.nontrivial[position]]
        y: SparseVector = {}
        for coefficient, kept in zip(row.tolist(), self.kept):
            add_scaled(y, int(coefficient), kept)
        image = apply_boundary(self.lattice, self.degree - 1, reduce_mod(y, e))
        if any(value % e for value in image.values()):
            raise ConstructionError("generator lift is not divisible by |G|")
        return {key: value // e for key, value in image.items()}


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    group: FiniteGroup
    lattice: GammaLattice
    degree: int
    invariant_factors: tuple[int, ...]
    generators: tuple[SparseVector, ...]
    _solver: _TorsionQuotient | None = field(default=None, repr=False)
    _invariants: EchelonLattice | None = field(default=None, repr=False)

    @property
    def is_zero(self) -> bool:
        return not self.invariant_factors

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d)

    @property
    def exponent(self) -> int:
        """Least common multiple of the torsion factors; 0 when there is a free part."""
        if self.free_rank:
            return 0
        result = 1
        for d in self.invariant_factors:
            result = result * d // gcd(result, d)
        return result

    def zero(self) -> "CohomologyClass":
        return CohomologyClass(self, tuple(0 for _ in self.invariant_factors), {})

    def coordinates_of(self, cocycle: Mapping[int, int]) -> tuple[int, ...]:
        if self.degree == 0:
            assert self._invariants is not None
            coords = self._invariants.express(cocycle)
            if coords is None:
                raise InvalidInputError("vector is not fixed by the group")
            return tuple(coords)
        assert self._solver is not None
        return self._solver.coordinates(cocycle)

    def __repr__(self) -> str:
        return f"H^{self.degree}({self.group.label or self.group.order}, {self.lattice.label or 'M'}) = {describe_factors(self.invariant_factors)}"


def describe_factors(factors: Sequence[int]) -> str:
    if not factors:
        return "0"
    return " + ".join("Z" if d == 0 else f"Z/{d}" for d in factors)


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    parent: CohomologyGroup
    coordinates: tuple[int, ...]
    representative: SparseVector

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        if other.parent is not self.parent:
            raise InvalidInputError("classes live in different cohomology groups")
        rep = dict(self.representative)
        add_scaled(rep, 1, other.representative)
        return CohomologyClass(self.parent, _reduce(self.parent, [a + b for a, b in zip(self.coordinates, other.coordinates)]), rep)

    def __neg__(self) -> "CohomologyClass":
        return self.scaled(-1)

    def scaled(self, k: int) -> "CohomologyClass":
        return CohomologyClass(self.parent, _reduce(self.parent, [k * c for c in self.coordinates]), scale(self.representative, k))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return self.parent is other.parent and self.coordinates == other.coordinates

    def __hash__(self) -> int:
        return hash((id(self.parent), self.coordinates))

    def __repr__(self) -> str:
        return f"CohomologyClass({list(self.coordinates)} in {self.parent!r})"


def _reduce(parent: CohomologyGroup, coords: Sequence[int]) -> tuple[int, ...]:
    return tuple(c % d if d else c for c, d in zip(coords, parent.invariant_factors))


_CACHE_LIMIT = 256
_CACHE: OrderedDict[tuple[str, int], CohomologyGroup] = OrderedDict()
_CACHE_LOCK = threading.Lock()


def clear_cache() -> None:
    with _CACHE_LOCK:
        _CACHE.clear()


def cohomology(group: FiniteGroup, lattice: GammaLattice, n: int, budget: int | None = None) -> CohomologyGroup:
    """Hⁿ(G, M) with invariant factors and one representing cocycle per cyclic factor."""
    _check_group(group, lattice)
    if n < 0:
        raise InvalidInputError(f"cohomology degree must be non-negative, got {n}")
    key = (lattice.fingerprint, n)
    with _CACHE_LOCK:
        cached = _CACHE.get(key)
        if cached is not None:
            _CACHE.move_to_end(key)
            return cached
    result = _compute(group, lattice, n, budget)
    with _CACHE_LOCK:
        result = _CACHE.setdefault(key, result)
        _CACHE.move_to_end(key)
        while len(_CACHE) > _CACHE_LIMIT:
            _CACHE.popitem(last=False)
        return result


def cache_size() -> int:
    with _CACHE_LOCK:
        return len(_CACHE)


def _compute(group: FiniteGroup, lattice: GammaLattice, n: int, budget: int | None) -> CohomologyGroup:
    columns = boundary_columns(lattice, n - 1 if n else 0, budget)
    if n == 0:
        # H⁰ = M^G, the kernel of d⁰ on C⁰ = M.
        invariants = EchelonLattice()
        for v in kernel_basis(columns):
            invariants.insert(v)
        invariants.hermite()
        basis = tuple(invariants.rows())
        return CohomologyGroup(group, lattice, 0, tuple(0 for _ in basis), basis, None, invariants)
    if n == 1:
        cocycles = kernel_basis(columns)
    else:
        # ker dⁿ⁻¹ = im dⁿ⁻² + the cocycles representing Hⁿ⁻¹
        lower = cohomology(group, lattice, n - 1, budget)
        cocycles = [c for c in boundary_columns(lattice, n - 2, budget) if c] + list(lower.generators)
    solver = _TorsionQuotient(lattice, n, group.order, cocycles, kernel_mod(columns, group.order))
    generators = tuple(solver.generator(i) for i in range(len(solver.nontrivial)))
    return CohomologyGroup(group, lattice, n, solver.invariant_factors, generators, solver)


def class_of(group: FiniteGroup, lattice: GammaLattice, n: int, cocycle: Mapping[int, int]) -> CohomologyClass:
    """Class of an n-cocycle; rejects non-cocycles naming the first failing boundary entry."""
    h = cohomology(group, lattice, n)
    cocycle = clean(cocycle)
    if n > 0:
        dimension = CochainIndexer(group, n, lattice.rank).dimension
        if any(not 0 <= key < dimension for key in cocycle):
            raise InvalidInputError(f"cochain has coordinates outside C^{n} (dimension {dimension})")
    boundary = apply_boundary(lattice, n, cocycle)
    if boundary:
        key = min(boundary)
        indexer = CochainIndexer(group, n + 1, lattice.rank)
        tuple_idx, coordinate = divmod(key, lattice.rank)
        raise InvalidInputError(
            f"not a cocycle: (d x)({', '.join(map(str, indexer.tuple_at(tuple_idx)))})[{coordinate}] = {boundary[key]}",
            details={"tuple": list(indexer.tuple_at(tuple_idx)), "coordinate": coordinate, "value": boundary[key]},
        )
    return CohomologyClass(h, h.coordinates_of(cocycle), cocycle)


def from_coordinates(h: CohomologyGroup, coordinates: Sequence[int]) -> CohomologyClass:
    if len(coordinates) != len(h.invariant_factors):
        raise InvalidInputError(f"expected {len(h.invariant_factors)} coordinates, got {len(coordinates)}")
    representative: SparseVector = {}
    for c, generator in zip(coordinates, h.generators):
        add_scaled(representative, int(c), generator)
    return CohomologyClass(h, _reduce(h, coordinates), representative)


def is_coboundary(group: FiniteGroup, lattice: GammaLattice, n: int, cocycle: Mapping[int, int]) -> bool:
    return class_of(group, lattice, n, cocycle).is_zero


def order_of(cls: CohomologyClass) -> int:
    """Order of a class; 0 stands for infinite order."""
    result = 1
    for c, d in zip(cls.coordinates, cls.parent.invariant_factors):
        if d == 0:
            if c:
                return 0
            continue
        part = d // gcd(c, d)
        result = result * part // gcd(result, part)
    return result


def enumerate_classes(h: CohomologyGroup, limit: int | None = None) -> Iterator[CohomologyClass]:
    """Every class of a finite cohomology group in lexicographic coordinate order."""
    if h.free_rank:
        raise InvalidInputError("cannot enumerate a cohomology group with a free part")
    bound = limit if limit is not None else FlasqueKitConfig.current().enumeration_limit
    size = 1
    for d in h.invariant_factors:
        size *= d
    if size > bound:
        raise ResourceLimitError(
            f"cohomology group has {size} elements, over the enumeration limit {bound}",
            details={"size": size, "limit": bound},
        )
    for coords in itertools.product(*(range(d) for d in h.invariant_factors)):
        yield from_coordinates(h, coords)


def element_of_order(h: CohomologyGroup, m: int) -> CohomologyClass:
    """First class of exact order m, scanning torsion coordinates lexicographically."""
    if m < 1:
        raise InvalidInputError(f"order must be positive, got {m}")
    torsion_positions = [i for i, d in enumerate(h.invariant_factors) if d]
    ranges = [range(h.invariant_factors[i]) for i in torsion_positions]
    for values in itertools.product(*ranges):
        coords = [0] * len(h.invariant_factors)
        for i, value in zip(torsion_positions, values):
            coords[i] = value
        candidate = from_coordinates(h, coords)
        if order_of(candidate) == m:
            return candidate
    raise NotFoundError(f"no class of order {m} in {describe_factors(h.invariant_factors)}", details={"order": m})


def restriction(cls: CohomologyClass, subgroup: Subgroup) -> CohomologyClass:
    """res_H of a class, computed on the representative cocycle."""
    parent = cls.parent
    group, lattice, n = parent.group, parent.lattice, parent.degree
    if subgroup.parent != group:
        raise InvalidInputError("subgroup does not belong to the class's group")
    restricted = restrict(lattice, subgroup)
    local_group = restricted.group
    if subgroup.is_whole:
        return cls
    rank = lattice.rank
    source = CochainIndexer(group, n, rank)
    target = CochainIndexer(local_group, n, rank)
    vector: SparseVector = {}
    for local_idx, local_tuple in enumerate(target.tuples()):
        parent_idx = source.index_of(tuple(subgroup.elements[g] for g in local_tuple))
        for c in range(rank):
            value = cls.representative.get(parent_idx * rank + c)
            if value:
                vector[local_idx * rank + c] = value
    return class_of(local_group, restricted, n, vector)


@dataclass(frozen=True)
class SplittingIndex:
    """Indices of the subgroups on which a class vanishes."""

    gcd_index: int
    min_index: int
    vanishing: tuple[Subgroup, ...]
    checked: int

    def to_dict(self) -> dict:
        return {
            "gcd_index": self.gcd_index,
            "min_index": self.min_index,
            "vanishing_subgroups": [list(h.elements) for h in self.vanishing],
            "vanishing_indices": sorted({h.parent.order // h.order for h in self.vanishing}),
            "checked": self.checked,
        }


def splitting_index(
    group: FiniteGroup,
    lattice: GammaLattice,
    cls: CohomologyClass,
    pool: SweepPool | None = None,
) -> SplittingIndex:
    """gcd and minimum of [G : H] over subgroups H with res_H(cls) = 0, for a degree-1 class."""
    _check_group(group, lattice)
    if cls.parent.degree != 1:
        raise InvalidInputError(f"splitting index needs a degree-1 class, got degree {cls.parent.degree}")
    if cls.parent.lattice is not lattice and not cls.parent.lattice.same_action(lattice):
        raise InvalidInputError("class does not belong to this lattice")
    subgroups = all_subgroups(group)
    vanishes = run_sweep(lambda h: restriction(cls, h).is_zero, subgroups, pool)
    vanishing = tuple(h for h, zero in zip(subgroups, vanishes) if zero)
    indices = [group.order // h.order for h in vanishing]
    gcd_index = 0
    for i in indices:
        gcd_index = gcd(gcd_index, i)
    # H¹ of the trivial subgroup is zero, so indices is never empty
    return SplittingIndex(gcd_index, min(indices), vanishing, len(subgroups))


def direct_sum_cocycle(total: DirectSum, n: int, components: Sequence[Mapping[int, int]]) -> SparseVector:
    """Assemble a cochain on ⊕ M_i from one cochain per summand."""
    if len(components) != len(total.summands):
        raise InvalidInputError("one cochain per summand is required")
    rank = total.lattice.rank
    out: SparseVector = {}
    for i, (summand, cochain) in enumerate(zip(total.summands, components)):
        offset = total.offsets[i]
        for key, value in cochain.items():
            tuple_idx, coordinate = divmod(key, summand.rank)
            if value:
                out[tuple_idx * rank + offset + coordinate] = value
    return out


def component_cocycle(total: DirectSum, i: int, cochain: Mapping[int, int]) -> SparseVector:
    """The i-th summand's part of a cochain on a direct sum."""
    rank = total.lattice.rank
    block = total.block(i)
    summand_rank = total.summands[i].rank
    out: SparseVector = {}
    for key, value in cochain.items():
        tuple_idx, coordinate = divmod(key, rank)
        if block.start <= coordinate < block.stop and value:
            out[tuple_idx * summand_rank + coordinate - block.start] = value
    return out


__all__ = [
    "CochainComplexSlice",
    "CochainIndexer",
    "CohomologyClass",
    "CohomologyGroup",
    "SplittingIndex",
    "apply_boundary",
    "boundary_columns",
    "cache_size",
    "class_of",
    "clear_cache",
    "cochain_slice",
    "cohomology",
    "component_cocycle",
    "describe_factors",
    "direct_sum_cocycle",
    "element_of_order",
    "enumerate_classes",
    "estimate_boundary_nonzeros",
    "from_coordinates",
    "is_coboundary",
    "order_of",
    "restriction",
    "splitting_index",
    "transfer_cochain",
]
