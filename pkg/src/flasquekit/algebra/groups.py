"""Finite groups given by multiplication tables, and their subgroups."""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Sequence

from flasquekit.config.settings import FlasqueKitConfig
from flasquekit.utils.errors import InvalidInputError, ResourceLimitError

# Associativity and representation checks are exhaustive up to this order.
EXHAUSTIVE_CHECK_ORDER = 64


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group on the element indices ``0 .. order-1``.

    ``mul[a][b]`` is the index of ``a·b``. Equality is equality of tables;
    the label and the choice of generators do not take part in it.
    """

    mul: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    generator_indices: tuple[int, ...]
    label: str = ""
    abelian_orders: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        _validate_table(self.mul, self.identity, self.inverse)
        if sorted(_closure(self.mul, self.identity, self.generator_indices)) != list(range(self.order)):
            raise InvalidInputError(f"generators {list(self.generator_indices)} do not generate the group")

    @property
    def order(self) -> int:
        return len(self.mul)

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        for row in self.mul:
            digest.update(",".join(map(str, row)).encode())
            digest.update(b";")
        return digest.hexdigest()

    @cached_property
    def is_abelian(self) -> bool:
        return all(self.mul[a][b] == self.mul[b][a] for a in range(self.order) for b in range(a))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self is other or self.mul == other.mul

    def __hash__(self) -> int:
        return hash(self.fingerprint)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label or 'order ' + str(self.order)})"


def _validate_table(mul: Sequence[Sequence[int]], identity: int, inverse: Sequence[int]) -> None:
    n = len(mul)
    if n == 0:
        raise InvalidInputError("a group needs at least one element")
    for a, row in enumerate(mul):
        if len(row) != n:
            raise InvalidInputError(f"row {a} of the multiplication table has length {len(row)}, expected {n}")
        if sorted(row) != list(range(n)):
            raise InvalidInputError(f"row {a} of the multiplication table is not a permutation of 0..{n - 1}")
    if not 0 <= identity < n:
        raise InvalidInputError(f"identity index {identity} out of range")
    for a in range(n):
        if mul[identity][a] != a or mul[a][identity] != a:
            raise InvalidInputError(f"element {identity} is not a two-sided identity (fails at {a})")
    if len(inverse) != n:
        raise InvalidInputError("inverse table has the wrong length")
    for a in range(n):
        if mul[a][inverse[a]] != identity or mul[inverse[a]][a] != identity:
            raise InvalidInputError(f"inverse of element {a} is wrong")
    if n <= EXHAUSTIVE_CHECK_ORDER:
        for a in range(n):
            row_a = mul[a]
            for b in range(n):
                ab = row_a[b]
                row_b = mul[b]
                for c in range(n):
                    if mul[ab][c] != row_a[row_b[c]]:
                        raise InvalidInputError(
                            "multiplication is not associative",
                            details={"triple": [a, b, c]},
                        )


def _closure(mul: Sequence[Sequence[int]], identity: int, generators: Iterable[int]) -> frozenset[int]:
    gens = [g for g in dict.fromkeys(generators) if g != identity]
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul[x][g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def _greedy_generators(mul: Sequence[Sequence[int]], identity: int, elements: Sequence[int]) -> tuple[int, ...]:
    gens: list[int] = []
    span = frozenset([identity])
    for g in elements:
        if g not in span:
            gens.append(g)
            span = _closure(mul, identity, gens)
        if len(span) == len(elements):
            break
    return tuple(gens)


def abelian_group(orders: Sequence[int], label: str | None = None) -> FiniteGroup:
    """ℤ/n₁ × … × ℤ/n_k, indexed in mixed radix with the first factor least significant.

    The i-th generator is the unit vector of the i-th factor, so for
    ``[2, 2, 2]`` the generators are the elements 1, 2 and 4.
    """
    try:
        orders = tuple(int(n) for n in orders)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"factor orders must be integers, got {orders!r}") from exc
    # the trivial group is the empty product, not a factor of order 1
    if any(n < 2 for n in orders):
        raise InvalidInputError(f"factor orders must be at least 2, got {list(orders)}")
    size = prod(orders)
    strides = [prod(orders[:i]) for i in range(len(orders))]

    def digits(x: int) -> list[int]:
        return [(x // s) % n for s, n in zip(strides, orders)]

    def encode(ds: Sequence[int]) -> int:
        return sum(d * s for d, s in zip(ds, strides))

    all_digits = [digits(x) for x in range(size)]
    mul = tuple(
        tuple(encode([(u + v) % n for u, v, n in zip(da, db, orders)]) for db in all_digits)
        for da in all_digits
    )
    inverse = tuple(encode([(-u) % n for u, n in zip(da, orders)]) for da in all_digits)
    generators = tuple(strides)
    if label is None:
        label = " x ".join(f"Z/{n}" for n in orders) if orders else "1"
    return FiniteGroup(mul, 0, inverse, generators, label, orders)


def cyclic_group(n: int) -> FiniteGroup:
    return abelian_group([n])


def group_from_table(
    mul: Sequence[Sequence[int]],
    generators: Sequence[int] | None = None,
    label: str = "",
) -> FiniteGroup:
    """Build a group from a raw table, deriving identity and inverses."""
    try:
        table = tuple(tuple(int(x) for x in row) for row in mul)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError("multiplication table entries must be integers") from exc
    n = len(table)
    if n == 0 or any(len(row) != n for row in table):
        raise InvalidInputError("multiplication table must be a non-empty square")
    identity = next(
        (e for e in range(n) if all(table[e][a] == a and table[a][e] == a for a in range(n))),
        None,
    )
    if identity is None:
        raise InvalidInputError("multiplication table has no identity element")
    inverse = []
    for a in range(n):
        inv = next((b for b in range(n) if table[a][b] == identity), None)
        if inv is None:
            raise InvalidInputError(f"element {a} has no inverse")
        inverse.append(inv)
    if generators is None:
        gens = _greedy_generators(table, identity, list(range(n)))
    else:
        try:
            gens = tuple(int(g) for g in generators)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError("generator indices must be integers") from exc
        if any(not 0 <= g < n for g in gens):
            raise InvalidInputError(f"generator indices {list(gens)} out of range")
    return FiniteGroup(table, identity, tuple(inverse), gens, label)


def element_order(group: FiniteGroup, g: int) -> int:
    k, x = 1, g
    while x != group.identity:
        x = group.mul[x][g]
        k += 1
    return k


def power(group: FiniteGroup, g: int, k: int) -> int:
    if k < 0:
        g, k = group.inverse[g], -k
    x = group.identity
    for _ in range(k):
        x = group.mul[x][g]
    return x


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of ``parent`` as the sorted tuple of its element indices."""

    parent: FiniteGroup
    elements: tuple[int, ...]
    _position: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_position", {g: i for i, g in enumerate(self.elements)})

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def __contains__(self, g: object) -> bool:
        return g in self._position

    def local_index(self, g: int) -> int:
        try:
            return self._position[g]
        except KeyError:
            raise InvalidInputError(f"element {g} is not in the subgroup") from None

    @cached_property
    def as_group(self) -> FiniteGroup:
        """The subgroup as a FiniteGroup on local indices (position in ``elements``)."""
        if self.is_whole:
            return self.parent
        pos = self._position
        mul = tuple(tuple(pos[self.parent.mul[a][b]] for b in self.elements) for a in self.elements)
        identity = pos[self.parent.identity]
        inverse = tuple(pos[self.parent.inverse[a]] for a in self.elements)
        gens = _greedy_generators(mul, identity, list(range(len(mul))))
        label = f"<{','.join(map(str, self.elements))}> in {self.parent.label}" if self.parent.label else ""
        return FiniteGroup(mul, identity, inverse, gens, label)

    def local_subgroup(self, other: "Subgroup") -> "Subgroup":
        """Re-express a subgroup ``other`` of ``self`` inside ``self.as_group``."""
        if other.parent != self.parent or not set(other.elements) <= set(self.elements):
            raise InvalidInputError("not a subgroup of this subgroup")
        return Subgroup(self.as_group, tuple(sorted(self._position[g] for g in other.elements)))

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return set(self.elements) <= set(other.elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.elements == other.elements and self.parent == other.parent

    def __hash__(self) -> int:
        return hash((self.parent, self.elements))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, elements={list(self.elements)})"


def subgroup_generated(group: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    elements = list(elements)
    if any(not 0 <= g < group.order for g in elements):
        raise InvalidInputError(f"elements {elements} out of range for a group of order {group.order}")
    return Subgroup(group, tuple(sorted(_closure(group.mul, group.identity, elements))))


def subgroup_from_elements(group: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Wrap an explicit element set, checking that it is a subgroup."""
    members = tuple(sorted(set(int(g) for g in elements)))
    if any(not 0 <= g < group.order for g in members):
        raise InvalidInputError(f"elements {list(members)} out of range for a group of order {group.order}")
    if group.identity not in members:
        raise InvalidInputError("subset does not contain the identity")
    member_set = set(members)
    for a in members:
        for b in members:
            if group.mul[a][group.inverse[b]] not in member_set:
                raise InvalidInputError(f"subset is not closed: {a}·{b}⁻¹ is missing")
    return Subgroup(group, members)


def trivial_subgroup(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, (group.identity,))


def whole_group(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, tuple(group.elements))


def _check_bound(group: FiniteGroup, order_bound: int | None) -> None:
    bound = order_bound if order_bound is not None else FlasqueKitConfig.current().subgroup_order_bound
    if group.order > bound:
        raise ResourceLimitError(
            f"group of order {group.order} exceeds the subgroup enumeration bound {bound}",
            details={"order": group.order, "bound": bound},
        )


def all_subgroups(group: FiniteGroup, order_bound: int | None = None) -> list[Subgroup]:
    """Every subgroup, sorted by (order, element tuple)."""
    _check_bound(group, order_bound)
    trivial = (group.identity,)
    found: dict[tuple[int, ...], tuple[int, ...]] = {trivial: ()}
    frontier = [trivial]
    while frontier:
        next_frontier: list[tuple[int, ...]] = []
        for elements in frontier:
            members = set(elements)
            gens = found[elements]
            for g in group.elements:
                if g in members:
                    continue
                grown = tuple(sorted(_closure(group.mul, group.identity, gens + (g,))))
                if grown not in found:
                    found[grown] = gens + (g,)
                    next_frontier.append(grown)
        frontier = next_frontier
    return [Subgroup(group, elements) for elements in sorted(found, key=lambda e: (len(e), e))]


def maximal_subgroups(group: FiniteGroup, order_bound: int | None = None) -> list[Subgroup]:
    """Proper subgroups contained in no other proper subgroup, in canonical order."""
    proper = [h for h in all_subgroups(group, order_bound) if not h.is_whole]
    member_sets = [set(h.elements) for h in proper]
    maximal = []
    for i, h in enumerate(proper):
        if not any(len(other) > h.order and member_sets[i] < other for other in member_sets):
            maximal.append(h)
    return maximal


def is_cyclic(subgroup: Subgroup) -> bool:
    group = subgroup.parent
    return any(element_order(group, g) == subgroup.order for g in subgroup.elements)


def index(group: FiniteGroup, subgroup: Subgroup) -> int:
    _check_parent(group, subgroup)
    return group.order // subgroup.order


def _check_parent(group: FiniteGroup, subgroup: Subgroup) -> None:
    if subgroup.parent != group:
        raise InvalidInputError("subgroup does not belong to this group")


@dataclass(frozen=True)
class CosetTable:
    """Right cosets H·r_j: ``coset_of[x]`` is j with x ∈ H·r_j, ``h_part[x]`` the local index of x·r_j⁻¹."""

    subgroup: Subgroup
    reps: tuple[int, ...]
    coset_of: tuple[int, ...]
    h_part: tuple[int, ...]


def coset_table(group: FiniteGroup, subgroup: Subgroup) -> CosetTable:
    _check_parent(group, subgroup)
    coset_of = [-1] * group.order
    h_part = [-1] * group.order
    reps: list[int] = []
    for g in [group.identity] + [x for x in group.elements if x != group.identity]:
        if coset_of[g] != -1:
            continue
        j = len(reps)
        reps.append(g)
        for local, h in enumerate(subgroup.elements):
            x = group.mul[h][g]
            coset_of[x] = j
            h_part[x] = local
    return CosetTable(subgroup, tuple(reps), tuple(coset_of), tuple(h_part))


def right_coset_reps(group: FiniteGroup, subgroup: Subgroup) -> list[int]:
    """One representative per right coset: the identity for H, then minimal indices."""
    return list(coset_table(group, subgroup).reps)


def homomorphism_from_images(
    source: FiniteGroup,
    target: FiniteGroup,
    images: Sequence[int],
) -> tuple[int, ...]:
    """Extend generator images to a homomorphism ``source → target``, verified on all pairs."""
    if len(images) != len(source.generator_indices):
        raise InvalidInputError(
            f"expected {len(source.generator_indices)} generator images, got {len(images)}"
        )
    phi = [-1] * source.order
    phi[source.identity] = target.identity
    queue = deque([source.identity])
    while queue:
        x = queue.popleft()
        for gen, image in zip(source.generator_indices, images):
            y = source.mul[x][gen]
            value = target.mul[phi[x]][image]
            if phi[y] == -1:
                phi[y] = value
                queue.append(y)
            elif phi[y] != value:
                raise InvalidInputError("generator images do not define a homomorphism")
    for a in source.elements:
        for b in source.elements:
            if phi[source.mul[a][b]] != target.mul[phi[a]][phi[b]]:
                raise InvalidInputError(
                    "generator images do not define a homomorphism",
                    details={"pair": [a, b]},
                )
    return tuple(phi)


def invert_bijection(mapping: Sequence[int]) -> tuple[int, ...]:
    if sorted(mapping) != list(range(len(mapping))):
        raise InvalidInputError("map is not a bijection")
    inverse = [0] * len(mapping)
    for x, y in enumerate(mapping):
        inverse[y] = x
    return tuple(inverse)


def independent_pair(group: FiniteGroup) -> tuple[int, int]:
    """The first non-identity element and the first element outside the cyclic group it spans."""
    first = next((g for g in group.elements if g != group.identity), None)
    if first is None:
        raise InvalidInputError("trivial group has no independent pair")
    span = _closure(group.mul, group.identity, [first])
    second = next((g for g in group.elements if g not in span), None)
    if second is None:
        raise InvalidInputError("group is cyclic; no independent pair")
    return first, second


__all__ = [
    "CosetTable",
    "FiniteGroup",
    "Subgroup",
    "abelian_group",
    "all_subgroups",
    "coset_table",
    "cyclic_group",
    "element_order",
    "group_from_table",
    "homomorphism_from_images",
    "independent_pair",
    "index",
    "invert_bijection",
    "is_cyclic",
    "maximal_subgroups",
    "power",
    "right_coset_reps",
    "subgroup_from_elements",
    "subgroup_generated",
    "trivial_subgroup",
    "whole_group",
]
