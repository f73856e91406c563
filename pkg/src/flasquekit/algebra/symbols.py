"""A formal model of the Steinberg-symbol argument on Kummer-type unit lattices.

A unit lattice is a finitely generated free abelian group, presented by
named generators and relations ``p·w − v = 0`` recording the adjoined p-th
roots. The symbol {u, v} is modelled by the class of u ∧ v in
Λ²(L/pL), written as an antisymmetric matrix over 𝔽_p.

Only "zero" is a conclusion about K₂. A nonzero wedge says nothing
about K₂ and is always labelled that way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np
from sympy import isprime
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from flasquekit.algebra.integer_matrix import as_int_matrix, elementary_divisors
from flasquekit.utils.errors import (
    InvalidInputError,
    LemmaViolationError,
    SoundnessError,
    TorsionError,
)

NONZERO_LABEL = "formally nonzero (no K2 conclusion)"
ZERO_LABEL = "zero"


@dataclass(frozen=True)
class _ModPQuotient:
    """L/pL as the free part of 𝔽_p^g modulo the reduced relations (RREF rows)."""

    rows: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]
    free: tuple[int, ...]


def _rref_mod_p(relations: Sequence[Sequence[int]], width: int, p: int) -> _ModPQuotient:
    if not relations:
        return _ModPQuotient((), (), tuple(range(width)))
    field_ = GF(p)
    dm = DomainMatrix([[field_(int(x) % p) for x in row] for row in relations], (len(relations), width), field_)
    reduced, pivots = dm.rref()
    rows = []
    for i in range(len(pivots)):
        rows.append(tuple(int(x) % p for x in reduced.to_list()[i]))
    free = tuple(j for j in range(width) if j not in pivots)
    return _ModPQuotient(tuple(rows), tuple(pivots), free)


@dataclass(frozen=True, eq=False)
class UnitLattice:
    names: tuple[str, ...]
    relations: tuple[tuple[int, ...], ...]
    p: int
    minus_one: tuple[int, ...] | None = None
    label: str = ""

    @property
    def generators(self) -> int:
        return len(self.names)

    @property
    def rank(self) -> int:
        return len(self.names) - len(self.relations)

    @cached_property
    def quotient(self) -> _ModPQuotient:
        return _rref_mod_p(self.relations, len(self.names), self.p)

    @property
    def quotient_dimension(self) -> int:
        return len(self.quotient.free)

    def vector(self, **coefficients: int) -> tuple[int, ...]:
        unknown = sorted(set(coefficients) - set(self.names))
        if unknown:
            raise InvalidInputError(f"unknown generators: {', '.join(unknown)}")
        return tuple(int(coefficients.get(name, 0)) for name in self.names)

    def embed(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Pad a vector written over a prefix of the generators."""
        if len(vector) > len(self.names):
            raise InvalidInputError("vector has more entries than the lattice has generators")
        return tuple(int(x) for x in vector) + (0,) * (len(self.names) - len(vector))

    def reduce(self, vector: Sequence[int], trace: list[str] | None = None) -> tuple[int, ...]:
        """Coordinates of the image in L/pL, over the free-column basis."""
        if len(vector) != len(self.names):
            raise InvalidInputError(f"vector has {len(vector)} entries, lattice has {len(self.names)} generators")
        p = self.p
        x = [int(v) % p for v in vector]
        for row, pivot in zip(self.quotient.rows, self.quotient.pivots):
            c = x[pivot]
            if c:
                x = [(a - c * b) % p for a, b in zip(x, row)]
                if trace is not None:
                    trace.append(f"subtract {c}·(relation at {self.names[pivot]}) mod {p}")
        coords = tuple(x[j] for j in self.quotient.free)
        if trace is not None:
            shown = ", ".join(f"{self.names[j]}:{c}" for j, c in zip(self.quotient.free, coords) if c) or "0"
            trace.append(f"image in L/{p}L: {shown}")
        return coords

    def in_p_multiple(self, vector: Sequence[int]) -> bool:
        return not any(self.reduce(vector))

    @property
    def is_sound(self) -> bool:
        """The wedge model computes symbols only when {x, x} = {x, −1} vanishes identically."""
        if self.p != 2:
            return True
        return self.minus_one is not None and self.in_p_multiple(self.minus_one)


def base_lattice(names: Sequence[str], p: int, minus_one: Mapping[str, int] | Sequence[int] | None = None, label: str = "") -> UnitLattice:
    if not isprime(p):
        raise InvalidInputError(f"p must be prime, got {p}")
    names = tuple(names)
    if len(set(names)) != len(names) or not names:
        raise InvalidInputError("generator names must be distinct and non-empty")
    if isinstance(minus_one, Mapping):
        unknown = sorted(set(minus_one) - set(names))
        if unknown:
            raise InvalidInputError(f"unknown generators: {', '.join(unknown)}")
        minus_one = tuple(int(minus_one.get(n, 0)) for n in names)
    elif minus_one is not None:
        minus_one = tuple(int(x) for x in minus_one)
        if len(minus_one) != len(names):
            raise InvalidInputError("minus_one vector has the wrong length")
    return UnitLattice(names, (), p, minus_one, label or f"<{', '.join(names)}>")


def adjoin_radical(lattice: UnitLattice, v: Sequence[int], new_name: str) -> UnitLattice:
    """L' = L + ℤ·w with p·w = v; v must not already lie in pL."""
    if new_name in lattice.names:
        raise InvalidInputError(f"generator name {new_name!r} already in use")
    if len(v) != len(lattice.names):
        raise InvalidInputError(f"radicand has {len(v)} entries, lattice has {len(lattice.names)} generators")
    if lattice.in_p_multiple(v):
        raise TorsionError(f"radicand already lies in {lattice.p}·L; adjoining its root would add torsion")
    p = lattice.p
    relations = tuple(row + (0,) for row in lattice.relations)
    relations += (tuple(-int(x) for x in v) + (p,),)
    divisors = elementary_divisors(as_int_matrix([list(r) for r in relations]))
    if len(divisors) != len(relations) or any(d != 1 for d in divisors):
        raise TorsionError("presentation is not torsion-free", details={"divisors": list(divisors)})
    minus_one = None if lattice.minus_one is None else lattice.minus_one + (0,)
    label = f"{lattice.label}[{new_name}]"
    return UnitLattice(lattice.names + (new_name,), relations, p, minus_one, label)


@dataclass(frozen=True, eq=False)
class WedgeClass:
    lattice: UnitLattice
    matrix: tuple[tuple[int, ...], ...]
    trace: tuple[str, ...] = field(default=(), compare=False)

    @property
    def is_zero(self) -> bool:
        return not any(any(row) for row in self.matrix)

    @property
    def label(self) -> str:
        return ZERO_LABEL if self.is_zero else NONZERO_LABEL

    def __add__(self, other: "WedgeClass") -> "WedgeClass":
        self._check_same(other)
        p = self.lattice.p
        return WedgeClass(self.lattice, tuple(tuple((a + b) % p for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def scaled(self, k: int) -> "WedgeClass":
        p = self.lattice.p
        return WedgeClass(self.lattice, tuple(tuple((k * a) % p for a in row) for row in self.matrix))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WedgeClass):
            return NotImplemented
        return self.lattice is other.lattice and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((id(self.lattice), self.matrix))

    def _check_same(self, other: "WedgeClass") -> None:
        if other.lattice is not self.lattice:
            raise InvalidInputError("wedge classes live over different lattices")

    def pushforward(self, target: UnitLattice) -> "WedgeClass":
        """Image under L → L' when L' extends L by further generators."""
        if target.names[: len(self.lattice.names)] != self.lattice.names or target.p != self.lattice.p:
            raise InvalidInputError("target lattice does not extend this one")
        p = self.lattice.p
        free = self.lattice.quotient.free
        images = []
        for j in free:
            e = [0] * len(self.lattice.names)
            e[j] = 1
            images.append(target.reduce(target.embed(e)))
        a = np.array(images, dtype=object).T if images else np.zeros((target.quotient_dimension, 0), dtype=object)
        w = np.array(self.matrix, dtype=object).reshape(len(free), len(free))
        pushed = a.dot(w).dot(a.T) if images else np.zeros((target.quotient_dimension,) * 2, dtype=object)
        d = target.quotient_dimension
        return WedgeClass(target, tuple(tuple(int(pushed[i, j]) % p for j in range(d)) for i in range(d)))


def symbol(lattice: UnitLattice, u: Sequence[int], v: Sequence[int], trace: bool = False) -> WedgeClass:
    if not lattice.is_sound:
        raise SoundnessError(
            "for p = 2 the wedge model needs −1 ∈ 2·L; supply a minus_one vector such as 2·e_ζ",
            details={"p": lattice.p},
        )
    steps: list[str] | None = [] if trace else None
    a = lattice.reduce(u, steps)
    b = lattice.reduce(v, steps)
    p = lattice.p
    d = len(a)
    matrix = tuple(tuple((a[i] * b[j] - a[j] * b[i]) % p for j in range(d)) for i in range(d))
    return WedgeClass(lattice, matrix, tuple(steps or ()))


def projective_points(p: int) -> list[tuple[int, int]]:
    """ℙ¹(𝔽_p) as [1:j] for j in 0..p−1, then [0:1]."""
    return [(1, j) for j in range(p)] + [(0, 1)]


def verify_annullamento(p: int, trace: bool = False) -> dict:
    """{e_b, e_t} dies in every K(aⁱ t^{j/p}) for [i:j] ∈ ℙ¹(𝔽_p), odd p."""
    if not isprime(p):
        raise InvalidInputError(f"p must be prime, got {p}")
    if p == 2:
        raise InvalidInputError("p = 2 needs a square root of −1; use verify_annullamento_p2_with_i")
    base = base_lattice(["b", "t"], p)
    return _sweep_points(base, p, base.vector(b=1), base.vector(t=1), trace, variant="odd")


def verify_annullamento_p2_with_i(trace: bool = False) -> dict:
    """p = 2 with ζ, ζ² = −1, in the base: −1 = 2·e_ζ lies in 2L, so the model is sound."""
    base = base_lattice(["b", "t", "zeta"], 2, minus_one={"zeta": 2})
    return _sweep_points(base, 2, base.vector(b=1), base.vector(t=1), trace, variant="p2-with-i")


def _sweep_points(base: UnitLattice, p: int, eb: tuple[int, ...], et: tuple[int, ...], trace: bool, variant: str) -> dict:
    base_class = symbol(base, eb, et, trace)
    if base_class.is_zero:
        # nothing to kill: the sweep would pass vacuously
        raise LemmaViolationError(
            "symbol {e_b, e_t} is already zero in the base lattice",
            details={"p": p, "variant": variant},
        )
    points = []
    for i, j in projective_points(p):
        radicand = tuple(i * x + j * y for x, y in zip(eb, et))
        # {e_b, i·e_b + j·e_t} = j·{e_b, e_t} already in the base.
        chain = symbol(base, eb, radicand) == base_class.scaled(j)
        extended = adjoin_radical(base, radicand, "w")
        killed = symbol(extended, extended.embed(eb), extended.embed(et), trace)
        if not killed.is_zero:
            raise LemmaViolationError(
                f"symbol survives in the extension with p·w = {i}·b + {j}·t",
                details={"point": [i, j]},
            )
        if not chain:
            raise LemmaViolationError("bilinearity check failed in the base lattice", details={"point": [i, j]})
        entry = {
            "point": [i, j],
            "radicand": dict(zip(base.names, radicand)),
            "extension_rank": extended.rank,
            "verdict": killed.label,
        }
        if trace:
            entry["trace"] = list(killed.trace)
        points.append(entry)
    report = {
        "p": p,
        "variant": variant,
        "base": list(base.names),
        "base_class": base_class.label,
        "points": points,
        "passed": True,
    }
    if trace:
        report["base_trace"] = list(base_class.trace)
    return report


__all__ = [
    "NONZERO_LABEL",
    "UnitLattice",
    "WedgeClass",
    "ZERO_LABEL",
    "adjoin_radical",
    "base_lattice",
    "projective_points",
    "symbol",
    "verify_annullamento",
    "verify_annullamento_p2_with_i",
]
