"""Sparse integer vectors and incremental row-echelon lattices.

Vectors are ``dict[int, int]`` with no zero entries. Elimination uses
extended-gcd row operations, so everything stays exact over ℤ.
:class:`HowellLattice` does the same modulo a fixed integer, which keeps
every entry bounded on large boundary matrices.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

SparseVector = dict[int, int]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    prev_x, x = 1, 0
    prev_y, y = 0, 1
    while b:
        q = a // b
        x, prev_x = prev_x - q * x, x
        y, prev_y = prev_y - q * y, y
        a, b = b, a % b
    if a < 0:
        return -prev_x, -prev_y, -a
    return prev_x, prev_y, a


def combine(u: Mapping[int, int], a: int, v: Mapping[int, int], b: int) -> SparseVector:
    """``a*u + b*v``."""
    out: SparseVector = {}
    if a:
        for k, x in u.items():
            out[k] = a * x
    if b:
        for k, x in v.items():
            value = out.get(k, 0) + b * x
            if value:
                out[k] = value
            else:
                out.pop(k, None)
    return out


def add_scaled(target: SparseVector, factor: int, source: Mapping[int, int]) -> None:
    """``target += factor * source`` in place."""
    if not factor:
        return
    for k, x in source.items():
        value = target.get(k, 0) + factor * x
        if value:
            target[k] = value
        else:
            target.pop(k, None)


def scale(vector: Mapping[int, int], factor: int) -> SparseVector:
    if not factor:
        return {}
    return {k: factor * x for k, x in vector.items()}


def clean(vector: Mapping[int, int]) -> SparseVector:
    return {k: int(x) for k, x in vector.items() if x}


def from_dense(values: Iterable[int]) -> SparseVector:
    return {i: int(x) for i, x in enumerate(values) if x}


def to_dense(vector: Mapping[int, int], size: int) -> list[int]:
    out = [0] * size
    for k, x in vector.items():
        out[k] = x
    return out


class EchelonLattice:
    """Echelon basis of the sublattice of ℤⁿ spanned by the inserted vectors.

    Each stored row has a positive pivot at its smallest key and no other
    row shares that pivot. With ``track`` on, every row carries the
    combination of inserted tags that produced it, which is how kernels are
    read off.
    """

    def __init__(self, track: bool = False) -> None:
        self.track = track
        self._rows: dict[int, SparseVector] = {}
        self._tags: dict[int, SparseVector] = {}

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def rows(self) -> list[SparseVector]:
        return [self._rows[p] for p in self.pivots]

    def insert(self, vector: Mapping[int, int], tag: Mapping[int, int] | None = None) -> SparseVector | None:
        """Add a vector; returns its tag combination when it reduced to zero."""
        v = clean(vector)
        t: SparseVector = dict(tag or {}) if self.track else {}
        while v:
            pivot = min(v)
            a = v[pivot]
            row = self._rows.get(pivot)
            if row is None:
                if a < 0:
                    v = scale(v, -1)
                    t = scale(t, -1)
                self._rows[pivot] = v
                if self.track:
                    self._tags[pivot] = t
                return None
            b = row[pivot]
            if a % b == 0:
                q = a // b
                add_scaled(v, -q, row)
                if self.track:
                    add_scaled(t, -q, self._tags[pivot])
                continue
            x, y, g = xgcd(b, a)
            # [new_row; v'] = [[x, y], [-a/g, b/g]] · [row; v], a unimodular step
            new_row = combine(row, x, v, y)
            v = combine(row, -a // g, v, b // g)
            self._rows[pivot] = new_row
            if self.track:
                row_tag = self._tags[pivot]
                self._tags[pivot] = combine(row_tag, x, t, y)
                t = combine(row_tag, -a // g, t, b // g)
        return t if self.track else {}

    def reduce(self, vector: Mapping[int, int]) -> tuple[SparseVector, SparseVector]:
        """Reduce against the pivots; returns ``(remainder, coefficients by pivot)``."""
        v = clean(vector)
        coefficients: SparseVector = {}
        for pivot in self.pivots:
            a = v.get(pivot, 0)
            if not a:
                continue
            row = self._rows[pivot]
            q = a // row[pivot]
            if q:
                add_scaled(v, -q, row)
                coefficients[pivot] = q
        return v, coefficients

    def express(self, vector: Mapping[int, int]) -> list[int] | None:
        """Coordinates of ``vector`` in ``rows()``, or ``None`` when it lies outside the lattice."""
        v = clean(vector)
        pivots = self.pivots
        coords = [0] * len(pivots)
        for i, pivot in enumerate(pivots):
            a = v.get(pivot, 0)
            if not a:
                continue
            row = self._rows[pivot]
            b = row[pivot]
            if a % b:
                return None
            q = a // b
            add_scaled(v, -q, row)
            coords[i] = q
        if v:
            return None
        return coords

    def contains(self, vector: Mapping[int, int]) -> bool:
        return self.express(vector) is not None

    def hermite(self) -> None:
        """Reduce entries above each pivot into ``[0, pivot)``; rows stay a basis."""
        pivots = self.pivots
        for i, pivot in enumerate(pivots):
            row = self._rows[pivot]
            b = row[pivot]
            for upper in pivots[:i]:
                other = self._rows[upper]
                q = other.get(pivot, 0) // b
                if q:
                    add_scaled(other, -q, row)
                    if self.track:
                        add_scaled(self._tags[upper], -q, self._tags[pivot])


def reduce_mod(vector: Mapping[int, int], modulus: int) -> SparseVector:
    out: SparseVector = {}
    for k, x in vector.items():
        r = int(x) % modulus
        if r:
            out[k] = r
    return out


def _lincomb_mod(u: Mapping[int, int], a: int, v: Mapping[int, int], b: int, modulus: int) -> SparseVector:
    return reduce_mod(combine(u, a, v, b), modulus)


def _add_scaled_mod(target: SparseVector, factor: int, source: Mapping[int, int], modulus: int) -> None:
    if not factor:
        return
    for k, x in source.items():
        value = (target.get(k, 0) + factor * x) % modulus
        if value:
            target[k] = value
        else:
            target.pop(k, None)


class HowellLattice:
    """A submodule of (ℤ/e)ⁿ in Howell form, as integer rows with entries in ``[0, e)``.

    Every pivot divides ``e``. Each time a row gets pivot ``b`` its multiple
    ``(e/b)·row``, which vanishes at the pivot, is fed back in; so any element
    of the module that is zero before position ``p`` is spanned by the rows
    from ``p`` on, and :meth:`reduce` returns a canonical remainder.

    With ``track`` on, rows carry tag combinations mod ``e`` and
    :meth:`insert` returns the tags of everything that reduced to zero; those
    tags span the kernel of "tag ↦ vector" mod ``e``.
    """

    def __init__(self, modulus: int, track: bool = False) -> None:
        if modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        self.modulus = modulus
        self.track = track
        self._rows: dict[int, SparseVector] = {}
        self._tags: dict[int, SparseVector] = {}

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def rows(self) -> list[SparseVector]:
        return [self._rows[p] for p in self.pivots]

    def order(self) -> int:
        """Number of elements of the module."""
        size = 1
        for row in self._rows.values():
            pivot = min(row)
            size *= self.modulus // row[pivot]
        return size

    def insert(self, vector: Mapping[int, int], tag: Mapping[int, int] | None = None) -> list[SparseVector]:
        e = self.modulus
        relations: list[SparseVector] = []
        start_tag = reduce_mod(tag, e) if (self.track and tag) else {}
        pending = [(reduce_mod(vector, e), start_tag)]
        while pending:
            v, t = pending.pop()
            while v:
                p = min(v)
                a = v[p]
                row = self._rows.get(p)
                if row is None:
                    # combine with the implicit e·e_p: pivot becomes gcd(a, e)
                    x, _, g = xgcd(a, e)
                    self._rows[p] = _lincomb_mod(v, x, {}, 0, e)
                    v = _lincomb_mod(v, e // g, {}, 0, e)
                    if self.track:
                        self._tags[p] = _lincomb_mod(t, x, {}, 0, e)
                        t = _lincomb_mod(t, e // g, {}, 0, e)
                    continue
                b = row[p]
                if a % b == 0:
                    _add_scaled_mod(v, -(a // b), row, e)
                    if self.track:
                        _add_scaled_mod(t, -(a // b), self._tags[p], e)
                    continue
                x, y, g = xgcd(b, a)
                new_row = _lincomb_mod(row, x, v, y, e)
                v = _lincomb_mod(row, -a // g, v, b // g, e)
                self._rows[p] = new_row
                closure_tag: SparseVector = {}
                if self.track:
                    row_tag = self._tags[p]
                    self._tags[p] = _lincomb_mod(row_tag, x, t, y, e)
                    t = _lincomb_mod(row_tag, -a // g, t, b // g, e)
                    closure_tag = _lincomb_mod(self._tags[p], e // g, {}, 0, e)
                pending.append((_lincomb_mod(new_row, e // g, {}, 0, e), closure_tag))
            if self.track and t:
                relations.append(t)
        return relations

    def reduce(self, vector: Mapping[int, int]) -> tuple[SparseVector, SparseVector]:
        """``(remainder, tag combination)`` with vector ≡ remainder + Σ rows used, mod e."""
        e = self.modulus
        v = reduce_mod(vector, e)
        remainder: SparseVector = {}
        combo: SparseVector = {}
        while v:
            p = min(v)
            row = self._rows.get(p)
            if row is not None and v[p] >= row[p]:
                q = v[p] // row[p]
                _add_scaled_mod(v, -q, row, e)
                if self.track:
                    _add_scaled_mod(combo, q, self._tags[p], e)
            a = v.pop(p, 0)
            if a:
                remainder[p] = a
        return remainder, combo

    def contains(self, vector: Mapping[int, int]) -> bool:
        return not self.reduce(vector)[0]


def kernel_mod(columns: Sequence[Mapping[int, int]], modulus: int) -> list[SparseVector]:
    """Generators of the kernel mod ``modulus`` of the matrix with these columns."""
    lattice = HowellLattice(modulus, track=True)
    relations: list[SparseVector] = []
    for j, column in enumerate(columns):
        relations.extend(lattice.insert(column, {j: 1}))
    return relations


def echelon_of(vectors: Iterable[Mapping[int, int]]) -> EchelonLattice:
    lattice = EchelonLattice()
    for v in vectors:
        lattice.insert(v)
    return lattice


def hermite_basis(vectors: Iterable[Mapping[int, int]]) -> list[SparseVector]:
    """Canonical (Hermite normal form) basis of the span, rows ordered by pivot."""
    lattice = echelon_of(vectors)
    lattice.hermite()
    return lattice.rows()


def kernel_basis(columns: Sequence[Mapping[int, int]]) -> list[SparseVector]:
    """Hermite basis of the integer kernel of the matrix with these columns.

    Kernel vectors live in ℤ^{len(columns)}. The kernel is saturated, so
    this is a basis of a pure sublattice.
    """
    lattice = EchelonLattice(track=True)
    relations: list[SparseVector] = []
    for j, column in enumerate(columns):
        leftover = lattice.insert(column, {j: 1})
        if leftover:
            relations.append(leftover)
    return hermite_basis(relations)


__all__ = [
    "EchelonLattice",
    "HowellLattice",
    "SparseVector",
    "add_scaled",
    "clean",
    "combine",
    "echelon_of",
    "from_dense",
    "hermite_basis",
    "kernel_basis",
    "kernel_mod",
    "reduce_mod",
    "scale",
    "to_dense",
    "xgcd",
]
