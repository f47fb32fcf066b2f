"""Points, subspaces and hyperplanes of PG(n, F).

A subspace is stored by the reduced row echelon basis of its underlying
vector space, which makes equality and hashing canonical.  Points are
normalized so that their first nonzero coordinate is one.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import linalg
from .gf import GF, FieldError

DEFAULT_MAX_Q = 9


class CapExceededError(FieldError):
    pass


def max_q() -> int:
    """Field-size cap for exhaustive enumeration (env SCROLLFORGE_MAX_Q)."""
    return int(os.environ.get("SCROLLFORGE_MAX_Q", DEFAULT_MAX_Q))


def normalize(vec: Sequence[int], F: GF) -> tuple[int, ...]:
    for x in vec:
        if x:
            if x == 1:
                return tuple(vec)
            iv = F.inv(x)
            return tuple(F.mul(iv, y) for y in vec)
    raise ValueError("the zero vector is not a projective point")


@dataclass(frozen=True)
class ProjPoint:
    field: GF
    coords: tuple[int, ...]

    @classmethod
    def of(cls, F: GF, vec: Sequence[int]) -> "ProjPoint":
        return cls(F, normalize(vec, F))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def __repr__(self) -> str:
        return f"P{self.coords}"


@dataclass(frozen=True)
class Subspace:
    field: GF
    n: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_vectors(cls, F: GF, n: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        rows = [list(v) for v in vectors]
        for v in rows:
            if len(v) != n + 1:
                raise ValueError(f"vector of length {len(v)} in PG({n}, q)")
        R, _ = linalg.rref(rows, F, n + 1) if rows else ([], [])
        return cls(F, n, tuple(tuple(r) for r in R))

    @classmethod
    def empty(cls, F: GF, n: int) -> "Subspace":
        return cls(F, n, ())

    @classmethod
    def whole(cls, F: GF, n: int) -> "Subspace":
        return cls(F, n, tuple(tuple(r) for r in linalg.identity(n + 1)))

    @property
    def dim(self) -> int:
        """Projective dimension; -1 for the empty subspace."""
        return len(self.basis) - 1

    def is_empty(self) -> bool:
        return not self.basis

    def annihilator(self) -> linalg.Matrix:
        """Basis of the dual vectors vanishing on this subspace."""
        if not self.basis:
            return linalg.identity(self.n + 1)
        return linalg.nullspace(self.basis, self.field, self.n + 1)

    def contains(self, other: "ProjPoint | Subspace | Sequence[int]") -> bool:
        if isinstance(other, Subspace):
            rows = other.basis
        elif isinstance(other, ProjPoint):
            rows = (other.coords,)
        else:
            rows = (tuple(other),)
        ann = self.annihilator()
        F = self.field
        return all(F.dot(a, r) == 0 for a in ann for r in rows)

    def __contains__(self, other) -> bool:
        return self.contains(other)

    def points(self) -> Iterator[ProjPoint]:
        return points_of(self)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, basis={[list(r) for r in self.basis]})"


@dataclass(frozen=True)
class Hyperplane:
    field: GF
    dual: tuple[int, ...]

    @classmethod
    def of(cls, F: GF, dual: Sequence[int]) -> "Hyperplane":
        return cls(F, normalize(dual, F))

    @property
    def n(self) -> int:
        return len(self.dual) - 1

    def contains(self, P: "ProjPoint | Sequence[int]") -> bool:
        coords = P.coords if isinstance(P, ProjPoint) else P
        return self.field.dot(self.dual, coords) == 0

    def __contains__(self, P) -> bool:
        return self.contains(P)

    def subspace(self) -> Subspace:
        return Subspace(self.field, self.n, tuple(map(tuple, linalg.nullspace([self.dual], self.field, self.n + 1))))


def _vectors(item, F: GF) -> tuple[int, list[Sequence[int]]]:
    if isinstance(item, Subspace):
        if item.field is not F:
            raise FieldError("mixed fields")
        return item.n, list(item.basis)
    if isinstance(item, ProjPoint):
        if item.field is not F:
            raise FieldError("mixed fields")
        return item.n, [item.coords]
    if isinstance(item, Hyperplane):
        return item.n, list(item.subspace().basis)
    vec = list(item)
    return len(vec) - 1, [vec]


def span(*items, field: GF | None = None) -> Subspace:
    """Smallest subspace containing all given points, subspaces or raw vectors."""
    if len(items) == 1 and not isinstance(items[0], (Subspace, ProjPoint, Hyperplane)):
        first = list(items[0])
        if first and not isinstance(first[0], int):
            items = tuple(first)
    if not items:
        raise ValueError("span of nothing")
    F = field
    for it in items:
        if isinstance(it, (Subspace, ProjPoint, Hyperplane)):
            F = it.field
            break
    if F is None:
        raise ValueError("span of raw vectors needs field=")
    n = None
    rows: list[Sequence[int]] = []
    for it in items:
        m, vs = _vectors(it, F)
        if n is None:
            n = m
        elif m != n:
            raise ValueError(f"mixed ambient dimensions {n} and {m}")
        rows.extend(vs)
    return Subspace.from_vectors(F, n, rows)


def meet(A: Subspace, B: Subspace) -> Subspace:
    if A.n != B.n:
        raise ValueError(f"mixed ambient dimensions {A.n} and {B.n}")
    if A.field is not B.field:
        raise FieldError("mixed fields")
    eqs = A.annihilator() + B.annihilator()
    basis = linalg.nullspace(eqs, A.field, A.n + 1)
    return Subspace(A.field, A.n, tuple(map(tuple, basis)))


def _normalized_coefficients(k: int, q: int) -> Iterator[tuple[int, ...]]:
    """Normalized vectors of F^k in lexicographic order of their integer codes."""
    for lead in range(k - 1, -1, -1):
        for tail in itertools.product(range(q), repeat=k - 1 - lead):
            yield (0,) * lead + (1,) + tail


def points_of(S: Subspace) -> Iterator[ProjPoint]:
    """Every point of S exactly once.

    With an echelon basis, a normalized coefficient vector produces a
    normalized point, so no renormalization is needed.
    """
    F = S.field
    for coeffs in _normalized_coefficients(len(S.basis), F.order):
        yield ProjPoint(F, tuple(linalg.combine(coeffs, S.basis, F)))


def count_points(n: int, q: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


count_hyperplanes = count_points


def _check_cap(F: GF) -> None:
    if F.order > max_q():
        raise CapExceededError(f"field size {F.order} exceeds the cap {max_q()} (set SCROLLFORGE_MAX_Q)")


def hyperplane_duals(n: int, F: GF, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Normalized dual vectors with lexicographic index in [start, stop), as an array.

    Index order: all vectors with the most leading zeros first, and within a
    block the free coordinates read as big-endian base-q digits.
    """
    _check_cap(F)
    q = F.order
    total = count_hyperplanes(n, q)
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.zeros((len(idx), n + 1), dtype=np.int64)
    offset = 0
    for lead in range(n, -1, -1):
        width = n - lead
        size = q**width
        sel = (idx >= offset) & (idx < offset + size)
        local = idx[sel] - offset
        rows = np.nonzero(sel)[0]
        out[rows, lead] = 1
        for j in range(n, lead, -1):
            out[rows, j] = local % q
            local //= q
        offset += size
    return out


all_point_coords = hyperplane_duals


def enumerate_hyperplanes(n: int, F: GF, start: int = 0, stop: int | None = None) -> Iterator[Hyperplane]:
    for row in hyperplane_duals(n, F, start, stop).tolist():
        yield Hyperplane(F, tuple(row))


def hyperplanes_containing(S: Subspace) -> Iterator[Hyperplane]:
    """Every hyperplane through S, once each."""
    F = S.field
    ann = S.annihilator()
    for coeffs in _normalized_coefficients(len(ann), F.order):
        yield Hyperplane(F, tuple(linalg.combine(coeffs, ann, F)))


def duals_containing(S: Subspace) -> np.ndarray:
    return np.array([h.dual for h in hyperplanes_containing(S)], dtype=np.int64).reshape(-1, S.n + 1)


def apply(M: Sequence[Sequence[int]], P: ProjPoint) -> ProjPoint:
    """Image of a point under the homography with matrix M (acting on columns)."""
    return ProjPoint.of(P.field, linalg.matvec(M, P.coords, P.field))


def apply_subspace(M: Sequence[Sequence[int]], S: Subspace) -> Subspace:
    F = S.field
    return Subspace.from_vectors(F, S.n, [linalg.matvec(M, v, F) for v in S.basis])


def express(vectors: Sequence[Sequence[int]], target: Sequence[int], F: GF) -> list[int] | None:
    """Coefficients c with sum c_i v_i = target, or None when not uniquely solvable."""
    m = len(vectors)
    aug = [list(col) for col in zip(*vectors, target)]
    R, pivots = linalg.rref(aug, F, m + 1)
    if pivots != list(range(m)):
        return None
    return [R[i][m] for i in range(m)]


def frame_images(src: Sequence[Sequence[int]], dst: Sequence[Sequence[int]], F: GF) -> list[list[int]] | None:
    """Rescaled dst[:-1] so that a linear map sending src[i] to them also sends src[-1] to a multiple of dst[-1].

    Both lists hold d+2 vectors in general position spanning the same
    dimension d+1; returns None when either fails to be a frame.
    """
    lam = express(src[:-1], src[-1], F)
    mu = express(dst[:-1], dst[-1], F)
    if lam is None or mu is None or not all(lam) or not all(mu):
        return None
    return [[F.mul(F.div(m, l), x) for x in d] for l, m, d in zip(lam, mu, dst[:-1])]


def frame_homography(src: Sequence[Sequence[int]], dst: Sequence[Sequence[int]], F: GF) -> linalg.Matrix | None:
    """The homography of PG(d, F) sending the frame src onto the frame dst (d+2 points each)."""
    imgs = frame_images(src, dst, F)
    if imgs is None:
        return None
    return linalg.matmul(linalg.transpose(imgs), linalg.inverse(linalg.transpose(src[:-1]), F), F)
