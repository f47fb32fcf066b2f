"""Hyperplane sections of the scroll.

A hyperplane H either contains a generator or meets it in one point.  For
the generator through N (cubic point) and C (conic point) write n = H.N and
c = H.C; the generator lies in H iff n = c = 0, and otherwise its trace is
c N - n C.  The traces of the non-contained generators, completed by one
point on each contained generator, form the curve component of the section;
the dimension of its span decides the type.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import InternalInconsistency
from .gf import GF
from .projgeom import Hyperplane, ProjPoint, Subspace, frame_homography, meet, span
from .scroll import INF, RuledQuinticSurface, canonical_scroll, lift, params, veronese

KINDS = {2: "Conic", 3: "TwistedCubic", 4: "QuarticNrc", 5: "QuinticNrc"}
LEGAL = {2: (0, 1, 2, 3), 3: (0, 1, 2), 4: (1,), 5: (0,)}
# table order used in every report
KEYS = ("quintic", "quartic1", "tc0", "tc1", "tc2", "c0", "c1", "c2", "c3")


@dataclass(frozen=True)
class SectionType:
    kind: str
    g: int

    @classmethod
    def from_dim(cls, dim: int, g: int) -> "SectionType":
        if dim not in LEGAL or g not in LEGAL[dim]:
            raise InternalInconsistency(f"illegal section: curve span dimension {dim} with {g} generators")
        return cls(KINDS[dim], g)

    @classmethod
    def from_key(cls, key: str) -> "SectionType":
        if key == "quintic":
            return cls("QuinticNrc", 0)
        if key == "quartic1":
            return cls("QuarticNrc", 1)
        if key.startswith("tc"):
            return cls("TwistedCubic", int(key[2:]))
        return cls("Conic", int(key[1:]))

    @property
    def dim(self) -> int:
        return {v: k for k, v in KINDS.items()}[self.kind]

    @property
    def key(self) -> str:
        if self.kind == "QuinticNrc":
            return "quintic"
        if self.kind == "QuarticNrc":
            return "quartic1"
        return ("tc" if self.kind == "TwistedCubic" else "c") + str(self.g)

    def point_count(self, q: int) -> int:
        """|V meet H| for a section of this type: curve plus g generators sharing one point each."""
        return q + 1 + self.g * q

    def __str__(self) -> str:
        return f"{self.kind}(g={self.g})"


@dataclass
class SectionReport:
    hyperplane: Hyperplane
    type: SectionType
    contained_generators: list
    curve_points: dict  # theta -> ProjPoint
    curve_span: Subspace

    def to_json(self) -> dict:
        return {
            "hyperplane": list(self.hyperplane.dual),
            "type": self.type.kind,
            "g": self.type.g,
            "generators": [th if th == INF else int(th) for th in self.contained_generators],
            "span_dim": self.curve_span.dim,
        }


def _as_hyperplane(V: RuledQuinticSurface, H) -> Hyperplane:
    if isinstance(H, Hyperplane):
        return H
    return Hyperplane.of(V.field, list(H))


def generator_traces(V: RuledQuinticSurface, H: Hyperplane) -> tuple[list, dict]:
    """(contained parameters, theta -> trace vector for the others)."""
    F = V.field
    contained, traces = [], {}
    for th in V.params:
        N, C = V.cubic_lifts[th], V.conic_lifts[th]
        n, c = F.dot(H.dual, N), F.dot(H.dual, C)
        if n == 0 and c == 0:
            contained.append(th)
        else:
            nn = F.neg(n)
            traces[th] = [F.add(F.mul(c, a), F.mul(nn, b)) for a, b in zip(N, C)]
    return contained, traces


def extract_curve(V: RuledQuinticSurface, H, contained: Sequence | None = None) -> tuple[dict, Subspace]:
    """Curve component of V meet H: one point per generator, and its span."""
    H = _as_hyperplane(V, H)
    found, traces = generator_traces(V, H)
    if contained is not None and sorted(map(str, contained)) != sorted(map(str, found)):
        raise ValueError("contained generators do not match the hyperplane")
    S = span(list(traces.values()), field=V.field)
    curve = {th: ProjPoint.of(V.field, v) for th, v in traces.items()}
    for th in found:
        X = meet(V.generators[th], S)
        if X.dim != 0:
            raise InternalInconsistency(f"generator {th} meets the trace span in dimension {X.dim}")
        curve[th] = ProjPoint(V.field, X.basis[0])
    return {th: curve[th] for th in V.params}, S


def classify(V: RuledQuinticSurface, H) -> SectionReport:
    H = _as_hyperplane(V, H)
    contained, _ = generator_traces(V, H)
    curve, S = extract_curve(V, H)
    stype = SectionType.from_dim(S.dim, len(contained))
    if not is_nrc(list(curve.values()), S.dim, V.field):
        raise InternalInconsistency(f"curve of {H.dual} is not an arc of its span")
    return SectionReport(H, stype, contained, curve, S)


# -- normal rational curves ----------------------------------------------------------

def _coordinates_in(points: Sequence[ProjPoint], S: Subspace) -> list[list[int]]:
    """Coordinates of points relative to the echelon basis of S (pivot entries)."""
    pivots = [next(i for i, x in enumerate(row) if x) for row in S.basis]
    return [[P.coords[p] for p in pivots] for P in points]


def is_arc(vectors: Sequence[Sequence[int]], r: int, F: GF) -> bool:
    """Every r+1 of the vectors are linearly independent."""
    return all(linalg.rank(list(sub), F) == r + 1 for sub in itertools.combinations(vectors, r + 1))


def fits_standard_curve(coords: Sequence[Sequence[int]], r: int, F: GF) -> bool:
    """Search for a homography carrying {(1, t, ..., t^r)} onto the given points.

    The images of the parameters 0, infinity and 1 are pinned to the first
    three points; the remaining frame parameters are searched, and a
    candidate counts only if it maps the whole standard curve onto the set.
    """
    target = {ProjPoint.of(F, v) for v in coords}
    if len(target) != F.order + 1:
        return False
    std = {th: veronese(F, *lift(th), r) for th in params(F)}
    dst = [list(v) for v in coords[: r + 2]]
    others = [t for t in range(2, F.order)]
    for extra in itertools.permutations(others, r - 1):
        src = [std[0], std[INF], std[1]] + [std[t] for t in extra]
        M = frame_homography(src, dst, F)
        if M is None:
            continue
        if all(ProjPoint.of(F, linalg.matvec(M, v, F)) in target for v in std.values()):
            return True
    return False


def is_nrc(points: Sequence[ProjPoint], r: int, F: GF | None = None) -> bool:
    """q+1 points spanning an r-space and forming an arc there.

    For r in {2, 3} the points must also be the image of the standard
    curve (1, t, ..., t^r) under a homography of their span.
    """
    points = list(points)
    if not points:
        raise ValueError("no points")
    F = F or points[0].field
    if len(points) != F.order + 1:
        raise ValueError(f"expected {F.order + 1} points, got {len(points)}")
    if r not in (2, 3, 4, 5):
        raise ValueError(f"unsupported dimension {r}")
    S = span(points)
    if S.dim != r:
        return False
    coords = _coordinates_in(points, S)
    if not is_arc(coords, r, F):
        return False
    if r in (2, 3):
        return fits_standard_curve(coords, r, F)
    return True


# -- independent route: binary forms ---------------------------------------------------

def _poly_mul(F: GF, a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def section_type_by_forms(V: RuledQuinticSurface, H) -> SectionType:
    """Section type from the binary forms n(x, y), c(x, y) of the hyperplane.

    In canonical coordinates H.N is a cubic form and H.C a quadratic form in
    (x, y).  The curve component is parametrized by the seven quintic forms
    c x^(3-i) y^i and -n x^(2-j) y^j, so the rank of their coefficient
    matrix is one more than the dimension of its span.  Generators in H are
    the common zeros of n and c on PG(1, q).
    """
    F = V.field
    H = _as_hyperplane(V, H)
    h = H.dual if V.is_canonical else linalg.matvec(linalg.transpose(V.from_canonical), H.dual, F)
    n = list(h[:4])  # n(x, y) = sum h_i x^(3-i) y^i
    c = list(h[4:])
    rows = []
    for i in range(4):
        rows.append(_poly_mul(F, c, [int(j == i) for j in range(4)]))
    for j in range(3):
        rows.append(_poly_mul(F, [F.neg(x) for x in n], [int(k == j) for k in range(3)]))
    rk = linalg.rank(rows, F)
    g = 0
    for th in params(F):
        x, y = lift(th)
        if F.dot(n, veronese(F, x, y, 3)) == 0 and F.dot(c, veronese(F, x, y, 2)) == 0:
            g += 1
    return SectionType.from_dim(rk - 1, g)


# -- batch kernel ------------------------------------------------------------------------

@dataclass
class BatchSections:
    """Per-hyperplane results for a block of duals."""

    duals: np.ndarray
    dim: np.ndarray  # curve span dimension
    g: np.ndarray
    n: np.ndarray  # (B, q+1) values H.N
    c: np.ndarray  # (B, q+1) values H.C
    traces: np.ndarray = dc_field(repr=False)

    def keys(self) -> list[str]:
        return [SectionType.from_dim(int(d), int(g)).key for d, g in zip(self.dim, self.g)]


def classify_batch(V: RuledQuinticSurface, duals: np.ndarray) -> BatchSections:
    """Vectorized section types for a stack of hyperplane duals (shape (B, 7))."""
    F = V.field
    N, C = V.lift_arrays
    duals = np.asarray(duals, dtype=np.int64)
    n = F.np_dot(duals[:, None, :], N[None, :, :])
    c = F.np_dot(duals[:, None, :], C[None, :, :])
    g = ((n == 0) & (c == 0)).sum(axis=1)
    T = F.np_sub(F.np_mul(c[:, :, None], N[None, :, :]), F.np_mul(n[:, :, None], C[None, :, :]))
    rank, _ = linalg.batch_rank(T, F)
    return BatchSections(duals, rank - 1, g, n, c, T)


def tally(dim: np.ndarray, g: np.ndarray) -> dict[str, int]:
    """Counts per section key; an illegal (dim, g) pair raises."""
    out = dict.fromkeys(KEYS, 0)
    pairs, counts = np.unique(np.stack([dim, g], axis=1), axis=0, return_counts=True) if len(dim) else ([], [])
    for (d, gg), k in zip(pairs, counts):
        out[SectionType.from_dim(int(d), int(gg)).key] += int(k)
    return out


def alpha_points(V: RuledQuinticSurface, batch: BatchSections, mask: np.ndarray) -> np.ndarray:
    """Normalized point where each selected section's curve span meets the conic plane.

    Only for canonical coordinates, where the conic plane is x0 = x1 = x2 = x3 = 0:
    clearing the first four columns of the trace matrix leaves vectors of
    the conic plane, which must all be proportional.
    """
    if not V.is_canonical:
        raise ValueError("canonical coordinates required")
    F = V.field
    T = batch.traces[mask]
    _, R = linalg.batch_rank(T, F, cols=[0, 1, 2, 3])
    tail = R[:, :, 4:]
    nz = (tail != 0).any(axis=2)
    if not nz.any(axis=1).all():
        raise InternalInconsistency("curve span misses the conic plane")
    first = nz.argmax(axis=1)
    vec = tail[np.arange(len(T)), first]
    lead = np.where(vec[:, 0] != 0, vec[:, 0], np.where(vec[:, 1] != 0, vec[:, 1], vec[:, 2]))
    vec = F.np_mul(F.np_inv(lead)[:, None], vec)
    # every other residue row must be a multiple of vec
    for r in range(R.shape[1]):
        row = tail[:, r]
        cross = np.stack(
            [
                F.np_sub(F.np_mul(row[:, 0], vec[:, 1]), F.np_mul(row[:, 1], vec[:, 0])),
                F.np_sub(F.np_mul(row[:, 0], vec[:, 2]), F.np_mul(row[:, 2], vec[:, 0])),
                F.np_sub(F.np_mul(row[:, 1], vec[:, 2]), F.np_mul(row[:, 2], vec[:, 1])),
            ],
            axis=1,
        )
        if (cross != 0).any():
            raise InternalInconsistency("curve span meets the conic plane in more than a point")
    out = np.zeros((len(T), 7), dtype=np.int64)
    out[:, 4:] = vec
    return out
