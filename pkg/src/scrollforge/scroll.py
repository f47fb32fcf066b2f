"""The ruled quintic surface of PG(6, q): a conic ruled against a twisted cubic.

Parameters of the generators run over GF(q) plus the point at infinity,
written :data:`INF`.  A finite parameter theta lifts to the homogeneous pair
(x : y) = (1 : theta) and infinity lifts to (0 : 1); every formula below is
written for the homogeneous pair so infinity needs no special casing.

In canonical coordinates the surface is

    V(x, y, z) = (x^3, x^2 y, x y^2, y^3, z x^2, z x y, z y^2),

the generator with parameter theta being spanned by the cubic point
N = (x^3, x^2 y, x y^2, y^3, 0, 0, 0) and the conic point C = (0, 0, 0, 0, x^2, x y, y^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from . import linalg
from .errors import InternalInconsistency
from .gf import GF, FieldError, FieldTooSmallError, MIN_Q, field_of_order
from .projgeom import ProjPoint, Subspace, all_point_coords, express, frame_images, meet, span

INF = "inf"
Param = Union[int, str]


class FrameError(ValueError):
    """Frames that do not define a ruled quintic surface."""


def params(F: GF) -> list[Param]:
    return list(range(F.order)) + [INF]


def lift(theta: Param) -> tuple[int, int]:
    return (0, 1) if theta == INF else (1, theta)


def param_of(x: int, y: int, F: GF) -> Param:
    """Parameter of the homogeneous pair (x : y)."""
    if x == 0:
        if y == 0:
            raise ValueError("(0 : 0) is not a point of PG(1, q)")
        return INF
    return F.div(y, x)


def veronese(F: GF, x: int, y: int, d: int) -> list[int]:
    """(x^d, x^(d-1) y, ..., y^d)."""
    return [F.mul(F.pow(x, d - i), F.pow(y, i)) for i in range(d + 1)]


def sym_power(A: Sequence[Sequence[int]], d: int, F: GF) -> linalg.Matrix:
    """Matrix S with veronese(A v) = S veronese(v) for a 2x2 matrix A."""
    (a, b), (c, e) = A
    S = [[0] * (d + 1) for _ in range(d + 1)]
    for i in range(d + 1):
        # image of x^(d-i) y^i is (a x + b y)^(d-i) (c x + e y)^i; coefficients indexed by y-degree
        poly = [1]
        for form in [(a, b)] * (d - i) + [(c, e)] * i:
            new = [0] * (len(poly) + 1)
            for j, coef in enumerate(poly):
                new[j] = F.add(new[j], F.mul(coef, form[0]))
                new[j + 1] = F.add(new[j + 1], F.mul(coef, form[1]))
            poly = new
        for j in range(d + 1):
            S[i][j] = poly[j]
    return S


def apply_pgl2(A: Sequence[Sequence[int]], theta: Param, F: GF) -> Param:
    x, y = lift(theta)
    return param_of(F.add(F.mul(A[0][0], x), F.mul(A[0][1], y)), F.add(F.mul(A[1][0], x), F.mul(A[1][1], y)), F)


# the ten quadrics x_i x_j = x_k x_l cutting out the canonical surface
QUADRICS: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = (
    ((0, 5), (1, 4)),
    ((0, 6), (1, 5)),
    ((1, 5), (2, 4)),
    ((1, 6), (2, 5)),
    ((2, 5), (3, 4)),
    ((2, 6), (3, 5)),
    ((1, 1), (0, 2)),
    ((2, 2), (1, 3)),
    ((5, 5), (4, 6)),
    ((0, 3), (1, 2)),
)


@dataclass(frozen=True)
class QuadricSystem:
    field: GF
    forms: tuple = QUADRICS

    def values(self, v: Sequence[int]) -> list[int]:
        F = self.field
        return [F.sub(F.mul(v[i], v[j]), F.mul(v[k], v[l])) for (i, j), (k, l) in self.forms]

    def vanishes(self, v: Sequence[int]) -> bool:
        return not any(self.values(v))

    def vanish_mask(self, X: np.ndarray) -> np.ndarray:
        """Rows of X (shape (m, 7)) on which every form vanishes."""
        F = self.field
        ok = np.ones(len(X), dtype=bool)
        for (i, j), (k, l) in self.forms:
            ok &= F.np_mul(X[:, i], X[:, j]) == F.np_mul(X[:, k], X[:, l])
        return ok


@dataclass(frozen=True)
class ScrollPoint:
    theta: Param
    t: Param
    coords: ProjPoint


class RuledQuinticSurface:
    """A scroll given by one conic point and one cubic point per generator.

    ``conic_lifts[theta]`` and ``cubic_lifts[theta]`` are vectors of PG(6, q);
    the generator with parameter theta joins them, and its point with
    parameter t is ``cubic + t * conic`` (t = INF gives the conic point).
    ``from_canonical`` is a homography carrying the canonical surface onto
    this one; it is computed on demand when not supplied.
    """

    def __init__(
        self,
        F: GF,
        conic_lifts: dict,
        cubic_lifts: dict,
        *,
        projectivity: Sequence[Sequence[int]] | None = None,
        from_canonical: Sequence[Sequence[int]] | None = None,
        frames: tuple | None = None,
        canonical: bool = False,
    ):
        self.field = F
        self.q = F.order
        self.params = params(F)
        self.conic_lifts = {th: tuple(conic_lifts[th]) for th in self.params}
        self.cubic_lifts = {th: tuple(cubic_lifts[th]) for th in self.params}
        self.projectivity = tuple(map(tuple, projectivity)) if projectivity is not None else ((1, 0), (0, 1))
        self._from_canonical = [list(r) for r in from_canonical] if from_canonical is not None else None
        self.frames = frames
        self.is_canonical = canonical

    # -- structure ---------------------------------------------------------------

    @cached_property
    def alpha(self) -> Subspace:
        return span([list(v) for v in self.conic_lifts.values()], field=self.field)

    @cached_property
    def pi3(self) -> Subspace:
        return span([list(v) for v in self.cubic_lifts.values()], field=self.field)

    @cached_property
    def conic(self) -> list[ProjPoint]:
        return [ProjPoint.of(self.field, self.conic_lifts[th]) for th in self.params]

    @cached_property
    def cubic_directrix(self) -> list[ProjPoint]:
        return [ProjPoint.of(self.field, self.cubic_lifts[th]) for th in self.params]

    def generator(self, theta: Param) -> Subspace:
        return span([list(self.cubic_lifts[theta]), list(self.conic_lifts[theta])], field=self.field)

    @cached_property
    def generators(self) -> dict:
        return {th: self.generator(th) for th in self.params}

    def point(self, theta: Param, t: Param) -> ProjPoint:
        F = self.field
        if t == INF:
            return ProjPoint.of(F, self.conic_lifts[theta])
        n, c = self.cubic_lifts[theta], self.conic_lifts[theta]
        return ProjPoint.of(F, [F.add(a, F.mul(t, b)) for a, b in zip(n, c)])

    @cached_property
    def grid(self) -> dict:
        """(theta, t) -> point."""
        return {(th, t): self.point(th, t) for th in self.params for t in self.params}

    @cached_property
    def points(self) -> frozenset:
        return frozenset(self.grid.values())

    @cached_property
    def index(self) -> dict:
        """point -> (theta, t)."""
        out = {}
        for key, P in self.grid.items():
            if P in out:
                raise InternalInconsistency(f"{P} lies on two generators")
            out[P] = key
        return out

    def scroll_point(self, theta: Param, t: Param) -> ScrollPoint:
        return ScrollPoint(theta, t, self.grid[(theta, t)])

    @cached_property
    def lift_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Cubic and conic lifts as (q+1, 7) arrays in parameter order."""
        N = np.array([self.cubic_lifts[th] for th in self.params], dtype=np.int64)
        C = np.array([self.conic_lifts[th] for th in self.params], dtype=np.int64)
        return N, C

    def validate(self) -> "RuledQuinticSurface":
        """Check the defining invariants; returns self."""
        q = self.q
        if self.alpha.dim != 2 or self.pi3.dim != 3:
            raise FrameError("directrix spaces have the wrong dimension")
        if not meet(self.alpha, self.pi3).is_empty():
            raise FrameError("the conic plane meets the cubic 3-space")
        if len(self.points) != (q + 1) ** 2:
            raise InternalInconsistency(f"{len(self.points)} points, expected {(q + 1) ** 2}")
        self.index
        if span(list(self.points)).dim != 6:
            raise InternalInconsistency("surface lies in a hyperplane")
        return self

    # -- coordinates ---------------------------------------------------------------

    @property
    def from_canonical(self) -> linalg.Matrix:
        if self._from_canonical is None:
            self._from_canonical = equivalence_map(canonical_scroll(self.field), self)
        return self._from_canonical

    @cached_property
    def to_canonical(self) -> linalg.Matrix:
        return linalg.inverse(self.from_canonical, self.field)

    @cached_property
    def quadrics(self) -> QuadricSystem:
        return QuadricSystem(self.field)

    def contains(self, P: ProjPoint | Sequence[int]) -> bool:
        """Ten-quadric membership test (after moving to canonical coordinates)."""
        coords = P.coords if isinstance(P, ProjPoint) else tuple(P)
        if not self.is_canonical:
            coords = linalg.matvec(self.to_canonical, coords, self.field)
        return self.quadrics.vanishes(coords)

    def __contains__(self, P) -> bool:
        return self.contains(P)

    def to_json(self, with_points: bool = False) -> dict:
        if self.frames is not None:
            conic_frame, cubic_frame = self.frames
            phi = self.projectivity
        else:
            M = self.from_canonical
            cols = linalg.transpose(M)
            cubic_frame, conic_frame = cols[:4], cols[4:]
            phi = ((1, 0), (0, 1))
        out = {
            "field": self.field.spec.to_json(),
            "conic_frame": [list(c) for c in conic_frame],
            "cubic_frame": [list(c) for c in cubic_frame],
            "projectivity": [list(r) for r in phi],
        }
        if with_points:
            out["points"] = sorted(list(P.coords) for P in self.points)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "RuledQuinticSurface":
        from .gf import FieldSpec, _field_from_spec

        F = _field_from_spec(FieldSpec.from_json(data["field"]))
        return scroll_from_frames(F, data["conic_frame"], data["cubic_frame"], data["projectivity"])


# -- constructors ------------------------------------------------------------------

CANONICAL_CONIC_FRAME = [[0, 0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 0, 1]]
CANONICAL_CUBIC_FRAME = [[1, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 0]]


def _check_field(F: GF) -> None:
    if F.order < MIN_Q:
        raise FieldTooSmallError(f"q = {F.order} is below the supported minimum {MIN_Q}")


def canonical_scroll(F: GF | int) -> RuledQuinticSurface:
    if isinstance(F, int):
        F = field_of_order(F)
    _check_field(F)
    return _canonical_cached(F)


_CANONICAL: dict = {}


def _canonical_cached(F: GF) -> RuledQuinticSurface:
    if F not in _CANONICAL:
        conic, cubic = {}, {}
        for th in params(F):
            x, y = lift(th)
            conic[th] = [0, 0, 0, 0] + veronese(F, x, y, 2)
            cubic[th] = veronese(F, x, y, 3) + [0, 0, 0]
        _CANONICAL[F] = RuledQuinticSurface(
            F,
            conic,
            cubic,
            from_canonical=linalg.identity(7),
            frames=(CANONICAL_CONIC_FRAME, CANONICAL_CUBIC_FRAME),
            canonical=True,
        )
    return _CANONICAL[F]


def scroll_from_frames(
    F: GF,
    conic_frame: Sequence[Sequence[int]],
    cubic_frame: Sequence[Sequence[int]],
    phi: Sequence[Sequence[int]] = ((1, 0), (0, 1)),
) -> RuledQuinticSurface:
    """Scroll joining conic_frame . (x^2, xy, y^2) to cubic_frame . veronese3(phi (x, y)).

    ``conic_frame`` is a list of three vectors of length 7 (images of the
    monomials x^2, xy, y^2) and ``cubic_frame`` a list of four.
    """
    _check_field(F)
    if len(conic_frame) != 3 or len(cubic_frame) != 4:
        raise FrameError("need 3 conic frame vectors and 4 cubic frame vectors")
    if linalg.rank(conic_frame, F) != 3:
        raise FrameError("degenerate conic frame")
    if linalg.rank(cubic_frame, F) != 4:
        raise FrameError("degenerate cubic frame")
    if linalg.rank(list(conic_frame) + list(cubic_frame), F) != 7:
        raise FrameError("the conic plane meets the cubic 3-space")
    det = F.sub(F.mul(phi[0][0], phi[1][1]), F.mul(phi[0][1], phi[1][0]))
    if det == 0:
        raise FrameError("singular projectivity")
    S3 = sym_power(phi, 3, F)
    conic, cubic = {}, {}
    for th in params(F):
        x, y = lift(th)
        conic[th] = linalg.combine(veronese(F, x, y, 2), conic_frame, F)
        cubic[th] = linalg.combine(linalg.matvec(S3, veronese(F, x, y, 3), F), cubic_frame, F)
    # canonical -> this: e_i (i < 4) goes to cubic_frame . S3 e_i, e_(4+j) to conic_frame[j]
    cols = [linalg.combine([S3[j][i] for j in range(4)], cubic_frame, F) for i in range(4)]
    cols += [list(v) for v in conic_frame]
    M = linalg.transpose(cols)
    V = RuledQuinticSurface(
        F,
        conic,
        cubic,
        projectivity=phi,
        from_canonical=M,
        frames=([list(v) for v in conic_frame], [list(v) for v in cubic_frame]),
    )
    return V.validate()


def image_scroll(V: RuledQuinticSurface, M: Sequence[Sequence[int]]) -> RuledQuinticSurface:
    """Image of V under the homography M."""
    F = V.field
    conic = {th: linalg.matvec(M, v, F) for th, v in V.conic_lifts.items()}
    cubic = {th: linalg.matvec(M, v, F) for th, v in V.cubic_lifts.items()}
    return RuledQuinticSurface(F, conic, cubic, from_canonical=linalg.matmul(M, V.from_canonical, F)).validate()


# -- twisted cubics ------------------------------------------------------------------

def _require_canonical(V: RuledQuinticSurface) -> None:
    if not V.is_canonical:
        raise ValueError("operation defined in canonical coordinates only")


def cross_section(V: RuledQuinticSurface, e: int, f: int) -> list[ProjPoint]:
    """The twisted cubic {V(theta, e theta + f)} of the canonical surface, in parameter order."""
    _require_canonical(V)
    F = V.field
    out = []
    for th in V.params:
        x, y = lift(th)
        z = F.add(F.mul(e, y), F.mul(f, x))
        out.append(ProjPoint.of(F, veronese(F, x, y, 3) + [F.mul(z, m) for m in veronese(F, x, y, 2)]))
    return out


def twisted_cubics(V: RuledQuinticSurface) -> dict:
    """(e, f) -> the q+1 points of the corresponding twisted cubic of V.

    For a non-canonical surface the canonical family is carried over by
    ``from_canonical``; the labels (e, f) then refer to canonical coordinates.
    """
    F = V.field
    W = canonical_scroll(F)
    out = {}
    for e in range(F.order):
        for f in range(F.order):
            pts = cross_section(W, e, f)
            if not V.is_canonical:
                pts = [ProjPoint.of(F, linalg.matvec(V.from_canonical, P.coords, F)) for P in pts]
            out[(e, f)] = pts
    return out


def unique_cubic_through(V: RuledQuinticSurface, P: ScrollPoint, Q: ScrollPoint) -> tuple[tuple[int, int], list[ProjPoint]]:
    """The twisted cubic through two points on distinct generators, off the conic.

    Solved directly from t = e theta + f (t = e on the generator at
    infinity), then confirmed unique by scanning all q^2 cubics.
    """
    if P.theta == Q.theta:
        raise ValueError("points on the same generator")
    if P.t == INF or Q.t == INF:
        raise ValueError("point on the conic directrix")
    F = V.field
    if V.is_canonical:
        cP, cQ = (P.theta, P.t), (Q.theta, Q.t)
    else:
        W = canonical_scroll(F)
        cP = W.index[ProjPoint.of(F, linalg.matvec(V.to_canonical, P.coords.coords, F))]
        cQ = W.index[ProjPoint.of(F, linalg.matvec(V.to_canonical, Q.coords.coords, F))]
    rows, rhs = [], []
    for th, t in (cP, cQ):
        rows.append([1, 0] if th == INF else [th, 1])
        rhs.append(t)
    e, f = linalg.solve(rows, rhs, F)
    family = twisted_cubics(V)
    hits = [k for k, pts in family.items() if P.coords in pts and Q.coords in pts]
    if hits != [(e, f)]:
        raise InternalInconsistency(f"cubics through {P}, {Q}: {hits}, solved {(e, f)}")
    return (e, f), family[(e, f)]


# -- projective equivalence ------------------------------------------------------------

def equivalence_map(V1: RuledQuinticSurface, V2: RuledQuinticSurface) -> linalg.Matrix:
    """A 7x7 matrix carrying the points of V1 onto the points of V2.

    Three generators of V1 (parameters 0, 1, infinity) are sent to three
    generators of V2; a fourth conic point fixes the induced projectivity,
    which then determines the cubic frame.  The result is verified pointwise.
    """
    F = V1.field
    if V2.field is not F:
        raise FieldError("surfaces over different fields")
    s = [0, 1, INF, 2, 3]
    t = V2.params
    targets = [t[0], t[1], INF]
    c1 = {th: list(v) for th, v in V1.conic_lifts.items()}
    n1 = {th: list(v) for th, v in V1.cubic_lifts.items()}
    c2 = {th: list(v) for th, v in V2.conic_lifts.items()}
    n2 = {th: list(v) for th, v in V2.cubic_lifts.items()}
    conic2 = {ProjPoint.of(F, v): th for th, v in c2.items()}
    for g in t:
        if g in targets:
            continue
        conic_imgs = frame_images([c1[x] for x in s[:4]], [c2[y] for y in targets + [g]], F)
        if conic_imgs is None:
            continue
        basis_c = [c1[x] for x in s[:3]]
        # induced correspondence of generators
        corr = {}
        for th in V1.params:
            coeff = express(basis_c, c1[th], F)
            img = linalg.combine(coeff, conic_imgs, F)
            P = ProjPoint.of(F, img)
            if P not in conic2:
                corr = None
                break
            corr[th] = conic2[P]
        if corr is None or len(set(corr.values())) != len(corr):
            continue
        cubic_imgs = frame_images([n1[x] for x in s], [n2[corr[x]] for x in s], F)
        if cubic_imgs is None:
            continue
        B = linalg.transpose(basis_c + [n1[x] for x in s[:4]])
        D = linalg.transpose(conic_imgs + cubic_imgs)
        try:
            M = linalg.matmul(D, linalg.inverse(B, F), F)
        except ZeroDivisionError:
            continue
        if all(ProjPoint.of(F, linalg.matvec(M, P.coords, F)) in V2.points for P in V1.points):
            return M
    raise InternalInconsistency("no homography between the two surfaces")


# -- even characteristic ---------------------------------------------------------------

def tangent_lines(V: RuledQuinticSurface) -> dict:
    """theta -> the tangent line of the conic directrix at C(theta), found by search in alpha."""
    conic = set(V.conic)
    plane_pts = list(V.alpha.points())
    out = {}
    for th, P in zip(V.params, V.conic):
        for R in plane_pts:
            if R == P:
                continue
            line = span(P, R)
            if not any(line.contains(X) for X in conic if X != P):
                out[th] = line
                break
        else:  # pragma: no cover
            raise InternalInconsistency(f"no tangent at {P}")
    return out


def nucleus_of_conic(V: RuledQuinticSurface) -> ProjPoint:
    """Common point of all tangents of the conic directrix (q even only)."""
    if V.field.p != 2:
        raise ValueError("the conic has a nucleus only in even characteristic")
    tangents = list(tangent_lines(V).values())
    common = meet(tangents[0], tangents[1])
    for T in tangents[2:]:
        common = meet(common, T)
    if common.dim != 0:
        raise InternalInconsistency("tangents are not concurrent")
    return ProjPoint(V.field, common.basis[0])


def quadric_zero_set(F: GF) -> set:
    """Every point of PG(6, q) on which all ten quadrics vanish (exhaustive)."""
    X = all_point_coords(6, F)
    mask = QuadricSystem(F).vanish_mask(X)
    return {ProjPoint(F, tuple(int(x) for x in row)) for row in X[mask]}
