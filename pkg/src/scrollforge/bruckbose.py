"""The Bruck-Bose model of PG(2, q^3) in PG(6, q) and the scroll of a tangent subplane.

Coordinates on PG(6, q) are (phi(x), phi(y), x6) where phi expands an
element of GF(q^3) over the basis {1, w, w^2}.  The hyperplane at infinity
is x6 = 0, and the spread plane of (a : b) in PG(1, q^3) consists of the
points (phi(l a), phi(l b), 0) for l in GF(q^3)^*.  An affine point
(x : y : 1) of PG(2, q^3) goes to (phi(x), phi(y), 1).

Points of PG(1, q^3) and PG(2, q^3) are tuples of extension-field codes,
normalized with first nonzero entry one.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .errors import InternalInconsistency
from .gf import FieldTower, GF, make_tower
from .projgeom import Hyperplane, ProjPoint, Subspace, meet, normalize, span
from .scroll import INF, RuledQuinticSurface, lift, veronese
from .sections import classify_batch, is_nrc, tally

ExtPoint = tuple[int, ...]


def ext_normalize(v: Sequence[int], E: GF) -> ExtPoint:
    return normalize(list(v), E)


@dataclass(frozen=True, eq=False)
class RegularSpread:
    tower: FieldTower
    keys: tuple  # points (a : b) of PG(1, q^3)
    planes: dict  # key -> Subspace of PG(6, q)

    @property
    def base(self) -> GF:
        return self.tower.base

    @property
    def sigma_inf(self) -> Hyperplane:
        return Hyperplane(self.base, (0, 0, 0, 0, 0, 0, 1))

    @property
    def alpha_key(self) -> ExtPoint:
        return (1, 0)

    def phi(self, z: int) -> list[int]:
        return list(self.tower.coords(z))

    def plane_basis(self, key: Sequence[int]) -> list[list[int]]:
        T, E = self.tower, self.tower.ext
        a, b = key
        out = []
        for lam in (1, T.omega, E.mul(T.omega, T.omega)):
            out.append(self.phi(E.mul(lam, a)) + self.phi(E.mul(lam, b)) + [0])
        return out

    def key_of_point(self, vec: Sequence[int]) -> ExtPoint:
        """The spread plane containing a point of the hyperplane at infinity."""
        if vec[6]:
            raise ValueError("affine point")
        u = self.tower.from_coords(vec[0:3])
        v = self.tower.from_coords(vec[3:6])
        return ext_normalize((u, v), self.tower.ext)

    def partition_check(self) -> dict:
        """Plane count, points per plane, and whether the planes tile the hyperplane at infinity."""
        seen = set()
        sizes = set()
        total = 0
        for key in self.keys:
            pts = [P.coords for P in self.planes[key].points()]
            sizes.add(len(pts))
            total += len(pts)
            for c in pts:
                if self.key_of_point(c) != key:
                    raise InternalInconsistency(f"point {c} of plane {key} resolves elsewhere")
            seen.update(pts)
        q = self.base.order
        expected = (q**6 - 1) // (q - 1)
        return {
            "planes": len(self.keys),
            "points_per_plane": sorted(sizes),
            "covered": len(seen),
            "expected": expected,
            "partition": total == len(seen) == expected and all(P[6] == 0 for P in seen),
        }


def pg1_points(E: GF) -> list[ExtPoint]:
    return [(1, b) for b in range(E.order)] + [(0, 1)]


def build_spread(tower: FieldTower | int) -> RegularSpread:
    if isinstance(tower, int):
        tower = make_tower(tower)
    keys = tuple(pg1_points(tower.ext))
    S = RegularSpread(tower, keys, {})
    for key in keys:
        S.planes[key] = Subspace.from_vectors(tower.base, 6, S.plane_basis(key))
    return S


# -- affine correspondence ---------------------------------------------------------------

def affine_correspondence(spread: RegularSpread, P: Sequence[int]) -> ProjPoint:
    E = spread.tower.ext
    P = ext_normalize(P, E)
    if P[2] == 0:
        raise ValueError("point on the line at infinity")
    x, y = (E.div(P[0], P[2]), E.div(P[1], P[2]))
    return ProjPoint.of(spread.base, spread.phi(x) + spread.phi(y) + [1])


def line_at_infinity_point(line: Sequence[int], E: GF) -> ExtPoint:
    l0, l1, l2 = line
    if l0 == 0 and l1 == 0:
        raise ValueError("the line at infinity has no affine part")
    return ext_normalize((l1, E.neg(l0)), E)


def affine_points_on(line: Sequence[int], E: GF, count: int | None = None) -> list[ExtPoint]:
    """Affine points (x : y : 1) of a line l0 x + l1 y + l2 = 0."""
    l0, l1, l2 = line
    out = []
    for s in range(E.order):
        if l1:
            x = s
            y = E.div(E.neg(E.add(E.mul(l0, x), l2)), l1)
        else:
            y = s
            x = E.div(E.neg(l2), l0)
        out.append((x, y, 1))
        if count is not None and len(out) == count:
            break
    return out


def line_correspondence(spread: RegularSpread, line: Sequence[int]) -> Subspace:
    """3-space of PG(6, q) for a line of PG(2, q^3) other than the line at infinity."""
    E = spread.tower.ext
    key = line_at_infinity_point(line, E)
    pts = [affine_correspondence(spread, P) for P in affine_points_on(line, E, 2)]
    return span(spread.planes[key], *pts)


# -- transversals -------------------------------------------------------------------------

@dataclass(frozen=True)
class TransversalTriple:
    u: tuple
    lines: tuple  # three Subspaces of PG(5, q^3)

    @property
    def g(self) -> Subspace:
        return self.lines[0]


def _frob_vec(T: FieldTower, v: Sequence[int]) -> list[int]:
    return [T.frobenius(x) for x in v]


def extended_plane(spread: RegularSpread, key: Sequence[int]) -> Subspace:
    """The spread plane as a subspace of PG(5, q^3) (coordinates x0..x5)."""
    T = spread.tower
    rows = [[T.embed(x) for x in row[:6]] for row in spread.plane_basis(key)]
    return Subspace.from_vectors(T.ext, 5, rows)


@dataclass(frozen=True, eq=False)
class TransversalCheck:
    triple: TransversalTriple
    meets_every_plane: bool
    conjugate: bool
    u_not_rational: bool
    survivors: int
    survivors_match: bool

    @property
    def ok(self) -> bool:
        return self.meets_every_plane and self.conjugate and self.u_not_rational and self.survivors == 3 and self.survivors_match


def transversals(spread: RegularSpread) -> TransversalTriple:
    """g = {(a u, b u)} with u the basis dual to {1, w, w^2}, and its two conjugates."""
    T = spread.tower
    E = T.ext
    A = []
    w = T.omega
    for j in range(3):
        wj = w
        for _ in range(j):
            wj = T.frobenius(wj)
        A.append([1, wj, E.mul(wj, wj)])
    try:
        u = linalg.solve(A, [1, 0, 0], E)
    except ZeroDivisionError as exc:
        raise InternalInconsistency("singular Vandermonde system") from exc
    lines = []
    v = list(u)
    for _ in range(3):
        lines.append(Subspace.from_vectors(E, 5, [v + [0, 0, 0], [0, 0, 0] + v]))
        v = _frob_vec(T, v)
    return TransversalTriple(tuple(u), tuple(lines))


def candidate_directions(spread: RegularSpread) -> list[ExtPoint]:
    """Every v in PG(2, q^3) whose line {(a v, b v)} meets the planes (1:0), (0:1), (1:1) and (1:w).

    Lines meeting the first three planes are exactly these; meeting (1 : w)
    means v is an eigenvector of multiplication by w in phi-coordinates.
    """
    T = spread.tower
    E = T.ext
    qq = E.order
    # multiplication by w on phi-coordinates, embedded in the extension
    M = [[0] * 3 for _ in range(3)]
    wpow = [1, T.omega, E.mul(T.omega, T.omega)]
    for j in range(3):
        col = T.coords(E.mul(T.omega, wpow[j]))
        for i in range(3):
            M[i][j] = T.embed(col[i])
    out = []
    for lead in range(3):
        width = 2 - lead
        n = qq**width
        idx = np.arange(n, dtype=np.int64)
        V = np.zeros((n, 3), dtype=np.int64)
        V[:, lead] = 1
        for j in range(2, lead, -1):
            V[:, j] = idx % qq
            idx //= qq
        W = np.zeros_like(V)
        for i in range(3):
            acc = np.zeros(n, dtype=np.int64)
            for j in range(3):
                acc = E.np_add(acc, E.np_mul(np.full(n, M[i][j]), V[:, j]))
            W[:, i] = acc
        par = np.ones(n, dtype=bool)
        for i, j in ((0, 1), (0, 2), (1, 2)):
            par &= E.np_mul(V[:, i], W[:, j]) == E.np_mul(V[:, j], W[:, i])
        out.extend(tuple(int(x) for x in row) for row in V[par])
    return out


def check_transversals(spread: RegularSpread) -> TransversalCheck:
    T = spread.tower
    E = T.ext
    trip = transversals(spread)
    planes = [extended_plane(spread, k) for k in spread.keys]
    meets = all(meet(g, P).dim == 0 for g in trip.lines for P in planes)
    g3 = Subspace.from_vectors(E, 5, [_frob_vec(T, r) for r in trip.lines[2].basis])
    conj = g3 == trip.lines[0] and len(set(trip.lines)) == 3
    rational = _frob_vec(T, trip.u) == list(trip.u)
    survivors = candidate_directions(spread)
    lines = []
    for v in survivors:
        L = Subspace.from_vectors(E, 5, [list(v) + [0, 0, 0], [0, 0, 0] + list(v)])
        if all(meet(L, P).dim == 0 for P in planes):
            lines.append(L)
    match = set(lines) == set(trip.lines)
    return TransversalCheck(trip, meets, conj, not rational, len(survivors), match)


# -- the tangent subplane --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SubplaneEmbedding:
    tower: FieldTower
    points: tuple  # the q^2+q+1 points of B
    tangent_point: ExtPoint
    affine_map: dict  # affine point of B -> ProjPoint of PG(6, q)
    scroll: RuledQuinticSurface | None

    @property
    def affine_points(self) -> list[ExtPoint]:
        return [P for P in self.points if P[2] != 0]


def standard_to_subplane(T: FieldTower, x: int, y: int, z: int) -> ExtPoint:
    """Image of a point of the standard subplane PG(2, q) under (x, y, z) -> (z, y, x + w y)."""
    E = T.ext
    ex, ey, ez = T.embed(x), T.embed(y), T.embed(z)
    return ext_normalize((ez, ey, E.add(ex, E.mul(T.omega, ey))), E)


def standard_points(q: int) -> Iterator[tuple[int, int, int]]:
    for lead in range(3):
        for tail in np.ndindex(*([q] * (2 - lead))):
            yield tuple([0] * lead + [1] + list(tail))


def standard_lines_through_origin(F: GF) -> dict:
    """(x0 : y0) -> points of the standard line joining (0:0:1) and (x0:y0:0)."""
    out = {}
    for th in [*range(F.order), INF]:
        x0, y0 = lift(th)
        pts = [(x0, y0, 0)] + [(F.mul(s, x0), F.mul(s, y0), 1) for s in range(F.order)]
        out[th] = pts
    return out


def tangent_subplane(tower: FieldTower | int) -> SubplaneEmbedding:
    if isinstance(tower, int):
        tower = make_tower(tower)
    q = tower.q
    pts = tuple(standard_to_subplane(tower, *P) for P in standard_points(q))
    return SubplaneEmbedding(tower, pts, (1, 0, 0), {}, None)


def subplane_profile(emb: SubplaneEmbedding) -> Counter:
    """How many points of B lie on each line through two of its points."""
    E = emb.tower.ext
    pts = list(emb.points)
    lines = set()
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            lines.add(ext_normalize(_cross(pts[i], pts[j], E), E))
    profile = Counter()
    for L in lines:
        profile[sum(1 for P in pts if _dot(L, P, E) == 0)] += 1
    return profile


def _cross(a, b, E: GF) -> list[int]:
    return [
        E.sub(E.mul(a[1], b[2]), E.mul(a[2], b[1])),
        E.sub(E.mul(a[2], b[0]), E.mul(a[0], b[2])),
        E.sub(E.mul(a[0], b[1]), E.mul(a[1], b[0])),
    ]


def _dot(a, b, E: GF) -> int:
    return E.dot(a, b)


def subplane_to_scroll(spread: RegularSpread, emb: SubplaneEmbedding) -> SubplaneEmbedding:
    """The point set of PG(6, q) coming from B, as a ruled quintic surface.

    The subline of B joining T to the image of (x0 : y0 : 0) becomes the
    line through the conic point (phi(m), 0, 0) and the affine points
    (phi(z m), phi(y0 m), 1), z in GF(q), where m = 1/(x0 + w y0).  The
    affine points with z = 0 come from the subline x6 = 0 of the standard
    plane and give the cubic directrix.
    """
    T = spread.tower
    E, F = T.ext, T.base
    conic, cubic = {}, {}
    for th in [*range(F.order), INF]:
        x0, y0 = lift(th)
        m = E.inv(E.add(T.embed(x0), E.mul(T.omega, T.embed(y0))))
        conic[th] = spread.phi(m) + [0, 0, 0, 0]
        cubic[th] = [0, 0, 0] + spread.phi(E.mul(T.embed(y0), m)) + [1]
    V = RuledQuinticSurface(F, conic, cubic).validate()
    amap = {P: affine_correspondence(spread, P) for P in emb.points if P[2] != 0}
    if len(set(amap.values())) != len(amap):
        raise InternalInconsistency("affine map is not injective")
    closure = V.points - set(amap.values())
    if set(amap.values()) - V.points:
        raise InternalInconsistency("an affine point of B misses the scroll")
    if closure != set(V.conic):
        raise InternalInconsistency("points at infinity are not the conic directrix")
    if not is_nrc(V.conic, 2, F) or not all(spread.planes[spread.alpha_key].contains(P) for P in V.conic):
        raise InternalInconsistency("closure is not a conic in the spread plane of T")
    return SubplaneEmbedding(T, emb.points, emb.tangent_point, amap, V)


def sublines(emb: SubplaneEmbedding) -> dict:
    """Every line of B: dual coordinates -> its q+1 points."""
    T = emb.tower
    E, F = T.ext, T.base
    out = {}
    for d in standard_points(F.order):
        pts = [P for P in standard_points(F.order) if F.dot(d, P) == 0]
        img = [standard_to_subplane(T, *P) for P in pts]
        L = ext_normalize(_cross(img[0], img[1], E), E)
        out[L] = img
    return out


@dataclass(frozen=True)
class Splash:
    planes: frozenset  # keys of spread planes
    alpha: ExtPoint


def splash_of(spread: RegularSpread, emb: SubplaneEmbedding) -> Splash:
    E = spread.tower.ext
    keys = {line_at_infinity_point(L, E) for L in sublines(emb)}
    return Splash(frozenset(keys), spread.alpha_key)


def subline_cubics(spread: RegularSpread, emb: SubplaneEmbedding) -> dict:
    """Spread-plane key -> image of the subline of B through that point at infinity (not through T)."""
    E = spread.tower.ext
    out = {}
    for L, pts in sublines(emb).items():
        if emb.tangent_point in pts:
            continue
        key = line_at_infinity_point(L, E)
        if key in out:
            raise InternalInconsistency(f"two sublines share the point {key} at infinity")
        out[key] = [emb.affine_map[P] for P in pts]
    return out


# -- incidence profiles ---------------------------------------------------------------------

def _quotient_key(F: GF, ann: Sequence[Sequence[int]], P: ProjPoint) -> tuple[int, ...]:
    """Label of the subspace <pi, P>, where ann spans the duals vanishing on pi."""
    return normalize([F.dot(a, P.coords) for a in ann], F)


def classify_3spaces_about(spread: RegularSpread, V: RuledQuinticSurface, key: Sequence[int]) -> dict:
    """Profile of the q^3 affine 3-spaces through a spread plane other than the conic plane.

    Each affine point P lies in exactly one 3-space <pi, P>; grouping the
    affine points of V by that 3-space gives every intersection size.
    """
    key = tuple(key)
    if key == spread.alpha_key:
        raise ValueError("3-spaces about the conic plane are not covered")
    F = spread.base
    pi = spread.planes[key]
    ann = pi.annihilator()
    groups: dict = {}
    for P in V.points:
        if P.coords[6]:
            groups.setdefault(_quotient_key(F, ann, P), []).append(P)
    q = F.order
    profile = Counter()
    for pts in groups.values():
        if len(pts) <= 1:
            profile["at_most_one"] += 1
        elif len(pts) == q + 1 and is_nrc(pts, 3, F):
            profile["twisted_cubic"] += 1
        else:
            profile[f"points_{len(pts)}"] += 1
    profile["at_most_one"] += q**3 - len(groups)
    return dict(profile)


def alpha_lines(spread: RegularSpread) -> list[tuple[int, int, int]]:
    """Lines of the conic plane x3 = .. = x6 = 0, as duals on (x0, x1, x2)."""
    return list(standard_points(spread.base.order))


def plane_line_duals(spread: RegularSpread, key: Sequence[int]) -> np.ndarray:
    """Duals of the q hyperplanes other than x6 = 0 through <pi, l> for every line l of the conic plane.

    Shape (lines, q, 7), lines in :func:`alpha_lines` order.
    """
    F = spread.base
    pi = spread.planes[tuple(key)]
    # basis of ann(pi) with vanishing x6 coefficient
    A = [row for row in linalg.nullspace(list(pi.basis) + [[0, 0, 0, 0, 0, 0, 1]], F, 7)]
    if len(A) != 3:
        raise InternalInconsistency("spread plane meets the conic plane")
    Aa = [row[:3] for row in A]
    inv = linalg.inverse(linalg.transpose(Aa), F)  # d = A_alpha^T w  ->  w = inv d
    q = F.order
    out = []
    for d in alpha_lines(spread):
        w = linalg.matvec(inv, d, F)
        h = linalg.combine(w, A, F)
        out.append([h[:6] + [c] for c in range(q)])
    return np.array(out, dtype=np.int64)


def classify_5spaces_plane_line(spread: RegularSpread, V: RuledQuinticSurface, key: Sequence[int], line: Sequence[int] | None = None) -> list[dict]:
    """Section profile of the q affine hyperplanes through <pi, l>, per line l of the conic plane."""
    key = tuple(key)
    if key == spread.alpha_key:
        raise ValueError("pi must differ from the conic plane")
    F = spread.base
    lines = alpha_lines(spread)
    D = plane_line_duals(spread, key)
    if line is not None:
        line = tuple(normalize(list(line), F))
        if line not in lines:
            raise ValueError("not a line of the conic plane")
        sel = [lines.index(line)]
    else:
        sel = list(range(len(lines)))
    conic_alpha = [P.coords[:3] for P in V.conic]
    flat = D[sel].reshape(-1, 7)
    b = classify_batch(V, flat)
    q = F.order
    out = []
    for j, li in enumerate(sel):
        d = lines[li]
        i = sum(1 for c in conic_alpha if F.dot(d, c) == 0)
        dims, gs = b.dim[j * q : (j + 1) * q], b.g[j * q : (j + 1) * q]
        prof = {k: v for k, v in tally(dims, gs).items() if v}
        out.append({"line": list(d), "i": i, "profile": prof})
    return out


def expected_plane_line_profile(q: int, in_splash: bool, i: int) -> dict:
    if in_splash:
        return {k: v for k, v in (("quintic", q - 1), (f"tc{i}", 1)) if v}
    return {k: v for k, v in (("quintic", q - i), ("quartic1", i)) if v}


def expected_3space_profile(q: int, in_splash: bool) -> dict:
    if in_splash:
        return {"twisted_cubic": 1, "at_most_one": q**3 - 1}
    return {"at_most_one": q**3}


# -- the extended scroll ----------------------------------------------------------------------

def extended_generators(V: RuledQuinticSurface, tower: FieldTower) -> dict:
    """theta in PG(1, q^3) -> generator of the scroll extended to PG(6, q^3)."""
    E = tower.ext
    M = [[tower.embed(x) for x in row] for row in V.from_canonical]
    out = {}
    for key in pg1_points(E):
        x, y = key
        N = veronese(E, x, y, 3) + [0, 0, 0]
        C = [0, 0, 0, 0] + veronese(E, x, y, 2)
        out[key] = Subspace.from_vectors(E, 6, [linalg.matvec(M, N, E), linalg.matvec(M, C, E)])
    return out


def transversals_are_generators(spread: RegularSpread, V: RuledQuinticSurface, triple: TransversalTriple) -> bool:
    gens = set(extended_generators(V, spread.tower).values())
    E = spread.tower.ext
    for g in triple.lines:
        L = Subspace.from_vectors(E, 6, [list(r) + [0] for r in g.basis])
        if L not in gens:
            return False
    return True


@dataclass(frozen=True, eq=False)
class BruckBoseModel:
    """Spread, subplane, scroll and splash for one q, built once."""

    spread: RegularSpread
    embedding: SubplaneEmbedding
    splash: Splash

    @property
    def scroll(self) -> RuledQuinticSurface:
        return self.embedding.scroll

    @cached_property
    def non_alpha_keys(self) -> list:
        return [k for k in self.spread.keys if k != self.spread.alpha_key]


_MODELS: dict = {}


def model(q: int) -> BruckBoseModel:
    if q not in _MODELS:
        spread = build_spread(q)
        emb = subplane_to_scroll(spread, tangent_subplane(spread.tower))
        _MODELS[q] = BruckBoseModel(spread, emb, splash_of(spread, emb))
    return _MODELS[q]


def plane_line_report(M: BruckBoseModel) -> dict:
    """Grouped outcomes of the plane-line theorem over every (pi, l) pair."""
    q = M.spread.base.order
    groups = Counter()
    failures = []
    for key in M.non_alpha_keys:
        kind = "splash" if key in M.splash.planes else "non-splash"
        for row in classify_5spaces_plane_line(M.spread, M.scroll, key):
            expect = expected_plane_line_profile(q, kind == "splash", row["i"])
            groups[(kind, row["i"], tuple(sorted(row["profile"].items())))] += 1
            if row["profile"] != expect:
                failures.append({"pi": list(key), "line": row["line"], "profile": row["profile"], "expected": expect})
    cases = [
        {"pi": kind, "i": i, "profile": dict(prof), "count": n}
        for (kind, i, prof), n in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2]))
    ]
    return {"theorem": "count-plane-line", "q": q, "cases": cases, "failures": failures}


def three_space_report(M: BruckBoseModel) -> dict:
    q = M.spread.base.order
    groups = Counter()
    failures = []
    for key in M.non_alpha_keys:
        kind = "splash" if key in M.splash.planes else "non-splash"
        prof = classify_3spaces_about(M.spread, M.scroll, key)
        groups[(kind, tuple(sorted(prof.items())))] += 1
        if prof != expected_3space_profile(q, kind == "splash"):
            failures.append({"pi": list(key), "profile": prof})
    cases = [{"pi": kind, "profile": dict(p), "count": n} for (kind, p), n in sorted(groups.items())]
    return {"theorem": "3space-profiles", "q": q, "cases": cases, "failures": failures}
