"""Exact Farey graph geometry on the rational projective line.

Vertices are reduced fractions p/q together with 1/0 (the point at
infinity); p/q and r/s span an edge iff |ps - rq| = 1.  Distances and
geodesics are computed by breadth-first search inside a finite hull
produced by Stern-Brocot mediant descent, so every value is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class EmptyIntervalError(ValueError):
    """Raised when a hull between two equal slopes is requested."""


@dataclass(frozen=True, order=True)
class Slope:
    """A vertex of the Farey graph: a reduced fraction p/q, or 1/0."""

    num: int
    den: int

    def __post_init__(self):
        if self.den < 0 or (self.den == 0 and self.num != 1):
            raise ValueError(f"non-canonical slope {self.num}/{self.den}")
        if gcd(abs(self.num), self.den) != 1 and not (self.num == 1 and self.den == 0):
            raise ValueError(f"unreduced slope {self.num}/{self.den}")

    @staticmethod
    def of(num, den):
        """Build a slope from any integer pair, reducing and fixing signs."""
        if den == 0:
            if num == 0:
                raise ValueError("0/0 is not a slope")
            return Slope(1, 0)
        if den < 0:
            num, den = -num, -den
        g = gcd(abs(num), den)
        return Slope(num // g, den // g)

    @staticmethod
    def parse(token: str) -> "Slope":
        num, _, den = token.partition("/")
        if not _:
            raise ValueError(f"bad slope token {token!r}")
        return Slope.of(int(num), int(den))

    def __str__(self):
        return f"{self.num}/{self.den}"


INFINITY = Slope(1, 0)
ZERO = Slope(0, 1)
ONE = Slope(1, 1)


def det(a: Slope, b: Slope) -> int:
    return a.num * b.den - b.num * a.den


def is_edge(a: Slope, b: Slope) -> bool:
    """True iff a and b span an edge of the Farey graph."""
    return abs(det(a, b)) == 1


def slope_intersection(kind: str, a: Slope, b: Slope) -> int:
    """Geometric intersection number of the curves of slopes a, b on a
    complexity-1 surface: |det| on the 1-holed torus, 2|det| on the
    4-holed sphere."""
    if kind == "torus1":
        return abs(det(a, b))
    if kind == "sphere4":
        return 2 * abs(det(a, b))
    raise ValueError(f"unknown complexity-1 kind {kind!r}")


def _unimodular_to_infinity(a: Slope):
    """An integer matrix M with det 1 sending a to 1/0, and its inverse."""
    p, q = a.num, a.den
    # extended gcd: find u, v with p*v - q*u = 1
    if q == 0:
        m = ((1, 0), (0, 1))
        return m, m
    g, x, y = _xgcd(p, q)
    assert g == 1
    v, u = x, -y  # p*v - q*u = p*x + q*y = 1
    fwd = ((v, -u), (-q, p))
    inv = ((p, u), (q, v))
    return fwd, inv


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _apply(m, s: Slope) -> Slope:
    (a, b), (c, d) = m
    return Slope.of(a * s.num + b * s.den, c * s.num + d * s.den)


def farey_hull(a: Slope, b: Slope) -> frozenset:
    """Vertices of all Farey triangles crossed by the line from a to b.

    Computed by moving a to 1/0 with a unimodular matrix and collecting
    every convergent and semiconvergent of the image of b; the result
    contains both endpoints and every geodesic between them (checked by
    the oracle test suite, not assumed here).
    """
    if a == b:
        raise EmptyIntervalError(f"empty interval: {a} = {b}")
    fwd, inv = _unimodular_to_infinity(a)
    target = _apply(fwd, b)
    verts = {Slope(1, 0), target}
    # Stern-Brocot descent from 1/0 toward target = x/y: walk the continued
    # fraction of x/y recording every intermediate (semi)convergent.
    x, y = target.num, target.den
    h_prev, k_prev = 1, 0  # the vertex we descend from
    h_cur, k_cur = None, None
    first = True
    while y != 0:
        q, r = divmod(x, y)
        if first:
            # steps 1/0 -> q/1 pass through every integer between 0 and q
            step = 1 if q >= 0 else -1
            j = 0
            while True:
                verts.add(Slope.of(j, 1))
                if j == q:
                    break
                j += step
            h_cur, k_cur = q, 1
            first = False
        else:
            # semiconvergents j*h_cur + h_prev for j = 1..q
            for j in range(1, q + 1):
                verts.add(Slope.of(j * h_cur + h_prev, j * k_cur + k_prev))
            h_prev, k_prev, h_cur, k_cur = h_cur, k_cur, q * h_cur + h_prev, q * k_cur + k_prev
        x, y = y, r
    return frozenset(_apply(inv, v) for v in verts)


def _hull_adjacency(hull):
    verts = sorted(hull)
    nbrs = {v: [] for v in verts}
    for i, v in enumerate(verts):
        for w in verts[i + 1:]:
            if is_edge(v, w):
                nbrs[v].append(w)
                nbrs[w].append(v)
    for v in nbrs:
        nbrs[v].sort()
    return nbrs


def farey_distance(a: Slope, b: Slope) -> int:
    """Length of a shortest edge path between a and b."""
    if a == b:
        return 0
    if is_edge(a, b):
        return 1
    dist, _ = _bfs_in_hull(a, b)
    return dist


def farey_geodesic(a: Slope, b: Slope) -> "FareyPath":
    """A distance-realising path from a to b, lexicographically least."""
    if a == b:
        return FareyPath((a,))
    if is_edge(a, b):
        return FareyPath((a, b))
    dist, levels = _bfs_in_hull(a, b)
    # walk from a to b, always picking the least vertex one level closer to b
    path = [a]
    cur = a
    for k in range(dist - 1, -1, -1):
        cur = min(w for w in levels[k] if is_edge(cur, w))
        path.append(cur)
    assert cur == b
    return FareyPath(tuple(path))


def _bfs_in_hull(a, b):
    """BFS from b inside farey_hull(a, b); returns (d(a,b), levels) where
    levels[k] is the set of hull vertices at distance k from b."""
    nbrs = _hull_adjacency(farey_hull(a, b))
    levels = [{b}]
    seen = {b}
    while a not in seen:
        frontier = set()
        for v in levels[-1]:
            for w in nbrs[v]:
                if w not in seen:
                    frontier.add(w)
        if not frontier:
            raise RuntimeError(f"hull of ({a}, {b}) is not connected")
        seen |= frontier
        levels.append(frontier)
    return len(levels) - 1, levels


@dataclass(frozen=True)
class FareyPath:
    """A path in the Farey graph: consecutive vertices span edges."""

    vertices: tuple

    def __post_init__(self):
        for u, v in zip(self.vertices, self.vertices[1:]):
            if u == v:
                raise ValueError(f"repeated vertex {u} in path")
            if not is_edge(u, v):
                raise ValueError(f"({u}, {v}) is not a Farey edge")

    def __len__(self):
        return len(self.vertices) - 1

    def __str__(self):
        return " ".join(str(v) for v in self.vertices)

    @staticmethod
    def parse(line: str) -> "FareyPath":
        return FareyPath(tuple(Slope.parse(tok) for tok in line.split()))
