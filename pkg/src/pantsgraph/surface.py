"""Curves on punctured surfaces via normal coordinates on ideal triangulations.

A multicurve is encoded by its crossing count with each edge of a fixed
base triangulation.  All operations are exact integer arithmetic:

  * flips replace the diagonal of a quadrilateral and transport weights
    by the tropical rule  w'(e) = max(w(a)+w(c), w(b)+w(d)) - w(e);
  * a curve is shortened by greedy weight-reducing flips until it crosses
    exactly two edges once each (it is then the core of an annulus made
    of the two adjacent triangles);
  * intersection numbers count the strands of the other curve crossing
    that annulus from one boundary circle to the other;
  * Dehn twists rewrap the annulus, applied in shortened position.

Conventions.  Triangle sides occupy slots 0, 1, 2 in counterclockwise
order; corner c sits between sides c and c+1; side s runs from corner
s-1 to corner s.  Crossing points on a side are numbered from its start
corner; the two sides of an edge list the same points in opposite order.
Normal arcs cutting corner c pair the last points of side c with the
first points of side c+1, innermost first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class InvalidWeightsError(ValueError):
    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(violations))


@dataclass(frozen=True, order=True)
class SurfaceKind:
    genus: int
    punctures: int

    @property
    def kappa(self):
        return 3 * self.genus + self.punctures - 3

    def __str__(self):
        return f"S_{{{self.genus},{self.punctures}}}"


TORUS_1 = SurfaceKind(1, 1)
SPHERE_4 = SurfaceKind(0, 4)
SPHERE_5 = SurfaceKind(0, 5)
TORUS_2 = SurfaceKind(1, 2)
SHIPPED = (TORUS_1, SPHERE_4, SPHERE_5, TORUS_2)


class Triangulation:
    """An ideal triangulation given as ccw edge-id triples, no self-folds."""

    __slots__ = ("triangles", "num_edges", "_sides", "_corner_vertex",
                 "_num_vertices", "_key", "_hash")

    def __init__(self, triangles):
        self.triangles = tuple(tuple(t) for t in triangles)
        occ = {}
        for t, tri in enumerate(self.triangles):
            if len(set(tri)) != 3:
                raise ValueError(f"self-folded triangle {tri}")
            for s, e in enumerate(tri):
                occ.setdefault(e, []).append((t, s))
        for e, sides in occ.items():
            if len(sides) != 2:
                raise ValueError(f"edge {e} has {len(sides)} sides")
        self.num_edges = len(occ)
        if set(occ) != set(range(self.num_edges)):
            raise ValueError("edge ids must be 0..E-1")
        self._sides = tuple(tuple(occ[e]) for e in range(self.num_edges))
        self._corner_vertex, self._num_vertices = self._vertex_classes()
        self._key = tuple(min(t[i:] + t[:i] for i in range(3)) for t in self.triangles)
        self._hash = hash(self._key)

    def _vertex_classes(self):
        # gluing (t,a)-(u,b) is orientation reversing: corner a-1 of t
        # meets corner b of u, corner a of t meets corner b-1 of u
        n = 3 * len(self.triangles)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in range(self.num_edges):
            (t, a), (u, b) = self._sides[e]
            for x, y in ((3 * t + (a - 1) % 3, 3 * u + b),
                         (3 * t + a, 3 * u + (b - 1) % 3)):
                parent[find(x)] = find(y)
        reps, labels = {}, [0] * n
        for i in range(n):
            r = find(i)
            labels[i] = reps.setdefault(r, len(reps))
        return tuple(labels), len(reps)

    def sides(self, e):
        return self._sides[e]

    def opposite(self, t, s):
        """The side glued to (t, s)."""
        x, y = self._sides[self.triangles[t][s]]
        return y if x == (t, s) else x

    def vertex(self, t, c):
        return self._corner_vertex[3 * t + c]

    @property
    def num_vertices(self):
        return self._num_vertices

    @property
    def num_triangles(self):
        return len(self.triangles)

    def vertex_link(self, v):
        """Crossing vector of the small curve around vertex v."""
        w = [0] * self.num_edges
        for e in range(self.num_edges):
            (t, a), _ = self._sides[e]
            for c in ((a - 1) % 3, a):
                if self.vertex(t, c) == v:
                    w[e] += 1
        return tuple(w)

    def links(self):
        return tuple(self.vertex_link(v) for v in range(self.num_vertices))

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Triangulation({list(self.triangles)})"

    # -- flips ---------------------------------------------------------

    def _quad(self, e):
        """Sides (p, r, p2, r2) of the quadrilateral around e, ccw."""
        (t, a), (u, b) = self._sides[e]
        tri_t, tri_u = self.triangles[t], self.triangles[u]
        return (tri_t[(a + 1) % 3], tri_t[(a + 2) % 3],
                tri_u[(b + 1) % 3], tri_u[(b + 2) % 3])

    def flippable(self, e):
        (t, _), (u, _) = self._sides[e]
        if t == u:
            return False
        p, r, p2, r2 = self._quad(e)
        # new triangles (e, r, p2) and (p, e, r2) must not be self-folded
        return r != p2 and p != r2

    def flip(self, e):
        """Flip edge e; returns (new triangulation, weight transport)."""
        if not self.flippable(e):
            raise ValueError(f"edge {e} is not flippable")
        (t, _), (u, _) = self._sides[e]
        p, r, p2, r2 = self._quad(e)
        new = list(self.triangles)
        new[t] = (e, r, p2)
        new[u] = (p, e, r2)
        return Triangulation(new), _make_transport(e, p, r, p2, r2)


def _make_transport(e, p, r, p2, r2):
    def transport(w):
        out = list(w)
        out[e] = max(w[p] + w[p2], w[r] + w[r2]) - w[e]
        return tuple(out)
    return transport


# -- validation and tracing ------------------------------------------------


def corner_counts(tri, w, t):
    """Arc counts per corner of triangle t, or None if invalid there."""
    e0, e1, e2 = tri.triangles[t]
    a, b, c = w[e0], w[e1], w[e2]
    if (a + b + c) % 2:
        return None
    n = ((a + b - c) // 2, (b + c - a) // 2, (c + a - b) // 2)
    if min(n) < 0:
        return None
    return n


def weight_violations(tri, w):
    if len(w) != tri.num_edges:
        return (f"expected {tri.num_edges} weights, got {len(w)}",)
    if any(x < 0 for x in w):
        return ("negative weight",)
    out = []
    for t in range(tri.num_triangles):
        e0, e1, e2 = tri.triangles[t]
        a, b, c = w[e0], w[e1], w[e2]
        if (a + b + c) % 2:
            out.append(f"triangle {t}: odd crossing sum {a}+{b}+{c}")
        elif corner_counts(tri, w, t) is None:
            out.append(f"triangle {t}: triangle inequality fails on ({a},{b},{c})")
    return tuple(out)


def check_weights(tri, w):
    bad = weight_violations(tri, w)
    if bad:
        raise InvalidWeightsError(bad)


def _edge_point(tri, w, t, s, local):
    """Edge-level (edge, index) of the crossing point at side-local index."""
    e = tri.triangles[t][s]
    if tri.sides(e)[0] == (t, s):
        return (e, local)
    return (e, w[e] - 1 - local)


@dataclass
class TracedComponent:
    weights: tuple
    arcs: list    # (t, corner, depth) in cyclic traversal order
    points: list  # points[i] = (edge, index) between arcs[i] and arcs[i+1]
    peripheral_vertex: object = None

    @property
    def is_peripheral(self):
        return self.peripheral_vertex is not None


def trace(tri, w):
    """Decompose a valid weight vector into traced components."""
    check_weights(tri, w)
    arcs = []
    point_arcs = {}
    for t in range(tri.num_triangles):
        n = corner_counts(tri, w, t)
        tt = tri.triangles[t]
        for c in range(3):
            s1, s2 = c, (c + 1) % 3
            for k in range(n[c]):
                aid = len(arcs)
                p1 = _edge_point(tri, w, t, s1, w[tt[s1]] - 1 - k)
                p2 = _edge_point(tri, w, t, s2, k)
                arcs.append(((t, c, k), p1, p2))
                point_arcs.setdefault(p1, []).append((aid, 0))
                point_arcs.setdefault(p2, []).append((aid, 1))
    for p, inc in point_arcs.items():
        if len(inc) != 2:
            raise InvalidWeightsError([f"point {p} has {len(inc)} arc ends"])
    links = {lk: v for v, lk in enumerate(tri.links())}

    seen = [False] * len(arcs)
    components = []
    for start in range(len(arcs)):
        if seen[start]:
            continue
        arc_seq, pt_seq = [], []
        aid, end = start, 1
        while not seen[aid]:
            seen[aid] = True
            arc_seq.append(arcs[aid][0])
            pt = arcs[aid][1 + end]
            pt_seq.append(pt)
            (a1, e1), (a2, e2) = point_arcs[pt]
            nxt, nend = ((a2, e2) if (a1, e1) == (aid, end) else (a1, e1))
            aid, end = nxt, 1 - nend
        cw = [0] * tri.num_edges
        for e, _ in pt_seq:
            cw[e] += 1
        cw = tuple(cw)
        components.append(TracedComponent(cw, arc_seq, pt_seq, links.get(cw)))
    return components


def decompose(tri, w):
    """Grouped decomposition: sorted [(weights, multiplicity, peripheral_vertex)]."""
    groups = {}
    for comp in trace(tri, w):
        if comp.weights in groups:
            groups[comp.weights][1] += 1
        else:
            groups[comp.weights] = [comp, 1]
    return [(c.weights, m, c.peripheral_vertex)
            for c, m in sorted(groups.values(), key=lambda g: g[0].weights)]


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple
    components: tuple  # (weights, multiplicity, peripheral_vertex)


def validate(tri, w):
    """Either a violation report or the component decomposition."""
    bad = weight_violations(tri, w)
    if bad:
        return ValidationResult(False, bad, ())
    return ValidationResult(True, (), tuple(decompose(tri, w)))


# -- shortening --------------------------------------------------------------


def is_short(w):
    nz = sorted(x for x in w if x)
    return nz == [1, 1]


class FlipPath:
    """A recorded flip sequence; transports weight vectors both ways."""

    def __init__(self, tri):
        self.start = tri
        self.end = tri
        self._fwd = []
        self._bwd = []
        self.edges = []

    def apply(self, e):
        before = self.end
        p, r, p2, r2 = before._quad(e)
        after, transport = before.flip(e)
        q = after._quad(e)
        self._fwd.append((e, p, r, p2, r2))
        self._bwd.append((e,) + q)
        self.edges.append(e)
        self.end = after
        return transport

    @staticmethod
    def _run(w, params):
        out = list(w)
        for e, p, r, p2, r2 in params:
            out[e] = max(out[p] + out[p2], out[r] + out[r2]) - out[e]
        return tuple(out)

    def push(self, w):
        return self._run(w, self._fwd)

    def pull(self, w):
        return self._run(w, reversed(self._bwd))


def _flip_delta(tri, w, e):
    p, r, p2, r2 = tri._quad(e)
    return max(w[p] + w[p2], w[r] + w[r2]) - 2 * w[e]


def shorten(tri, w):
    """Flip a connected essential curve down to two unit crossings.

    Greedy strictly-decreasing flips; if the greedy step ever stalls, a
    bounded breadth-first hunt through weight-neutral flips resumes it.
    """
    check_weights(tri, w)
    path = FlipPath(tri)
    cur = w
    while not is_short(cur):
        best, best_delta = None, 0
        for e in range(path.end.num_edges):
            if cur[e] == 0 or not path.end.flippable(e):
                continue
            d = _flip_delta(path.end, cur, e)
            if d < best_delta:
                best, best_delta = e, d
        if best is None:
            for e in _plateau_escape(path.end, cur):
                cur = path.apply(e)(cur)
        else:
            cur = path.apply(best)(cur)
    return path, cur


def _plateau_escape(tri, w, max_depth=30, max_states=60000):
    """BFS through flips of bounded extra cost until total weight drops.

    Greedy descent can park a curve in a locally rigid "straight band"
    position where every flip keeps the total weight; escaping may need
    a bounded uphill move (flipping an unweighted edge in the band's
    star), so the search allows a small weight excess.
    """
    total0 = sum(w)
    for slack in (0, 1, 2, 4):
        seen = {(tri.key(), w)}
        frontier = [(tri, w, ())]
        states = 0
        for _ in range(max_depth):
            nxt = []
            for cur_tri, cur_w, seq in frontier:
                states += 1
                for e in range(cur_tri.num_edges):
                    if not cur_tri.flippable(e):
                        continue
                    d = _flip_delta(cur_tri, cur_w, e)
                    if sum(cur_w) + d < total0:
                        return seq + (e,)
                    if sum(cur_w) + d <= total0 + slack:
                        new_tri, transport = cur_tri.flip(e)
                        new_w = transport(cur_w)
                        key = (new_tri.key(), new_w)
                        if key not in seen:
                            seen.add(key)
                            if is_short(new_w):
                                return seq + (e,)
                            nxt.append((new_tri, new_w, seq + (e,)))
            frontier = nxt
            if not frontier or states > max_states:
                break
    raise RuntimeError("shortening stalled: no weight-reducing flip found")


# -- the annulus around a short curve ----------------------------------------


@dataclass(frozen=True)
class Annulus:
    """Two triangles glued along the two edges a short curve crosses.

    The curve is the core; boundary circle 1 runs along g1 (the third
    side of t1), circle 2 along g2.  zone1/zone2 are the corners cut by
    the core's arc in each triangle.
    """

    e: int
    f: int
    t1: int
    t2: int
    zone1: int
    zone2: int
    g1: int
    g2: int

    @staticmethod
    def around(tri, w):
        assert is_short(w)
        e, f = [i for i, x in enumerate(w) if x == 1]
        (t1, _), (t2, _) = tri.sides(e)
        if t1 == t2:
            raise ValueError("short edges inside one triangle")
        for t in (t1, t2):
            if f not in tri.triangles[t]:
                raise ValueError("short curve does not bound an annulus here")
        p, _, p2, _ = tri._quad(e)
        if (p == f) != (p2 == f):
            raise ValueError("two-edge weight vector is puncture-parallel")
        z1 = _shared_corner(tri, t1, e, f)
        z2 = _shared_corner(tri, t2, e, f)
        g1 = next(x for x in tri.triangles[t1] if x not in (e, f))
        g2 = next(x for x in tri.triangles[t2] if x not in (e, f))
        return Annulus(e, f, t1, t2, z1, z2, g1, g2)


def _shared_corner(tri, t, e, f):
    se = tri.triangles[t].index(e)
    sf = tri.triangles[t].index(f)
    if (se + 1) % 3 == sf:
        return se
    assert (sf + 1) % 3 == se
    return sf


def annulus_crossings(tri, ann, u):
    """Number of strands of the curve with weights u crossing the annulus:
    its geometric intersection number with the core."""
    return sum(_component_crossings(tri, ann, comp) for comp in trace(tri, u))


def _component_crossings(tri, ann, comp):
    arcs, pts = comp.arcs, comp.points
    n = len(arcs)
    diag = (ann.e, ann.f)
    cuts = [i for i in range(n) if pts[i][0] not in diag]
    if not cuts:
        return 0  # lives inside the annulus, parallel to the core
    inside = (ann.t1, ann.t2)
    count = 0
    for j, cut in enumerate(cuts):
        nxt = cuts[(j + 1) % len(cuts)]
        t_in = arcs[(cut + 1) % n][0]
        t_out = arcs[nxt][0]
        if t_in in inside and t_in != t_out:
            count += 1
    return count


def twist_step(ann, u, direction):
    """Transport of normal coordinates under one full twist about the core."""
    e, f = ann.e, ann.f
    g_sum = u[ann.g1] + u[ann.g2]
    out = list(u)
    if direction > 0:
        out[e] = u[f]
        out[f] = max(2 * u[f], g_sum) - u[e]
    else:
        out[f] = u[e]
        out[e] = max(2 * u[e], g_sum) - u[f]
    return tuple(out)


def normalize_twist(ann, u):
    """Untwist u about the core until its annulus weight is minimal.

    Returns (normalized weights, applied power)."""
    def score(v):
        return v[ann.e] + v[ann.f]

    cur, n = u, 0
    nxt = twist_step(ann, cur, +1)
    while score(nxt) < score(cur):
        cur, n = nxt, n + 1
        nxt = twist_step(ann, cur, +1)
    nxt = twist_step(ann, cur, -1)
    while score(nxt) < score(cur):
        cur, n = nxt, n - 1
        nxt = twist_step(ann, cur, -1)
    return cur, n


# -- curves and multicurves ---------------------------------------------------


@dataclass(frozen=True, order=True)
class NormalMultiCurve:
    kind: SurfaceKind
    weights: tuple

    def __post_init__(self):
        check_weights(base_triangulation(self.kind), self.weights)


@dataclass(frozen=True, order=True)
class Curve:
    """A single essential non-peripheral component in base coordinates."""

    kind: SurfaceKind
    weights: tuple

    def __post_init__(self):
        tri = base_triangulation(self.kind)
        comps = decompose(tri, self.weights)
        if len(comps) != 1 or comps[0][1] != 1:
            raise InvalidWeightsError(["not a connected curve"])
        if comps[0][2] is not None:
            raise InvalidWeightsError(["curve is peripheral"])
        if not any(self.weights):
            raise InvalidWeightsError(["curve is empty"])


@dataclass(frozen=True, order=True)
class MultiCurve:
    """Pairwise-disjoint distinct curves; canonical order."""

    kind: SurfaceKind
    curves: tuple

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(sorted(self.curves)))
        for c in self.curves:
            if c.kind != self.kind:
                raise ValueError("mixed surfaces in multicurve")
        for i, a in enumerate(self.curves):
            for b in self.curves[i + 1:]:
                if a == b:
                    raise ValueError("repeated curve in multicurve")
                if intersection_number(a, b) != 0:
                    raise ValueError("multicurve components intersect")

    @property
    def weights(self):
        tri = base_triangulation(self.kind)
        w = [0] * tri.num_edges
        for c in self.curves:
            w = [x + y for x, y in zip(w, c.weights)]
        return tuple(w)

    def codimension(self):
        return self.kind.kappa - len(self.curves)

    def __len__(self):
        return len(self.curves)


def intersection_number(a, b):
    """Geometric intersection number; symmetric, additive over components."""
    if a.kind != b.kind:
        raise ValueError(f"mismatched surfaces {a.kind} vs {b.kind}")
    wa, wb = tuple(a.weights), tuple(b.weights)
    if wa <= wb:
        return _iota_vectors(a.kind, wa, wb)
    return _iota_vectors(a.kind, wb, wa)


@lru_cache(maxsize=200000)
def _iota_vectors(kind, wa, wb):
    tri = base_triangulation(kind)
    total = 0
    for ca, ma, pa in decompose(tri, wa):
        if pa is not None:
            continue
        for cb, mb, pb in decompose(tri, wb):
            if pb is not None:
                continue
            total += ma * mb * _iota_curves(kind, ca, cb)
    return total


@lru_cache(maxsize=200000)
def _iota_curves(kind, wa, wb):
    if wa == wb:
        return 0
    path, short = shorten_curve(kind, wa)
    u = path.push(wb)
    ann = Annulus.around(path.end, short)
    return annulus_crossings(path.end, ann, u)


@lru_cache(maxsize=20000)
def shorten_curve(kind, weights):
    """Cached shortening of a curve given in base coordinates."""
    return shorten(base_triangulation(kind), weights)


def twist(beta, alpha, n):
    """n-th power Dehn twist of beta about alpha."""
    if beta.kind != alpha.kind:
        raise ValueError("mismatched surfaces")
    if n == 0:
        return beta
    path, short = shorten_curve(alpha.kind, alpha.weights)
    ann = Annulus.around(path.end, short)
    u = path.push(beta.weights)
    d = 1 if n > 0 else -1
    for _ in range(abs(n)):
        u = twist_step(ann, u, d)
    return Curve(beta.kind, path.pull(u))


# -- closed transverse walks and tightening -----------------------------------
#
# A closed walk is a cyclic list of exit records (t, s): leave triangle t
# through side s.  The passage entering at record i-1 and leaving at
# record i lives in record i's triangle.  A record pair where the walk
# enters and leaves a triangle through the same side is a bigon with
# that edge; cancelling such pairs is an isotopy, and a walk with no
# such pair is in normal position.


def walk_is_consistent(tri, records):
    return all(tri.opposite(*records[i - 1])[0] == records[i][0]
               for i in range(len(records)))


def tighten(tri, records):
    """Cancel all triangle-level bigons; [] means the walk was contractible."""
    rec = list(records)
    changed = True
    while changed and rec:
        changed = False
        n = len(rec)
        for i in range(n):
            t_in, s_in = tri.opposite(*rec[i - 1])
            assert t_in == rec[i][0], "inconsistent walk"
            if s_in == rec[i][1]:
                if n <= 2:
                    return []
                for j in sorted({i, (i - 1) % n}, reverse=True):
                    rec.pop(j)
                changed = True
                break
    return rec


def walk_weights(tri, records):
    w = [0] * tri.num_edges
    for t, s in records:
        w[tri.triangles[t][s]] += 1
    return tuple(w)


def curve_from_walk(tri, records):
    """Normal coordinates of the free homotopy class of a closed walk.

    Returns None for a contractible walk, otherwise the weight vector of
    the (single-component) tightened curve.
    """
    rec = tighten(tri, records)
    if not rec:
        return None
    w = walk_weights(tri, rec)
    comps = decompose(tri, w)
    assert len(comps) == 1 and comps[0][1] == 1, "walk is not a simple curve"
    return w


# -- cutting along a multicurve -----------------------------------------------


@dataclass(frozen=True)
class CutPiece:
    kind: SurfaceKind
    punctures: tuple        # original vertex ids in this piece
    boundary: tuple         # labels (component_index, side) of cut circles
    homotopic_pairs: tuple  # pairs of labels that are two sides of one curve


@dataclass(frozen=True)
class CutResult:
    pieces: tuple
    components: tuple  # component weight vectors, in label order

    def piece_of_label(self, label):
        for p in self.pieces:
            if label in p.boundary:
                return p
        raise KeyError(label)


def _gap_region(tri, w, t, s, k):
    """Region of the k-th gap (0..w_s) along side (t, s)."""
    n = corner_counts(tri, w, t)
    ws = w[tri.triangles[t][s]]
    ns = n[(s - 1) % 3]
    ne = n[s]
    if k <= ns - 1:
        return ("k", t, (s - 1) % 3, k)
    if k >= ws - ne + 1:
        return ("k", t, s, ws - k)
    return ("c", t)


class _UnionFind(dict):
    def find(self, x):
        root = x
        while self.setdefault(root, root) != root:
            root = self[root]
        while self[x] != root:
            self[x], x = root, self[x]
        return root

    def union(self, x, y):
        self[self.find(x)] = self.find(y)


def cut_structure(tri, w):
    """Cut the surface carried by tri along the multicurve w.

    Returns (CutResult, region_piece) where region_piece maps region ids
    to piece indices.
    """
    check_weights(tri, w)
    comps = trace(tri, w)

    uf = _UnionFind()
    for e in range(tri.num_edges):
        (ta, sa), (tb, sb) = tri.sides(e)
        for k in range(w[e] + 1):
            uf.union(_gap_region(tri, w, ta, sa, k),
                     _gap_region(tri, w, tb, sb, w[e] - k))

    regions = [("c", t) for t in range(tri.num_triangles)]
    for t in range(tri.num_triangles):
        n = corner_counts(tri, w, t)
        for c in range(3):
            regions.extend(("k", t, c, d) for d in range(n[c]))
    piece_ids = {}
    for r in regions:
        root = uf.find(r)
        piece_ids.setdefault(root, len(piece_ids))
    region_piece = {r: piece_ids[uf.find(r)] for r in regions}
    np = len(piece_ids)

    def arc_sides(t, c, k):
        n = corner_counts(tri, w, t)
        toward = ("k", t, c, k)
        away = ("k", t, c, k + 1) if k + 1 < n[c] else ("c", t)
        return toward, away

    # Euler characteristic per piece: points - (segments + arc copies) + regions
    chi = [0] * np
    for r in regions:
        chi[region_piece[r]] += 1
    seg_piece = {}
    for e in range(tri.num_edges):
        (ta, sa), _ = tri.sides(e)
        for k in range(w[e] + 1):
            p = region_piece[_gap_region(tri, w, ta, sa, k)]
            seg_piece[(e, k)] = p
            chi[p] -= 1
    for comp in comps:
        for (t, c, k) in comp.arcs:
            for side in arc_sides(t, c, k):
                chi[region_piece[side]] -= 1
        for (e, j) in comp.points:
            chi[seg_piece[(e, j)]] += 1
            chi[seg_piece[(e, j + 1)]] += 1

    # punctures per piece: corner tips all meet their vertex's piece
    punctures = [[] for _ in range(np)]
    vert_piece = {}
    for t in range(tri.num_triangles):
        n = corner_counts(tri, w, t)
        for c in range(3):
            v = tri.vertex(t, c)
            tip = ("k", t, c, 0) if n[c] > 0 else ("c", t)
            p = region_piece[tip]
            if v in vert_piece:
                assert vert_piece[v] == p, "vertex tips straddle pieces"
            else:
                vert_piece[v] = p
    for v, p in vert_piece.items():
        punctures[p].append(v)

    # boundary circles: two side classes per component
    boundary = [[] for _ in range(np)]
    pairs = [[] for _ in range(np)]
    for ci, comp in enumerate(comps):
        suf = _UnionFind()
        m = len(comp.arcs)
        for i in range(m):
            # match arc sides across point i: same edge gap = same curve side
            pt = comp.points[i]
            a_prev, a_next = i, (i + 1) % m
            gp = _arc_side_gaps(tri, w, comp.arcs[a_prev], pt)
            gn = _arc_side_gaps(tri, w, comp.arcs[a_next], pt)
            assert set(gp.values()) == set(gn.values()), "gap mismatch at point"
            for side_p, gap_p in gp.items():
                for side_n, gap_n in gn.items():
                    if gap_p == gap_n:
                        suf.union((a_prev, side_p), (a_next, side_n))
        classes = {}
        for ai in range(m):
            for side in (0, 1):
                classes.setdefault(suf.find((ai, side)), []).append((ai, side))
        assert len(classes) == 2, f"component {ci} has {len(classes)} sides"
        ordered = sorted(classes.values(), key=lambda cl: min(cl))
        side_pieces = []
        for side_idx, members in enumerate(ordered):
            ps = set()
            for ai, side in members:
                t, c, k = comp.arcs[ai]
                ps.add(region_piece[arc_sides(t, c, k)[side]])
            assert len(ps) == 1, "curve side touches several pieces"
            p = ps.pop()
            boundary[p].append((ci, side_idx))
            side_pieces.append(p)
        if side_pieces[0] == side_pieces[1]:
            pairs[side_pieces[0]].append(((ci, 0), (ci, 1)))

    pieces = []
    for p in range(np):
        m = len(punctures[p]) + len(boundary[p])
        genus2 = 2 - chi[p] - m
        assert genus2 >= 0 and genus2 % 2 == 0, "bad Euler characteristic"
        pieces.append(CutPiece(SurfaceKind(genus2 // 2, m),
                               tuple(sorted(punctures[p])),
                               tuple(sorted(boundary[p])),
                               tuple(sorted(pairs[p]))))
    result = CutResult(tuple(pieces), tuple(c.weights for c in comps))
    assert sum(chi) == tri.num_triangles - tri.num_edges
    return result, region_piece


def _arc_side_gaps(tri, w, arc, point):
    """For an arc endpoint at a crossing point: which edge-level gap each
    side of the arc (0 = toward corner, 1 = away) touches there."""
    t, c, k = arc
    tt = tri.triangles[t]
    out = {}
    for s in (c, (c + 1) % 3):
        # endpoint of this arc on side s, if it is the given point
        local = (w[tt[s]] - 1 - k) if s == c else k
        if _edge_point(tri, w, t, s, local) != point:
            continue
        # toward-corner region touches the gap on the corner side
        toward_local_gap = local + 1 if s == c else local
        away_local_gap = local if s == c else local + 1
        for side, lg in ((0, toward_local_gap), (1, away_local_gap)):
            e = tt[s]
            gap = lg if tri.sides(e)[0] == (t, s) else w[e] - lg
            out[side] = gap
    return out


def cut_along(q):
    """Cut the base surface along a multicurve (MultiCurve or weights holder)."""
    tri = base_triangulation(q.kind)
    result, _ = cut_structure(tri, tuple(q.weights))
    return result


# -- base tables ---------------------------------------------------------------


@lru_cache(maxsize=None)
def base_triangulation(kind):
    if kind == TORUS_1:
        # square torus: edges 0 = vertical arc, 1 = horizontal arc, 2 = diagonal
        return Triangulation([(1, 0, 2), (2, 1, 0)])
    if kind == SPHERE_4:
        # boundary of the tetrahedron on vertices 1..4;
        # edges 0:12 1:13 2:14 3:23 4:24 5:34
        return Triangulation([(0, 3, 1), (1, 5, 2), (2, 4, 0), (4, 5, 3)])
    if kind == SPHERE_5:
        # bipyramid: apexes N, S over equator 2,3,4;
        # edges 0:N2 1:N3 2:N4 3:S2 4:S3 5:S4 6:23 7:34 8:42
        return Triangulation([(0, 6, 1), (1, 7, 2), (2, 8, 0),
                              (4, 6, 3), (5, 7, 4), (3, 8, 5)])
    if kind == TORUS_2:
        # flat torus with punctures a=(0,0), b=(1/2,0); edges
        # 0:ab lower-left 1:ba lower-right 2:a-vertical 3:b-vertical
        # 4:ab diagonal-left 5:ba diagonal-right
        return Triangulation([(0, 3, 4), (4, 0, 2), (1, 2, 5), (5, 1, 3)])
    raise ValueError(f"no triangulation table for {kind}")


def torus1_slope_weights(s):
    """Normal coordinates of the slope-s curve on the 1-holed torus."""
    p, q = s.num, s.den
    return (abs(q), abs(p), abs(p - q))


@lru_cache(maxsize=None)
def base_surface(kind):
    """The fixed base triangulation and marking of a shipped surface.

    The marking maps names to curves: 'pants*' form the base maximal
    multicurve, 'dual*' meet them minimally inside complexity-1 pieces,
    and complexity-1 surfaces ship their three reference slopes.
    """
    tri = base_triangulation(kind)
    if kind == TORUS_1:
        marking = {
            "pants1": Curve(kind, (0, 1, 1)),   # slope 1/0
            "dual1": Curve(kind, (1, 0, 1)),    # slope 0/1
            "dual2": Curve(kind, (1, 1, 0)),    # slope 1/1
        }
    elif kind == SPHERE_4:
        marking = {
            "pants1": Curve(kind, (0, 1, 1, 1, 1, 0)),  # separates {1,2}|{3,4}
            "dual1": Curve(kind, (1, 0, 1, 1, 0, 1)),   # separates {1,3}|{2,4}
            "dual2": Curve(kind, (1, 1, 0, 0, 1, 1)),   # separates {1,4}|{2,3}
        }
    elif kind == SPHERE_5:
        marking = {
            "pants1": Curve(kind, (0, 1, 1, 1, 0, 0, 1, 0, 1)),  # around {N,2}
            "pants2": Curve(kind, (0, 0, 1, 1, 1, 0, 0, 1, 1)),  # around {S,4}
            "dual1": Curve(kind, (1, 0, 1, 0, 1, 0, 1, 1, 0)),   # around {N,3}
            "dual2": Curve(kind, (0, 1, 0, 1, 0, 1, 1, 1, 0)),   # around {S,3}
        }
    elif kind == TORUS_2:
        marking = {
            "pants1": Curve(kind, (1, 0, 0, 0, 1, 0)),  # non-separating vertical
            "pants2": Curve(kind, (2, 0, 2, 2, 2, 2)),  # separates genus from punctures
            "dual1": Curve(kind, (0, 0, 1, 1, 1, 1)),   # horizontal, meets pants1 once
            "dual2": Curve(kind, (0, 1, 0, 0, 0, 1)),   # vertical, meets pants2 twice
        }
    else:
        raise ValueError(f"unsupported surface kind {kind}")
    return tri, marking


# -- serialization ---------------------------------------------------------------


def format_curves(kind, weight_rows):
    lines = [f"surface {kind.genus} {kind.punctures}"]
    lines += ["curve " + " ".join(str(x) for x in row) for row in weight_rows]
    return "\n".join(lines) + "\n"


def parse_curves(text):
    """Parse the line format: a 'surface g p' header then 'curve w1..wE' rows."""
    kind = None
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "surface":
            kind = SurfaceKind(int(tok[1]), int(tok[2]))
        elif tok[0] == "curve":
            if kind is None:
                raise ValueError("curve line before surface header")
            rows.append(tuple(int(x) for x in tok[1:]))
        elif tok[0] == "pants":
            continue
        else:
            raise ValueError(f"unrecognized line {line!r}")
    if kind is None:
        raise ValueError("missing surface header")
    return kind, rows
