import random

import pytest
from hypothesis import given, settings, strategies as st

from pantsgraph.farey import Slope, det
from pantsgraph import surface as sf
from pantsgraph.surface import (
    Annulus,
    Curve,
    InvalidWeightsError,
    MultiCurve,
    SurfaceKind,
    annulus_crossings,
    base_surface,
    base_triangulation,
    cut_along,
    decompose,
    intersection_number,
    is_short,
    shorten,
    tighten,
    torus1_slope_weights,
    trace,
    twist,
    validate,
    weight_violations,
)

T11, S04 = sf.TORUS_1, sf.SPHERE_4
S05, T12 = sf.SPHERE_5, sf.TORUS_2


def torus_curve(p, q):
    return Curve(T11, torus1_slope_weights(Slope.of(p, q)))


class TestTriangulationTables:
    @pytest.mark.parametrize("kind,V,E,F", [
        (T11, 1, 3, 2), (S04, 4, 6, 4), (S05, 5, 9, 6), (T12, 2, 6, 4),
    ])
    def test_counts(self, kind, V, E, F):
        tri = base_triangulation(kind)
        assert tri.num_vertices == V
        assert tri.num_edges == E
        assert tri.num_triangles == F
        assert 3 * F == 2 * E
        assert V - E + F == 2 - 2 * kind.genus

    @pytest.mark.parametrize("kind", [T11, S04, S05, T12])
    def test_marking_valid(self, kind):
        tri, marking = base_surface(kind)
        pants = [c for n, c in marking.items() if n.startswith("pants")]
        assert len(pants) == kind.kappa
        for a in pants:
            for b in pants:
                if a != b:
                    assert intersection_number(a, b) == 0

    def test_links_are_valid_curves(self):
        for kind in (T11, S04, S05, T12):
            tri = base_triangulation(kind)
            for v in range(tri.num_vertices):
                w = tri.vertex_link(v)
                assert not weight_violations(tri, w)
                comps = decompose(tri, w)
                assert len(comps) == 1 and comps[0][1] == 1
                assert comps[0][2] == v


class TestValidate:
    def test_odd_parity_rejected(self):
        tri = base_triangulation(T11)
        res = validate(tri, (1, 1, 1))
        assert not res.ok
        assert any("odd" in v for v in res.violations)

    def test_single_component(self):
        tri = base_triangulation(T11)
        res = validate(tri, (1, 1, 0))
        assert res.ok
        assert len(res.components) == 1
        assert res.components[0][1] == 1

    def test_doubled_curve(self):
        tri = base_triangulation(T11)
        res = validate(tri, (2, 2, 0))
        assert res.ok
        assert res.components == (((1, 1, 0), 2, None),)

    def test_triangle_inequality(self):
        tri = base_triangulation(S04)
        res = validate(tri, (2, 0, 0, 0, 0, 0))
        assert not res.ok


class TestFlip:
    def test_involution_on_weights(self):
        rng = random.Random(7)
        for kind in (T11, S04, S05, T12):
            tri = base_triangulation(kind)
            _, marking = base_surface(kind)
            for c in marking.values():
                for e in range(tri.num_edges):
                    if not tri.flippable(e):
                        continue
                    t2, f = tri.flip(e)
                    _, g = t2.flip(e)
                    assert g(f(c.weights)) == c.weights

    def test_spec_example_torus(self):
        # flipping the diagonal under the slope-2/1 curve gives weight 3
        tri = base_triangulation(T11)
        w = torus1_slope_weights(Slope.of(2, 1))
        assert w == (1, 2, 1)
        _, transport = tri.flip(2)
        assert transport(w)[2] == max(1 + 1, 2 + 2) - 1 == 3

    def test_zero_is_fixed(self):
        tri = base_triangulation(S05)
        for e in range(tri.num_edges):
            if tri.flippable(e):
                _, transport = tri.flip(e)
                assert transport((0,) * 9) == (0,) * 9

    def test_transport_preserves_components(self):
        rng = random.Random(3)
        for kind in (T11, S04, S05, T12):
            tri0 = base_triangulation(kind)
            _, marking = base_surface(kind)
            for c in list(marking.values())[:2]:
                tri, w = tri0, c.weights
                for _ in range(15):
                    choices = [e for e in range(tri.num_edges) if tri.flippable(e)]
                    e = rng.choice(choices)
                    tri, transport = tri.flip(e)
                    w = transport(w)
                    comps = decompose(tri, w)
                    assert len(comps) == 1 and comps[0][1] == 1


class TestShorten:
    @pytest.mark.parametrize("p,q", [(1, 0), (0, 1), (1, 1), (2, 1), (5, 3),
                                     (13, 8), (-7, 11), (34, 55)])
    def test_torus_slopes(self, p, q):
        path, w = shorten(base_triangulation(T11), torus1_slope_weights(Slope.of(p, q)))
        assert is_short(w)
        Annulus.around(path.end, w)

    def test_push_pull_roundtrip(self):
        a = torus_curve(5, 3)
        b = torus_curve(2, 7)
        path, _ = shorten(base_triangulation(T11), a.weights)
        assert path.pull(path.push(b.weights)) == b.weights

    @pytest.mark.parametrize("kind", [S04, S05, T12])
    def test_marking_curves(self, kind):
        tri = base_triangulation(kind)
        _, marking = base_surface(kind)
        for c in marking.values():
            path, w = shorten(tri, c.weights)
            assert is_short(w)
            Annulus.around(path.end, w)


class TestIntersectionTorus:
    """The determinant oracle: i(p/q, r/s) = |ps - qr| on the 1-holed torus."""

    @given(st.integers(-21, 21), st.integers(1, 21),
           st.integers(-21, 21), st.integers(1, 21))
    @settings(max_examples=120, deadline=None)
    def test_matches_determinant(self, p, q, r, s):
        a, b = Slope.of(p, q), Slope.of(r, s)
        ca, cb = torus_curve(a.num, a.den), torus_curve(b.num, b.den)
        assert intersection_number(ca, cb) == abs(det(a, b))

    def test_infinity_slopes(self):
        inf = torus_curve(1, 0)
        for p, q in [(0, 1), (1, 1), (5, 3), (-4, 7)]:
            assert intersection_number(inf, torus_curve(p, q)) == q

    def test_self_intersection_zero(self):
        c = torus_curve(3, 5)
        assert intersection_number(c, c) == 0


class TestIntersectionGeneral:
    def test_symmetry_random(self):
        rng = random.Random(11)
        for kind in (S04, S05, T12):
            _, marking = base_surface(kind)
            pool = list(marking.values())
            curves = list(pool)
            for _ in range(6):
                a, b = rng.choice(curves), rng.choice(pool)
                n = rng.randint(-3, 3)
                try:
                    curves.append(twist(a, b, n))
                except InvalidWeightsError:
                    pass
            for a in curves:
                for b in curves:
                    assert intersection_number(a, b) == intersection_number(b, a)
                    if a == b:
                        assert intersection_number(a, b) == 0

    def test_peripheral_components_ignored(self):
        tri = base_triangulation(T11)
        link = tri.vertex_link(0)
        mixed = tuple(x + y for x, y in zip(link, torus1_slope_weights(Slope.of(1, 0))))
        a = sf.NormalMultiCurve(T11, mixed)
        b = sf.NormalMultiCurve(T11, torus1_slope_weights(Slope.of(0, 1)))
        assert intersection_number(a, b) == 1

    def test_additive_over_multiplicity(self):
        a = sf.NormalMultiCurve(T11, (2, 2, 0))
        b = sf.NormalMultiCurve(T11, (0, 1, 1))
        assert intersection_number(a, b) == 2

    def test_flip_invariance(self):
        """i is preserved by transporting both curves along flip sequences."""
        rng = random.Random(5)
        for kind in (T11, S04, S05, T12):
            tri0 = base_triangulation(kind)
            _, marking = base_surface(kind)
            keys = sorted(marking)
            a, b = marking[keys[0]], marking[keys[-1]]
            before = intersection_number(a, b)
            tri, wa, wb = tri0, a.weights, b.weights
            for _ in range(20):
                e = rng.choice([e for e in range(tri.num_edges) if tri.flippable(e)])
                tri, transport = tri.flip(e)
                wa, wb = transport(wa), transport(wb)
            # transport back by inverting the record is covered elsewhere;
            # here recompute in the flipped picture via a fresh shorten
            path2, short2 = shorten(tri, wa)
            ann = Annulus.around(path2.end, short2)
            assert annulus_crossings(path2.end, ann, path2.push(wb)) == before


class TestTwist:
    def test_spec_example(self):
        # twisting 1/0 once about 0/1 gives a slope-(1/1) curve
        image = twist(torus_curve(1, 0), torus_curve(0, 1), 1)
        assert image.weights in (torus1_slope_weights(Slope.of(1, 1)),
                                 torus1_slope_weights(Slope.of(-1, 1)))

    def test_identity_and_inverse(self):
        b, a = torus_curve(1, 0), torus_curve(0, 1)
        assert twist(b, a, 0) == b
        assert twist(twist(b, a, 3), a, -3) == b

    def test_twist_formula_torus(self):
        b, a = torus_curve(1, 0), torus_curve(0, 1)
        for n in (1, 2, 3, -3):
            tb = twist(b, a, n)
            assert intersection_number(tb, b) == abs(n) * 1

    def test_twist_formula_random(self):
        rng = random.Random(23)
        for kind in (T11, S04, S05, T12):
            _, marking = base_surface(kind)
            pool = list(marking.values())
            for _ in range(12):
                a, b = rng.choice(pool), rng.choice(pool)
                i_ab = intersection_number(a, b)
                n = rng.choice([-5, -3, -1, 1, 2, 5])
                tb = twist(b, a, n)
                assert intersection_number(tb, b) == abs(n) * i_ab * i_ab

    def test_disjoint_twist_is_identity(self):
        _, marking = base_surface(S05)
        a, b = marking["pants1"], marking["pants2"]
        assert twist(b, a, 4) == b


class TestTighten:
    def test_contractible_walk(self):
        tri = base_triangulation(T11)
        # cross an edge and come straight back
        (t, s), (u, v) = tri.sides(0)
        rec = [(t, s), (u, v)]
        assert tighten(tri, rec) == []

    def test_normal_walk_is_fixed(self):
        tri = base_triangulation(T11)
        for comp in trace(tri, (1, 0, 1)):
            rec = _component_records(tri, (1, 0, 1), comp)
            assert tighten(tri, rec) == rec


def _component_records(tri, w, comp):
    """Exit records of a traced component (for tighten round-trips)."""
    rec = []
    m = len(comp.arcs)
    for i in range(m):
        t, c, k = comp.arcs[i]
        e, _ = comp.points[i]
        # exiting through whichever of sides c, c+1 carries edge e
        for s in (c, (c + 1) % 3):
            if tri.triangles[t][s] == e:
                rec.append((t, s))
                break
    return rec


class TestCutAlong:
    def test_sphere5_single_curve(self):
        _, marking = base_surface(S05)
        q = MultiCurve(S05, (marking["pants1"],))
        res = cut_along(q)
        kinds = sorted(p.kind for p in res.pieces)
        assert kinds == [SurfaceKind(0, 3), SurfaceKind(0, 4)]
        y = next(p for p in res.pieces if p.kind == SurfaceKind(0, 4))
        assert len(y.boundary) == 1
        assert all(not p.homotopic_pairs for p in res.pieces)

    def test_torus2_nonseparating(self):
        _, marking = base_surface(T12)
        q = MultiCurve(T12, (marking["pants1"],))
        res = cut_along(q)
        assert len(res.pieces) == 1
        piece = res.pieces[0]
        assert piece.kind == SurfaceKind(0, 4)
        assert len(piece.boundary) == 2
        assert piece.homotopic_pairs == (((0, 0), (0, 1)),)

    def test_torus2_separating(self):
        _, marking = base_surface(T12)
        q = MultiCurve(T12, (marking["pants2"],))
        res = cut_along(q)
        kinds = sorted(p.kind for p in res.pieces)
        assert kinds == [SurfaceKind(0, 3), SurfaceKind(1, 1)]

    def test_empty_multicurve(self):
        res = cut_along(MultiCurve(T11, ()))
        assert len(res.pieces) == 1
        assert res.pieces[0].kind == T11

    def test_full_marking_gives_pants(self):
        for kind in (S05, T12):
            _, marking = base_surface(kind)
            q = MultiCurve(kind, tuple(c for n, c in marking.items()
                                       if n.startswith("pants")))
            res = cut_along(q)
            assert all(p.kind.kappa == 0 for p in res.pieces)
            assert len(res.pieces) == kind.kappa if kind.genus == 0 else True


class TestMarkingGeometry:
    def test_sphere5_duals(self):
        _, m = base_surface(S05)
        assert intersection_number(m["pants1"], m["dual1"]) == 2
        assert intersection_number(m["pants2"], m["dual1"]) == 0
        assert intersection_number(m["pants2"], m["dual2"]) == 2
        assert intersection_number(m["pants1"], m["dual2"]) == 0

    def test_torus2_duals(self):
        _, m = base_surface(T12)
        assert intersection_number(m["pants1"], m["dual1"]) == 1
        assert intersection_number(m["pants2"], m["dual1"]) == 0
        assert intersection_number(m["pants2"], m["dual2"]) == 2
        assert intersection_number(m["pants1"], m["dual2"]) == 0

    def test_sphere4_refs_pairwise_two(self):
        _, m = base_surface(S04)
        assert intersection_number(m["pants1"], m["dual1"]) == 2
        assert intersection_number(m["pants1"], m["dual2"]) == 2
        assert intersection_number(m["dual1"], m["dual2"]) == 2


class TestSerialization:
    def test_roundtrip(self):
        kind, rows = sf.parse_curves(sf.format_curves(S05, [(0, 1, 1, 1, 0, 0, 1, 0, 1)]))
        assert kind == S05
        assert rows == [(0, 1, 1, 1, 0, 0, 1, 0, 1)]
