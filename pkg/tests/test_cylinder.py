"""Tree and circuit classification: special vertices, parallel families,
cylinder decompositions, orbit grouping."""

import json
from fractions import Fraction

import pytest

from torusdeform.errors import NotACylinder, OrbitMismatch
from torusdeform.field import TranslationSubgroup
from torusdeform.reeb import (
    CylinderRegion,
    circuit_edges,
    classification_to_dict,
    classify,
    cut_at_family,
    cylinder_decomposition,
    parallel_family,
)

F = Fraction


def _fake_subgroup(pairs, smith):
    els = tuple(sorted(pairs))
    return TranslationSubgroup(elements=els, generators=(els[0], els[-1]),
                               order=len(els), smith_pair=smith)


class TestTreeClassification:
    def test_eggcarton(self, eggcarton_analysis):
        _, _, _, _, cls = eggcarton_analysis
        assert cls.kind == "F0"
        assert cls.special_vertex == 2
        assert (cls.n, cls.m, cls.r) == (1, 2, 2)
        assert cls.regions == ((0,), (1,), (3,), (4,))
        assert cls.disk_orbits == ((0, 1), (2, 3))

    def test_orbit_indivisibility_detected(self, eggcarton_analysis):
        spec, _, _, graph, _ = eggcarton_analysis
        fake = _fake_subgroup([(F(i, 3), F(0)) for i in range(3)], (1, 3))
        with pytest.raises(OrbitMismatch):
            classify(spec, graph, fake)

    def test_dict_round_trip(self, eggcarton_analysis):
        _, _, _, _, cls = eggcarton_analysis
        data = json.loads(json.dumps(classification_to_dict(cls)))
        assert data == {"kind": "F0", "special_vertex": 2, "n": 1, "m": 2,
                        "r": 2, "disk_orbits": [[0, 1], [2, 3]],
                        "regions": [[0], [1], [3], [4]]}


class TestCircuitDetection:
    def test_circuit_edge_sets(self, all_analyses):
        expected = {"tilted": [1, 2], "eggcarton": [],
                    "doubled": [2, 3, 4, 5], "doubled_y": [2, 3]}
        for name, (_, _, _, graph, _) in all_analyses.items():
            assert sorted(circuit_edges(graph)) == expected[name], name

    def test_tilted_family(self, tilted_analysis):
        _, _, sym, graph, _ = tilted_analysis
        c0, family, e0, n = parallel_family(graph, sym=sym)
        assert c0 == pytest.approx(0.0, abs=1e-9)
        assert family == (1, 2)
        assert e0 in family
        assert n == 1

    def test_doubled_family(self, doubled_analysis):
        _, _, sym, graph, _ = doubled_analysis
        c0, family, e0, n = parallel_family(graph, sym=sym)
        assert family == (2, 3, 4, 5)
        assert n == 2

    def test_override_skips_orbit_search(self, tilted_analysis):
        spec, _, sym, graph, _ = tilted_analysis
        cls = classify(spec, graph, sym, cyclic_override=2)
        assert cls.cyclic_index == 2
        assert cls.family_edges == (1, 2)


class TestCircuitClassification:
    def test_tilted(self, tilted_analysis):
        _, _, _, _, cls = tilted_analysis
        assert cls.kind == "F1"
        assert cls.cyclic_index == 1
        assert cls.family_edges == (1, 2)
        assert cls.cut_level == pytest.approx(0.0, abs=1e-9)
        dec = cls.decomposition
        assert dec.k == 1
        assert dec.signature == ((1, 1),)
        assert dec.region.boundary == ((1, "lower"), (2, "lower"))
        assert dec.region.vertex_ids == (0, 1)
        only = dec.classes[0]
        assert (only.count, only.multiplicity) == (1, 1)
        assert only.min_level == pytest.approx(-1.5)
        assert only.descriptors == ((("minimum", -1.5),),)

    def test_doubled(self, doubled_analysis):
        _, _, _, _, cls = doubled_analysis
        assert cls.cyclic_index == 2
        assert cls.family_edges == (2, 3, 4, 5)
        assert cls.cut_level == pytest.approx(0.0, abs=1e-9)
        dec = cls.decomposition
        assert dec.signature == ((1, 1),)
        assert dec.region.boundary == ((2, "lower"), (3, "lower"))
        assert dec.region.vertex_ids == (0, 2)

    def test_doubled_y_orbit_pairing(self, doubled_y_analysis):
        _, _, _, _, cls = doubled_y_analysis
        assert cls.cyclic_index == 1
        assert cls.family_edges == (2, 3)
        dec = cls.decomposition
        assert dec.k == 1
        only = dec.classes[0]
        assert (only.count, only.multiplicity) == (1, 2)
        assert only.min_level == pytest.approx(-1.5)
        assert dec.signature == ((1, 2),)

    def test_cut_pieces_partition_vertices(self, all_analyses):
        for name in ("tilted", "doubled", "doubled_y"):
            _, _, sym, graph, cls = all_analyses[name]
            pieces = cut_at_family(graph, cls.cut_level, cls.family_edges)
            ids = sorted(v for p in pieces for v in p.vertex_ids)
            assert ids == sorted(v.id for v in graph.vertices), name
            for p in pieces:
                assert len(p.boundary) >= 1


class TestSyntheticRegions:
    def test_single_boundary_rejected(self, tilted_analysis):
        spec, _, sym, graph, _ = tilted_analysis
        region = CylinderRegion(0.0, ((1, "lower"),), (0,), (),
                                ((1, "lower"),))
        with pytest.raises(NotACylinder):
            cylinder_decomposition(spec, graph, region, sym)

    def test_wrong_euler_rejected(self, tilted_analysis):
        spec, _, sym, graph, _ = tilted_analysis
        region = CylinderRegion(0.0, ((1, "lower"), (2, "lower")), (0,), (),
                                ((1, "lower"), (2, "lower")))
        with pytest.raises(NotACylinder):
            cylinder_decomposition(spec, graph, region, sym)

    def test_bare_annulus_has_no_classes(self, tilted_analysis):
        spec, _, sym, graph, _ = tilted_analysis
        region = CylinderRegion(0.0, ((1, "lower"), (2, "lower")), (), (),
                                ((1, "lower"), (2, "lower")))
        dec = cylinder_decomposition(spec, graph, region, sym)
        assert dec.k == 0
        assert dec.classes == ()
        assert dec.signature == ()
