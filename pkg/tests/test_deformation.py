"""Six-node diagram construction, leaf wiring, machine verification,
splitting of the shift lattice."""

import json

import pytest

import oracles
from torusdeform.algebra import (
    FiniteGroupTable,
    Homomorphism,
    LeafMap,
    format_element,
    format_expr,
    make_atom_maps,
)
from torusdeform.deformation import (
    build_diagram_F0,
    build_diagram_F1,
    cyclic_leaf,
    diagram_from_classification,
    diagram_report,
    leaf_from_tables,
    standard_leaf,
    symbolic_leaf,
    theta_splitting_check,
    verify_diagram,
)
from torusdeform.errors import (
    IncompatibleLeaves,
    NonPrimitiveGenerator,
    UnassignedAtom,
)


def _cyclic_table(k):
    table = tuple(tuple((a + b) % k for b in range(k)) for a in range(k))
    return FiniteGroupTable(tuple(range(k)), table, 0)


class TestLeafConstruction:
    def test_standard_leaf(self):
        leaf = standard_leaf("D1")
        assert leaf.assigned
        assert leaf.label == "D1"

    def test_cyclic_leaf_step_divides(self):
        leaf = cyclic_leaf("D1", 6, 3)
        assert leaf.assigned
        with pytest.raises(IncompatibleLeaves):
            cyclic_leaf("D1", 6, 4)

    def test_symbolic_leaf(self):
        leaf = symbolic_leaf("D1")
        assert not leaf.assigned

    def test_tables_validated(self):
        z4, z2 = _cyclic_table(4), _cyclic_table(2)
        ok = leaf_from_tables("L", z2, z4, z2,
                              include={0: 0, 1: 2},
                              project={0: 0, 1: 1, 2: 0, 3: 1})
        assert ok.assigned

    def test_non_homomorphic_projection_rejected(self):
        z4, z2 = _cyclic_table(4), _cyclic_table(2)
        with pytest.raises(IncompatibleLeaves):
            leaf_from_tables("L", z2, z4, z2,
                             include={0: 0, 1: 2},
                             project={0: 0, 1: 1, 2: 1, 3: 0})

    def test_kernel_image_mismatch_rejected(self):
        z4, z2 = _cyclic_table(4), _cyclic_table(2)
        # include lands on 1, whose subgroup is all of Z4, but the kernel
        # of the projection is {0, 2}
        with pytest.raises(IncompatibleLeaves):
            leaf_from_tables("L", z4, z4, z2,
                             include={0: 0, 1: 1, 2: 2, 3: 3},
                             project={0: 0, 1: 1, 2: 0, 3: 1})

    def test_non_injective_include_rejected(self):
        z4, z2 = _cyclic_table(4), _cyclic_table(2)
        with pytest.raises(IncompatibleLeaves):
            leaf_from_tables("L", z2, z4, z2,
                             include={0: 0, 1: 0},
                             project={0: 0, 1: 1, 2: 0, 3: 1})


class TestDiagramShapes:
    def test_tree_frozen_strings(self):
        d = build_diagram_F0(1, 2, 2)
        nodes = {k: format_expr(v) for k, v in d.nodes.items()}
        assert nodes["P1D"] == "Z^2"
        assert nodes["S"] == "wrCP(Atom(S:D1)*Atom(S:D2);1,2)"
        assert nodes["G"] == "wrCP(Atom(G:D1)*Atom(G:D2);1,2)"
        assert nodes["P1O"] == "wrZ2(Atom(S:D1)*Atom(S:D2);1,2)"
        assert d.garside is None

    def test_smallest_tree(self):
        d = build_diagram_F0(1, 1, 1)
        nodes = {k: format_expr(v) for k, v in d.nodes.items()}
        assert nodes == {
            "P1D": "Z^2",
            "Delta": "Atom(Delta:D1)",
            "P1O": "wrZ2(Atom(S:D1);1,1)",
            "S": "wrCP(Atom(S:D1);1,1)",
            "G": "wrCP(Atom(G:D1);1,1)",
            "Combined": "Z^2*Atom(Delta:D1)",
        }

    def test_circuit_frozen_strings(self):
        d = build_diagram_F1(1, [(1, 1)])
        nodes = {k: format_expr(v) for k, v in d.nodes.items()}
        assert nodes["Delta"] == "quot(Atom(Delta:D1_1)*1Z;gen=(e,1))"
        assert nodes["S"] == \
            "quot(wrC(wrZ(Atom(S:D1_1);1);1);gen=((((e),1)),0))"
        assert nodes["G"] == "wrC(wrC(Atom(G:D1_1);1);1)"
        assert format_element(d.garside) == "(e,1)"
        assert format_element(d.garside_in_s) == "((((e),1)),0)"

    def test_wider_circuit_garside(self):
        d = build_diagram_F1(2, [(1, 2)])
        assert format_element(d.garside) == "(((e,e),2),((e,e),2))"

    def test_arrow_inventory(self):
        d = build_diagram_F1(1, [(1, 1)])
        assert sorted(d.arrows.keys()) == sorted([
            "p1", "d1", "j0", "rho", "rho_d1", "iota1", "section",
            "pr_lattice", "pr_delta"])

    def test_bad_parameters_rejected(self):
        for call in (lambda: build_diagram_F1(1, []),
                     lambda: build_diagram_F0(0, 1, 1),
                     lambda: build_diagram_F0(1, 1, 0),
                     lambda: build_diagram_F1(0, [(1, 1)]),
                     lambda: build_diagram_F1(1, [(0, 1)])):
            with pytest.raises(IncompatibleLeaves):
                call()

    def test_duplicate_leaf_labels_rejected(self):
        with pytest.raises(IncompatibleLeaves):
            build_diagram_F0(1, 2, 2,
                             leaves=[standard_leaf("D1"), standard_leaf("D1")])

    def test_mixed_leaf_modes_rejected(self):
        with pytest.raises(IncompatibleLeaves):
            build_diagram_F0(1, 2, 2,
                             leaves=[standard_leaf("D1"), symbolic_leaf("D2")])

    def test_from_classification(self, eggcarton_analysis, tilted_analysis):
        tree = diagram_from_classification(eggcarton_analysis[4])
        assert tree.classification == "F0"
        assert format_expr(tree.nodes["S"]) == \
            "wrCP(Atom(S:D1)*Atom(S:D2);1,2)"
        circuit = diagram_from_classification(tilted_analysis[4])
        assert circuit.classification == "F1"
        assert circuit.parameters["n"] == 1
        dec = [tuple(row) for row in circuit.parameters["decomposition"]]
        assert dec == [(1, 1)]


class TestVerification:
    def test_tree_green(self):
        d = build_diagram_F0(1, 1, 1, leaves=[standard_leaf("D1")])
        rep = verify_diagram(d)
        assert rep.ok
        assert {k: v.ok for k, v in rep.exactness.items()} == {
            "p1_d1": True, "j0_rho": True, "iota1_rho_d1": True}
        assert rep.centrality == {"p1_image_0": True, "p1_image_1": True}
        assert rep.compatibility == {"d1_iota1_equals_j0_pr": True,
                                     "iota1_extends_p1": True,
                                     "rho_d1_factors": True}
        assert all(v == [] for v in rep.homomorphism.values())
        assert rep.counterexamples() == {}

    def test_circuit_green_with_quotient_checks(self):
        d = build_diagram_F1(1, [(1, 1)], leaves=[[standard_leaf("D1_1")]])
        rep = verify_diagram(d)
        assert rep.ok
        assert rep.centrality["garside_delta"] is True
        assert rep.centrality["garside_s"] is True
        assert rep.compatibility["garside_in_rho_kernel"] is True
        assert rep.compatibility["j0_kills_garside"] is True

    def test_report_serializes(self):
        d = build_diagram_F0(1, 1, 1, leaves=[standard_leaf("D1")])
        rep = verify_diagram(d)
        payload = json.dumps(rep.to_dict(), sort_keys=True)
        assert "p1_d1" in payload
        full = diagram_report(d, rep)
        assert full["nodes"]["S"] == "wrCP(Atom(S:D1);1,1)"
        assert json.dumps(full, sort_keys=True)

    def test_symbolic_diagram_cannot_verify(self):
        with pytest.raises(UnassignedAtom):
            verify_diagram(build_diagram_F0(1, 1, 1))

    def test_corrupted_projection_detected(self):
        d = build_diagram_F0(1, 1, 1, leaves=[standard_leaf("D1")])
        broken = make_atom_maps({"D1": {0: 0, 1: 1, 2: 1, 3: 0}})
        d.arrows["rho"] = Homomorphism(d.nodes["S"], d.nodes["G"],
                                       LeafMap(broken), name="rho")
        rep = verify_diagram(d)
        assert not rep.ok
        bad = rep.counterexamples()
        assert "j0_rho" in bad
        assert "hom:rho" in bad

    def test_seed_stability(self):
        d = build_diagram_F0(1, 2, 1, leaves=[standard_leaf("D1")])
        a = verify_diagram(d, seed=7).to_dict()
        b = verify_diagram(d, seed=7).to_dict()
        assert a == b


class TestThetaSplitting:
    def test_default_ranks(self):
        rep = theta_splitting_check(1, [(1, 1)])
        assert rep.lattice_rank == 2
        assert rep.generator == (0, 1)
        assert rep.diagonal == (1,)
        assert rep.torsion_free and rep.splits
        assert rep.complement_rank == rep.lattice_rank - 1

    def test_rank_zero_leaves(self):
        rep = theta_splitting_check(1, [(1, 1)], delta_ranks=[[0]])
        assert rep.lattice_rank == 1
        assert rep.complement_rank == 0
        assert rep.torsion_free

    @pytest.mark.parametrize("n,dec", [(1, [(1, 1)]), (1, [(1, 2)]),
                                       (2, [(1, 1)]), (2, [(1, 2)]),
                                       (2, [(2, 3), (1, 2)])])
    def test_complement_rank_rule(self, n, dec):
        for ranks in (None, [[0] * c for c, _ in dec], [[1] * c for c, _ in dec]):
            rep = theta_splitting_check(n, dec, delta_ranks=ranks)
            assert rep.torsion_free
            assert rep.complement_rank == rep.lattice_rank - 1
            assert oracles.sympy_snf_diagonal([list(rep.generator)]) == [1]

    def test_non_primitive_generator(self):
        with pytest.raises(NonPrimitiveGenerator):
            theta_splitting_check(1, [(1, 1)], generator=(2, 4))

    def test_zero_generator(self):
        with pytest.raises(NonPrimitiveGenerator):
            theta_splitting_check(1, [(1, 1)], generator=(0, 0))

    def test_diagonal_matches_sympy(self):
        rep = theta_splitting_check(2, [(1, 2)])
        assert list(rep.diagonal) == oracles.sympy_snf_diagonal(
            [list(rep.generator)])
