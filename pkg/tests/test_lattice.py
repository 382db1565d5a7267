from __future__ import annotations

from itertools import chain, combinations

import pytest

from charbetti.errors import ArgumentError, NotInLatticeError
from charbetti.guards import GuardConfig, ResourceLimitError
from charbetti.homology import ChainComplex
from charbetti.ideals import Monomial, MonomialIdeal, VariableContext, parse_monomial
from charbetti.lattice import (
    build_lattice,
    count_chains,
    interval_face_counts,
    open_interval,
)
from conftest import ideal_from


def brute_force_lattice(ideal: MonomialIdeal) -> set[tuple[int, ...]]:
    """All lcms of generator subsets (the empty subset gives 1)."""
    out = set()
    gens = ideal.vectors()
    n = len(ideal.context)
    for subset in chain.from_iterable(
        combinations(gens, k) for k in range(len(gens) + 1)
    ):
        lcm = tuple(max(col) if col else 0 for col in zip(*subset)) if subset else (0,) * n
        out.add(lcm if subset else (0,) * n)
    return out


class TestBuildLattice:
    def test_two_variables(self):
        lattice = build_lattice(ideal_from("x", "y"))
        assert sorted(str(m) for m in lattice.elements()) == ["1", "x", "x y", "y"]

    def test_triangle_matches_brute_force(self):
        ideal = ideal_from("x y", "y z", "x z")
        lattice = build_lattice(ideal)
        assert set(lattice.vectors) == brute_force_lattice(ideal)
        assert len(lattice) == 5

    def test_maximal_ideal_is_boolean(self):
        ideal = ideal_from("x", "y", "z")
        lattice = build_lattice(ideal)
        assert len(lattice) == 8
        assert set(lattice.vectors) == brute_force_lattice(ideal)

    def test_rp2_atoms_are_the_generators(self, rp2):
        lattice = build_lattice(rp2)
        assert sorted(lattice.atom_vectors) == sorted(rp2.vectors())
        assert set(lattice.vectors) == brute_force_lattice(rp2)

    def test_zero_ideal_rejected(self):
        with pytest.raises(ArgumentError):
            build_lattice(MonomialIdeal.zero(VariableContext(("x",))))

    def test_element_guard(self):
        guards = GuardConfig(max_lattice_elements=4)
        with pytest.raises(ResourceLimitError):
            build_lattice(ideal_from("x", "y", "z"), guards)

    def test_hasse_for_boolean_lattice(self):
        lattice = build_lattice(ideal_from("x", "y"))
        edges = lattice.hasse_edges()
        # covers of the Boolean lattice on two atoms: 1<x, 1<y, x<xy, y<xy
        assert len(edges) == 4
        for a, b in edges:
            assert sum(b) == sum(a) + 1


class TestOpenInterval:
    def test_atom_gives_irrelevant_complex(self):
        ideal = ideal_from("x y", "y z", "x z")
        lattice = build_lattice(ideal)
        interval = open_interval(lattice, ideal.gens[0])
        assert interval.is_irrelevant()

    def test_triangle_top_is_three_points(self):
        ideal = ideal_from("x y", "y z", "x z")
        lattice = build_lattice(ideal)
        top = Monomial.from_vector(ideal.context, (1, 1, 1))
        interval = open_interval(lattice, top)
        assert interval.f_vector() == {0: 3}

    def test_mixed_degrees_chain_structure(self):
        # below x^2 y^2: the atoms x^2, xy, y^2 plus the joins x^2 y and
        # x y^2, with xy under both joins and each pure power under one;
        # the chains form a 5-vertex path (hence an acyclic interval)
        ideal = ideal_from("x^2", "x y", "y^2")
        lattice = build_lattice(ideal)
        top = Monomial.from_vector(ideal.context, (2, 2))
        interval = open_interval(lattice, top)
        assert interval.f_vector() == {0: 5, 1: 4}
        assert set(interval.vertices) == {"x^2", "x y", "y^2", "x^2 y", "x y^2"}
        chains = {frozenset(interval.label_set(f)) for f in interval.facets}
        assert chains == {
            frozenset({"x y", "x^2 y"}),
            frozenset({"x y", "x y^2"}),
            frozenset({"x^2", "x^2 y"}),
            frozenset({"y^2", "x y^2"}),
        }

    def test_off_lattice_is_an_error(self):
        ideal = ideal_from("x y", "y z", "x z")
        lattice = build_lattice(ideal)
        probe = Monomial.from_vector(ideal.context, (2, 1, 1))
        with pytest.raises(NotInLatticeError):
            open_interval(lattice, probe)

    def test_boundaries_square_to_zero(self, rp2):
        lattice = build_lattice(rp2)
        top = rp2.lcm_of_gens()
        interval = open_interval(lattice, top)
        assert ChainComplex.from_simplicial(interval).dd_is_zero()


class TestFaceCounts:
    def test_counts_match_enumeration(self, rp2):
        lattice = build_lattice(rp2)
        counts = interval_face_counts(lattice)
        for vector in lattice.vectors:
            if not any(vector):
                continue
            interval = open_interval(lattice, lattice.monomial(vector))
            faces = interval.faces_by_dim()
            total = sum(len(v) for v in faces.values())
            assert counts[vector] == total

    def test_count_chains_cap_short_circuits(self):
        ideal = ideal_from("x", "y", "z", "w")
        lattice = build_lattice(ideal)
        counts = interval_face_counts(lattice)
        top = max(counts.values())
        assert top > 1
        # the DFS guard agrees with the DP count
        guards = GuardConfig(max_faces=int(top) - 1)
        with pytest.raises(ResourceLimitError):
            open_interval(lattice, lattice.monomial(lattice.top), guards)
