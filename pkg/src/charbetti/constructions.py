"""Named constructions: the built-in corpus of ideals, complexes and graphs
whose characteristic-dependent behaviour the toolkit reproduces.

Keys: ``dunce_cap`` (parametrized by a prime p >= 2), ``klein_bottle``,
``rp2``, ``kty``, ``katzman`` and ``edge_ideal_square_example``.  Generator
and facet lists are transcribed verbatim; canonicalization happens in the
ideal/complex constructors.
"""

from __future__ import annotations

from .complexes import (
    Graph,
    SimplicialComplex,
    complex_of_ideal,
    edge_ideal,
    stanley_reisner_ideal,
)
from .errors import ArgumentError, UnknownCorpusError
from .ideals import MonomialIdeal, VariableContext, parse_monomial

# squarefree generators as variable-index tuples --------------------------

# minimal triangulation of the real projective plane: Stanley-Reisner
# ideal on 6 vertices, 10 cubics
_RP2_GENS = [
    (1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6),
    (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6),
]

# Stanley-Reisner ideal of a vertex-minimal 8-vertex Klein bottle
# triangulation: 4 quadrics and 18 cubics
_KLEIN_GENS = [
    (3, 8), (4, 5), (6, 7), (7, 8),
    (1, 2, 4), (1, 3, 4), (2, 3, 4), (1, 2, 5), (2, 3, 5),
    (1, 4, 6), (1, 5, 6), (2, 5, 6), (1, 2, 7), (1, 3, 7),
    (2, 4, 7), (3, 5, 7), (1, 2, 8), (1, 5, 8), (2, 6, 8),
    (1, 3, 6), (2, 3, 6), (4, 6, 8),
]

# Kimura-Terai-Yoshida ideal: 6 generators of degree 5 in 10 variables
_KTY_GENS = [
    (1, 2, 8, 9, 10), (2, 3, 4, 5, 10), (5, 6, 7, 8, 10),
    (1, 4, 5, 6, 9), (1, 2, 3, 6, 7), (3, 4, 7, 8, 9),
]

# smallest edge ideal with characteristic-dependent resolution
# (an 11-vertex graph found by Katzman)
_KATZMAN_EDGES = [
    (1, 5), (1, 6), (1, 8), (1, 10), (2, 5), (2, 6), (2, 9), (2, 11),
    (3, 7), (3, 8), (3, 9), (3, 11), (4, 7), (4, 8), (4, 10), (4, 11),
    (5, 8), (5, 9), (6, 10), (6, 11), (7, 9), (7, 10), (8, 11),
]

# a 12-vertex edge ideal whose Betti numbers are field-independent while
# its square has a characteristic-2 jump at homological index 5 (the
# transcription repeats the edge {2,12}; deduplication handles it)
_SQUARE_EXAMPLE_EDGES = [
    (1, 2), (2, 3), (2, 4), (2, 5), (2, 6), (2, 12), (1, 4), (1, 6),
    (1, 7), (1, 8), (2, 12), (3, 5), (3, 8), (3, 11), (3, 12), (4, 5),
    (4, 9), (4, 10), (5, 7), (5, 9), (6, 7), (6, 10), (6, 11), (7, 8),
    (7, 9), (7, 12), (8, 11), (9, 10), (9, 12), (10, 11), (10, 12),
    (11, 12),
]

CORPUS_KEYS = (
    "dunce_cap",
    "klein_bottle",
    "rp2",
    "kty",
    "katzman",
    "edge_ideal_square_example",
)

# scan probe templates: when a full Betti table of a power exceeds the
# guards, the scanner falls back to these multidegrees (exponent template
# uses h for the power) at the listed homological indices
PROBE_TEMPLATES: dict[str, dict] = {
    "klein_bottle": {
        "indices": (4, 5),
        "exponents": ("1", "1", "1", "h", "h", "1", "1", "1"),
    },
    "kty": {
        "indices": (2, 3),
        "exponents": ("h", "h", "1", "1", "1", "1", "1", "h", "h", "h"),
    },
}

# corpus entries whose heavier computations are tagged as extended-scale
EXTENDED_ENTRIES = ("edge_ideal_square_example",)


def _ideal_from_index_tuples(n: int, gens: list[tuple[int, ...]]) -> MonomialIdeal:
    context = VariableContext(tuple(f"x{i}" for i in range(1, n + 1)))
    monomials = [
        parse_monomial(" ".join(f"x{i}" for i in g), context) for g in gens
    ]
    return MonomialIdeal.from_gens(monomials, context)


def _graph_from_index_pairs(n: int, edges: list[tuple[int, int]]) -> Graph:
    vertices = tuple(str(i) for i in range(1, n + 1))
    seen = []
    for a, b in edges:
        e = (str(a), str(b))
        if frozenset(e) not in [frozenset(x) for x in seen]:
            seen.append(e)
    return Graph.from_labeled_edges(vertices, seen)


def dunce_cap_complex(p: int) -> SimplicialComplex:
    """Triangulated disk with the boundary identified p-to-1: 2p+3
    vertices, 9p edges and 7p-2 facets.  The first reduced homology over
    the integers is Z/p, which makes its Stanley-Reisner ideal a
    characteristic-p test case.

    Facets are emitted in the fixed bullet order of the construction so
    the corpus files are byte-reproducible.
    """
    if p < 2:
        raise ArgumentError("the dunce cap construction needs p >= 2")
    vertices = tuple(str(i) for i in range(1, 2 * p + 4))
    facets: list[tuple[int, ...]] = []
    for k in range(4, 2 * p + 3):
        if k % 2 == 0:
            facets.extend([(2, k, k + 1), (1, 2, k), (1, 3, k)])
    for k in range(5, 2 * p + 2):
        if k % 2 == 1:
            facets.extend([(3, k, k + 1), (2, 3, k)])
    for k in range(5, 2 * p + 3):
        facets.append((4, k, k + 1))
    facets.extend([(2, 3, 2 * p + 3), (3, 4, 2 * p + 3)])
    return SimplicialComplex.from_labeled_facets(
        vertices, [tuple(str(v) for v in f) for f in facets]
    )


def rp2_ideal() -> MonomialIdeal:
    return _ideal_from_index_tuples(6, _RP2_GENS)


def klein_bottle_ideal() -> MonomialIdeal:
    return _ideal_from_index_tuples(8, _KLEIN_GENS)


def kty_ideal() -> MonomialIdeal:
    return _ideal_from_index_tuples(10, _KTY_GENS)


def katzman_graph() -> Graph:
    return _graph_from_index_pairs(11, _KATZMAN_EDGES)


def katzman_ideal() -> MonomialIdeal:
    return edge_ideal(katzman_graph())


def square_example_graph() -> Graph:
    return _graph_from_index_pairs(12, _SQUARE_EXAMPLE_EDGES)


def square_example_ideal() -> MonomialIdeal:
    return edge_ideal(square_example_graph())


def construct(name: str, p: int | None = None, emit: str | None = None):
    """Build a corpus object.

    ``emit`` selects the representation: ``ideal``, ``complex`` or
    ``graph`` (where meaningful); each key also has a natural default.
    """
    key = name.replace("-", "_")
    if key not in CORPUS_KEYS:
        raise UnknownCorpusError(f"unknown construction: {name!r}")
    if key == "dunce_cap":
        if p is None:
            raise ArgumentError("dunce_cap needs the parameter p")
        complex_ = dunce_cap_complex(p)
        emit = emit or "complex"
        if emit == "complex":
            return complex_
        if emit == "ideal":
            return stanley_reisner_ideal(complex_)
        raise ArgumentError(f"dunce_cap cannot emit {emit!r}")

    if p is not None:
        raise ArgumentError(f"{key} takes no parameter p")

    graphs = {"katzman": katzman_graph, "edge_ideal_square_example": square_example_graph}
    ideals = {
        "klein_bottle": klein_bottle_ideal,
        "rp2": rp2_ideal,
        "kty": kty_ideal,
        "katzman": katzman_ideal,
        "edge_ideal_square_example": square_example_ideal,
    }
    emit = emit or "ideal"
    if emit == "graph":
        if key not in graphs:
            raise ArgumentError(f"{key} cannot emit a graph")
        return graphs[key]()
    if emit == "ideal":
        return ideals[key]()
    if emit == "complex":
        ideal = ideals[key]()
        return complex_of_ideal(ideal)
    raise ArgumentError(f"unknown emit kind: {emit!r}")


def corpus_ideal(name: str, p: int | None = None) -> MonomialIdeal:
    obj = construct(name, p=p, emit="ideal")
    assert isinstance(obj, MonomialIdeal)
    return obj


def corpus_dir():
    """Directory of the shipped corpus files (exact generator lists with a
    checksum manifest guarding against silent edits)."""
    from importlib.resources import files

    return files("charbetti") / "corpus"


def corpus_file_text(filename: str) -> str:
    return (corpus_dir() / filename).read_text(encoding="utf-8")


def corpus_manifest() -> dict:
    import json

    return json.loads(corpus_file_text("manifest.json"))
