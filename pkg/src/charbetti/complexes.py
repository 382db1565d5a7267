"""Simplicial complexes (as facet lists), graphs, and the Stanley-Reisner
dictionary in both directions, plus Alexander duality, induced subcomplexes
and barycentric subdivision.

A complex stores an explicit ordered vertex list; the void complex (no
faces at all) and the irrelevant complex {<empty set>} are distinct values.
Facet lists keep their construction order (the named constructions promise
a reproducible facet order), while equality compares them as sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .errors import ArgumentError, FormatError
from .guards import DEFAULT_GUARDS, GuardConfig
from .ideals import (
    Monomial,
    MonomialIdeal,
    VariableContext,
    _VAR_NAME,
)

# token for the empty facet in the complex text format (irrelevant complex)
EMPTY_FACET_TOKEN = "{}"


def variable_name_for_label(label: str) -> str:
    """Deterministic vertex-label -> variable-name mapping: labels that are
    already valid names pass through, anything else (e.g. the all-digit
    labels of the named triangulations) gets an ``x`` prefix."""
    return label if _VAR_NAME.match(label) else f"x{label}"


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """An abstract simplicial complex given by vertices and facets.

    ``facets`` holds 0-based vertex-index frozensets, inclusion-minimal
    in the sense that no facet contains another, in construction order.
    ``facets == ()`` is the void complex; ``facets == (frozenset(),)`` is
    the irrelevant complex whose only face is the empty set.
    """

    vertices: tuple[str, ...]
    facets: tuple[frozenset[int], ...]

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise ArgumentError("vertex labels must be unique")
        for f in self.facets:
            for v in f:
                if not 0 <= v < n:
                    raise ArgumentError("facet references unknown vertex")
        # inclusion-minimality is an invariant of the factories; the direct
        # constructor trusts its callers (order complexes can have many
        # thousands of facets, all maximal by construction)
        if len(self.facets) <= 64:
            for a in self.facets:
                for b in self.facets:
                    if a is not b and a <= b:
                        raise ArgumentError("facet list is not inclusion-minimal")

    @classmethod
    def from_facets(
        cls, vertices: Sequence[str], facets: Iterable[Iterable[int]]
    ) -> "SimplicialComplex":
        """Build from an arbitrary facet list: contained or duplicate
        facets are dropped, first appearance wins the ordering."""
        sets = []
        for f in facets:
            fs = frozenset(f)
            if any(fs <= g for g in sets):
                continue
            sets = [g for g in sets if not g <= fs]
            sets.append(fs)
        return cls(tuple(vertices), tuple(sets))

    @classmethod
    def from_labeled_facets(
        cls, vertices: Sequence[str], facets: Iterable[Iterable[str]]
    ) -> "SimplicialComplex":
        index = {v: i for i, v in enumerate(vertices)}
        return cls.from_facets(
            vertices, ([index[label] for label in f] for f in facets)
        )

    @classmethod
    def void(cls, vertices: Sequence[str]) -> "SimplicialComplex":
        return cls(tuple(vertices), ())

    @classmethod
    def irrelevant(cls, vertices: Sequence[str]) -> "SimplicialComplex":
        return cls(tuple(vertices), (frozenset(),))

    @classmethod
    def full_simplex(cls, vertices: Sequence[str]) -> "SimplicialComplex":
        return cls(tuple(vertices), (frozenset(range(len(vertices))),))

    # -- equality is structural, facet order does not matter -------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and frozenset(self.facets) == frozenset(
            other.facets
        )

    def __hash__(self) -> int:
        return hash((self.vertices, frozenset(self.facets)))

    # -- structure --------------------------------------------------------

    def is_void(self) -> bool:
        return not self.facets

    def is_irrelevant(self) -> bool:
        return self.facets == (frozenset(),)

    def dim(self) -> int:
        """Dimension; -1 for the irrelevant complex.  Undefined (error)
        for the void complex."""
        if self.is_void():
            raise ArgumentError("the void complex has no dimension")
        return max(len(f) for f in self.facets) - 1

    def label_set(self, face: frozenset[int]) -> frozenset[str]:
        return frozenset(self.vertices[i] for i in face)

    def has_face(self, face: Iterable[int]) -> bool:
        fs = frozenset(face)
        return any(fs <= g for g in self.facets)

    def faces_by_dim(
        self, guards: GuardConfig = DEFAULT_GUARDS
    ) -> dict[int, list[frozenset[int]]]:
        """All faces grouped by dimension, each list sorted; dimension -1
        holds the empty face (absent for the void complex)."""
        if self.is_void():
            return {}
        seen: set[frozenset[int]] = set()
        stack = list(self.facets)
        total = 0
        while stack:
            f = stack.pop()
            if f in seen:
                continue
            seen.add(f)
            total += 1
            guards.check("max-faces", total, guards.max_faces)
            if len(f) > 1:
                stack.extend(f - {v} for v in f)
            elif len(f) == 1:
                stack.append(frozenset())
        seen.add(frozenset())
        out: dict[int, list[frozenset[int]]] = {}
        for f in seen:
            out.setdefault(len(f) - 1, []).append(f)
        for d in out:
            out[d].sort(key=sorted)
        return out

    def f_vector(self) -> dict[int, int]:
        return {d: len(fs) for d, fs in self.faces_by_dim().items() if d >= 0}

    def euler_characteristic(self) -> int:
        """Ordinary (non-reduced) Euler characteristic."""
        return sum((-1) ** d * c for d, c in self.f_vector().items())

    def edges(self) -> list[frozenset[int]]:
        return self.faces_by_dim().get(1, [])

    # -- text -------------------------------------------------------------

    def to_text(self) -> str:
        lines = ["vertices: " + " ".join(self.vertices)]
        for f in self.facets:
            if not f:
                lines.append(EMPTY_FACET_TOKEN)
            else:
                lines.append(" ".join(self.vertices[i] for i in sorted(f)))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class Graph:
    """A finite simple graph: ordered vertex labels, loop-free edges."""

    vertices: tuple[str, ...]
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise ArgumentError("vertex labels must be unique")
        seen = set()
        for e in self.edges:
            if len(e) != 2:
                raise ArgumentError("edges must join two distinct vertices")
            if any(not 0 <= v < n for v in e):
                raise ArgumentError("edge references unknown vertex")
            if e in seen:
                raise ArgumentError("duplicate edge")
            seen.add(e)

    @classmethod
    def from_labeled_edges(
        cls, vertices: Sequence[str], edges: Iterable[tuple[str, str]]
    ) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        return cls(
            tuple(vertices),
            tuple(frozenset((index[a], index[b])) for a, b in edges),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and frozenset(self.edges) == frozenset(
            other.edges
        )

    def __hash__(self) -> int:
        return hash((self.vertices, frozenset(self.edges)))

    def to_text(self) -> str:
        lines = ["vertices: " + " ".join(self.vertices)]
        for e in self.edges:
            lines.append(" ".join(self.vertices[i] for i in sorted(e)))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Stanley-Reisner dictionary
# ---------------------------------------------------------------------------


def _context_for_vertices(vertices: Sequence[str]) -> VariableContext:
    names = [variable_name_for_label(v) for v in vertices]
    if len(set(names)) != len(names):
        raise FormatError("vertex labels collide after variable-name mapping")
    return VariableContext(tuple(names))


def minimal_nonfaces(complex_: SimplicialComplex) -> list[frozenset[int]]:
    """Minimal non-faces, enumerated breadth-first over the subset lattice
    in order of cardinality (then lexicographically).

    A minimal non-face has all proper subsets among the faces, so its size
    is at most dim + 2; for the void complex the empty set is the unique
    minimal non-face.
    """
    if complex_.is_void():
        return [frozenset()]
    n = len(complex_.vertices)
    facet_masks = [sum(1 << v for v in f) for f in complex_.facets]
    found: list[int] = []
    out: list[frozenset[int]] = []
    max_size = min(n, complex_.dim() + 2)
    for k in range(1, max_size + 1):
        for combo in combinations(range(n), k):
            mask = sum(1 << v for v in combo)
            if any(nf & mask == nf for nf in found):
                continue
            if any(mask & ~fm == 0 for fm in facet_masks):
                continue
            found.append(mask)
            out.append(frozenset(combo))
    return out


def stanley_reisner_ideal(complex_: SimplicialComplex) -> MonomialIdeal:
    """The squarefree ideal generated by the minimal non-faces, one
    variable per vertex in vertex order.  The void complex maps to the
    unit ideal, the irrelevant complex to the ideal of all variables."""
    context = _context_for_vertices(complex_.vertices)
    gens = [
        Monomial(context, tuple((v + 1, 1) for v in sorted(nf)))
        for nf in minimal_nonfaces(complex_)
    ]
    if not gens:
        return MonomialIdeal.zero(context)
    return MonomialIdeal.from_gens(gens, context)


def complex_of_ideal(
    ideal: MonomialIdeal, guards: GuardConfig = DEFAULT_GUARDS
) -> SimplicialComplex:
    """Inverse Stanley-Reisner map: faces are the vertex subsets containing
    no generator's support.  Vertices are labeled by the variable names.
    Requires a squarefree ideal."""
    from .errors import SquarefreeRequiredError

    if not ideal.is_squarefree():
        raise SquarefreeRequiredError(
            "the Stanley-Reisner correspondence needs a squarefree ideal"
        )
    n = len(ideal.context)
    guards.check("max-faces", 2 ** n if n < 63 else 2 ** 62, guards.max_faces)
    vertices = tuple(ideal.context.names)
    gen_masks = [sum(1 << (i - 1) for i, _ in g.exps) for g in ideal.gens]
    if any(m == 0 for m in gen_masks):  # 1 is a generator: the unit ideal
        return SimplicialComplex.void(vertices)
    faces = set()
    for mask in range(2 ** n):
        if all(gm & mask != gm for gm in gen_masks):
            faces.add(mask)
    facets = [
        m
        for m in faces
        if all((m | (1 << v)) not in faces for v in range(n) if not m & (1 << v))
    ]
    facets.sort(key=lambda m: (bin(m).count("1"), m))
    return SimplicialComplex(
        vertices,
        tuple(frozenset(v for v in range(n) if m & (1 << v)) for m in facets),
    )


def alexander_dual(complex_: SimplicialComplex) -> SimplicialComplex:
    """Combinatorial Alexander dual relative to the complex's vertex set:
    the facets of the dual are the complements of the minimal non-faces."""
    all_vertices = frozenset(range(len(complex_.vertices)))
    return SimplicialComplex.from_facets(
        complex_.vertices,
        (all_vertices - nf for nf in minimal_nonfaces(complex_)),
    )


def induced_subcomplex(
    complex_: SimplicialComplex, labels: Iterable[str]
) -> SimplicialComplex:
    """Faces of the complex contained in the given vertex subset; the
    result's vertex set is that subset (in the ambient vertex order)."""
    wanted = set(labels)
    unknown = wanted - set(complex_.vertices)
    if unknown:
        raise ArgumentError(f"unknown vertices: {sorted(unknown)}")
    keep = [i for i, v in enumerate(complex_.vertices) if v in wanted]
    reindex = {old: new for new, old in enumerate(keep)}
    vertices = tuple(complex_.vertices[i] for i in keep)
    if complex_.is_void():
        return SimplicialComplex.void(vertices)
    facets = [
        frozenset(reindex[v] for v in f if v in reindex) for f in complex_.facets
    ]
    return SimplicialComplex.from_facets(vertices, facets)


def barycentric_subdivision(complex_: SimplicialComplex) -> SimplicialComplex:
    """Vertices are the nonempty faces (labeled by joining the original
    labels with dots), facets are the maximal chains under inclusion."""
    if complex_.is_void():
        return SimplicialComplex.void(())
    by_dim = complex_.faces_by_dim()
    faces = [f for d, fs in sorted(by_dim.items()) if d >= 0 for f in fs]
    if not faces:
        return SimplicialComplex.irrelevant(())

    def label(face: frozenset[int]) -> str:
        return ".".join(complex_.vertices[i] for i in sorted(face))

    vertices = tuple(label(f) for f in faces)
    index = {f: i for i, f in enumerate(faces)}
    chains = []
    for facet in complex_.facets:
        for perm in permutations(sorted(facet)):
            chain = []
            running: set[int] = set()
            for v in perm:
                running.add(v)
                chain.append(index[frozenset(running)])
            chains.append(chain)
    return SimplicialComplex.from_facets(vertices, chains)


# ---------------------------------------------------------------------------
# graph constructions
# ---------------------------------------------------------------------------


def edge_ideal(graph: Graph) -> MonomialIdeal:
    """The squarefree quadratic ideal with one generator x_i x_j per edge."""
    context = _context_for_vertices(graph.vertices)
    gens = [
        Monomial(context, tuple((v + 1, 1) for v in sorted(e))) for e in graph.edges
    ]
    if not gens:
        return MonomialIdeal.zero(context)
    return MonomialIdeal.from_gens(gens, context)


def _fresh_apex_label(vertices: Sequence[str]) -> str:
    if vertices and all(v.isdigit() for v in vertices):
        return str(max(int(v) for v in vertices) + 1)
    k = 0
    while True:
        candidate = "apex" if k == 0 else f"apex{k}"
        if candidate not in vertices:
            return candidate
        k += 1


def cone(graph: Graph) -> Graph:
    """Add one new vertex adjacent to every existing vertex."""
    apex = _fresh_apex_label(graph.vertices)
    vertices = graph.vertices + (apex,)
    a = len(graph.vertices)
    edges = graph.edges + tuple(frozenset((i, a)) for i in range(a))
    return Graph(vertices, edges)


def disjoint_edge(graph: Graph) -> Graph:
    """Add two fresh vertices joined by a single edge."""
    k = 1
    while f"y{k}" in graph.vertices or f"y{k + 1}" in graph.vertices:
        k += 1
    vertices = graph.vertices + (f"y{k}", f"y{k + 1}")
    n = len(graph.vertices)
    return Graph(vertices, graph.edges + (frozenset((n, n + 1)),))


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------


def _parse_lines(text: str) -> tuple[list[str] | None, list[tuple[int, list[str]]]]:
    header: list[str] | None = None
    body: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vertices:"):
            if header is not None:
                raise FormatError(f"line {lineno}: duplicate vertices header")
            if body:
                raise FormatError(f"line {lineno}: vertices header after facets")
            header = line[len("vertices:"):].split()
            continue
        body.append((lineno, line.split()))
    return header, body


def parse_complex_text(text: str) -> SimplicialComplex:
    header, body = _parse_lines(text)
    if header is None:
        labels: list[str] = []
        for _, tokens in body:
            for tok in tokens:
                if tok != EMPTY_FACET_TOKEN and tok not in labels:
                    labels.append(tok)
        header = labels
    index = {v: i for i, v in enumerate(header)}
    facets = []
    for lineno, tokens in body:
        if tokens == [EMPTY_FACET_TOKEN]:
            facets.append(frozenset())
            continue
        try:
            facets.append(frozenset(index[tok] for tok in tokens))
        except KeyError as exc:
            raise FormatError(f"line {lineno}: unknown vertex {exc.args[0]!r}") from None
    return SimplicialComplex.from_facets(tuple(header), facets)


def parse_graph_text(text: str) -> Graph:
    header, body = _parse_lines(text)
    if header is None:
        labels = []
        for _, tokens in body:
            for tok in tokens:
                if tok not in labels:
                    labels.append(tok)
        header = labels
    index = {v: i for i, v in enumerate(header)}
    edges = []
    for lineno, tokens in body:
        if len(tokens) != 2:
            raise FormatError(f"line {lineno}: a graph edge needs exactly two labels")
        try:
            edges.append((tokens[0], tokens[1]))
        except KeyError:  # pragma: no cover - defensive
            raise FormatError(f"line {lineno}: unknown vertex") from None
        if tokens[0] not in index or tokens[1] not in index:
            raise FormatError(f"line {lineno}: unknown vertex")
    return Graph.from_labeled_edges(tuple(header), edges)
