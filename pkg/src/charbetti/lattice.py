"""The lcm lattice of a monomial ideal and the order complexes of its
open intervals — the substrate of the multigraded Betti number engine.

Elements are the least common multiples of subsets of the minimal
generators, ordered by divisibility, with bottom 1 (the lcm of the empty
set) and top lcm(G(I)).  Closing the generator set under lcm *with the
atoms only* suffices, since the lcm of any subset is a fold of atom lcms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complexes import SimplicialComplex
from .errors import ArgumentError, NotInLatticeError
from .guards import DEFAULT_GUARDS, GuardConfig
from .ideals import Monomial, MonomialIdeal, VariableContext


@dataclass(frozen=True, eq=False)
class LcmLattice:
    """Deduplicated lcm closure of the generators, as exponent vectors.

    ``vectors`` is lexicographically sorted and includes the bottom (the
    zero vector, i.e. the monomial 1) and the top.  The Hasse diagram is
    computed lazily; open-interval machinery only ever looks at the
    divisors of one element, which is cheaper than the global diagram.
    """

    context: VariableContext
    vectors: tuple[tuple[int, ...], ...]
    atom_vectors: tuple[tuple[int, ...], ...]
    _hasse: dict | None = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def bottom(self) -> tuple[int, ...]:
        return (0,) * len(self.context)

    @property
    def top(self) -> tuple[int, ...]:
        top = [0] * len(self.context)
        for v in self.atom_vectors:
            for i, e in enumerate(v):
                if e > top[i]:
                    top[i] = e
        return tuple(top)

    def elements(self) -> list[Monomial]:
        return [Monomial.from_vector(self.context, v) for v in self.vectors]

    def atoms(self) -> list[Monomial]:
        return [Monomial.from_vector(self.context, v) for v in self.atom_vectors]

    def monomial(self, vector: tuple[int, ...]) -> Monomial:
        return Monomial.from_vector(self.context, vector)

    def contains(self, m: Monomial) -> bool:
        return m.in_context(self.context).vector() in set(self.vectors)

    def strict_divisors(self, vector: tuple[int, ...]) -> list[tuple[int, ...]]:
        """Lattice elements strictly dividing ``vector`` (excluding the
        bottom), in sorted order."""
        arr = np.asarray(self.vectors, dtype=np.int64)
        target = np.asarray(vector, dtype=np.int64)
        mask = np.all(arr <= target, axis=1) & ~np.all(arr == target, axis=1)
        out = [tuple(int(x) for x in row) for row in arr[mask]]
        return [v for v in out if any(v)]

    def hasse_edges(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Cover relations (a, b) with a strictly below b, computed by
        transitive reduction of strict divisibility; cached."""
        if self._hasse is not None:
            return self._hasse["edges"]
        by_degree = sorted(self.vectors, key=lambda v: (sum(v), v))
        edges: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        for b in by_degree:
            strict = [a for a in by_degree if sum(a) < sum(b)
                      and all(x <= y for x, y in zip(a, b)) and a != b]
            covers = [
                a
                for a in strict
                if not any(
                    a != c and all(x <= y for x, y in zip(a, c)) for c in strict
                )
            ]
            edges.extend((a, b) for a in covers)
        object.__setattr__(self, "_hasse", {"edges": edges})
        return edges


def interval_face_counts(lattice: LcmLattice) -> dict[tuple[int, ...], float]:
    """Exact number of faces of the order complex of (1, m) for every
    lattice element m, from one dynamic-programming pass.

    Every chain ending at y lies below y, so with T(y) = number of chains
    ending at y we get T(x) = 1 + sum of T(y) over strict divisors y of x
    (bottom excluded), and the open interval (1, m) has T(m) - 1 chains;
    adding the empty face makes T(m) faces.  Counts are float64: they are
    only compared against guards, and overflow is impossible before any
    practical cap is exceeded.
    """
    arr = np.asarray(lattice.vectors, dtype=np.int64)
    degrees = arr.sum(axis=1)
    order = np.argsort(degrees, kind="stable")
    T = np.zeros(len(arr), dtype=np.float64)
    for idx in order:
        if degrees[idx] == 0:
            continue  # bottom: not an interval element
        mask = np.all(arr <= arr[idx], axis=1) & (degrees < degrees[idx]) & (degrees > 0)
        T[idx] = 1.0 + float(T[mask].sum())
    return {tuple(int(x) for x in arr[i]): float(T[i]) for i in range(len(arr))}


def build_lattice(
    ideal: MonomialIdeal, guards: GuardConfig = DEFAULT_GUARDS
) -> LcmLattice:
    """Iterative closure of the generators under lcm with the atoms,
    plus the bottom element 1."""
    if ideal.is_zero():
        raise ArgumentError("the zero ideal has no lcm lattice")
    n = len(ideal.context)
    atoms = ideal.vector_array()
    seen: dict[tuple[int, ...], None] = {}
    bottom = (0,) * n
    seen[bottom] = None
    frontier = np.unique(atoms, axis=0)
    for row in frontier:
        seen[tuple(int(x) for x in row)] = None
    while frontier.shape[0]:
        candidates = np.maximum(frontier[:, None, :], atoms[None, :, :]).reshape(-1, n)
        candidates = np.unique(candidates, axis=0)
        fresh = [
            tuple(int(x) for x in row)
            for row in candidates
            if tuple(int(x) for x in row) not in seen
        ]
        for v in fresh:
            seen[v] = None
        guards.check("max-lattice-elements", len(seen), guards.max_lattice_elements)
        frontier = (
            np.asarray(fresh, dtype=np.int64)
            if fresh
            else np.empty((0, n), dtype=np.int64)
        )
    vectors = tuple(sorted(seen))
    atom_tuples = tuple(tuple(int(x) for x in row) for row in np.unique(atoms, axis=0))
    return LcmLattice(ideal.context, vectors, atom_tuples)


def open_interval(
    lattice: LcmLattice,
    m: Monomial,
    guards: GuardConfig = DEFAULT_GUARDS,
) -> SimplicialComplex:
    """Order complex of the open interval (1, m): vertices are the lattice
    elements strictly between 1 and m, facets are the maximal chains under
    divisibility.

    Raises ``NotInLatticeError`` when m is not a lattice element (callers
    computing Betti numbers treat that case as zero instead).
    """
    target = m.in_context(lattice.context).vector()
    if target not in set(lattice.vectors):
        raise NotInLatticeError(f"{m} is not an lcm of generators")
    inside = [v for v in lattice.strict_divisors(target)]
    return _order_complex_of_divisor_poset(lattice.context, inside, guards)


def _divisibility_matrix(elements: list[tuple[int, ...]]) -> np.ndarray:
    """Boolean matrix of the strict-divisibility relation: entry (i, j)
    is True when element i strictly divides element j."""
    k = len(elements)
    arr = np.asarray(elements, dtype=np.int64).reshape(k, -1)
    degrees = arr.sum(axis=1)
    less = np.zeros((k, k), dtype=bool)
    for j in range(k):
        less[:, j] = np.all(arr <= arr[j], axis=1) & (degrees < degrees[j])
    return less


def count_chains(less: np.ndarray, cap: float) -> float:
    """Number of nonempty chains of the poset (= faces of its order
    complex), stopping early once ``cap`` is exceeded."""
    k = less.shape[0]
    if k == 0:
        return 0.0
    rel = less.astype(np.float64)
    ending = np.ones(k, dtype=np.float64)
    total = float(k)
    while True:
        ending = rel.T @ ending
        step = float(ending.sum())
        if step == 0.0:
            return total
        total += step
        if total > cap:
            return total


def _order_complex_of_divisor_poset(
    context: VariableContext,
    elements: list[tuple[int, ...]],
    guards: GuardConfig = DEFAULT_GUARDS,
) -> SimplicialComplex:
    """Build the order complex (facets = maximal chains) of a set of
    exponent vectors ordered by divisibility.

    The total number of chains is counted up front by dynamic programming
    on the comparability relation, so a complex that would exceed the
    face guard fails fast instead of mid-enumeration.
    """
    elements = sorted(elements, key=lambda v: (sum(v), v))
    labels = tuple(str(Monomial.from_vector(context, v)) for v in elements)
    k = len(elements)
    if k == 0:
        return SimplicialComplex.irrelevant(())

    less = _divisibility_matrix(elements)
    # +1 for the empty face, matching the face enumeration downstream
    total_faces = count_chains(less, guards.max_faces) + 1
    guards.check("max-faces", int(min(total_faces, 2 ** 62)), guards.max_faces)
    less_sets = [set(int(i) for i in np.nonzero(less[:, j])[0]) for j in range(k)]
    covers_up: list[list[int]] = [[] for _ in range(k)]
    minimal: list[int] = []
    for j in range(k):
        below = less_sets[j]
        covers = [i for i in below if not any(i in less_sets[x] for x in below)]
        for i in covers:
            covers_up[i].append(j)
        if not below:
            minimal.append(j)
    is_maximal = [not covers_up[i] for i in range(k)]

    facets: list[list[int]] = []
    total = 0
    stack: list[tuple[int, list[int]]] = [(i, [i]) for i in reversed(minimal)]
    while stack:
        node, chain = stack.pop()
        if is_maximal[node]:
            facets.append(chain)
            total += 1
            guards.check("max-faces", total, guards.max_faces)
            continue
        for nxt in covers_up[node]:
            stack.append((nxt, chain + [nxt]))
    # maximal chains are pairwise incomparable, so the facet list is
    # already inclusion-minimal
    return SimplicialComplex(labels, tuple(frozenset(c) for c in facets))
