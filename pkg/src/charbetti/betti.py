"""Multigraded Betti numbers by two independent routes, and the derived
invariants built on them.

The primary route evaluates, for every element m of the lcm lattice, the
reduced homology of the order complex of the open interval (1, m); the
multigraded Betti number at (i, m) is the dimension of H-tilde_{i-1}.
The oracle route, available for squarefree ideals, runs over all vertex
subsets of the Stanley-Reisner complex and reads the Betti numbers off
the induced subcomplexes.  The two must agree exactly; the test suite
holds them against each other.

Also here: projective dimension and regularity, Betti-splitting
verification, and the additive formula expressing the total Betti
numbers of (I + (w))^h, for a monomial w on fresh variables, in terms of
the powers I, I^2, ..., I^h alone.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .cache import DEFAULT_TABLE_CACHE, TableCache
from .complexes import SimplicialComplex, complex_of_ideal
from .errors import (
    ArgumentError,
    PartitionError,
    SquarefreeRequiredError,
    UndefinedInvariantError,
)
from .fields import FieldSpec
from .guards import DEFAULT_GUARDS, GuardConfig, ResourceLimitError
from .homology import ChainComplex, homology_dims_multi
from .ideals import Monomial, MonomialIdeal
from .lattice import build_lattice, interval_face_counts, open_interval
from .parallel import pmap


@dataclass(frozen=True)
class BettiTable:
    """Multigraded Betti numbers of an ideal over one field.

    ``entries`` maps (homological index i >= 0, multidegree monomial) to a
    positive integer.  Graded and total views are derived: the graded
    entry (i, j) sums the multigraded entries of total degree j, and the
    total Betti number at i sums over j.
    """

    field: FieldSpec
    entries: dict[tuple[int, Monomial], int]

    def total(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (i, _), v in self.entries.items():
            out[i] = out.get(i, 0) + v
        return out

    def total_vector(self) -> tuple[int, ...]:
        totals = self.total()
        if not totals:
            return ()
        return tuple(totals.get(i, 0) for i in range(max(totals) + 1))

    def graded(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for (i, m), v in self.entries.items():
            key = (i, m.degree())
            out[key] = out.get(key, 0) + v
        return out

    def betti(self, i: int, m: Monomial | None = None) -> int:
        if m is None:
            return self.total().get(i, 0)
        return self.entries.get((i, m.in_context(m.context)), 0)

    def projective_dimension(self) -> int:
        if not self.entries:
            raise UndefinedInvariantError(
                "projective dimension of the zero ideal is undefined"
            )
        return max(i for i, _ in self.entries)

    def regularity(self) -> int:
        if not self.entries:
            raise UndefinedInvariantError("regularity of the zero ideal is undefined")
        return max(m.degree() - i for i, m in self.entries)

    # -- bit-exact JSON ---------------------------------------------------

    def to_json(self, shift_to_quotient: bool = False) -> dict:
        """The fixed JSON form: ``total`` as [i, value] pairs, ``graded``
        as [i, j, value], ``multigraded`` as [i, monomial-string, value]
        with monomials in the ideal text token syntax, sorted.

        ``shift_to_quotient`` re-indexes to the resolution of R/I (every
        homological index moves up by one and the unit appears at 0) for
        cross-checking with systems that resolve the quotient.
        """
        delta = 1 if shift_to_quotient else 0
        total = sorted((i + delta, v) for i, v in self.total().items())
        graded = sorted((i + delta, j, v) for (i, j), v in self.graded().items())
        ordered = sorted(
            self.entries.items(),
            key=lambda item: (item[0][0], tuple(-e for e in item[0][1].vector())),
        )
        multigraded = [[i + delta, str(m), v] for (i, m), v in ordered]
        if shift_to_quotient:
            total = [(0, 1)] + total
            graded = [(0, 0, 1)] + graded
            multigraded = [[0, "1", 1]] + multigraded
        return {
            "field": self.field.tag,
            "total": [[i, v] for i, v in total],
            "graded": [[i, j, v] for i, j, v in graded],
            "multigraded": multigraded,
        }

    @classmethod
    def from_json(cls, payload: dict, context) -> "BettiTable":
        from .ideals import parse_monomial

        field_spec = FieldSpec.parse(payload["field"])
        entries: dict[tuple[int, Monomial], int] = {}
        for i, token, v in payload["multigraded"]:
            entries[(int(i), parse_monomial(token, context))] = int(v)
        return cls(field_spec, entries)


def _unit_table(ideal: MonomialIdeal, field_spec: FieldSpec) -> BettiTable:
    one = Monomial.one(ideal.context)
    return BettiTable(field_spec, {(0, one): 1})


def betti_tables(
    ideal: MonomialIdeal,
    fields: list[FieldSpec],
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
    cache: TableCache | None = None,
) -> dict[str, BettiTable]:
    """Full multigraded tables over several fields in one lattice pass.

    Every interval's order complex is built once and its coreduced core
    is shared by all requested fields; results are cached per
    (ideal-sha256, field tag).
    """
    if ideal.is_zero():
        raise ArgumentError("Betti numbers of the zero ideal are undefined")
    cache = cache if cache is not None else DEFAULT_TABLE_CACHE
    sha = ideal.sha()
    out: dict[str, BettiTable] = {}
    missing: list[FieldSpec] = []
    for f in fields:
        payload = cache.get(sha, f.tag)
        if payload is not None:
            out[f.tag] = BettiTable.from_json(payload, ideal.context)
        else:
            missing.append(f)
    if not missing:
        return out

    if ideal.is_unit():
        for f in missing:
            table = _unit_table(ideal, f)
            cache.put(sha, f.tag, table.to_json())
            out[f.tag] = table
        return out

    lattice = build_lattice(ideal, guards)
    targets = [v for v in lattice.vectors if any(v)]

    # fail fast: one DP pass yields every interval's exact face count
    counts = interval_face_counts(lattice)
    worst = max(counts[v] for v in targets)
    guards.check("max-faces", int(min(worst, 2 ** 62)), guards.max_faces)

    def work(vector: tuple[int, ...]):
        m = lattice.monomial(vector)
        interval = open_interval(lattice, m, guards)
        chain = ChainComplex.from_simplicial(interval, guards)
        return homology_dims_multi(chain, missing)

    results = pmap(work, targets, jobs)

    for f in missing:
        entries: dict[tuple[int, Monomial], int] = {}
        for vector, dims_by_field in zip(targets, results):
            dims = dims_by_field[f.tag]
            m = lattice.monomial(vector)
            for d, value in dims.items():
                if value:
                    entries[(d + 1, m)] = value
        table = BettiTable(f, entries)
        cache.put(sha, f.tag, table.to_json())
        out[f.tag] = table
    return out


def betti_table(
    ideal: MonomialIdeal,
    field_spec: FieldSpec,
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
    cache: TableCache | None = None,
) -> BettiTable:
    return betti_tables(ideal, [field_spec], guards, jobs, cache)[field_spec.tag]


def _atom_complex_faces(
    atoms: list[tuple[int, ...]],
    target: tuple[int, ...],
    max_size: int,
    guards: GuardConfig,
) -> dict[int, list[frozenset[int]]]:
    """Faces (up to the given size) of the complex of generator subsets
    whose lcm properly divides ``target``.

    This is the crosscut model of the open interval (1, target): the two
    complexes are homotopy equivalent, so their reduced homology agrees in
    every degree over every field.  Branches are pruned as soon as the
    running lcm reaches the target, since all supersets then also reach it.
    """
    k = len(atoms)
    faces: dict[int, list[frozenset[int]]] = {-1: [frozenset()]}
    total = 1
    stack: list[tuple[tuple[int, ...], int, tuple[int, ...]]] = []
    for t in range(k):
        if atoms[t] != target:
            stack.append(((t,), t, atoms[t]))
    while stack:
        subset, last, running = stack.pop()
        faces.setdefault(len(subset) - 1, []).append(frozenset(subset))
        total += 1
        guards.check("max-faces", total, guards.max_faces)
        if len(subset) >= max_size:
            continue
        for t in range(last + 1, k):
            merged = tuple(max(a, b) for a, b in zip(running, atoms[t]))
            if merged != target:
                stack.append((subset + (t,), t, merged))
    for d in faces:
        faces[d].sort(key=sorted)
    return faces


def betti_tables_via_duals(
    ideal: MonomialIdeal,
    fields: list[FieldSpec],
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
) -> dict[str, BettiTable]:
    """Full multigraded tables through polarization and Alexander duality.

    Polarization preserves the lcm lattice and every Betti number, and for
    a squarefree multidegree s the Betti number at homological index i is
    the dimension of H-tilde_{i-1} of the complex whose facets are the
    complements (inside s) of the generator supports below s.  Those dual
    models stay small even when the interval order complexes explode, so
    this route covers tables the chain route cannot reach.  Values agree
    exactly with the interval route; the suite cross-checks them.
    """
    if ideal.is_zero():
        raise ArgumentError("Betti numbers of the zero ideal are undefined")
    if ideal.is_unit():
        return {f.tag: _unit_table(ideal, f) for f in fields}
    polarized = ideal.polarize()
    lattice = build_lattice(polarized, guards)
    targets = [v for v in lattice.vectors if any(v)]
    atoms = [tuple(a) for a in lattice.atom_vectors]
    atom_sizes = [sum(a) for a in atoms]

    # depolarization: slot variable -> original variable index (1-based)
    slot_owner = []
    for name in polarized.context.names:
        base = name.split("_", 1)[0]
        slot_owner.append(int(base[1:]))

    def depolarize(vector: tuple[int, ...]) -> Monomial:
        exps: dict[int, int] = {}
        for slot, present in enumerate(vector):
            if present:
                exps[slot_owner[slot]] = exps.get(slot_owner[slot], 0) + 1
        return Monomial(ideal.context, tuple(sorted(exps.items())))

    # coarse per-multidegree work estimates, largest first, so that a
    # hopeless table trips the cumulative cap within the first few tasks
    def estimate(vector: tuple[int, ...]) -> float:
        size = sum(vector)
        return sum(
            2.0 ** (size - s)
            for a, s in zip(atoms, atom_sizes)
            if all(x <= y for x, y in zip(a, vector))
        )

    ordered = sorted(targets, key=estimate, reverse=True)
    total_cap = 10 * guards.max_faces
    progress_lock = threading.Lock()
    cumulative = [0]

    def work(vector: tuple[int, ...]):
        support = frozenset(i for i, e in enumerate(vector) if e)
        below = [a for a in atoms if all(x <= y for x, y in zip(a, vector))]
        facets = [
            support - frozenset(i for i, e in enumerate(a) if e) for a in below
        ]
        labels = tuple(polarized.context.names[i] for i in sorted(support))
        reindex = {v: k for k, v in enumerate(sorted(support))}
        dual = SimplicialComplex.from_facets(
            labels, [[reindex[v] for v in f] for f in facets]
        )
        faces = dual.faces_by_dim(guards)
        n_faces = sum(len(v) for v in faces.values())
        with progress_lock:
            cumulative[0] += n_faces
            guards.check("max-total-faces", cumulative[0], total_cap)
        chain = ChainComplex(faces)
        return homology_dims_multi(chain, fields)

    results = dict(zip(ordered, pmap(work, ordered, jobs)))
    out: dict[str, BettiTable] = {}
    for f in fields:
        entries: dict[tuple[int, Monomial], int] = {}
        for vector in targets:
            m = depolarize(vector)
            for d, value in results[vector][f.tag].items():
                if value:
                    entries[(d + 1, m)] = value
        out[f.tag] = BettiTable(f, entries)
    return out


def betti_tables_auto(
    ideal: MonomialIdeal,
    fields: list[FieldSpec],
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
    cache: TableCache | None = None,
) -> dict[str, BettiTable]:
    """Interval route first; on a resource guard, retry through the
    polarized Alexander-dual models (exact same values, different
    complexity profile)."""
    try:
        return betti_tables(ideal, fields, guards, jobs, cache)
    except ResourceLimitError:
        tables = betti_tables_via_duals(ideal, fields, guards, jobs)
        store = cache if cache is not None else DEFAULT_TABLE_CACHE
        for f in fields:
            store.put(ideal.sha(), f.tag, tables[f.tag].to_json())
        return tables


def betti_tables_bounded(
    ideal: MonomialIdeal,
    fields: list[FieldSpec],
    i_max: int,
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
) -> dict[str, BettiTable]:
    """Partial multigraded tables holding every entry with homological
    index at most ``i_max``.

    Built on the atom-subset model of each interval, which stays small
    when the requested index range is small even if the interval's order
    complex is far beyond the face guard.  Entries agree exactly with the
    full route wherever both are defined.
    """
    if ideal.is_zero():
        raise ArgumentError("Betti numbers of the zero ideal are undefined")
    if i_max < 0:
        raise ArgumentError("i_max must be non-negative")
    if ideal.is_unit():
        return {f.tag: _unit_table(ideal, f) for f in fields}
    lattice = build_lattice(ideal, guards)
    targets = [v for v in lattice.vectors if any(v)]
    atom_list = [tuple(v) for v in lattice.atom_vectors]

    def work(vector: tuple[int, ...]):
        below = [a for a in atom_list if all(x <= y for x, y in zip(a, vector))]
        faces = _atom_complex_faces(below, vector, i_max + 1, guards)
        chain = ChainComplex(faces)
        return homology_dims_multi(chain, fields)

    results = pmap(work, targets, jobs)
    out: dict[str, BettiTable] = {}
    for f in fields:
        entries: dict[tuple[int, Monomial], int] = {}
        for vector, dims_by_field in zip(targets, results):
            m = lattice.monomial(vector)
            for d, value in dims_by_field[f.tag].items():
                if value and d + 1 <= i_max:
                    entries[(d + 1, m)] = value
        out[f.tag] = BettiTable(f, entries)
    return out


def betti_at(
    ideal: MonomialIdeal,
    m: Monomial,
    i: int,
    field_spec: FieldSpec,
    guards: GuardConfig = DEFAULT_GUARDS,
) -> int:
    """One multigraded Betti number without the full table.

    The open interval below m only involves generators dividing m, so the
    computation restricts the ideal first; m is a lattice element of the
    original ideal exactly when it is the lcm of the generators below it,
    and off-lattice multidegrees contribute zero.
    """
    if ideal.is_zero():
        return 0
    m = m.in_context(ideal.context)
    restricted = ideal.restrict(m)
    if restricted.is_zero():
        return 1 if i == 0 and m.is_one() and ideal.is_unit() else 0
    if restricted.lcm_of_gens() != m:
        return 0
    lattice = build_lattice(restricted, guards)
    interval = open_interval(lattice, m, guards)
    chain = ChainComplex.from_simplicial(interval, guards)
    dims = homology_dims_multi(chain, [field_spec])[field_spec.tag]
    return dims.get(i - 1, 0)


def hochster_betti(
    ideal: MonomialIdeal,
    field_spec: FieldSpec,
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
) -> BettiTable:
    """Independent oracle route for squarefree ideals: for every vertex
    subset s of the Stanley-Reisner complex, the Betti number at the
    squarefree multidegree s and homological index i is the dimension of
    H-tilde_{|s| - i - 2} of the induced subcomplex."""
    if not ideal.is_squarefree():
        raise SquarefreeRequiredError("the induced-subcomplex route needs squarefree input")
    if ideal.is_unit():
        return _unit_table(ideal, field_spec)
    n = len(ideal.context)
    complex_ = complex_of_ideal(ideal, guards)
    faces = [
        sum(1 << v for v in f)
        for fs in complex_.faces_by_dim(guards).values()
        for f in fs
    ]

    def faces_of(mask: int) -> dict[int, list[frozenset[int]]]:
        grouped: dict[int, list[frozenset[int]]] = {}
        for fm in faces:
            if fm & ~mask == 0:
                f = frozenset(v for v in range(n) if fm & (1 << v))
                grouped.setdefault(len(f) - 1, []).append(f)
        return grouped

    subsets = list(range(1, 2 ** n))

    def work(mask: int):
        grouped = faces_of(mask)
        if not grouped:
            return None
        chain = ChainComplex(grouped)
        return homology_dims_multi(chain, [field_spec])[field_spec.tag]

    results = pmap(work, subsets, jobs)
    entries: dict[tuple[int, Monomial], int] = {}
    for mask, dims in zip(subsets, results):
        if not dims:
            continue
        size = bin(mask).count("1")
        vector = tuple(1 if mask & (1 << v) else 0 for v in range(n))
        m = Monomial.from_vector(ideal.context, vector)
        for d, value in dims.items():
            i = size - d - 2
            if i >= 0 and value:
                entries[(i, m)] = value
    return BettiTable(field_spec, entries)


def pd(table: BettiTable) -> int:
    return table.projective_dimension()


def reg(table: BettiTable) -> int:
    return table.regularity()


# ---------------------------------------------------------------------------
# Betti splittings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplittingReport:
    """Per-index check of beta_i(I) = beta_i(J) + beta_i(K) + beta_{i-1}(J cap K)."""

    field: FieldSpec
    lhs: tuple[int, ...]
    rhs: tuple[int, ...]
    discrepancy: tuple[int, ...]
    holds: bool


def check_splitting(
    ideal: MonomialIdeal,
    j_part: MonomialIdeal,
    k_part: MonomialIdeal,
    field_spec: FieldSpec,
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
) -> SplittingReport:
    gens_i = set(ideal.gens)
    gens_j = set(g.in_context(ideal.context) for g in j_part.gens)
    gens_k = set(g.in_context(ideal.context) for g in k_part.gens)
    if gens_j & gens_k or gens_j | gens_k != gens_i:
        raise PartitionError(
            "generators of the two parts must partition the ideal's generators"
        )
    parts = {
        "I": ideal,
        "J": j_part,
        "K": k_part,
        "JK": j_part.intersect(k_part),
    }
    tables = {
        name: betti_tables_auto(part, [field_spec], guards, jobs)[field_spec.tag]
        for name, part in parts.items()
    }
    t_i, t_j, t_k, t_jk = (tables[n].total() for n in ("I", "J", "K", "JK"))
    top = max([0, *t_i, *t_j, *t_k, *(i + 1 for i in t_jk)])
    lhs = tuple(t_i.get(i, 0) for i in range(top + 1))
    rhs = tuple(
        t_j.get(i, 0) + t_k.get(i, 0) + t_jk.get(i - 1, 0) for i in range(top + 1)
    )
    disc = tuple(a - b for a, b in zip(lhs, rhs))
    return SplittingReport(field_spec, lhs, rhs, disc, all(d == 0 for d in disc))


# ---------------------------------------------------------------------------
# the additive formula for (I + (w))^h
# ---------------------------------------------------------------------------


def formula_rhs(
    ideal: MonomialIdeal,
    h: int,
    field_spec: FieldSpec,
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
) -> tuple[int, ...]:
    """Total Betti vector of (I + (w))^h predicted from the tables of
    I, I^2, ..., I^h alone, for any monomial w on fresh variables:

        beta_0 = sum_l beta_0(I^l) + 1
        beta_i = sum_l [ beta_i(I^l) + beta_{i-1}(I^l) ]   (i >= 1)

    The left-hand side is never materialized here; comparing against the
    directly computed table of (I + (w))^h is the caller's check.
    """
    if h < 1:
        raise ArgumentError("the formula needs h >= 1")
    totals = []
    for ell in range(1, h + 1):
        power_ideal = ideal.power(ell, guards)
        tables = betti_tables_auto(power_ideal, [field_spec], guards, jobs)
        totals.append(tables[field_spec.tag].total())
    top = max((max(t) for t in totals if t), default=0)
    out = [0] * (top + 2)
    out[0] = sum(t.get(0, 0) for t in totals) + 1
    for i in range(1, top + 2):
        out[i] = sum(t.get(i, 0) + t.get(i - 1, 0) for t in totals)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def formula_check(
    ideal: MonomialIdeal,
    w: Monomial,
    h: int,
    field_spec: FieldSpec,
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
) -> dict:
    """Compare the additive formula against the direct computation of
    (I + (w))^h over one field; returns both vectors and a verdict."""
    extended = ideal.add_disjoint_monomial(w)
    direct_ideal = extended.power(h, guards)
    direct_tables = betti_tables_auto(direct_ideal, [field_spec], guards, jobs)
    direct = direct_tables[field_spec.tag].total_vector()
    predicted = formula_rhs(ideal, h, field_spec, guards, jobs)
    return {
        "field": field_spec.tag,
        "direct": list(direct),
        "formula": list(predicted),
        "verdict": "EQUAL" if tuple(direct) == tuple(predicted) else "DIFFER",
    }
