"""Reduced simplicial homology with exact coefficients.

Chain complexes are built with the empty-face augmentation, so the
dimension-(-1) cell is present and homology is reduced throughout: the
irrelevant complex has a one-dimensional H-tilde in degree -1, the void
complex has none at all.

Before any rank computation the complex is shrunk by *coreductions*: when
a cell's boundary consists of exactly one cell with coefficient +-1, the
pair can be removed (together with every incidence touching it) without
changing homology over any coefficient ring, because the removal is a
change of basis by a unit.  The pass involves no arithmetic, only
deletions, so a single reduced core serves Q, every F_p, and the integer
Smith-normal-form route simultaneously.  Ranks on the core are then exact:
mod-p elimination for F_p, fraction-free integer elimination for Q, Smith
normal form for Z.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .complexes import SimplicialComplex
from .errors import InvalidFieldError
from .fields import FieldSpec
from .guards import DEFAULT_GUARDS, GuardConfig
from .linalg import rank_integer, rank_mod_p, smith_invariant_factors

FacesByDim = dict[int, list[frozenset[int]]]


@dataclass(frozen=True)
class HomologyResult:
    """Per-dimension reduced homology data.

    For a field, ``dims[d]`` is the dimension of H-tilde_d.  For the
    integers (``field == "Z"``), ``dims[d]`` is the free rank and
    ``torsion[d]`` lists the invariant factors > 1.
    """

    field: str
    dims: dict[int, int]
    torsion: dict[int, tuple[int, ...]] | None = None

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    def torsion_at(self, d: int) -> tuple[int, ...]:
        if self.torsion is None:
            return ()
        return self.torsion.get(d, ())


class ChainComplex:
    """Augmented simplicial chain complex with integer boundary matrices.

    ``bases[d]`` is the ordered list of d-faces (the empty face sits at
    dimension -1); ``boundary(d)`` maps each d-face index to a sparse
    column over the (d-1)-faces, with the sign convention (-1)^j for
    deleting the j-th smallest vertex.
    """

    def __init__(self, faces_by_dim: FacesByDim):
        self.bases: dict[int, list[tuple[int, ...]]] = {}
        for d, faces in sorted(faces_by_dim.items()):
            self.bases[d] = sorted(tuple(sorted(f)) for f in faces)
        self._index: dict[int, dict[tuple[int, ...], int]] = {
            d: {f: i for i, f in enumerate(faces)} for d, faces in self.bases.items()
        }
        self._boundaries: dict[int, dict[int, dict[int, int]]] = {}
        for d, faces in self.bases.items():
            if d <= -1:
                continue
            cols: dict[int, dict[int, int]] = {}
            below = self._index.get(d - 1, {})
            for i, f in enumerate(faces):
                col: dict[int, int] = {}
                for j in range(len(f)):
                    sub = f[:j] + f[j + 1:]
                    col[below[sub]] = -1 if j % 2 else 1
                cols[i] = col
            self._boundaries[d] = cols

    @classmethod
    def from_simplicial(
        cls, complex_: SimplicialComplex, guards: GuardConfig = DEFAULT_GUARDS
    ) -> "ChainComplex":
        return cls(complex_.faces_by_dim(guards))

    def dims(self) -> list[int]:
        return sorted(self.bases)

    def n_cells(self, d: int) -> int:
        return len(self.bases.get(d, []))

    def boundary(self, d: int) -> dict[int, dict[int, int]]:
        """Sparse columns of the boundary map from dimension d to d-1."""
        return self._boundaries.get(d, {})

    def boundary_rows(self, d: int) -> list[dict[int, int]]:
        """The same map as sparse rows (one per (d-1)-face)."""
        rows: list[dict[int, int]] = [dict() for _ in range(self.n_cells(d - 1))]
        for c, col in self.boundary(d).items():
            for r, v in col.items():
                rows[r][c] = v
        return rows

    def dd_is_zero(self) -> bool:
        """Literal sparse check that consecutive boundaries compose to 0."""
        for d in self.dims():
            if d - 1 not in self.bases or d - 2 not in self.bases:
                continue
            lower = self.boundary(d - 1)
            for col in self.boundary(d).values():
                acc: dict[int, int] = {}
                for mid, v in col.items():
                    for r, w in lower.get(mid, {}).items():
                        acc[r] = acc.get(r, 0) + v * w
                if any(acc.values()):
                    return False
        return True

    def boundary_triples_text(self, d: int) -> str:
        """Plain-text export (one ``row col value`` triple per line) for
        cross-checking against an independent computer algebra system."""
        lines = []
        for c in sorted(self.boundary(d)):
            for r, v in sorted(self.boundary(d)[c].items()):
                lines.append(f"{r} {c} {v}")
        return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# coreduction
# ---------------------------------------------------------------------------


def _coreduced_core(
    chain: ChainComplex,
) -> tuple[dict[int, list[int]], dict[int, dict[int, int]], dict[int, int]]:
    """Remove coreduction pairs until none remain.

    Returns (surviving cell ids per dimension, boundary as cell-id ->
    {cell-id: coeff}, cell dimension map).  Cell ids are globally unique.
    """
    if not chain.dims():
        return {}, {}, {}
    dim_of: dict[int, int] = {}
    boundary: dict[int, dict[int, int]] = {}
    coboundary: dict[int, set[int]] = {}
    ids: dict[tuple[int, int], int] = {}
    next_id = 0
    for d in chain.dims():
        for i in range(chain.n_cells(d)):
            ids[(d, i)] = next_id
            dim_of[next_id] = d
            boundary[next_id] = {}
            coboundary[next_id] = set()
            next_id += 1
    for d in chain.dims():
        if d <= min(chain.dims()):
            continue
        for i, col in chain.boundary(d).items() if d >= 0 else ():
            c = ids[(d, i)]
            for r, v in col.items():
                a = ids[(d - 1, r)]
                boundary[c][a] = v
                coboundary[a].add(c)

    queue = deque(c for c, bd in boundary.items() if len(bd) == 1)
    alive = set(boundary)

    def remove(x: int) -> None:
        alive.discard(x)
        for z in coboundary.pop(x, ()):
            if z in alive:
                bz = boundary[z]
                if x in bz:
                    del bz[x]
                    if len(bz) == 1:
                        queue.append(z)
        for y in boundary.pop(x, {}):
            if y in alive:
                coboundary[y].discard(x)

    while queue:
        c = queue.popleft()
        if c not in alive:
            continue
        bd = boundary[c]
        if len(bd) != 1:
            continue
        (a, eps), = bd.items()
        if abs(eps) != 1:  # cannot happen for simplicial boundaries
            continue
        remove(c)
        remove(a)

    cells: dict[int, list[int]] = {}
    for x in alive:
        cells.setdefault(dim_of[x], []).append(x)
    for d in cells:
        cells[d].sort()
    core_boundary = {x: dict(boundary[x]) for x in alive}
    return cells, core_boundary, dim_of


def _core_boundary_rows(
    cells: dict[int, list[int]], boundary: dict[int, dict[int, int]], d: int
) -> list[dict[int, int]]:
    below = {x: i for i, x in enumerate(cells.get(d - 1, []))}
    col_of = {x: i for i, x in enumerate(cells.get(d, []))}
    rows: list[dict[int, int]] = [dict() for _ in range(len(below))]
    for x in cells.get(d, []):
        for y, v in boundary[x].items():
            rows[below[y]][col_of[x]] = v
    return rows


# ---------------------------------------------------------------------------
# homology over fields and over Z
# ---------------------------------------------------------------------------


def _field_rank(rows: list[dict[int, int]], field: FieldSpec) -> int:
    if field.is_rationals():
        return rank_integer(rows)
    return rank_mod_p(rows, field.p)


def homology_dims_multi(
    chain: ChainComplex,
    fields: list[FieldSpec],
    reduce: bool = True,
) -> dict[str, dict[int, int]]:
    """Reduced homology dimensions over several fields at once, sharing
    one coreduced core.  dim H-tilde_d = #d-cells - rank d_d - rank d_{d+1}.
    """
    if reduce:
        cells, core, _ = _coreduced_core(chain)
        counts = {d: len(xs) for d, xs in cells.items()}
        rows_at = {d: _core_boundary_rows(cells, core, d) for d in counts}
    else:
        counts = {d: chain.n_cells(d) for d in chain.dims()}
        rows_at = {d: chain.boundary_rows(d) for d in counts}

    out: dict[str, dict[int, int]] = {}
    all_dims = sorted(set(chain.dims()))
    for field in fields:
        ranks: dict[int, int] = {}
        for d, rows in rows_at.items():
            ranks[d] = _field_rank(rows, field) if rows else 0
        dims: dict[int, int] = {}
        for d in all_dims:
            value = counts.get(d, 0) - ranks.get(d, 0) - ranks.get(d + 1, 0)
            if value:
                dims[d] = value
        out[field.tag] = dims
    return out


def homology_dims(
    complex_: SimplicialComplex,
    field: FieldSpec,
    guards: GuardConfig = DEFAULT_GUARDS,
    reduce: bool = True,
) -> HomologyResult:
    """Reduced homology dimensions of a simplicial complex over Q or F_p."""
    if not isinstance(field, FieldSpec):
        raise InvalidFieldError("homology_dims needs a FieldSpec")
    chain = ChainComplex.from_simplicial(complex_, guards)
    dims = homology_dims_multi(chain, [field])[field.tag]
    return HomologyResult(field=field.tag, dims=dims)


def integer_homology(
    complex_: SimplicialComplex,
    guards: GuardConfig = DEFAULT_GUARDS,
    reduce: bool = True,
) -> HomologyResult:
    """Reduced integer homology via Smith normal form: free ranks plus
    invariant factors (> 1) in every dimension."""
    chain = ChainComplex.from_simplicial(complex_, guards)
    if reduce:
        cells, core, _ = _coreduced_core(chain)
        counts = {d: len(xs) for d, xs in cells.items()}
        rows_at = {d: _core_boundary_rows(cells, core, d) for d in counts}
    else:
        counts = {d: chain.n_cells(d) for d in chain.dims()}
        rows_at = {d: chain.boundary_rows(d) for d in counts}

    factors: dict[int, list[int]] = {}
    for d, rows in rows_at.items():
        factors[d] = smith_invariant_factors(rows, guards.max_snf_entry_bits) if rows else []

    dims: dict[int, int] = {}
    torsion: dict[int, tuple[int, ...]] = {}
    for d in sorted(set(chain.dims())):
        rank_d = len(factors.get(d, []))
        rank_up = len(factors.get(d + 1, []))
        free = counts.get(d, 0) - rank_d - rank_up
        if free:
            dims[d] = free
        tor = tuple(f for f in factors.get(d + 1, []) if f > 1)
        if tor:
            torsion[d] = tor
    return HomologyResult(field="Z", dims=dims, torsion=torsion)
