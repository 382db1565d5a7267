"""Monomials and monomial ideals with exact integer exponent arithmetic.

Everything here is deliberately field-free: an ideal is stored as its
unique minimal set of monic monomial generators over an ordered list of
variable names, and all operations (products, powers, intersections,
polarization, restriction, ...) are pure combinatorics on exponent
vectors.  The coefficient field only enters downstream, in the homology
engine — which is the whole point: the same generators can be read over
any field and compared.

Values are immutable and safe to share between threads.  The power cache
is guarded by a lock with last-write-wins semantics (all writers compute
identical values).
"""

from __future__ import annotations

import hashlib
import re
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    ArgumentError,
    ContextMismatchError,
    DisjointnessError,
    FormatError,
)
from .guards import DEFAULT_GUARDS, GuardConfig, ResourceLimitError

_VAR_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*\Z")

# above this many rows, divisibility filtering switches to numpy
_NUMPY_THRESHOLD = 48


@dataclass(frozen=True)
class VariableContext:
    """An ordered list of distinct variable names (the ambient ring,
    minus the coefficient field).  Indices are 1-based throughout."""

    names: tuple[str, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        seen = set()
        for name in names:
            if not _VAR_NAME.match(name):
                raise FormatError(f"invalid variable name: {name!r}")
            if name in seen:
                raise FormatError(f"duplicate variable name: {name!r}")
            seen.add(name)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise ArgumentError(f"unknown variable: {name!r}") from None

    def name(self, i: int) -> str:
        if not 1 <= i <= len(self.names):
            raise ArgumentError(f"variable index {i} out of range")
        return self.names[i - 1]

    def extend(self, extra: Iterable[str]) -> "VariableContext":
        """New context with ``extra`` names appended; existing indices
        are preserved.  Names already present are skipped."""
        new = [n for n in extra if n not in self.names]
        return VariableContext(self.names + tuple(new)) if new else self


@dataclass(frozen=True)
class Monomial:
    """A monic monomial, stored sparsely as (variable index, exponent)
    pairs with strictly positive exponents.  The monomial 1 is the empty
    tuple."""

    context: VariableContext
    exps: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        exps = tuple((int(i), int(e)) for i, e in self.exps)
        object.__setattr__(self, "exps", exps)
        n = len(self.context)
        last = 0
        for i, e in exps:
            if i <= last:
                raise ArgumentError("exponent pairs must be sorted by index")
            if not 1 <= i <= n:
                raise ArgumentError(f"variable index {i} outside context")
            if e <= 0:
                raise ArgumentError("stored exponents must be positive")
            last = i

    # -- constructors ---------------------------------------------------

    @classmethod
    def one(cls, context: VariableContext) -> "Monomial":
        return cls(context, ())

    @classmethod
    def from_vector(cls, context: VariableContext, vector: Sequence[int]) -> "Monomial":
        if len(vector) != len(context):
            raise ArgumentError("vector length does not match context")
        return cls(context, tuple((i + 1, int(e)) for i, e in enumerate(vector) if e))

    @classmethod
    def variable(cls, context: VariableContext, name: str, exponent: int = 1) -> "Monomial":
        return cls(context, ((context.index(name), exponent),))

    # -- structure ------------------------------------------------------

    def vector(self) -> tuple[int, ...]:
        v = [0] * len(self.context)
        for i, e in self.exps:
            v[i - 1] = e
        return tuple(v)

    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def exponent(self, i: int) -> int:
        for j, e in self.exps:
            if j == i:
                return e
        return 0

    def support(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.exps)

    def support_names(self) -> frozenset[str]:
        return frozenset(self.context.name(i) for i, _ in self.exps)

    def is_one(self) -> bool:
        return not self.exps

    # -- arithmetic -----------------------------------------------------

    def _require_same_context(self, other: "Monomial") -> None:
        if self.context != other.context:
            raise ContextMismatchError("monomials live in different contexts")

    def divides(self, other: "Monomial") -> bool:
        self._require_same_context(other)
        theirs = dict(other.exps)
        return all(theirs.get(i, 0) >= e for i, e in self.exps)

    def lcm(self, other: "Monomial") -> "Monomial":
        self._require_same_context(other)
        merged = dict(self.exps)
        for i, e in other.exps:
            if merged.get(i, 0) < e:
                merged[i] = e
        return Monomial(self.context, tuple(sorted(merged.items())))

    def __mul__(self, other: "Monomial") -> "Monomial":
        self._require_same_context(other)
        merged = dict(self.exps)
        for i, e in other.exps:
            merged[i] = merged.get(i, 0) + e
        return Monomial(self.context, tuple(sorted(merged.items())))

    def in_context(self, context: VariableContext) -> "Monomial":
        """Re-embed by variable name into another context."""
        if context == self.context:
            return self
        pairs = sorted(
            (context.index(self.context.name(i)), e) for i, e in self.exps
        )
        return Monomial(context, tuple(pairs))

    # -- text -----------------------------------------------------------

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        parts = []
        for i, e in self.exps:
            name = self.context.name(i)
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)


def parse_monomial(text: str, context: VariableContext | None = None) -> Monomial:
    """Parse whitespace-separated ``name`` / ``name^e`` tokens.

    With an explicit context, unknown names are an error; otherwise the
    context is built from the tokens in first-appearance order.  The
    token ``1`` denotes the monomial 1.
    """
    tokens = text.split()
    if context is None:
        names: list[str] = []
        for tok in tokens:
            name = tok.split("^", 1)[0]
            if name != "1" and name not in names:
                names.append(name)
        context = VariableContext(tuple(names))
    exps: dict[int, int] = {}
    for tok in tokens:
        if tok == "1":
            continue
        name, caret, raw = tok.partition("^")
        if not _VAR_NAME.match(name):
            raise FormatError(f"invalid monomial token: {tok!r}")
        if caret:
            if not raw.isdigit() or int(raw) == 0:
                raise FormatError(f"exponent must be a positive integer: {tok!r}")
            e = int(raw)
        else:
            e = 1
        try:
            i = context.index(name)
        except ArgumentError:
            raise FormatError(f"unknown variable in monomial: {name!r}") from None
        exps[i] = exps.get(i, 0) + e
    return Monomial(context, tuple(sorted(exps.items())))


# ---------------------------------------------------------------------------
# divisibility-minimal sets of exponent vectors
# ---------------------------------------------------------------------------


def _minimal_vectors(vectors: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Divisibility-minimal elements of a set of exponent vectors.

    Candidates are processed in blocks of equal total degree: a vector can
    only be dominated by one of strictly smaller degree (equal-degree
    divisibility means equality, which deduplication already removed), so
    each block is checked against the accepted lower-degree rows in one
    vectorized pass.
    """
    uniq = set(vectors)
    if not uniq:
        return []
    order = sorted(uniq, key=lambda v: (sum(v), v))
    if len(order) <= _NUMPY_THRESHOLD:
        kept: list[tuple[int, ...]] = []
        for v in order:
            if not any(all(k <= x for k, x in zip(w, v)) for w in kept):
                kept.append(v)
        return kept

    arr = np.asarray(order, dtype=np.int16)
    degrees = arr.sum(axis=1, dtype=np.int64)
    accepted: np.ndarray | None = None
    out_blocks: list[np.ndarray] = []
    for d in np.unique(degrees):
        block = arr[degrees == d]
        if accepted is not None and accepted.shape[0]:
            keep = np.ones(block.shape[0], dtype=bool)
            for s in range(0, block.shape[0], 256):
                chunk = block[s:s + 256]
                dominated = np.zeros(chunk.shape[0], dtype=bool)
                for t in range(0, accepted.shape[0], 8192):
                    asub = accepted[t:t + 8192]
                    dominated |= (
                        (asub[None, :, :] <= chunk[:, None, :]).all(axis=2).any(axis=1)
                    )
                keep[s:s + 256] = ~dominated
            block = block[keep]
        if block.shape[0]:
            out_blocks.append(block)
            accepted = block if accepted is None else np.vstack([accepted, block])
    stacked = np.vstack(out_blocks)
    return [tuple(int(x) for x in row) for row in stacked]


def _pairwise_lcm_vectors(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.maximum(a[:, None, :], b[None, :, :]).reshape(-1, a.shape[1])


def _pairwise_product_vectors(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[:, None, :] + b[None, :, :]).reshape(-1, a.shape[1])


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal in canonical form.

    ``gens`` is the unique minimal generating set, sorted in decreasing
    lexicographic order on exponent vectors (x1 > x2 > ...).  The zero
    ideal has no generators; the unit ideal is generated by 1.
    """

    context: VariableContext
    gens: tuple[Monomial, ...]

    def __post_init__(self):
        for g in self.gens:
            if g.context != self.context:
                raise ContextMismatchError("generator outside ambient context")

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_gens(
        cls,
        gens: Iterable[Monomial],
        context: VariableContext | None = None,
    ) -> "MonomialIdeal":
        """Minimalize a generating set: drop multiples, deduplicate, sort."""
        gens = list(gens)
        if context is None:
            if not gens:
                raise ArgumentError("cannot infer context from an empty set")
            context = gens[0].context
        for g in gens:
            if g.context != context:
                raise ContextMismatchError("generators share no single context")
        vectors = _minimal_vectors(g.vector() for g in gens)
        vectors.sort(reverse=True)
        return cls(context, tuple(Monomial.from_vector(context, v) for v in vectors))

    @classmethod
    def from_vectors(
        cls, context: VariableContext, vectors: Iterable[Sequence[int]]
    ) -> "MonomialIdeal":
        minimal = _minimal_vectors(tuple(int(e) for e in v) for v in vectors)
        minimal.sort(reverse=True)
        return cls(context, tuple(Monomial.from_vector(context, v) for v in minimal))

    @classmethod
    def zero(cls, context: VariableContext) -> "MonomialIdeal":
        return cls(context, ())

    @classmethod
    def unit(cls, context: VariableContext) -> "MonomialIdeal":
        return cls(context, (Monomial.one(context),))

    # -- basic structure ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return len(self.gens) == 1 and self.gens[0].is_one()

    def is_squarefree(self) -> bool:
        return all(e == 1 for g in self.gens for _, e in g.exps)

    def num_gens(self) -> int:
        return len(self.gens)

    def vectors(self) -> list[tuple[int, ...]]:
        return [g.vector() for g in self.gens]

    def vector_array(self) -> np.ndarray:
        n = len(self.context)
        if not self.gens:
            return np.empty((0, n), dtype=np.int64)
        return np.asarray(self.vectors(), dtype=np.int64)

    def max_exponents(self) -> tuple[int, ...]:
        n = len(self.context)
        m = [0] * n
        for g in self.gens:
            for i, e in g.exps:
                if e > m[i - 1]:
                    m[i - 1] = e
        return tuple(m)

    def support(self) -> frozenset[int]:
        out: set[int] = set()
        for g in self.gens:
            out.update(i for i, _ in g.exps)
        return frozenset(out)

    def lcm_of_gens(self) -> Monomial:
        if self.is_zero():
            raise ArgumentError("the zero ideal has no generators")
        v = [0] * len(self.context)
        for g in self.gens:
            for i, e in g.exps:
                if e > v[i - 1]:
                    v[i - 1] = e
        return Monomial.from_vector(self.context, v)

    def contains(self, m: Monomial) -> bool:
        """Monomial membership: some generator divides ``m``."""
        m = m.in_context(self.context)
        return any(g.divides(m) for g in self.gens)

    # -- operations -----------------------------------------------------

    def _require_same_context(self, other: "MonomialIdeal") -> None:
        if self.context != other.context:
            raise ContextMismatchError("ideals live in different contexts")

    def multiply(
        self, other: "MonomialIdeal", guards: GuardConfig = DEFAULT_GUARDS
    ) -> "MonomialIdeal":
        self._require_same_context(other)
        if self.is_zero() or other.is_zero():
            return MonomialIdeal.zero(self.context)
        a, b = self.vector_array(), other.vector_array()
        guards.check("power-candidates", a.shape[0] * b.shape[0], 20_000_000)
        prods = _pairwise_product_vectors(a, b)
        prods = np.unique(prods, axis=0)
        ideal = MonomialIdeal.from_vectors(
            self.context, (tuple(int(x) for x in row) for row in prods)
        )
        guards.check("max-generators", ideal.num_gens(), guards.max_generators)
        return ideal

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return self.multiply(other)

    def power(self, h: int, guards: GuardConfig = DEFAULT_GUARDS) -> "MonomialIdeal":
        """Minimal generators of the h-th power, computed incrementally
        with minimalization after every product and cached per (I, h)."""
        if h < 0:
            raise ArgumentError("power exponent must be non-negative")
        if h == 0:
            return MonomialIdeal.unit(self.context)
        if h == 1 or self.is_zero() or self.is_unit():
            return self if h == 1 or self.is_zero() else MonomialIdeal.unit(self.context)
        sha = self.sha()
        result = self
        start = 1
        with _POWER_LOCK:
            for k in range(h, 1, -1):
                cached = _POWER_CACHE.get((sha, k))
                if cached is not None:
                    result, start = cached, k
                    break
        for k in range(start + 1, h + 1):
            result = result.multiply(self, guards)
            with _POWER_LOCK:
                _POWER_CACHE[(sha, k)] = result
        return result

    def intersect(self, other: "MonomialIdeal") -> "MonomialIdeal":
        """Intersection via minimalized pairwise lcms of generators."""
        self._require_same_context(other)
        if self.is_zero() or other.is_zero():
            return MonomialIdeal.zero(self.context)
        a, b = self.vector_array(), other.vector_array()
        lcms = np.unique(_pairwise_lcm_vectors(a, b), axis=0)
        return MonomialIdeal.from_vectors(
            self.context, (tuple(int(x) for x in row) for row in lcms)
        )

    def scale(self, w: Monomial) -> "MonomialIdeal":
        """The ideal w*I.  The scaled generating set is automatically
        minimal, since w*g divides w*g' exactly when g divides g'."""
        context = self.context.extend(w.context.names)
        w = w.in_context(context)
        gens = tuple(
            sorted((w * g.in_context(context) for g in self.gens),
                   key=lambda m: m.vector(), reverse=True)
        )
        return MonomialIdeal(context, gens)

    def add_disjoint_monomial(self, w: Monomial) -> "MonomialIdeal":
        """Adjoin one generator on variables disjoint from the ideal's
        support, extending the ambient context if needed."""
        context = self.context.extend(w.context.names)
        w = w.in_context(context)
        support = set()
        for g in self.gens:
            support.update(g.in_context(context).support())
        if support & set(w.support()):
            raise DisjointnessError(
                "new generator shares variables with the ideal's support"
            )
        gens = [g.in_context(context) for g in self.gens] + [w]
        return MonomialIdeal.from_gens(gens, context)

    def polarize(self) -> "MonomialIdeal":
        """Standard polarization: x_i^e becomes x_{i,1}...x_{i,e} over
        fresh variables named ``x<i>_<j>``, ordered by (i, j).

        The result is squarefree and has an lcm lattice isomorphic to the
        original, so all Betti numbers are preserved.
        """
        if self.is_zero():
            return MonomialIdeal.zero(VariableContext(()))
        max_e = self.max_exponents()
        names = []
        slot: dict[tuple[int, int], int] = {}
        for i, top in enumerate(max_e, start=1):
            for j in range(1, top + 1):
                slot[(i, j)] = len(names) + 1
                names.append(f"x{i}_{j}")
        context = VariableContext(tuple(names))
        gens = []
        for g in self.gens:
            pairs = tuple(
                sorted((slot[(i, j)], 1) for i, e in g.exps for j in range(1, e + 1))
            )
            gens.append(Monomial(context, pairs))
        return MonomialIdeal.from_gens(gens, context)

    def restrict(self, m: Monomial) -> "MonomialIdeal":
        """Sub-ideal generated by the generators dividing ``m``."""
        m = m.in_context(self.context)
        keep = tuple(g for g in self.gens if g.divides(m))
        return MonomialIdeal(self.context, keep)

    # -- canonical text and hashing --------------------------------------

    def canonical_text(self) -> str:
        header = "vars: " + " ".join(self.context.names) if self.context.names else "vars:"
        lines = [header]
        lines.extend(str(g) for g in self.gens)
        return "\n".join(lines) + "\n"

    def sha(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()

    def __str__(self) -> str:
        if self.is_zero():
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.gens) + ")"


_POWER_CACHE: dict[tuple[str, int], MonomialIdeal] = {}
_POWER_LOCK = threading.Lock()


def clear_power_cache() -> None:
    with _POWER_LOCK:
        _POWER_CACHE.clear()


# ---------------------------------------------------------------------------
# spec-level operation aliases
# ---------------------------------------------------------------------------


def minimalize(gens: Iterable[Monomial], context: VariableContext | None = None) -> MonomialIdeal:
    gens = list(gens)
    if not gens and context is None:
        return MonomialIdeal.zero(VariableContext(()))
    return MonomialIdeal.from_gens(gens, context)


def power(ideal: MonomialIdeal, h: int, guards: GuardConfig = DEFAULT_GUARDS) -> MonomialIdeal:
    return ideal.power(h, guards)


def intersect(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    return a.intersect(b)


def scale(w: Monomial, ideal: MonomialIdeal) -> MonomialIdeal:
    return ideal.scale(w)


def add_disjoint_monomial(ideal: MonomialIdeal, w: Monomial) -> MonomialIdeal:
    return ideal.add_disjoint_monomial(w)


def polarize(ideal: MonomialIdeal) -> MonomialIdeal:
    return ideal.polarize()


def restrict(ideal: MonomialIdeal, m: Monomial) -> MonomialIdeal:
    return ideal.restrict(m)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------
#
# UTF-8 lines; `#` starts a comment; optional leading header `vars: a b c`
# fixing the variable order; every other nonempty line is one generator as
# whitespace-separated `name` or `name^e` tokens; a line `1` is the unit
# ideal's generator; an empty body is the zero ideal.  Without a header,
# variables are collected in first-appearance order.


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_ideal_text(text: str) -> MonomialIdeal:
    header: list[str] | None = None
    gen_lines: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if line.startswith("vars:"):
            if header is not None:
                raise FormatError(f"line {lineno}: duplicate vars header")
            if gen_lines:
                raise FormatError(f"line {lineno}: vars header after generators")
            header = line[len("vars:"):].split()
            continue
        gen_lines.append((lineno, line))

    if header is not None:
        names = header
    else:
        names = []
        for _, line in gen_lines:
            for tok in line.split():
                name = tok.split("^", 1)[0]
                if name != "1" and name not in names:
                    names.append(name)
    try:
        context = VariableContext(tuple(names))
    except FormatError as exc:
        raise FormatError(f"bad vars header: {exc}") from None

    gens = []
    for lineno, line in gen_lines:
        try:
            gens.append(parse_monomial(line, context))
        except FormatError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    if not gens:
        return MonomialIdeal.zero(context)
    return MonomialIdeal.from_gens(gens, context)


def ideal_to_text(ideal: MonomialIdeal) -> str:
    return ideal.canonical_text()


def load_ideal(path) -> MonomialIdeal:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_ideal_text(fh.read())
