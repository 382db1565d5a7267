"""Resource guards for the combinatorially explosive parts of the engine.

Powers of ideals, lcm lattices and order complexes can all blow up; every
potentially unbounded loop checks one of these limits and raises
``ResourceLimitError`` instead of exhausting memory.  Callers (the scanner
in particular) treat that as a degraded cell, not a crash.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import ResourceLimitError

__all__ = ["GuardConfig", "DEFAULT_GUARDS", "ResourceLimitError"]


@dataclass(frozen=True)
class GuardConfig:
    # minimal generators allowed for a computed power
    max_generators: int = 50_000
    # elements of an lcm lattice
    max_lattice_elements: int = 2_000_000
    # faces of any one order complex / simplicial complex fed to homology
    max_faces: int = 2_000_000
    # bit length of any entry during Smith normal form
    max_snf_entry_bits: int = 4096

    def check(self, guard: str, value: int, limit: int) -> None:
        if value > limit:
            raise ResourceLimitError(
                guard, f"{guard} guard exceeded: {value} > {limit}"
            )

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_GUARDS = GuardConfig()
