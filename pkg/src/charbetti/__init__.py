"""charbetti: exact Betti numbers of monomial ideals and their powers over
Q and F_p, via lcm-lattice homology, with detection of characteristic
dependence of Betti numbers, projective dimension and regularity."""

from .complexes import (
    Graph,
    SimplicialComplex,
    alexander_dual,
    barycentric_subdivision,
    complex_of_ideal,
    cone,
    disjoint_edge,
    edge_ideal,
    induced_subcomplex,
    parse_complex_text,
    parse_graph_text,
    stanley_reisner_ideal,
)
from .constructions import construct, corpus_ideal, dunce_cap_complex
from .errors import (
    CharbettiError,
    DomainError,
    FormatError,
    ResourceLimitError,
)
from .fields import QQ, FieldSpec
from .guards import DEFAULT_GUARDS, GuardConfig
from .homology import ChainComplex, HomologyResult, homology_dims, integer_homology
from .ideals import (
    Monomial,
    MonomialIdeal,
    VariableContext,
    add_disjoint_monomial,
    ideal_to_text,
    intersect,
    load_ideal,
    minimalize,
    parse_ideal_text,
    parse_monomial,
    polarize,
    power,
    restrict,
    scale,
)
from .lattice import LcmLattice, build_lattice, open_interval

__version__ = "0.1.0"
