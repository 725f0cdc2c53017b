"""Semimodular lattice toolkit.

Finite semimodular lattices, their geometries (ground poset plus flat
family), the lowering of a join-irreducible element built by two
independent routes, and length-preserving extension pipelines to geometric
and rectangular lattices, with brute-force oracles for every closed form.
"""

from .errors import (AxiomError, BoundExceededError, CapExceededError, CycleError,
                     NotAChainError, NotALatticeError, NotAPartitionError,
                     NotDistributiveError, NotSemimodularError, ParseError,
                     PreconditionError, SizeLimitError, SmlatError, VerificationError)
from .poset import (ChainPartition, Poset, are_parallel, is_chain_partition,
                    poset_from_covers, width_chain_partition)
from .lattice import (FiniteLattice, JirPoset, chains_lattice_disjoint, check_jhcc,
                      find_isomorphism, find_m3_sublattice, find_n5_sublattice,
                      is_distributive, is_geometric, is_graded, is_join_distributive,
                      is_modular, is_semimodular, join_irreducibles,
                      lattice_from_covers, lattice_from_poset,
                      verify_length_preserving_embedding)
from .geometry import (AxiomReport, Geometry, check_axioms, closure, cover_witness,
                       enumerate_geometries, enumerate_ground_posets, geom_of_lattice,
                       geometry_covers, jir_of_geometry, lat_of_geometry,
                       roundtrip_geometry, roundtrip_lattice)
from .lowering import (LoweringResult, PreservationRecord, check_preservation,
                       covers_formula, cross_check_routes, doubled_elements,
                       join_formula, lower, lower_direct, lower_via_geometry,
                       meet_formula, verify_lowering)
from .extensions import (ExtensionTrace, StepStats, disjointify_chains,
                         distributive_length_check, exhaustive_extension_search,
                         extend_parallel_chains, extend_to_geometric,
                         find_length_embedding, rectangular_extension,
                         verify_trace_invariants)
from .corpus import (CorpusMember, CorpusSpec, CounterexampleWitness, boolean_lattice,
                     chain_lattice, diamond, generate_corpus, grid_lattice,
                     oracle_covers, oracle_maximal_chains, oracle_meet_join, pentagon,
                     search_counterexample, slim_heptagon, slim_hexagon,
                     stemmed_diamond, valid_lowering_pairs)
from .formats import (LatticeDocument, emit_dot, emit_lattice, emit_poset, emit_trace,
                      parse_document, parse_lattice, parse_poset, parse_trace,
                      verify_trace)

__version__ = "0.1.0"
