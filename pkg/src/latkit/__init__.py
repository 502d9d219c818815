"""latkit: finite multiplicative lattices, lower spaces, and checkers."""

from .classes import (ClassTag, DefinitionMismatch, classify, inf_v, jacobson,
                      p_radical, radical_of, s_radical)
from .lattice import (AxiomViolation, BoundExceeded, LatticeError, MultLattice,
                      NotALattice, NotAPartialOrder, bits,
                      build_chain_quantale, build_divisor_quantale,
                      build_powerset_frame, build_product, enumerate_lattices,
                      is_compact_element, is_compactly_generated,
                      is_max_bounded, mask_of, validate_lattice)
from .topology import (COUNTEREXAMPLE, HOLDS, HYPOTHESIS_NOT_MET,
                       FamilyTooLarge, LowerSpace, NotClosedError, Verdict)
from .homs import (ContractionPropertyFails, HomViolation, LatticeHom,
                   NotSurjective, check_continuity, check_density,
                   check_embedding, check_subspace_density, compose_homs,
                   contraction, divisor_quotient_hom, has_contraction_property,
                   identity_hom, induced_map, kernel_element, kernel_set,
                   validate_hom)

__version__ = "0.1.0"
