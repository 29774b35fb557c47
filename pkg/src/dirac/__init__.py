"""Exact computations with graded-commutative (Dirac) rings and their modules."""
from .grading import GradedSet, Spin, is_odd, koszul_sign, spin_of
from .exactlin import GF, QQ, ZZ, ModuleInvariants, smith_form
from .freealg import Element, FreeDiracAlgebra, partial_derivative
from .presalg import PresentedAlgebra, graded_piece_basis, ideal_membership
from .rings import AlgebraMap, DiracField, Localization, field_extension_map, localization_map
from .gmod import (ModuleMap, PresentedModule, RestrictedModule, Verdict, equational_factor, evenness_status,
                   flatness_status, minimal_generators, tor1, twist, tensor)
from .calculus import (etale_certificate, is_even_map, is_standard_smooth, is_unramified, jacobian, kaehler,
                       relative_presentation)
from .spectra import spec_finite, spec_special, orbit_space_check, sheaf_cover_check
from .descent import DescentDatum, ZariskiCover, amitsur_check, descend_module

__version__ = "0.1.0"
