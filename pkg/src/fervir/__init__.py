"""Exact computations with Fermion and Fermion-Virasoro superalgebras and their modules."""

from .scalar import K, ScalarK, sqrt_in_field
from .superalg import ALGEBRAS, Algebra, Element, bracket, jacobi_check, sigma_twist
from .text import parse_element, format_element
from .fock import FockSpace, IndexSet, character
from .virmod import Poly, TensorModule, VermaModule
from .verify import FockHandle, verify_module_axioms
from .rank2 import Rank2Data, Rank2Family, classify_rank2, generate_rank2_data, rank2_act
from .findim import build_Vm, cyclic_span, decompose, direct_sum, is_simple

__version__ = "0.1.0"
