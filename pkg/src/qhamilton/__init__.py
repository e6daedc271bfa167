"""Quaternionic Hamilton dynamics on flat hyper-Kahler space H^n."""

__version__ = "0.1.0"

from .quaternion import I1, I2, I3, ONE, Quaternion, UnitTriple, conj, make_triple, qmul
from .hyperkahler import HyperKahlerStructure, build_structure
from .exterior import KForm, interior_product, solve_contraction, volume_form, wedge, wedge_power
from .polynomial import ScalarField
from .regularity import QForm, QuaternionicPolynomialFunction, complete, fueter_defect, is_regular, regularity_defect
from .dynamics import (Decomposition, HamiltonianField, Trajectory, decompose, diagnostics, field_gmham,
                       field_qham, integrate, rotate_hamiltonian)
