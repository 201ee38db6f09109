# __init__.py

from sinkhornpoly.errors import *
from sinkhornpoly.exact_linalg import *
from sinkhornpoly.polynomials import *
from sinkhornpoly.minors import *
from sinkhornpoly.symmetry import *
from sinkhornpoly.links import *
from sinkhornpoly.scaling import *
from sinkhornpoly.recognition import *
from sinkhornpoly.tables import *
from sinkhornpoly.config import *
