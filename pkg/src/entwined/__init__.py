"""Entwining structures, coalgebra-Galois extensions, and their cohomology
over exact fields."""
from .algcore import (Algebra, AxiomReport, Bimodule, Coalgebra, check_algebra, check_bimodule,
                      check_coalgebra, regular_bimodule, restrict_bimodule, subalgebra)
from .entwine import Entwining, ac_bimodule, check_entwining
from .exactlin import GF, QQ, Field, Matrix
from .galois import ComoduleAlgebra, GaloisExtension, galois_extension
from .homology import (entwined_cohomology, hochschild_cohomology, is_projective_module,
                       verify_theorem)

__version__ = "0.1.0"
