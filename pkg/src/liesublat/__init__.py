"""Subalgebra lattices of finite-dimensional Lie algebras over GF(p).

Structure-constant algebras over the prime fields GF(2), GF(3), GF(5)
and GF(7); complete subalgebra lattice enumeration; decision procedures
for modular, semi-modular and quasi-ideal subalgebras and their
relatives; and verification suites that replay the supported theory at
desk scale.
"""

from .catalog import CATALOG, catalog_build, enumerate_structures, random_solvable
from .harness import HarnessConfig, SuiteReport, report_digest, report_to_json, run_suite, suite_names
from .lattice import CacheError, SubalgebraLattice, build_lattice, load_cache, save_cache
from .lie import JacobiError, LieAlgebra, direct_sum, new_algebra, semidirect_extend
from .linalg import (
    FqScalar,
    FqVector,
    ResourceError,
    Subspace,
    UsageError,
    enumerate_subspaces,
    enumerate_vectors,
    gaussian_binomial,
    rref,
    subspace_from_vectors,
    subspace_meet,
    subspace_sum,
)
from .predicates import (
    PredicateReport,
    has_one_and_half_generation,
    is_modular,
    is_modular_star,
    is_mu_algebra,
    is_quasi_ideal,
    is_quasi_ideal_bruteforce,
    is_semi_modular,
    is_strong_ideal,
    is_strong_quasi_ideal,
    is_upper_modular,
    is_lower_modular,
)

__version__ = "0.1.0"
