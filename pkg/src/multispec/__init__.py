"""Exact multiplier spectra of polynomial maps.

Submodules
----------
exactalg
    Polynomials over Q, resultants, gcds, squarefree parts and multi-modular
    characteristic polynomials.
dynmaps
    Polynomial maps, affine conjugacy, symmetry groups, orbits.
spectrum
    Multiplier spectra by level, comparisons, cycle counts, numeric checks.
ritt
    Ritt move pairs and the arithmetic progression of levels with equal spectra.
classify
    Critical values, exceptional maps, generalized Lattes forms, genera.
cli
    The ``multispec`` command.
"""

from .classify import (
    ExceptionalVerdict,
    GLForm,
    RamificationPortrait,
    critical_value_polynomial,
    distinct_critical_values_count,
    generalized_lattes_form,
    genus_hF,
    genus_hFH,
    gl_cubic_family,
    is_exceptional,
    is_presimple,
    ramification_portrait,
)
from .dynmaps import (
    AffineMap,
    PolyMap,
    RootCertificate,
    SymmetryGroup,
    build_Pca,
    chebyshev,
    commuting_linear,
    conjugacy_test,
    conjugate,
    escape_radius,
    orbit,
    sigma_group,
)
from .exactalg import Poly, charpoly_mod, compose, gcd, iterate, resultant, squarefree
from .ritt import (
    ProgressionFailure,
    ProgressionReport,
    RittPair,
    build_ritt_pair,
    multiplier_congruence_check,
    normalize_pair,
    progression_params,
    semiconjugacy_check,
    verify_progression,
)
from .spectrum import (
    LevelTooLarge,
    MultiplierPoly,
    SpectrumLevel,
    compare_iterates,
    length_spectrum_numeric,
    multiplier_charpoly,
    numeric_multipliers,
    spectra_equal_up_to,
    spectrum_containment,
    spectrum_level,
    superattracting_cycle_count,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_") and name not in ("annotations",)]
