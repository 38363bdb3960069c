"""Exact arithmetic for quantum tori with real multiplication over real quadratic fields."""

from .classgrp import (
    ClassGroup,
    IdealClass,
    UnitInfo,
    class_group,
    fundamental_unit,
    narrow_class_group,
)
from .field import CFExpansion, FieldContext, FieldError, QuadElem, cf_expand, norm_trace, sign_and_positivity
from .forms import BQF, form_class_count
from .ideal import FractionalIdeal, ideal_from_gens, ideal_norm, invert, is_principal, multiply
from .lattice import (
    Lattice,
    Order,
    Pseudolattice,
    contains,
    end_order,
    hom_module,
    is_homothetic,
    normal_basis,
)
from .tori import (
    GaloisLabel,
    QuantumTorusClass,
    act,
    enumerate_qt,
    galois_table,
    rm_detect,
    transporter,
    verify_simply_transitive,
)

__version__ = "0.1.0"
