"""Valuated groups with normal forms: exact arithmetic in free groups,
free products, amalgams and HNN extensions of finite groups, together with
bounded checks of length-function axioms and of the structural results
built on them."""

from .errors import *  # noqa: F401,F403
from .finite_algebra import (  # noqa: F401
    FiniteGroup,
    Isomorphism,
    Subgroup,
    make_cyclic_group,
    make_isomorphism,
    subgroup_from_generators,
    validate_table,
)
from .constructions import (  # noqa: F401
    Ball,
    GroupContext,
    GroupElement,
    Kind,
    build_amalgam,
    build_free_group,
    build_free_product,
    build_hnn,
    enumerate_ball,
)
from .valuation import AxiomId, HalfInt, check_axiom, gromov_c, in_N  # noqa: F401
from .normal_forms import cyclic_reduce, normal_form, s_reduced_decomposition  # noqa: F401
from .specfile import SpecFile, format_word, parse_spec, parse_word  # noqa: F401

__version__ = "0.1.0"
