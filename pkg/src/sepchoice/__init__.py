"""Exact tests of whether joint stochastic choice data come from separable decision makers."""

from .choice_space import (
    ChoiceSpace,
    DeterministicRule,
    DmSpec,
    build_type_matrix,
    enumerate_rules,
    restrict_type_matrix,
    validate_space,
)
from .cone_geometry import Cone, TooLarge, cone_contains, h_to_v, tensor_necessity_check, v_to_h
from .scenarios import gen_dominance_space, gen_mixture, gen_product, gen_table1
from .separability import (
    Classification,
    JointChoiceRule,
    Label,
    check_chsh,
    check_k_marginalizable,
    check_marginality,
    check_separable,
    check_separable_restrictions,
    classify,
    solve_signed_measure,
)
from .simplex import FeasibilityResult, lp_feasible

__version__ = "0.1.0"
