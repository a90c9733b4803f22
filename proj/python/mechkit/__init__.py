"""Budget-optimal mechanisms over finite type domains.

Thin Python face of the C++ core: exact rationals are fractions.Fraction on
this side, environments come from JSON documents or the bundled generators.
"""

from mechkit._core import (
    CapacityError,
    Environment,
    InputError,
    NegativeCycleError,
    OptionRule,
    check_dominance,
    check_dsic,
    check_ir,
    check_se,
    clarke_payments,
    compare_budgets,
    compute_payments,
    enumerate_se_rules,
    generate_instance,
    optimize_option_rule,
    oracle_min_payment,
    quadratic_select,
    redistribute,
    run_experiment,
    run_mechanism,
    social_welfare,
    tabulate_mechanism,
    vcg_budget_payments,
    venue_instance,
    vickrey_instance,
)

__all__ = [
    "CapacityError",
    "Environment",
    "InputError",
    "NegativeCycleError",
    "OptionRule",
    "check_dominance",
    "check_dsic",
    "check_ir",
    "check_se",
    "clarke_payments",
    "compare_budgets",
    "compute_payments",
    "enumerate_se_rules",
    "generate_instance",
    "optimize_option_rule",
    "oracle_min_payment",
    "quadratic_select",
    "redistribute",
    "run_experiment",
    "run_mechanism",
    "social_welfare",
    "tabulate_mechanism",
    "vcg_budget_payments",
    "venue_instance",
    "vickrey_instance",
]
