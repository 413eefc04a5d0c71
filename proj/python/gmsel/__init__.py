"""Gaussian model selection with unknown variance."""

from ._core import (
    BudgetExceeded,
    DomainError,
    ParseError,
    dkhi,
    edkhi,
    edkhi_log,
    efish,
    fish,
    hka_check,
    kl_div,
    pen_classical,
    pen_kl,
    pen_kl_upper,
    pen_kullback,
    pen_kullback_upper,
    penalty_curve,
    phi,
    phi_inv,
    select,
    simulate,
)

__all__ = [
    "BudgetExceeded",
    "DomainError",
    "ParseError",
    "dkhi",
    "edkhi",
    "edkhi_log",
    "efish",
    "fish",
    "hka_check",
    "kl_div",
    "pen_classical",
    "pen_kl",
    "pen_kl_upper",
    "pen_kullback",
    "pen_kullback_upper",
    "penalty_curve",
    "phi",
    "phi_inv",
    "select",
    "simulate",
]
