"""Finite quotients of ω-presented groups through the action on ``H^A``."""

from omega_nil.finquot.action import (
    Exhausted,
    NotFound,
    QuotientCertificate,
    action_step,
    certificate_check,
    quotient_search,
)
from omega_nil.finquot.groups import FiniteGroup, PermGroup, SL2, sl2_over_gf2n
from omega_nil.finquot.plugin import parse_group_spec

__all__ = [
    "SL2",
    "Exhausted",
    "FiniteGroup",
    "NotFound",
    "PermGroup",
    "QuotientCertificate",
    "action_step",
    "certificate_check",
    "parse_group_spec",
    "quotient_search",
    "sl2_over_gf2n",
]
