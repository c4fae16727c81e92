"""Exact generation and analysis of the enumerated set A."""

from .kepler import KeplerClass, KeplerConfig, KeplerProfile, kepler_profile
from .lacunary import Base, LacunarySpec, PrecisionExhausted, eval_lacunary, floor_term, register_constant
from .recurrence import (
    RecurrenceSpec,
    SequencePrefix,
    berlekamp_massey,
    char_poly,
    eval_recurrence,
    minimize_recurrence,
    satisfies_recurrence,
    spec_from_char_poly,
)
from .residues import ResidueProfile, residue_profile
from .specfile import ExplicitSpec, load_spec, prefix_of, spec_from_mapping

__all__ = [
    "Base",
    "ExplicitSpec",
    "KeplerClass",
    "KeplerConfig",
    "KeplerProfile",
    "LacunarySpec",
    "PrecisionExhausted",
    "RecurrenceSpec",
    "ResidueProfile",
    "SequencePrefix",
    "berlekamp_massey",
    "char_poly",
    "eval_lacunary",
    "eval_recurrence",
    "floor_term",
    "kepler_profile",
    "load_spec",
    "minimize_recurrence",
    "prefix_of",
    "register_constant",
    "residue_profile",
    "satisfies_recurrence",
    "spec_from_char_poly",
    "spec_from_mapping",
]
