"""Executable formal topology: covers, positivity, quotients, derivation
checking and a numeric realizability machine."""

from .core import (
    NO, YES, AxiomSet, LazyAxiomSet, Setoid, Subset, TriBool, axiom_set,
    enumerate_subsets, ex1, parse_axiom_set, parse_setoid, subset_algebra,
    unknown, validate_axiom_set,
)
from .covers import (
    Rf, Tr, check_proof, covers, covers_bounded, eval_ind, extract_proof, saturate,
)
from .positivity import (
    SplitCertificate, chain_construction, check_split, coinduct,
    compatibility_witness, duality_oracle, extract_splitting_set, interior,
    is_positive, positive_bounded,
)

from .constructions import coreflect, formal_closeds, formal_opens, pos_predicate
from .quotient import QuotientMap, es, es_inv, transform_quotient, transform_setoid

__version__ = "0.1.0"

__all__ = [
    "NO", "YES", "AxiomSet", "LazyAxiomSet", "Setoid", "Subset", "TriBool", "axiom_set",
    "enumerate_subsets", "ex1", "parse_axiom_set", "parse_setoid", "subset_algebra",
    "unknown", "validate_axiom_set",
    "Rf", "Tr", "check_proof", "covers", "covers_bounded", "eval_ind", "extract_proof", "saturate",
    "SplitCertificate", "chain_construction", "check_split", "coinduct",
    "compatibility_witness", "duality_oracle", "extract_splitting_set", "interior",
    "is_positive", "positive_bounded",
    "coreflect", "formal_closeds", "formal_opens", "pos_predicate",
    "QuotientMap", "es", "es_inv", "transform_quotient", "transform_setoid",
]
