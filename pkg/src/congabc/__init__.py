"""Toolkit for ABC-solutions: radicals, merit, the even-power
amplification map, and exhaustive-corpus verification suites."""

from .abc_core import (
    ABCSolution,
    HasZeroEntry,
    MeritReport,
    NotCoprime,
    NotDistinct,
    NotZeroSum,
    SolutionError,
    make_solution,
    merit,
    quality,
)
from .harness import (
    CorpusSpec,
    HypothesisViolated,
    LemmaVerdict,
    SuiteSummary,
    enumerate_solutions,
    filter_congruence,
    random_solutions,
    search_quality,
    verify_lemma1,
    verify_lemma2,
    verify_proof_identities,
    verify_reduction_chain,
)
from .numtheory import (
    Factorization,
    FactorizationFailure,
    factorize,
    gcd,
    is_probable_prime,
    pow_int,
    radical,
    totient,
    valuation2,
)
from .theta import (
    ExponentCapExceeded,
    InternalInexactDivision,
    LemmaConstants,
    NonpositiveEpsilon,
    OddN,
    ThetaResult,
    derived_full_bound,
    lemma_constants,
    theta,
)

__version__ = "0.1.0"

__all__ = [
    "ABCSolution",
    "CorpusSpec",
    "ExponentCapExceeded",
    "Factorization",
    "FactorizationFailure",
    "HasZeroEntry",
    "HypothesisViolated",
    "InternalInexactDivision",
    "LemmaConstants",
    "LemmaVerdict",
    "MeritReport",
    "NonpositiveEpsilon",
    "NotCoprime",
    "NotDistinct",
    "NotZeroSum",
    "OddN",
    "SolutionError",
    "SuiteSummary",
    "ThetaResult",
    "derived_full_bound",
    "enumerate_solutions",
    "factorize",
    "filter_congruence",
    "gcd",
    "is_probable_prime",
    "lemma_constants",
    "make_solution",
    "merit",
    "pow_int",
    "quality",
    "radical",
    "random_solutions",
    "search_quality",
    "theta",
    "totient",
    "valuation2",
    "verify_lemma1",
    "verify_lemma2",
    "verify_proof_identities",
    "verify_reduction_chain",
]
