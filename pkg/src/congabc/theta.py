"""The even-power map on ABC-solutions and its amplification constants.

For an even n >= 2 the map sends (a, b, c) to

    A = -(a - b)**n / 2**m
    B = -(c**n - (a - b)**n) / 2**m
    C = c**n / 2**m

with m = n when c is even and m = 0 otherwise.  The image is again an
ABC-solution; both divisions are exact because when c is even a and b
are odd, so c and a - b are both even.

The companion constants, for even n >= 2 and epsilon > 0, are

    c_lin   = n / (n + n*eps - eps)                       in (0, 1]
    c_off   = -n*(1+eps)*ln(2n) / (n + n*eps - eps) - n*ln(2)
    eps_out = eps / (n + n*eps - eps) = eps / (n + (n-1)*eps)

and they tie the merit of the image at eps_out to the merit of the
input at eps:  f(image, eps_out) >= c_lin * f(input, eps) + c_off.
Rearranged, and writing bound for an assumed uniform upper bound on
the image merits, every input merit obeys

    f(input, eps) <= (bound - c_off) / c_lin

which is what derived_full_bound computes with n = totient(N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .abc_core import ABCSolution, make_solution
from .numtheory import totient

DEFAULT_EXPONENT_CAP = 64

_LN2 = math.log(2.0)


class OddN(ValueError):
    """The exponent must be an even integer >= 2."""


class NonpositiveEpsilon(ValueError):
    """epsilon must be strictly positive here."""


class ExponentCapExceeded(ValueError):
    """The requested exponent exceeds the configured cap."""


class InternalInexactDivision(RuntimeError):
    """A division by 2**m left a remainder; this indicates a bug."""


@dataclass(frozen=True)
class ThetaResult:
    """One application of the even-power map.

    raw holds the image components (A, B, C) in definition order,
    before normalization; output is the normalized solution built
    from them.  m is n when input.c is even and 0 otherwise.
    """

    input: ABCSolution
    n: int
    m: int
    raw: tuple[int, int, int]
    output: ABCSolution


@dataclass(frozen=True)
class LemmaConstants:
    """The amplification constants c_lin, c_off, eps_out for (n, epsilon)."""

    n: int
    epsilon: float
    c_lin: float
    c_off: float
    eps_out: float


def _require_even(n: int) -> None:
    if n < 2 or n % 2 != 0:
        raise OddN(f"exponent must be an even integer >= 2, got {n}")


def theta(aa: ABCSolution, n: int, *, cap: int = DEFAULT_EXPONENT_CAP) -> ThetaResult:
    """Apply the even-power map once and normalize the image.

    Raises OddN for invalid exponents and ExponentCapExceeded when n
    exceeds cap (the image grows like c**n, so the cap guards against
    accidental huge powers; raise it explicitly when wanted).
    """
    _require_even(n)
    if n > cap:
        raise ExponentCapExceeded(f"exponent {n} exceeds cap {cap}")
    d = aa.a - aa.b
    m = n if aa.c % 2 == 0 else 0
    two_m = 1 << m
    dn = d**n
    cn = aa.c**n
    a_img, r1 = divmod(-dn, two_m)
    b_img, r2 = divmod(dn - cn, two_m)
    c_img, r3 = divmod(cn, two_m)
    if r1 or r2 or r3:
        raise InternalInexactDivision(
            f"2**{m} does not divide the image of {aa} under n={n}"
        )
    # c**n = 2*(a-b)**n has no integer solutions, so the components
    # are pairwise distinct before normalization
    assert a_img != b_img and a_img < 0 and b_img < 0 and c_img > 0
    return ThetaResult(
        input=aa,
        n=n,
        m=m,
        raw=(a_img, b_img, c_img),
        output=make_solution(a_img, b_img, c_img),
    )


def lemma_constants(n: int, epsilon: float) -> LemmaConstants:
    """The amplification constants for even n >= 2 and epsilon > 0."""
    _require_even(n)
    if epsilon <= 0:
        raise NonpositiveEpsilon(f"epsilon must be positive, got {epsilon}")
    denom = n + n * epsilon - epsilon
    return LemmaConstants(
        n=n,
        epsilon=float(epsilon),
        c_lin=n / denom,
        c_off=-n * (1.0 + epsilon) * math.log(2 * n) / denom - n * _LN2,
        eps_out=epsilon / denom,
    )


def derived_full_bound(N: int, epsilon: float, congruence_constant: float) -> float:
    """Propagate an assumed bound for triples with N | abc to all triples.

    congruence_constant is a hypothesis: an assumed uniform upper bound
    on f(aa, eps_out) over solutions divisible by N.  For N <= 2 the
    restriction is vacuous (every solution has an even entry), so the
    constant is returned unchanged.  Otherwise n = totient(N) is even
    and the returned value is (congruence_constant - c_off) / c_lin,
    an explicit bound on f(aa, epsilon) for all solutions.
    """
    if N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    if epsilon <= 0:
        raise NonpositiveEpsilon(f"epsilon must be positive, got {epsilon}")
    if N <= 2:
        return float(congruence_constant)
    n = totient(N)
    lc = lemma_constants(n, epsilon)
    return (congruence_constant - lc.c_off) / lc.c_lin
