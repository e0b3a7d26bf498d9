"""Special functions behind every bound in the package.

All functions take and return plain Python floats.  The binomial tail is the
only routine that touches numpy, because it has to sum up to ~10^7 terms.
"""

import math

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import DomainError

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

# Rational approximation of the standard normal quantile (P. J. Acklam, 2003).
# Relative error 1.15e-9 before refinement.
_A = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_B = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_C = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_D = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)
_P_LOW = 0.02425


def _check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def binary_entropy(p: float) -> float:
    """Shannon entropy in bits of a Bernoulli(p) variable.

    ``H(0) = H(1) = 0`` by continuity.
    """
    p = _check_probability(p)
    if p == 0.0 or p == 1.0:
        return 0.0
    q = 1.0 - p
    return -(p * math.log2(p) + q * math.log2(q))


def inv_binary_entropy(h: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Return the unique ``p`` in [0, 1/2] with ``binary_entropy(p) == h``.

    Bisection on [0, 0.5]; H is strictly increasing there so the bracket never
    fails.  Iteration continues past ``tol`` down to float resolution when the
    cap allows, which keeps the entropy round trip tight near p = 0.
    """
    h = float(h)
    if not (0.0 <= h <= 1.0):
        raise DomainError(f"entropy must lie in [0, 1], got {h!r}")
    if h == 0.0:
        return 0.0
    if h == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if binary_entropy(mid) < h:
            lo = mid
        else:
            hi = mid
    if hi - lo > tol:
        raise ArithmeticError(f"bisection did not reach {tol} in {max_iter} steps")
    return 0.5 * (lo + hi)


def gaussian_tail(z: float) -> float:
    """Upper tail ``Pr[Z > z]`` of the standard normal distribution."""
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"z must be finite, got {z!r}")
    return 0.5 * math.erfc(z / _SQRT2)


def _normal_quantile_approx(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return num / den
    if p > 1.0 - _P_LOW:
        q = math.sqrt(-2.0 * math.log1p(-p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return -num / den
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def gaussian_tail_inverse(p: float) -> float:
    """Return ``z`` such that ``gaussian_tail(z) == p``.

    Works on the lower quantile ``x = -z`` so that small tail probabilities
    keep full relative precision, then applies one Newton step on the CDF.
    """
    p = float(p)
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    x = _normal_quantile_approx(p)
    # Phi(x) - p, evaluated through erfc to avoid cancellation in the lower tail
    err = 0.5 * math.erfc(-x / _SQRT2) - p
    density = math.exp(-0.5 * x * x) / _SQRT2PI
    if density > 0.0:
        x -= err / density
    return -x


def _check_binomial_args(m: int, p: float, k: int) -> tuple[int, float, int]:
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    m, k = int(m), int(k)
    if k > m:
        raise DomainError(f"k={k} exceeds m={m}")
    return m, _check_probability(p), k


def _log_pmf(m: int, p: float, j: np.ndarray) -> np.ndarray:
    log_comb = gammaln(m + 1.0) - gammaln(j + 1.0) - gammaln(m - j + 1.0)
    return log_comb + j * math.log(p) + (m - j) * math.log1p(-p)


def binomial_tail_exact(m: int, p: float, k: int) -> float:
    """``Pr[X <= k]`` for ``X ~ Binomial(m, p)``, summed in log space.

    Above the mean the upper tail ``Pr[X > k]`` is summed instead and
    subtracted from one, so the summed tail is always the small one.
    """
    m, p, k = _check_binomial_args(m, p, k)
    if k == m or p == 0.0:
        return 1.0
    if p == 1.0:
        return 0.0
    if k <= m * p:
        j = np.arange(0, k + 1, dtype=np.float64)
        return float(min(1.0, math.exp(logsumexp(_log_pmf(m, p, j)))))
    j = np.arange(k + 1, m + 1, dtype=np.float64)
    upper = math.exp(logsumexp(_log_pmf(m, p, j)))
    return float(max(0.0, 1.0 - upper))
