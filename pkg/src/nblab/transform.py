"""The averaging operator Tf(x) = integral f(theta) rho(theta/x) dtheta/theta.

Everything here reduces to the primitive

    Phi(y) = integral_1^y floor(u) du/u = floor(y) log y - log(floor(y)!)

(zero for y <= 1): on a maximal u-interval with floor(u) = m the integrand
contributes m log(u2/u1), and the closed form telescopes.  Floors are taken
in exact rational arithmetic whenever the argument is rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np
from scipy.special import gammaln

from .arith import ArithProfile

EULER_GAMMA = 0.5772156649015328606


def floor_log_integral(y) -> float:
    """Phi(y) = integral_1^y floor(u) du/u, exact floor for rational y."""
    m = math.floor(y)
    if m < 1:
        return 0.0
    return m * math.log(y) - math.lgamma(m + 1)


@dataclass(frozen=True)
class StepWeight:
    """A step function on (0, 1]: weight w_i on (cuts[i+1], cuts[i]].

    cuts is strictly decreasing with cuts[0] = 1; the support ends at the
    last cut (the function is zero on (0, cuts[-1]]).
    """

    cuts: tuple      # of Fraction, descending, len K+1
    weights: tuple   # len K, weights[i] on (cuts[i+1], cuts[i]]

    def __post_init__(self):
        if len(self.cuts) != len(self.weights) + 1:
            raise ValueError("need exactly one more cut than weights")
        if any(self.cuts[i] <= self.cuts[i + 1] for i in range(len(self.weights))):
            raise ValueError("cuts must be strictly decreasing")

    @staticmethod
    def mertens_weight(n: int, profile: ArithProfile) -> "StepWeight":
        """M(1/theta) restricted to (1/n, 1]: weight M(k) on (1/(k+1), 1/k]."""
        cuts = tuple(Fraction(1, k) for k in range(1, n + 1))
        weights = tuple(profile.M(k) for k in range(1, n))
        return StepWeight(cuts, weights)


def apply_T(weight: StepWeight, x) -> float:
    """Tf(x) for a step weight f, in closed form.

    On each weight piece (u1, u2]: integral rho(theta/x) dtheta/theta
    = (u2 - u1)/x - (Phi(u2/x) - Phi(u1/x)).
    """
    if x <= 0:
        raise ValueError(f"argument must be positive, got {x}")
    exact = isinstance(x, Rational) and not isinstance(x, float)
    xq = Fraction(x) if exact else float(x)
    total = 0.0
    for i, w in enumerate(weight.weights):
        if w == 0:
            continue
        u2, u1 = weight.cuts[i], weight.cuts[i + 1]
        lin = float((u2 - u1) / xq) if exact else (float(u2) - float(u1)) / xq
        phi = floor_log_integral(u2 / xq) - floor_log_integral(u1 / xq)
        total += w * (lin - phi)
    return total


class Gn:
    """The transform of the truncated Mertens step weight.

    Pointwise values use the summation-by-parts form

        G_n(x) = gamma(n)/x - sum_{k<n} mu(k) Phi(1/(kx)) + M(n-1) Phi(1/(nx)),

    which is O(n) per point; apply_T on the raw weight is kept as an
    independent slow path.  For x >= 1 the value is exactly gamma(n)/x.
    """

    def __init__(self, n: int, profile: ArithProfile):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if n > profile.limit:
            raise ValueError(f"n={n} beyond profile limit {profile.limit}")
        self.n = n
        self.profile = profile
        self.gamma_n = profile.gamma(n)
        self.m_tail = profile.M(n - 1) if n > 1 else 0
        self._mu = profile.mu_values[:n - 1].astype(np.float64)

    @property
    def weight(self) -> StepWeight:
        return StepWeight.mertens_weight(self.n, self.profile)

    def __call__(self, x) -> float:
        if x <= 0:
            raise ValueError(f"argument must be positive, got {x}")
        exact = isinstance(x, Rational) and not isinstance(x, float)
        if exact:
            x = Fraction(x)
            total = self.gamma_n / float(x)
            for k in range(1, self.n):
                mu = self.profile.mu(k)
                if mu:
                    total -= mu * floor_log_integral(1 / (k * x))
            total += self.m_tail * floor_log_integral(1 / (self.n * x))
            return total
        x = float(x)
        n = self.n
        if x >= 1.0 or n == 1:
            return self.gamma_n / x
        k = np.arange(1, n, dtype=np.float64)
        y = 1.0 / (k * x)
        m = np.floor(y)
        phi = np.where(m >= 1.0, m * np.log(y) - gammaln(m + 1.0), 0.0)
        return (self.gamma_n / x - float(np.dot(self._mu, phi))
                + self.m_tail * floor_log_integral(1.0 / (n * x)))

    def apply_t_value(self, x) -> float:
        """Slow independent evaluation straight from the weight."""
        return apply_T(self.weight, x)

    # hooks for the piecewise flattener
    @property
    def phi_terms(self) -> list:
        terms = [(-int(self.profile.mu(k)), Fraction(1, k)) for k in range(1, self.n)]
        terms.append((self.m_tail, Fraction(1, self.n)))
        return [(w, t) for w, t in terms if w != 0]

    @property
    def inv_coeff(self) -> float:
        return self.gamma_n

    @property
    def sup_bound(self) -> float:
        """|G_n| <= sum_{k<n} |M(k)| log((k+1)/k) everywhere."""
        if self.n == 1:
            return 0.0
        k = np.arange(1, self.n, dtype=np.float64)
        return float(np.dot(np.abs(self.profile.mertens[:self.n - 1]).astype(np.float64),
                            np.log((k + 1.0) / k)))

    @property
    def min_theta(self) -> Fraction:
        return Fraction(1, self.n)


class TIndicator:
    """T applied to the indicator of [a, b], 0 < a < b <= 1, in closed form."""

    def __init__(self, a, b):
        a, b = Fraction(a), Fraction(b)
        if not 0 < a < b <= 1:
            raise ValueError(f"need 0 < a < b <= 1, got a={a}, b={b}")
        self.a = a
        self.b = b

    def __call__(self, x) -> float:
        if x <= 0:
            raise ValueError(f"argument must be positive, got {x}")
        exact = isinstance(x, Rational) and not isinstance(x, float)
        xq = Fraction(x) if exact else float(x)
        lin = float((self.b - self.a) / xq) if exact else float(self.b - self.a) / xq
        return lin - floor_log_integral(self.b / xq) + floor_log_integral(self.a / xq)

    @property
    def phi_terms(self) -> list:
        return [(-1, self.b), (1, self.a)]

    @property
    def inv_coeff(self) -> float:
        return float(self.b - self.a)

    @property
    def sup_bound(self) -> float:
        return float((self.b - self.a) / self.a)

    @property
    def min_theta(self) -> Fraction:
        return self.a


def riemann_sum_T(a, b, n: int):
    """The n-point Riemann sum of T chi_[a,b] as a Beurling sum.

    s_n(x) = ((b-a)/n) sum_k (1/theta_k) rho(theta_k/x),
    theta_k = a + (b-a) k/n.
    """
    from .beurling import BeurlingSum

    a, b = Fraction(a), Fraction(b)
    if not 0 < a < b:
        raise ValueError(f"need 0 < a < b, got a={a}, b={b}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    h = (b - a) / n
    terms = [(h / (a + h * k), a + h * k) for k in range(1, n + 1)]
    return BeurlingSum.make(terms)


def mobius_log_identity(x, profile: ArithProfile):
    """Both sides of  chi_(1,inf)(x) log x = integral_1^x M(t) floor(x/t) dt/t.

    The right-hand side is evaluated exactly piecewise; returns
    (lhs, rhs, |lhs - rhs|).
    """
    if x <= 0:
        raise ValueError(f"argument must be positive, got {x}")
    xf = float(x)
    lhs = math.log(xf) if xf > 1.0 else 0.0
    kmax = math.floor(x)
    if kmax > profile.limit:
        raise ValueError(f"x={x} beyond profile limit {profile.limit}")
    exact = isinstance(x, Rational) and not isinstance(x, float)
    xq = Fraction(x) if exact else xf
    parts = []
    for k in range(1, kmax + 1):
        m = profile.M(k)
        if m == 0:
            continue
        t2 = min(k + 1, xq)
        parts.append(m * (floor_log_integral(xq / k) - floor_log_integral(xq / t2)))
    rhs = math.fsum(parts)
    return lhs, rhs, abs(lhs - rhs)


@dataclass(frozen=True)
class TailIntegralBound:
    value: float
    bound: float
    satisfied: bool


def rho_tail_ratio_bound(theta: float, n: int) -> TailIntegralBound:
    """integral_n^inf rho(x/theta) x^-2 dx against the bound (log theta + 1)/theta.

    For theta > n the integral has the closed form
    (log(theta/n) + 1 - euler_gamma)/theta, using
    integral_1^inf rho(u) u^-2 du = 1 - euler_gamma.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not theta > n:
        raise ValueError(f"need theta > n, got theta={theta}, n={n}")
    value = (math.log(theta / n) + 1.0 - EULER_GAMMA) / theta
    bound = (math.log(theta) + 1.0) / theta
    return TailIntegralBound(value=value, bound=bound, satisfied=value <= bound)
