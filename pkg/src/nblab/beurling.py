"""Finite Beurling sums sum_k c_k rho(theta_k / x) and the standard families.

theta_k are exact rationals in (0, 1]; coefficients are exact rationals
whenever the arithmetic profile still carries exact values of g(n), floats
beyond that.  Equal thetas are merged at construction so class membership
(the tail coefficient sum c_k theta_k) is decided exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .arith import ArithProfile


def rho(u):
    """Fractional part; exact for rational input."""
    return u - math.floor(u)


class GeneratorKind(enum.Enum):
    NEG_CHI = "neg_chi"   # -1 on (0,1], 0 elsewhere
    LAMBDA = "lambda"     # log x on (0,1], 0 elsewhere


@dataclass(frozen=True)
class Generator:
    kind: GeneratorKind
    scale: float = 1.0    # dilation K_a: evaluates at a*x

    def __call__(self, x: float) -> float:
        ax = self.scale * x
        if not 0.0 < ax <= 1.0:
            return 0.0
        return -1.0 if self.kind is GeneratorKind.NEG_CHI else math.log(ax)

    def dilate(self, a: float) -> "Generator":
        if a <= 0:
            raise ValueError(f"dilation factor must be positive, got {a}")
        return Generator(self.kind, self.scale * a)


NEG_CHI = Generator(GeneratorKind.NEG_CHI)
LAMBDA = Generator(GeneratorKind.LAMBDA)


@dataclass(frozen=True)
class BeurlingSum:
    """Canonical finite sum sum_k c_k rho(theta_k / x).

    terms is sorted by descending theta with distinct thetas and no zero
    coefficients.  For x larger than every theta the sum equals
    tail_coeff / x.
    """

    terms: tuple  # of (coeff, theta: Fraction)

    @staticmethod
    def make(terms) -> "BeurlingSum":
        merged: dict[Fraction, object] = {}
        for c, theta in terms:
            theta = Fraction(theta)
            if theta <= 0:
                raise ValueError(f"theta must be positive, got {theta}")
            if isinstance(c, Rational):
                c = Fraction(c)
            merged[theta] = merged.get(theta, 0) + c
        out = tuple(
            (c, theta)
            for theta, c in sorted(merged.items(), key=lambda kv: kv[0], reverse=True)
            if c != 0
        )
        return BeurlingSum(out)

    @property
    def tail_coeff(self):
        """sum c_k theta_k; exact when every coefficient is rational."""
        return sum((c * t for c, t in self.terms), start=Fraction(0))

    @property
    def is_class_b(self) -> bool:
        return all(t <= 1 for _, t in self.terms)

    @property
    def is_class_c(self) -> bool:
        return self.is_class_b and self.tail_coeff == 0

    @property
    def sup_bound(self) -> float:
        """sum |c_k|, a pointwise bound since 0 <= rho < 1."""
        return float(sum(abs(c) for c, _ in self.terms))

    @property
    def min_theta(self) -> Fraction:
        if not self.terms:
            return Fraction(1)
        return self.terms[-1][1]

    def __call__(self, x):
        """Evaluate at x > 0; exact when x and the coefficients are rational."""
        if x <= 0:
            raise ValueError(f"argument must be positive, got {x}")
        if isinstance(x, Rational) and not isinstance(x, float):
            x = Fraction(x)
            return sum((c * rho(t / x) for c, t in self.terms), start=Fraction(0))
        x = float(x)
        return math.fsum(c * rho(float(t) / x) for c, t in self.terms)

    def dilate(self, a) -> "BeurlingSum":
        """K_a f(x) = f(ax), i.e. theta_k -> theta_k / a."""
        if a <= 0:
            raise ValueError(f"dilation factor must be positive, got {a}")
        a = Fraction(a) if isinstance(a, Rational) and not isinstance(a, float) else a
        return BeurlingSum.make([(c, t / a) for c, t in self.terms])

    def to_text(self) -> str:
        lines = []
        for c, t in self.terms:
            cs = f"{c.numerator}/{c.denominator}" if isinstance(c, Fraction) else repr(float(c))
            lines.append(f"{cs} {t.numerator}/{t.denominator}")
        return "\n".join(lines) + ("\n" if lines else "")

    @staticmethod
    def from_text(text: str) -> "BeurlingSum":
        terms = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            cs, ts = line.split()
            c = Fraction(cs) if "/" in cs else float(cs)
            terms.append((c, Fraction(ts)))
        return BeurlingSum.make(terms)


FAMILIES = ("sn", "vn", "bn", "fn", "rn")


def _g_of(profile: ArithProfile, n: int):
    return profile.g_exact(n) if profile.has_exact(n) else profile.g(n)


def make_family(family: str, n: int, profile: ArithProfile) -> BeurlingSum:
    """Construct one of the standard approximating families.

    sn: sum_{k<=n} mu(k) rho(1/(kx))
    vn: sn - g(n) rho(1/x)
    bn: sn - n g(n) rho(1/(nx))
    fn: sum_{k<=n} (M(n/k) - M(n/(k+1))) rho(k/(nx)) - rho(1/(nx))
    rn: sum_{k<n} (1/k) M(n/k) rho(k/(nx))

    fn and rn with n = 1 give the empty (identically zero) sum.
    """
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > profile.limit:
        raise ValueError(f"n={n} beyond profile limit {profile.limit}")

    def M(m: int) -> int:
        return profile.M(m) if m >= 1 else 0

    if family in ("sn", "vn", "bn"):
        terms = [(Fraction(profile.mu(k)), Fraction(1, k)) for k in range(1, n + 1)]
        if family == "vn":
            terms.append((-_g_of(profile, n), Fraction(1)))
        elif family == "bn":
            terms.append((-n * _g_of(profile, n), Fraction(1, n)))
        return BeurlingSum.make(terms)
    if family == "fn":
        terms = [(Fraction(M(n // k) - M(n // (k + 1))), Fraction(k, n))
                 for k in range(1, n + 1)]
        terms.append((Fraction(-1), Fraction(1, n)))
        return BeurlingSum.make(terms)
    # rn
    terms = [(Fraction(M(n // k), k), Fraction(k, n)) for k in range(1, n)]
    return BeurlingSum.make(terms)


def step_values(f: BeurlingSum, n: int) -> list:
    """f(1/j) for j = 1..n, exact."""
    return [f(Fraction(1, j)) for j in range(1, n + 1)]


def recover_coefficients(values) -> list:
    """Solve -f(1/j) = sum_k a_k floor(j/k) for a_1..a_n by forward substitution.

    For the step values of a class-C sum with theta_k = 1/k this recovers the
    coefficients exactly when the inputs are exact.
    """
    n = len(values)
    coeffs: list = []
    for j in range(1, n + 1):
        acc = -values[j - 1]
        for k in range(1, j):
            acc -= coeffs[k - 1] * (j // k)
        coeffs.append(acc)
    return coeffs
