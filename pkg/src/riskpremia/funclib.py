"""Parametric utility functions, probability weighting functions, and
concave transforms, all with analytic derivatives and inverses.

Conventions:

- A utility function U is strictly increasing and twice continuously
  differentiable on an open interval; u.value/u.d1/u.d2 are the analytic
  U, U', U''.  Derivatives are never computed numerically here; difference
  quotients exist only as test oracles.
- A weighting function h maps [0, 1] onto itself with h(0) = 0, h(1) = 1
  and h' > 0 on (0, 1).  Endpoint values are returned exactly; derivative
  queries at the endpoints are domain errors (they diverge for some
  families).
- h.dual is the decumulative companion 1 - h(1 - p).
- A ConcaveTransform T is a strictly increasing, strictly concave map of
  [0, 1] onto itself; concavify(h, T) builds the composition T(h(p)) with
  chain-rule derivatives.  Composing with any valid T raises the curvature
  index -h''/h' everywhere.

Monotonicity is enforced twice: through parameter constraints (e.g. the
Tversky-Kahneman family is rejected below its curvature threshold) and
through a dense grid check of the analytic first derivative at
construction time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, Mapping, Union

import numpy as np

from .errors import (
    ConcavityError,
    DomainError,
    MonotonicityError,
    ParseError,
    RangeError,
)
from .numerics import RootSpec, find_root

# Interior probability grid used for construction-time monotonicity checks.
# Inset of 1e-4 keeps clear of endpoint derivative blowup (prelec).
VALIDATION_GRID = np.linspace(1e-4, 1.0 - 1e-4, 1001)

_INF = math.inf

FunctionSpec = Union[str, Mapping]


def _fmt(x: float) -> str:
    return f"{x:g}"


def _as_array(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite argument")
    return arr


def _scalar_or_array(out: np.ndarray, like: np.ndarray):
    return float(out) if like.ndim == 0 else out


# ---------------------------------------------------------------------------
# Utility functions
# ---------------------------------------------------------------------------


class UtilityFn:
    """Base class for payoff utilities.

    Subclasses implement the analytic forms on the open interval
    self.domain; value/d1/d2 accept scalars or numpy arrays, inverse is
    scalar-only.  U' > 0 is checked on a dense grid at construction.
    """

    family: ClassVar[str] = ""

    @property
    def domain(self) -> tuple[float, float]:
        """Open interval on which U is defined and strictly increasing."""
        return (-_INF, _INF)

    @property
    def codomain(self) -> tuple[float, float]:
        """Open interval of attainable utility values."""
        return (-_INF, _INF)

    @property
    def spec(self) -> str:
        """Compact string form, parseable by parse_utility."""
        return self.family

    def _check_domain(self, x) -> np.ndarray:
        arr = _as_array(x)
        lo, hi = self.domain
        if not bool(np.all((arr > lo) & (arr < hi))):
            raise DomainError(
                f"payoff outside domain ({lo:g}, {hi:g}) of {self.spec}"
            )
        return arr

    def value(self, x):
        arr = self._check_domain(x)
        return _scalar_or_array(self._value(arr), arr)

    def d1(self, x):
        arr = self._check_domain(x)
        return _scalar_or_array(self._d1(arr), arr)

    def d2(self, x):
        arr = self._check_domain(x)
        return _scalar_or_array(self._d2(arr), arr)

    def inverse(self, t: float) -> float:
        lo, hi = self.codomain
        t = float(t)
        if not (lo < t < hi) or not math.isfinite(t):
            raise RangeError(
                f"utility value {t:g} outside range ({lo:g}, {hi:g}) of {self.spec}"
            )
        return self._inverse(t)

    def _value(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _d1(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _d2(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _inverse(self, t: float) -> float:
        raise NotImplementedError

    def _validation_window(self) -> tuple[float, float]:
        lo, hi = self.domain
        if math.isinf(lo) and math.isinf(hi):
            return (-100.0, 100.0)
        if math.isinf(hi):
            return (lo + 1e-2, lo + 100.0)
        if math.isinf(lo):
            return (hi - 100.0, hi - 1e-8)
        span = hi - lo
        return (lo + 1e-3 * span, hi - 1e-3 * span)

    def _check_increasing(self) -> None:
        # smoke test; the real guarantee is the per-family parameter check
        grid = np.linspace(*self._validation_window(), 1001)
        d = self._d1(grid)
        if not (np.all(np.isfinite(d)) and np.all(d > 0.0)):
            raise MonotonicityError(f"U' <= 0 on validation grid for {self.spec}")


@dataclass(frozen=True)
class LinearUtility(UtilityFn):
    """U(x) = x, the risk-neutral / dual-theory utility."""

    family: ClassVar[str] = "linear"

    def _value(self, x):
        return x + 0.0

    def _d1(self, x):
        return 0.0 * x + 1.0

    def _d2(self, x):
        return 0.0 * x

    def _inverse(self, t):
        return t


@dataclass(frozen=True)
class CaraUtility(UtilityFn):
    """Constant absolute risk aversion: U(x) = -exp(-a*x), a > 0.

    -U''/U' = a at every wealth level.
    """

    a: float
    family: ClassVar[str] = "cara"

    def __post_init__(self):
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise MonotonicityError("cara requires a > 0")
        self._check_increasing()

    @property
    def codomain(self):
        return (-_INF, 0.0)

    @property
    def spec(self):
        return f"cara:{_fmt(self.a)}"

    def _validation_window(self):
        xm = min(10.0, 600.0 / self.a)
        return (-xm, xm)

    def _value(self, x):
        return -np.exp(-self.a * x)

    def _d1(self, x):
        return self.a * np.exp(-self.a * x)

    def _d2(self, x):
        return -self.a * self.a * np.exp(-self.a * x)

    def _inverse(self, t):
        return -math.log(-t) / self.a


@dataclass(frozen=True)
class CrraUtility(UtilityFn):
    """Constant relative risk aversion on x > 0.

    U(x) = x^(1-eta) / (1-eta) for eta != 1 and log(x) for eta = 1, so
    -x*U''/U' = eta throughout.
    """

    eta: float
    family: ClassVar[str] = "crra"

    def __post_init__(self):
        if not math.isfinite(self.eta):
            raise MonotonicityError("crra requires finite eta")
        self._check_increasing()

    @property
    def domain(self):
        return (0.0, _INF)

    @property
    def codomain(self):
        if self.eta == 1.0:
            return (-_INF, _INF)
        if self.eta < 1.0:
            return (0.0, _INF)
        return (-_INF, 0.0)

    @property
    def spec(self):
        return f"crra:{_fmt(self.eta)}"

    def _validation_window(self):
        return (1e-2, 100.0)

    def _value(self, x):
        if self.eta == 1.0:
            return np.log(x)
        return x ** (1.0 - self.eta) / (1.0 - self.eta)

    def _d1(self, x):
        return x ** (-self.eta)

    def _d2(self, x):
        return -self.eta * x ** (-self.eta - 1.0)

    def _inverse(self, t):
        if self.eta == 1.0:
            return math.exp(t)
        return ((1.0 - self.eta) * t) ** (1.0 / (1.0 - self.eta))


@dataclass(frozen=True)
class LogUtility(UtilityFn):
    """U(x) = log(x) on x > 0 (the eta = 1 relative-risk-aversion case)."""

    family: ClassVar[str] = "log"

    @property
    def domain(self):
        return (0.0, _INF)

    @property
    def spec(self):
        return "log"

    def _validation_window(self):
        return (1e-2, 100.0)

    def _value(self, x):
        return np.log(x)

    def _d1(self, x):
        return 1.0 / x

    def _d2(self, x):
        return -1.0 / (x * x)

    def _inverse(self, t):
        return math.exp(t)


@dataclass(frozen=True)
class QuadraticUtility(UtilityFn):
    """U(x) = x - b*x^2, truncated to the branch where U' = 1 - 2bx > 0.

    b > 0 gives the concave branch x < 1/(2b); b < 0 the convex branch
    x > 1/(2b); b = 0 degenerates to linear.
    """

    b: float
    family: ClassVar[str] = "quadratic"

    def __post_init__(self):
        if not math.isfinite(self.b):
            raise MonotonicityError("quadratic requires finite b")
        self._check_increasing()

    @property
    def domain(self):
        if self.b > 0.0:
            return (-_INF, 1.0 / (2.0 * self.b))
        if self.b < 0.0:
            return (1.0 / (2.0 * self.b), _INF)
        return (-_INF, _INF)

    @property
    def codomain(self):
        if self.b > 0.0:
            return (-_INF, 1.0 / (4.0 * self.b))
        if self.b < 0.0:
            return (1.0 / (4.0 * self.b), _INF)
        return (-_INF, _INF)

    @property
    def spec(self):
        return f"quadratic:{_fmt(self.b)}"

    def _value(self, x):
        return x - self.b * x * x

    def _d1(self, x):
        return 1.0 - 2.0 * self.b * x

    def _d2(self, x):
        return 0.0 * x - 2.0 * self.b

    def _inverse(self, t):
        if self.b == 0.0:
            return t
        return (1.0 - math.sqrt(1.0 - 4.0 * self.b * t)) / (2.0 * self.b)


# ---------------------------------------------------------------------------
# Probability weighting functions
# ---------------------------------------------------------------------------


class WeightingFn:
    """Base class for probability distortions on [0, 1].

    value accepts the closed interval and returns the endpoints exactly;
    d1/d2 are defined on the open interval only.  Construction validates
    h' > 0 on VALIDATION_GRID.
    """

    family: ClassVar[str] = ""

    @property
    def spec(self) -> str:
        return self.family

    def _check_unit(self, p, open_interval: bool = False) -> np.ndarray:
        arr = _as_array(p)
        if open_interval:
            ok = np.all((arr > 0.0) & (arr < 1.0))
        else:
            ok = np.all((arr >= 0.0) & (arr <= 1.0))
        if not bool(ok):
            kind = "(0, 1)" if open_interval else "[0, 1]"
            raise DomainError(f"probability outside {kind} for {self.spec}")
        return arr

    def value(self, p):
        arr = self._check_unit(p)
        out = np.empty(arr.shape, dtype=float)
        interior = (arr > 0.0) & (arr < 1.0)
        out[~interior] = arr[~interior]  # h(0) = 0, h(1) = 1 exactly
        if np.any(interior):
            out[interior] = self._value(arr[interior])
        return _scalar_or_array(out, arr)

    def d1(self, p):
        arr = self._check_unit(p, open_interval=True)
        return _scalar_or_array(self._d1(arr), arr)

    def d2(self, p):
        arr = self._check_unit(p, open_interval=True)
        return _scalar_or_array(self._d2(arr), arr)

    def inverse(self, q: float) -> float:
        q = float(q)
        if not (0.0 <= q <= 1.0) or not math.isfinite(q):
            raise DomainError(f"distorted probability {q:g} outside [0, 1]")
        if q == 0.0 or q == 1.0:
            return q
        return self._inverse(q)

    def dual(self, p):
        """Decumulative companion 1 - h(1 - p); involutive and endpoint-exact."""
        arr = self._check_unit(p)
        return _scalar_or_array(
            np.asarray(1.0 - self.value(1.0 - arr), dtype=float), arr
        )

    def _value(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _d1(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _d2(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _inverse(self, q: float) -> float:
        raise NotImplementedError

    def _check_increasing(self) -> None:
        d = self._d1(VALIDATION_GRID)
        if not (np.all(np.isfinite(d)) and np.all(d > 0.0)):
            raise MonotonicityError(f"h' <= 0 on validation grid for {self.spec}")


@dataclass(frozen=True)
class IdentityWeighting(WeightingFn):
    """h(p) = p: no distortion (the expected-utility special case)."""

    family: ClassVar[str] = "identity"

    def _value(self, p):
        return p + 0.0

    def _d1(self, p):
        return 0.0 * p + 1.0

    def _d2(self, p):
        return 0.0 * p

    def _inverse(self, q):
        return q


@dataclass(frozen=True)
class PowerWeighting(WeightingFn):
    """h(p) = p^theta, theta > 0; concave for theta < 1, convex for theta > 1."""

    theta: float
    family: ClassVar[str] = "power"

    def __post_init__(self):
        if not (self.theta > 0.0 and math.isfinite(self.theta)):
            raise MonotonicityError("power weighting requires theta > 0")
        self._check_increasing()

    @property
    def spec(self):
        return f"power:{_fmt(self.theta)}"

    def _value(self, p):
        return p**self.theta

    def _d1(self, p):
        return self.theta * p ** (self.theta - 1.0)

    def _d2(self, p):
        return self.theta * (self.theta - 1.0) * p ** (self.theta - 2.0)

    def _inverse(self, q):
        return q ** (1.0 / self.theta)


@dataclass(frozen=True)
class PrelecWeighting(WeightingFn):
    """Prelec distortion h(p) = exp(-beta * (-ln p)^alpha), alpha, beta > 0.

    Inverse-S shaped for alpha < 1 with fixed point near 1/e; derivatives
    diverge at the endpoints, hence the open-interval restriction on d1/d2.
    """

    alpha: float
    beta: float
    family: ClassVar[str] = "prelec"

    def __post_init__(self):
        if not (self.alpha > 0.0 and self.beta > 0.0):
            raise MonotonicityError("prelec requires alpha > 0 and beta > 0")
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise MonotonicityError("prelec requires finite parameters")
        self._check_increasing()

    @property
    def spec(self):
        return f"prelec:{_fmt(self.alpha)},{_fmt(self.beta)}"

    def _value(self, p):
        return np.exp(-self.beta * (-np.log(p)) ** self.alpha)

    def _d1(self, p):
        ell = -np.log(p)
        return self._value(p) * self.beta * self.alpha * ell ** (self.alpha - 1.0) / p

    def _d2(self, p):
        a, b = self.alpha, self.beta
        ell = -np.log(p)
        inner = (
            b * a * ell ** (2.0 * (a - 1.0))
            - (a - 1.0) * ell ** (a - 2.0)
            - ell ** (a - 1.0)
        )
        return self._value(p) * (b * a / (p * p)) * inner

    def _inverse(self, q):
        return math.exp(-((-math.log(q) / self.beta) ** (1.0 / self.alpha)))


# Below this curvature the Tversky-Kahneman form loses monotonicity on (0, 1).
TK_MIN_GAMMA = 0.28


@dataclass(frozen=True)
class TkWeighting(WeightingFn):
    """Tversky-Kahneman distortion h(p) = p^g / (p^g + (1-p)^g)^(1/g).

    Rejected for g < 0.28: monotonicity fails below that threshold, which
    would break the h' > 0 contract every other operation relies on.  No
    closed-form inverse; inversion is a bracketed root find.
    """

    gamma: float
    family: ClassVar[str] = "tk"

    def __post_init__(self):
        if not math.isfinite(self.gamma):
            raise MonotonicityError("tk requires finite gamma")
        if self.gamma < TK_MIN_GAMMA:
            raise MonotonicityError(
                f"tk weighting is non-monotone for gamma < {TK_MIN_GAMMA}"
                f" (got {self.gamma:g})"
            )
        self._check_increasing()

    @property
    def spec(self):
        return f"tk:{_fmt(self.gamma)}"

    def _value(self, p):
        g = self.gamma
        s = p**g + (1.0 - p) ** g
        return p**g * s ** (-1.0 / g)

    def _d1(self, p):
        return self._value(p) * self._logd1(p)

    def _d2(self, p):
        g = self.gamma
        s = p**g + (1.0 - p) ** g
        sp = g * (p ** (g - 1.0) - (1.0 - p) ** (g - 1.0))
        spp = g * (g - 1.0) * (p ** (g - 2.0) + (1.0 - p) ** (g - 2.0))
        g1 = g / p - sp / (g * s)
        g1p = -g / (p * p) - (spp * s - sp * sp) / (g * s * s)
        return self._value(p) * (g1 * g1 + g1p)

    def _logd1(self, p):
        g = self.gamma
        s = p**g + (1.0 - p) ** g
        sp = g * (p ** (g - 1.0) - (1.0 - p) ** (g - 1.0))
        return g / p - sp / (g * s)

    def _inverse(self, q):
        spec = RootSpec(
            objective=lambda p: self.value(p) - q,
            bracket=(0.0, 1.0),
            tol=1e-14,
        )
        return find_root(spec)


# ---------------------------------------------------------------------------
# Concave transforms and composition
# ---------------------------------------------------------------------------


class ConcaveTransform:
    """Strictly increasing, strictly concave map of [0, 1] onto itself.

    T(0) = 0 and T(1) = 1 exactly; T' > 0 and T'' < 0 are verified on the
    validation grid at construction.  Composing a weighting function with
    any such T raises its curvature index -h''/h' pointwise.
    """

    family: ClassVar[str] = ""

    @property
    def spec(self) -> str:
        return self.family

    def _check_unit(self, t, open_interval: bool = False) -> np.ndarray:
        arr = _as_array(t)
        ok = (
            np.all((arr > 0.0) & (arr < 1.0))
            if open_interval
            else np.all((arr >= 0.0) & (arr <= 1.0))
        )
        if not bool(ok):
            raise DomainError(f"transform argument outside unit interval for {self.spec}")
        return arr

    def value(self, t):
        arr = self._check_unit(t)
        out = np.empty(arr.shape, dtype=float)
        interior = (arr > 0.0) & (arr < 1.0)
        out[~interior] = arr[~interior]
        if np.any(interior):
            out[interior] = self._value(arr[interior])
        return _scalar_or_array(out, arr)

    def d1(self, t):
        arr = self._check_unit(t, open_interval=True)
        return _scalar_or_array(self._d1(arr), arr)

    def d2(self, t):
        arr = self._check_unit(t, open_interval=True)
        return _scalar_or_array(self._d2(arr), arr)

    def inverse(self, q: float) -> float:
        q = float(q)
        if not (0.0 <= q <= 1.0):
            raise DomainError(f"transform inverse argument {q:g} outside [0, 1]")
        if q == 0.0 or q == 1.0:
            return q
        return self._inverse(q)

    def _value(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _d1(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _d2(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _inverse(self, q: float) -> float:
        raise NotImplementedError

    def _check_shape(self) -> None:
        d1 = self._d1(VALIDATION_GRID)
        if not (np.all(np.isfinite(d1)) and np.all(d1 > 0.0)):
            raise MonotonicityError(f"T' <= 0 on validation grid for {self.spec}")
        d2 = self._d2(VALIDATION_GRID)
        if not np.all(d2 < 0.0):
            raise ConcavityError(f"T'' >= 0 on validation grid for {self.spec}")


@dataclass(frozen=True)
class PowerTransform(ConcaveTransform):
    """T(t) = t^kappa with 0 < kappa < 1."""

    kappa: float
    family: ClassVar[str] = "power"

    def __post_init__(self):
        if not (0.0 < self.kappa < 1.0):
            raise ConcavityError("power transform requires 0 < kappa < 1")
        self._check_shape()

    @property
    def spec(self):
        return f"power:{_fmt(self.kappa)}"

    def _value(self, t):
        return t**self.kappa

    def _d1(self, t):
        return self.kappa * t ** (self.kappa - 1.0)

    def _d2(self, t):
        return self.kappa * (self.kappa - 1.0) * t ** (self.kappa - 2.0)

    def _inverse(self, q):
        return q ** (1.0 / self.kappa)


@dataclass(frozen=True)
class ExpTransform(ConcaveTransform):
    """Normalized exponential T(t) = (1 - e^(-a t)) / (1 - e^(-a)), a > 0.

    Strictly concave for every a > 0 with a closed-form inverse; the
    curvature it adds to -h''/h' is a * h' everywhere.
    """

    a: float
    family: ClassVar[str] = "exp"

    def __post_init__(self):
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise ConcavityError("exp transform requires a > 0")
        self._check_shape()

    @property
    def spec(self):
        return f"exp:{_fmt(self.a)}"

    def _value(self, t):
        return np.expm1(-self.a * t) / np.expm1(-self.a)

    def _d1(self, t):
        return self.a * np.exp(-self.a * t) / (-np.expm1(-self.a))

    def _d2(self, t):
        return -self.a * self.a * np.exp(-self.a * t) / (-np.expm1(-self.a))

    def _inverse(self, q):
        return -math.log1p(q * math.expm1(-self.a)) / self.a


@dataclass(frozen=True)
class BlendTransform(ConcaveTransform):
    """Affine blend T(t) = (1-w) t + w sqrt(t) of identity and square root."""

    w: float
    family: ClassVar[str] = "blend"

    def __post_init__(self):
        if not (0.0 < self.w <= 1.0):
            raise ConcavityError("blend transform requires 0 < w <= 1")
        self._check_shape()

    @property
    def spec(self):
        return f"blend:{_fmt(self.w)}"

    def _value(self, t):
        return (1.0 - self.w) * t + self.w * np.sqrt(t)

    def _d1(self, t):
        return (1.0 - self.w) + self.w / (2.0 * np.sqrt(t))

    def _d2(self, t):
        return -self.w / (4.0 * t**1.5)

    def _inverse(self, q):
        if self.w == 1.0:
            return q * q
        # solve (1-w) s^2 + w s - q = 0 for s = sqrt(t), positive branch
        w = self.w
        s = (-w + math.sqrt(w * w + 4.0 * (1.0 - w) * q)) / (2.0 * (1.0 - w))
        return s * s


@dataclass(frozen=True)
class ComposedWeighting(WeightingFn):
    """Concavified weighting h2(p) = T(base(p)) with chain-rule derivatives."""

    transform: ConcaveTransform
    base: WeightingFn
    family: ClassVar[str] = "composed"

    def __post_init__(self):
        inner = self.base._value(VALIDATION_GRID)
        if not (np.all(inner > 0.0) and np.all(inner < 1.0)):
            # extreme bases can underflow to exactly 0/1 where the chain-rule
            # factors T'(h), T''(h) are not representable
            raise MonotonicityError(
                f"base weighting {self.base.spec} collapses to the unit-interval "
                "boundary on the validation grid; composition is not representable"
            )
        self._check_increasing()

    @property
    def spec(self):
        return f"{self.transform.spec}@{self.base.spec}"

    def _value(self, p):
        return self.transform.value(self.base._value(p))

    def _d1(self, p):
        h = self.base._value(p)
        return self.transform.d1(h) * self.base._d1(p)

    def _d2(self, p):
        h = self.base._value(p)
        hp = self.base._d1(p)
        return self.transform.d2(h) * hp * hp + self.transform.d1(h) * self.base._d2(p)

    def _inverse(self, q):
        return self.base.inverse(self.transform.inverse(q))


def concavify(g: WeightingFn, transform: ConcaveTransform) -> ComposedWeighting:
    """Compose a weighting function with a concave transform: p -> T(g(p))."""
    return ComposedWeighting(transform=transform, base=g)


# ---------------------------------------------------------------------------
# Spec parsing: "family:p1,p2" strings and {"family": ..., "params": [...]}
# ---------------------------------------------------------------------------

_UTILITIES = {
    "linear": (LinearUtility, 0),
    "identity": (LinearUtility, 0),  # alias: identity utility = linear
    "cara": (CaraUtility, 1),
    "crra": (CrraUtility, 1),
    "log": (LogUtility, 0),
    "quadratic": (QuadraticUtility, 1),
}

_WEIGHTINGS = {
    "identity": (IdentityWeighting, 0),
    "power": (PowerWeighting, 1),
    "prelec": (PrelecWeighting, 2),
    "tk": (TkWeighting, 1),
}

_TRANSFORMS = {
    "power": (PowerTransform, 1),
    "exp": (ExpTransform, 1),
    "blend": (BlendTransform, 1),
}


def _split_spec_string(text: str) -> tuple[str, list[float]]:
    name, _, tail = text.strip().partition(":")
    name = name.strip().lower()
    if not name:
        raise ParseError(f"empty function spec in {text!r}")
    if not tail:
        return name, []
    try:
        params = [float(tok) for tok in tail.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad parameter list in {text!r}: {exc}") from None
    return name, params


def _build(table: dict, kind: str, name: str, params: list[float]):
    if name not in table:
        known = ", ".join(sorted(set(table)))
        raise ParseError(f"unknown {kind} family {name!r} (known: {known})")
    ctor, arity = table[name]
    if len(params) != arity:
        raise ParseError(
            f"{kind} family {name!r} takes {arity} parameter(s), got {len(params)}"
        )
    return ctor(*params)


def _spec_parts(spec: FunctionSpec, kind: str) -> tuple[str, list[float]]:
    if isinstance(spec, str):
        return _split_spec_string(spec)
    if isinstance(spec, Mapping):
        try:
            name = str(spec["family"]).strip().lower()
        except KeyError:
            raise ParseError(f"{kind} spec object is missing 'family'") from None
        raw = spec.get("params", [])
        try:
            params = [float(v) for v in raw]
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad 'params' for {kind} {name!r}: {exc}") from None
        return name, params
    raise ParseError(f"{kind} spec must be a string or mapping, got {type(spec).__name__}")


def parse_utility(spec: FunctionSpec) -> UtilityFn:
    """Build a utility function from "family:params" or a JSON-style mapping."""
    name, params = _spec_parts(spec, "utility")
    return _build(_UTILITIES, "utility", name, params)


def parse_transform(spec: FunctionSpec) -> ConcaveTransform:
    """Build a concave transform from "family:params" or a mapping."""
    name, params = _spec_parts(spec, "transform")
    return _build(_TRANSFORMS, "transform", name, params)


def parse_weighting(spec: FunctionSpec) -> WeightingFn:
    """Build a weighting function from a string or mapping.

    Strings support composition as "TRANSFORM@BASE", e.g.
    "power:0.5@tk:0.61" for the power transform applied to a tk base;
    mappings use {"family": "composed", "transform": {...}, "base": {...}}.
    """
    if isinstance(spec, str) and "@" in spec:
        t_text, _, base_text = spec.partition("@")
        return concavify(parse_weighting(base_text), parse_transform(t_text))
    if isinstance(spec, Mapping) and str(spec.get("family", "")).lower() == "composed":
        if "transform" not in spec or "base" not in spec:
            raise ParseError("composed weighting needs 'transform' and 'base'")
        return concavify(
            parse_weighting(spec["base"]), parse_transform(spec["transform"])
        )
    name, params = _spec_parts(spec, "weighting")
    return _build(_WEIGHTINGS, "weighting", name, params)
