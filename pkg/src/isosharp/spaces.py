"""Model metric measure spaces with computable radial geometry.

Five variants, each with nonnegative Ricci curvature (in the generalized
CD(0,N) sense) and Euclidean volume growth:

    Euclidean(n)            flat R^n, the reference space
    WarpedProduct(n, f)     g = dr^2 + F(r)^2 dtheta^2 with F = int_0^r f,
                            f nonincreasing from f(0)=1 to a limit a > 0
    EuclideanCone(n, m_M)   cone over an n-manifold of measure m_M
    MonomialHalfSpace(n,aw) half-space {x_n > 0} weighted by x_n^aw
    AleQuotient(n, k)       R^n/G at infinity, Card(G) = k; no radial data

The first four expose exact or quadrature ball volumes vol(B_r), analytic
Minkowski contents (sphere measures), and the asymptotic volume ratio
AVR = lim vol(B_r)/(omega_N r^N) with N the effective dimension.  The ALE
variant carries only its AVR = 1/k: computing its ball volumes would need
metric data this package does not model, so radial operations reject it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, UnsupportedOperationError
from .quadrature import integrate
from .specfun import omega

_SLACK = 1.0 + 1e-12


# ---------------------------------------------------------------------------
# warping profiles

class WarpingProfile:
    """Base for the warping function f of g = dr^2 + F(r)^2 dtheta^2."""

    def f(self, s):
        raise NotImplementedError

    def f_prime(self, s):
        raise NotImplementedError

    def F(self, s):
        raise NotImplementedError

    @property
    def asymptote(self) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class ExponentialTail(WarpingProfile):
    """f(s) = a + (1-a) e^{-beta s}: analytic profile with limit a."""

    a: float
    beta: float

    def __post_init__(self):
        if not (isinstance(self.a, (int, float)) and 0.0 < self.a <= 1.0):
            raise DomainError(f"profile limit a must lie in (0,1], got {self.a}")
        if not (isinstance(self.beta, (int, float)) and self.beta > 0.0):
            raise DomainError(f"profile rate beta must be > 0, got {self.beta}")

    def f(self, s):
        return self.a + (1.0 - self.a) * np.exp(-self.beta * np.asarray(s, float))

    def f_prime(self, s):
        return -self.beta * (1.0 - self.a) * np.exp(-self.beta * np.asarray(s, float))

    def F(self, s):
        s = np.asarray(s, dtype=float)
        # exact antiderivative; expm1 keeps small-s accuracy
        return self.a * s - (1.0 - self.a) * np.expm1(-self.beta * s) / self.beta

    @property
    def asymptote(self) -> float:
        return self.a


class SampledProfile(WarpingProfile):
    """Profile given by samples (s_i, f_i), monotone-cubic interpolated.

    Beyond the last node the profile continues as the constant f(s_end),
    which therefore serves as its asymptote.  Construction validates the
    profile invariants (f(0)=1, nonincreasing, 0 < f <= 1); pass
    strict=False to build a deliberately violating profile for negative
    controls, which the structural checks are expected to flag.
    """

    def __init__(self, s_grid, f_values, strict=True):
        s = np.asarray(s_grid, dtype=float)
        f = np.asarray(f_values, dtype=float)
        if s.ndim != 1 or s.shape != f.shape or s.size < 2:
            raise DomainError("profile needs matching 1-D grids of length >= 2")
        if s[0] != 0.0 or np.any(np.diff(s) <= 0.0):
            raise DomainError("profile grid must ascend from s=0")
        if strict:
            if abs(f[0] - 1.0) > 1e-12:
                raise DomainError(f"profile must start at f(0)=1, got {f[0]}")
            if np.any(f <= 0.0) or np.any(f > _SLACK):
                raise DomainError("profile values must lie in (0, 1]")
            if np.any(np.diff(f) > 1e-12):
                raise DomainError("profile must be nonincreasing")
        self.s_grid = s
        self.f_values = f
        self._interp = PchipInterpolator(s, f, extrapolate=False)
        self._deriv = self._interp.derivative()
        self._anti = self._interp.antiderivative()
        self._s_end = float(s[-1])
        self._f_end = float(f[-1])
        self._F_end = float(self._anti(self._s_end))

    def f(self, s):
        s = np.asarray(s, dtype=float)
        inside = np.minimum(s, self._s_end)
        return np.where(s <= self._s_end, self._interp(inside), self._f_end)

    def f_prime(self, s):
        s = np.asarray(s, dtype=float)
        inside = np.minimum(s, self._s_end)
        return np.where(s <= self._s_end, self._deriv(inside), 0.0)

    def F(self, s):
        s = np.asarray(s, dtype=float)
        inside = np.minimum(s, self._s_end)
        return np.where(s <= self._s_end, self._anti(inside),
                        self._F_end + self._f_end * (s - self._s_end))

    @property
    def asymptote(self) -> float:
        return self._f_end


# ---------------------------------------------------------------------------
# model spaces

class ModelSpace:
    radial_supported = True

    @property
    def effective_dimension(self) -> float:
        raise NotImplementedError

    def avr(self) -> float:
        raise NotImplementedError

    def _vol(self, r: float) -> float:
        raise NotImplementedError

    def _content(self, r):
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError


def _check_int(value, what, minimum):
    if not (isinstance(value, (int, np.integer)) and value >= minimum):
        raise DomainError(f"{what} must be an integer >= {minimum}, got {value!r}")


@dataclass(frozen=True)
class Euclidean(ModelSpace):
    """Flat space; real dimension n > 1 admitted (CD(0,N) statements)."""

    n: float

    def __post_init__(self):
        if not (isinstance(self.n, (int, float)) and math.isfinite(self.n)
                and self.n > 1.0):
            raise DomainError(f"Euclidean dimension must exceed 1, got {self.n!r}")

    @property
    def effective_dimension(self) -> float:
        return float(self.n)

    def avr(self) -> float:
        return 1.0

    def _vol(self, r):
        return omega(self.n) * r ** float(self.n)

    def _content(self, r):
        n = float(self.n)
        return n * omega(n) * np.asarray(r, dtype=float) ** (n - 1.0)

    def descriptor(self):
        return {"variant": "euclidean", "n": float(self.n)}


@dataclass(frozen=True)
class WarpedProduct(ModelSpace):
    """Rotationally invariant metric dr^2 + F(r)^2 dtheta^2 on R^n."""

    n: int
    profile: WarpingProfile

    def __post_init__(self):
        _check_int(self.n, "warped-product dimension", 2)

    @property
    def effective_dimension(self) -> float:
        return float(self.n)

    def avr(self) -> float:
        # vol(B_r)/(omega_n r^n) -> a^{n-1} by L'Hospital on F(r)/r -> a
        return float(self.profile.asymptote) ** (self.n - 1)

    def _vol(self, r):
        n = self.n
        prof = self.profile
        return n * omega(float(n)) * integrate(
            lambda s: prof.F(s) ** (n - 1), 0.0, r, rel_tol=1e-11, abs_tol=1e-14)

    def _content(self, r):
        n = float(self.n)
        return n * omega(n) * self.profile.F(r) ** (n - 1.0)

    def descriptor(self):
        if not isinstance(self.profile, ExponentialTail):
            raise UnsupportedOperationError(
                "only analytic (exponential-tail) profiles serialize to the "
                "flat descriptor record")
        return {"variant": "warped", "n": float(self.n),
                "a": self.profile.a, "beta": self.profile.beta}


@dataclass(frozen=True)
class EuclideanCone(ModelSpace):
    """Metric cone over an n-dimensional link of total measure m_M.

    Only (n, m_M) matter for ball volumes and contents; the link itself is
    never represented.  m_M <= (n+1) omega_{n+1} keeps AVR <= 1, which the
    Bishop inequality imposes on links with Ric >= n-1.
    """

    n: int
    m_M: float

    def __post_init__(self):
        _check_int(self.n, "cone link dimension", 1)
        top = (self.n + 1) * omega(float(self.n + 1))
        if not (isinstance(self.m_M, (int, float)) and 0.0 < self.m_M <= top * _SLACK):
            raise DomainError(
                f"link measure must lie in (0, {top:g}], got {self.m_M!r}")

    @property
    def effective_dimension(self) -> float:
        return float(self.n + 1)

    def avr(self) -> float:
        return min(self.m_M / ((self.n + 1) * omega(float(self.n + 1))), 1.0)

    def _vol(self, r):
        return self.m_M * r ** (self.n + 1) / (self.n + 1)

    def _content(self, r):
        return self.m_M * np.asarray(r, dtype=float) ** self.n

    def descriptor(self):
        return {"variant": "cone", "n": float(self.n), "m_M": float(self.m_M)}


@dataclass(frozen=True)
class MonomialHalfSpace(ModelSpace):
    """Half-space {x_n > 0} in R^n with weight w(x) = x_n^alpha_w.

    w^{1/alpha_w} = x_n is linear hence concave, so the space is CD(0, N)
    with effective dimension N = n + alpha_w.  The unit-ball weighted
    volume Lambda = int_{B(1), x_n>0} w is computed once by quadrature over
    slices.  Construction requires Lambda <= omega_N so that AVR <= 1; for
    very large alpha_w relative to n the monomial model leaves that regime
    and is rejected.
    """

    n: int
    alpha_w: float

    def __post_init__(self):
        _check_int(self.n, "half-space dimension", 1)
        if not (isinstance(self.alpha_w, (int, float))
                and math.isfinite(self.alpha_w) and self.alpha_w >= 0.0):
            raise DomainError(f"weight exponent must be >= 0, got {self.alpha_w!r}")
        if self.n + self.alpha_w <= 1.0:
            raise DomainError("effective dimension n + alpha_w must exceed 1")
        if self.unit_ball_weight > omega(self.effective_dimension) * _SLACK:
            raise DomainError(
                f"weighted unit-ball volume {self.unit_ball_weight:g} exceeds "
                f"omega_N = {omega(self.effective_dimension):g}; AVR would "
                "exceed 1 outside the model's admissible regime")

    @cached_property
    def unit_ball_weight(self) -> float:
        """Lambda = int over the unit half-ball of x_n^alpha_w, by quadrature."""
        a = float(self.alpha_w)
        if self.n == 1:
            return integrate(lambda t: t ** a, 0.0, 1.0)
        # slice at x_n = t: an (n-1)-ball of radius sqrt(1-t^2)
        w_slice = omega(float(self.n - 1))
        return integrate(
            lambda t: w_slice * t ** a * (1.0 - t * t) ** (0.5 * (self.n - 1)),
            0.0, 1.0, rel_tol=1e-12, abs_tol=1e-14)

    @property
    def effective_dimension(self) -> float:
        return float(self.n) + float(self.alpha_w)

    def avr(self) -> float:
        return min(self.unit_ball_weight / omega(self.effective_dimension), 1.0)

    def _vol(self, r):
        return self.unit_ball_weight * r ** self.effective_dimension

    def _content(self, r):
        N = self.effective_dimension
        return N * self.unit_ball_weight * np.asarray(r, dtype=float) ** (N - 1.0)

    def descriptor(self):
        return {"variant": "monomial", "n": float(self.n),
                "alpha_w": float(self.alpha_w)}


@dataclass(frozen=True)
class AleQuotient(ModelSpace):
    """ALE space, Euclidean at infinity modulo a free group of order k."""

    n: int
    k: int
    radial_supported = False

    def __post_init__(self):
        _check_int(self.n, "ALE dimension", 2)
        _check_int(self.k, "group order", 1)

    @property
    def effective_dimension(self) -> float:
        return float(self.n)

    def avr(self) -> float:
        return 1.0 / self.k

    def _vol(self, r):
        raise UnsupportedOperationError(
            "ALE quotients carry no radial ball-volume model")

    def _content(self, r):
        raise UnsupportedOperationError(
            "ALE quotients carry no radial perimeter model")

    def descriptor(self):
        return {"variant": "ale", "n": float(self.n), "k": float(self.k)}


# ---------------------------------------------------------------------------
# operations

def _require_radial(space, r=None):
    if not space.radial_supported:
        raise UnsupportedOperationError(
            f"operation needs radial geometry; {space.descriptor()['variant']} "
            "does not support it")
    if r is not None and not (isinstance(r, (int, float)) and math.isfinite(r)
                              and r > 0.0):
        raise DomainError(f"radius must be a positive real, got {r!r}")


def vol_ball(space: ModelSpace, r: float) -> float:
    """Measure of the metric ball of radius r about the pole."""
    _require_radial(space, r)
    return float(space._vol(float(r)))


def minkowski_content_ball(space: ModelSpace, r: float) -> float:
    """Outer Minkowski content (sphere measure) of the radius-r ball."""
    _require_radial(space, r)
    return float(space._content(float(r)))


def avr(space: ModelSpace) -> float:
    """Asymptotic volume ratio, exact per variant."""
    return float(space.avr())


@dataclass(frozen=True)
class AvrEstimate:
    estimate: float
    lower: float
    upper: float
    samples: tuple


def avr_numeric(space: ModelSpace, r_max: float, samples: int = 16) -> AvrEstimate:
    """Numerical AVR estimate with an enclosing bracket.

    estimate = vol(B_{r_max})/(omega_N r_max^N).  Bishop-Gromov makes the
    ratio nonincreasing, so the estimate is an upper bound for AVR; the
    lower bound comes from the profile tail (f >= its asymptote pointwise,
    giving vol >= AVR omega_N r^N), and is exact for the power-law spaces.
    """
    _require_radial(space, r_max)
    if samples < 2:
        raise DomainError("need at least 2 sample radii")
    N = space.effective_dimension
    radii = np.geomspace(r_max / 100.0, r_max, int(samples))
    ratios = tuple((float(r), vol_ball(space, float(r)) / (omega(N) * float(r) ** N))
                   for r in radii)
    estimate = ratios[-1][1]
    if isinstance(space, WarpedProduct):
        lower = float(space.profile.asymptote) ** (space.n - 1)
    else:
        lower = estimate
    return AvrEstimate(estimate=estimate, lower=min(lower, estimate),
                       upper=estimate, samples=ratios)


@dataclass(frozen=True)
class MonotoneReport:
    radii: tuple
    ratios: tuple
    passed: bool
    max_increase: float


def bishop_gromov_check(space: ModelSpace, r_grid) -> MonotoneReport:
    """vol(B_r)/r^N must be nonincreasing along the grid (1e-10 slack)."""
    r_grid = [float(r) for r in r_grid]
    if any(b <= a for a, b in zip(r_grid, r_grid[1:])):
        raise DomainError("r_grid must be strictly ascending")
    N = space.effective_dimension
    ratios = tuple(vol_ball(space, r) / r ** N for r in r_grid)
    increases = [b - a for a, b in zip(ratios, ratios[1:])]
    max_inc = max(increases) if increases else 0.0
    slack = 1e-10 * max(1.0, max(abs(x) for x in ratios))
    return MonotoneReport(radii=tuple(r_grid), ratios=ratios,
                          passed=max_inc <= slack, max_increase=max_inc)


@dataclass(frozen=True)
class CurvatureReport:
    grid: tuple
    passed: bool
    worst_fpp: float
    worst_slope_excess: float


def curvature_check(profile: WarpingProfile, grid) -> CurvatureReport:
    """Sufficient curvature-sign conditions F'' <= 0 and F' <= 1 on a grid."""
    g = np.asarray(list(grid), dtype=float)
    if g.size == 0 or np.any(np.diff(g) <= 0.0):
        raise DomainError("grid must be nonempty and strictly ascending")
    fpp = np.asarray(profile.f_prime(g), dtype=float)
    slope = np.asarray(profile.f(g), dtype=float)
    worst_fpp = float(np.max(fpp))
    worst_excess = float(np.max(slope - 1.0))
    return CurvatureReport(grid=tuple(map(float, g)),
                           passed=(worst_fpp <= 1e-12 and worst_excess <= 1e-12),
                           worst_fpp=worst_fpp,
                           worst_slope_excess=worst_excess)


@dataclass(frozen=True)
class DeficitResult:
    lhs: float
    rhs: float
    ratio: float


def isoperimetric_deficit(space: ModelSpace, r: float) -> DeficitResult:
    """Sharp isoperimetric inequality evaluated on the radius-r ball.

    lhs = Minkowski content, rhs = N omega_N^{1/N} AVR^{1/N} vol^{(N-1)/N};
    the theorem asserts lhs >= rhs, with equality exactly on cones.
    """
    _require_radial(space, r)
    N = space.effective_dimension
    lhs = minkowski_content_ball(space, r)
    vol = vol_ball(space, r)
    rhs = (N * omega(N) ** (1.0 / N) * avr(space) ** (1.0 / N)
           * vol ** ((N - 1.0) / N))
    return DeficitResult(lhs=lhs, rhs=rhs, ratio=lhs / rhs)


@dataclass(frozen=True)
class SweepRow:
    r: float
    vol: float
    mink_content: float
    ratio: float
    sharp_bound: float
    margin: float


@dataclass(frozen=True)
class SweepTable:
    rows: tuple
    sharp_bound: float
    tail_gap: float


def isoperimetric_sharpness_sweep(space: ModelSpace, r_list) -> SweepTable:
    """Tabulates m+(B_r)/m(B_r)^{(N-1)/N} against the sharp constant.

    The ratio column is >= the sharp constant N omega_N^{1/N} AVR^{1/N}
    everywhere and converges to it as r grows; tail_gap reports how far the
    last row still is.
    """
    _require_radial(space)
    N = space.effective_dimension
    bound = N * omega(N) ** (1.0 / N) * avr(space) ** (1.0 / N)
    rows = []
    for r in r_list:
        r = float(r)
        vol = vol_ball(space, r)
        content = minkowski_content_ball(space, r)
        ratio = content / vol ** ((N - 1.0) / N)
        rows.append(SweepRow(r=r, vol=vol, mink_content=content, ratio=ratio,
                             sharp_bound=bound, margin=ratio - bound))
    if not rows:
        raise DomainError("empty radius list")
    return SweepTable(rows=tuple(rows), sharp_bound=bound,
                      tail_gap=abs(rows[-1].ratio - bound))


@dataclass(frozen=True)
class WeightedAvr:
    lam: float
    avr: float


def weighted_avr_lambda(space: MonomialHalfSpace) -> WeightedAvr:
    """Lambda_alpha = int_{B(1), x_n>0} x_n^alpha_w and the derived AVR."""
    if not isinstance(space, MonomialHalfSpace):
        raise DomainError("weighted_avr_lambda applies to MonomialHalfSpace only")
    return WeightedAvr(lam=space.unit_ball_weight, avr=space.avr())


# ---------------------------------------------------------------------------
# descriptor round trip (CLI and golden fixtures)

_DESCRIPTOR_FIELDS = {"variant", "n", "a", "beta", "m_M", "alpha_w", "k"}


def space_from_descriptor(record: dict) -> ModelSpace:
    """Build a space from the flat key=value record used by the CLI."""
    unknown = set(record) - _DESCRIPTOR_FIELDS
    if unknown:
        raise DomainError(f"unknown descriptor keys: {sorted(unknown)}")
    variant = record.get("variant")
    try:
        if variant == "euclidean":
            return Euclidean(n=float(record["n"]))
        if variant == "warped":
            return WarpedProduct(
                n=int(record["n"]),
                profile=ExponentialTail(a=float(record["a"]),
                                        beta=float(record["beta"])))
        if variant == "cone":
            return EuclideanCone(n=int(record["n"]), m_M=float(record["m_M"]))
        if variant == "monomial":
            return MonomialHalfSpace(n=int(record["n"]),
                                     alpha_w=float(record["alpha_w"]))
        if variant == "ale":
            return AleQuotient(n=int(record["n"]), k=int(record["k"]))
    except KeyError as missing:
        raise DomainError(f"descriptor missing field {missing}") from None
    raise DomainError(f"unknown variant {variant!r}")
