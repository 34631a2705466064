"""Resolvent toolbox for capacity operators, constraint sets, and supplies.

Every monotone relation the solver touches appears here exclusively
through its resolvent J_{gamma*A}: the map sending x to the unique p with
x in p + gamma*A(p).  Scalar capacity operators act on the total flux of
an arc and are lifted to R^C (one coordinate per commodity) by a uniform
shift; box constraint sets resolve to projections, and fixed node
supplies resolve to constants.

All specs are immutable and validate their parameters at construction;
resolvent evaluation itself is total and never raises on any real input.

Scalar capacity families
------------------------
``BPR``          polynomial congestion cost theta*(1 + alpha*(s/rho)**p)
                 for s >= 0 and theta for s < 0; the resolvent solves
                 (alpha*gamma*theta/rho**p)*s**p + s + gamma*theta = xi
                 on the nonnegative axis when xi >= gamma*theta, and is
                 xi - gamma*theta otherwise.
``Logarithmic``  theta + log(omega/(omega - s)) on s < omega; resolvent
                 omega - gamma*W((omega/gamma)*exp(theta + (omega-xi)/gamma)).
``TRC``          delta + alpha*(s-omega) + sqrt(alpha^2*(s-omega)^2 + beta);
                 closed-form resolvent.
``PowerExp``     theta*alpha**(p*s) with alpha > 1; resolvent
                 xi - W(gamma*theta*alpha**(p*xi)*p*log(alpha))/(p*log(alpha)).
``IntervalProx`` subdifferential of phi + indicator of a closed interval
                 [lo, hi]; resolvent is the interval projection composed
                 after the prox of phi (supported phi: affine, quadratic,
                 |.|**q for q in {1, 3/2, 2}, or a user-supplied prox).

Each family also exposes ``value``/``subdiff`` (forward evaluation of the
underlying relation) for diagnostics; the solver itself never calls them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError
from .lambertw import lambert_w_exp

__all__ = [
    "BPR",
    "Logarithmic",
    "TRC",
    "PowerExp",
    "AffinePhi",
    "QuadraticPhi",
    "PowerPhi",
    "CustomPhi",
    "IntervalProx",
    "SeparableLift",
    "Box",
    "ArcOperator",
    "FixedSupply",
    "OperatorSet",
    "scalar_resolvent",
    "lift_resolvent",
    "project_box",
]


def _require(cond, what):
    if not cond:
        raise ConfigurationError(what)


# --------------------------------------------------------------------------
# scalar capacity operators
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BPR:
    """Bureau of Public Roads congestion cost."""

    alpha: float
    rho: float
    theta: float
    p: float

    def __post_init__(self):
        for name in ("alpha", "rho", "theta", "p"):
            val = getattr(self, name)
            _require(math.isfinite(val) and val > 0, f"BPR requires {name} > 0")

    def value(self, s):
        if s < 0:
            return self.theta
        return self.theta * (1.0 + self.alpha * (s / self.rho) ** self.p)

    def subdiff(self, s):
        v = self.value(s)
        return (v, v)

    def resolvent(self, gamma, xi):
        gt = gamma * self.theta
        if xi < gt:
            return xi - gt
        k = self.alpha * gt / self.rho**self.p
        return _bpr_root(k, self.p, xi - gt)


def _bpr_root(k, p, c):
    """Unique root s >= 0 of k*s**p + s - c = 0, for k > 0, p > 0, c >= 0.

    f(0) = -c <= 0 and f(c) = k*c**p >= 0 bracket the root; safeguarded
    Newton falls back to bisection whenever a step leaves the bracket.
    Terminates on the equation residual (not the bracket width) so that
    steep cases with p < 1 still satisfy the resolvent identity.
    """
    if not math.isfinite(c):
        return math.nan  # surfaces as a numerical failure in the solver
    if c == 0.0:
        return 0.0
    ftol = 1e-13 * max(1.0, c)
    lo, hi = 0.0, c
    # linearizing k*s**p around s = c gives a starting point inside (0, c]
    s = c / (1.0 + k * c ** (p - 1.0))
    if not 0.0 < s <= c:
        s = 0.5 * c
    f = k * s**p + s - c
    for _ in range(200):
        if abs(f) <= ftol:
            return s
        if f > 0.0:
            hi = s
        else:
            lo = s
        d = k * p * s ** (p - 1.0) + 1.0
        s_new = s - f / d if math.isfinite(d) and d > 0.0 else s
        if not lo < s_new < hi or s_new == s:
            s_new = 0.5 * (lo + hi)
        if s_new == s or hi - lo <= 2.0 * math.ulp(hi):
            break
        s = s_new
        f = k * s**p + s - c
    assert abs(f) <= 1e-9 * max(1.0, c), "BPR root refinement stalled"
    return s


@dataclass(frozen=True)
class Logarithmic:
    """Logarithmic capacity cost theta + log(omega/(omega - s)) on s < omega."""

    omega: float
    theta: float = 0.0

    def __post_init__(self):
        _require(math.isfinite(self.omega) and self.omega > 0, "Logarithmic requires omega > 0")
        _require(math.isfinite(self.theta) and self.theta >= 0, "Logarithmic requires theta >= 0")

    def value(self, s):
        if s >= self.omega:
            return None
        return self.theta + math.log(self.omega / (self.omega - s))

    def subdiff(self, s):
        v = self.value(s)
        return None if v is None else (v, v)

    def resolvent(self, gamma, xi):
        z = math.log(self.omega / gamma) + self.theta + (self.omega - xi) / gamma
        s = self.omega - gamma * lambert_w_exp(z)
        if s >= self.omega:
            # W underflowed; the exact value sits strictly below omega
            s = math.nextafter(self.omega, -math.inf)
        return s


@dataclass(frozen=True)
class TRC:
    """Traffic Research Corporation capacity cost."""

    alpha: float
    beta: float
    delta: float
    omega: float

    def __post_init__(self):
        for name in ("alpha", "beta", "delta", "omega"):
            val = getattr(self, name)
            _require(math.isfinite(val) and val > 0, f"TRC requires {name} > 0")

    def value(self, s):
        d = s - self.omega
        return self.delta + self.alpha * d + math.sqrt(self.alpha**2 * d * d + self.beta)

    def subdiff(self, s):
        v = self.value(s)
        return (v, v)

    def resolvent(self, gamma, xi):
        ga = gamma * self.alpha
        m = xi - gamma * self.delta
        root = math.sqrt(ga * ga * (m - self.omega) ** 2 + (2.0 * ga + 1.0) * gamma * gamma * self.beta)
        return (-root + ga * (m + self.omega) + m) / (2.0 * ga + 1.0)


@dataclass(frozen=True)
class PowerExp:
    """Exponential capacity cost theta*alpha**(p*s), alpha > 1."""

    alpha: float
    theta: float
    p: float

    def __post_init__(self):
        _require(math.isfinite(self.alpha) and self.alpha > 1, "PowerExp requires alpha > 1")
        _require(math.isfinite(self.theta) and self.theta > 0, "PowerExp requires theta > 0")
        _require(math.isfinite(self.p) and self.p > 0, "PowerExp requires p > 0")

    def value(self, s):
        return self.theta * math.exp(self.p * s * math.log(self.alpha))

    def subdiff(self, s):
        v = self.value(s)
        return (v, v)

    def resolvent(self, gamma, xi):
        pl = self.p * math.log(self.alpha)
        z = math.log(gamma * self.theta * pl) + pl * xi
        return xi - lambert_w_exp(z) / pl


# --------------------------------------------------------------------------
# interval-constrained prox capacities
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AffinePhi:
    """phi(s) = a*s + b."""

    a: float
    b: float = 0.0

    def __post_init__(self):
        _require(math.isfinite(self.a) and math.isfinite(self.b), "AffinePhi requires finite coefficients")

    def prox(self, gamma, xi):
        return xi - gamma * self.a

    def subdiff(self, s):
        return (self.a, self.a)


@dataclass(frozen=True)
class QuadraticPhi:
    """phi(s) = 0.5*a*s**2 with a >= 0."""

    a: float

    def __post_init__(self):
        _require(math.isfinite(self.a) and self.a >= 0, "QuadraticPhi requires a >= 0")

    def prox(self, gamma, xi):
        return xi / (1.0 + gamma * self.a)

    def subdiff(self, s):
        g = self.a * s
        return (g, g)


@dataclass(frozen=True)
class PowerPhi:
    """phi(s) = |s|**q for q in {1, 3/2, 2} (closed-form prox catalog)."""

    q: float

    def __post_init__(self):
        _require(self.q in (1.0, 1.5, 2.0), "PowerPhi supports q in {1, 1.5, 2} only")

    def prox(self, gamma, xi):
        if self.q == 1.0:
            return math.copysign(max(abs(xi) - gamma, 0.0), xi)
        if self.q == 2.0:
            return xi / (1.0 + 2.0 * gamma)
        # q = 3/2: substitute u = sqrt(|s|); u solves u**2 + 1.5*gamma*u = |xi|
        u = 0.5 * (-1.5 * gamma + math.sqrt(2.25 * gamma * gamma + 4.0 * abs(xi)))
        return math.copysign(u * u, xi)

    def subdiff(self, s):
        if self.q == 1.0:
            if s == 0.0:
                return (-1.0, 1.0)
            g = math.copysign(1.0, s)
            return (g, g)
        g = self.q * abs(s) ** (self.q - 1.0) * math.copysign(1.0, s) if s != 0.0 else 0.0
        return (g, g)


@dataclass(frozen=True)
class CustomPhi:
    """Escape hatch: user-supplied scalar prox (and optional subdifferential)."""

    prox_fn: Callable[[float, float], float]
    subdiff_fn: Optional[Callable[[float], tuple]] = None

    def prox(self, gamma, xi):
        return self.prox_fn(gamma, xi)

    def subdiff(self, s):
        return None if self.subdiff_fn is None else self.subdiff_fn(s)


@dataclass(frozen=True)
class IntervalProx:
    """Capacity operator given by the subdifferential of phi + interval indicator.

    The resolvent is the interval projection applied after prox of phi:
    clamp(prox_{gamma*phi}(xi), lo, hi).
    """

    phi: object
    lo: float = -math.inf
    hi: float = math.inf

    def __post_init__(self):
        _require(not math.isnan(self.lo) and not math.isnan(self.hi), "IntervalProx bounds must not be nan")
        _require(self.lo <= self.hi, "IntervalProx requires lo <= hi")
        _require(
            hasattr(self.phi, "prox"),
            "IntervalProx phi must be AffinePhi, QuadraticPhi, PowerPhi, or CustomPhi",
        )

    def value(self, s):
        g = self.subdiff(s)
        if g is None or g[0] != g[1]:
            return None
        return g[0]

    def subdiff(self, s):
        if s < self.lo or s > self.hi:
            return None
        base = self.phi.subdiff(s)
        if base is None:
            return None
        lo_g, hi_g = base
        if s <= self.lo:
            lo_g = -math.inf
        if s >= self.hi:
            hi_g = math.inf
        return (lo_g, hi_g)

    def resolvent(self, gamma, xi):
        return min(max(self.phi.prox(gamma, xi), self.lo), self.hi)


def scalar_resolvent(spec, gamma, xi):
    """Evaluate the resolvent J_{gamma*c} of a scalar capacity spec at xi."""
    if not gamma > 0:
        raise ConfigurationError(f"resolvent parameter must be positive, got {gamma!r}")
    return spec.resolvent(gamma, float(xi))


# --------------------------------------------------------------------------
# lifts, constraint sets, supplies
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SeparableLift:
    """Vector operator on R^C built from a scalar capacity on the total flux.

    Its resolvent shifts every coordinate by the same amount
    eta = (J_{C*gamma*c}(sum x) - sum x) / C, where C is the number of
    commodities; the scalar resolvent is evaluated with parameter C*gamma.
    """

    scalar: object

    def __post_init__(self):
        _require(hasattr(self.scalar, "resolvent"), "SeparableLift needs a scalar capacity spec")

    def resolvent(self, gamma, x):
        x = np.asarray(x, dtype=float)
        n = x.shape[-1]
        total = float(np.sum(x))
        eta = (scalar_resolvent(self.scalar, n * gamma, total) - total) / n
        return x + eta


def lift_resolvent(lift, gamma, x):
    """Resolvent of a SeparableLift at the vector x (convenience wrapper)."""
    return lift.resolvent(gamma, x)


@dataclass(frozen=True)
class Box:
    """Product of closed intervals, one per commodity."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lo))
        hi = tuple(float(v) for v in np.atleast_1d(self.hi))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        _require(len(lo) == len(hi), "Box bounds must have equal length")
        _require(all(a <= b for a, b in zip(lo, hi)), "Box requires lo <= hi per commodity")

    @staticmethod
    def orthant(n_commodities):
        """The nonnegative orthant of R^C."""
        return Box((0.0,) * n_commodities, (math.inf,) * n_commodities)

    @staticmethod
    def free(n_commodities):
        """All of R^C (no constraint)."""
        return Box((-math.inf,) * n_commodities, (math.inf,) * n_commodities)

    def project(self, x):
        return np.minimum(np.maximum(np.asarray(x, dtype=float), self.lo), self.hi)


def project_box(box, x):
    """Componentwise clamp of x onto the box (the normal-cone resolvent)."""
    return box.project(x)


@dataclass(frozen=True)
class ArcOperator:
    """Flow-tension relation of one arc: capacity lift plus constraint cone."""

    q: SeparableLift
    r: Box


@dataclass(frozen=True)
class FixedSupply:
    """Node relation pinning the divergence to a constant supply vector."""

    supply: tuple

    def __post_init__(self):
        supply = tuple(float(v) for v in np.atleast_1d(self.supply))
        object.__setattr__(self, "supply", supply)

    def resolvent(self, sigma, y):
        # independent of both the step parameter and the input
        return np.asarray(self.supply, dtype=float)


class OperatorSet:
    """Per-arc and per-node operator specs bound to one network.

    Stacks the box bounds into (n_arcs, C) arrays and the supplies into an
    (n_nodes, C) array so the solver can evaluate whole blocks at once.
    """

    def __init__(self, network, arc_operators, node_operators):
        arc_operators = tuple(arc_operators)
        node_operators = tuple(node_operators)
        if len(arc_operators) != network.n_arcs:
            raise ConfigurationError(
                f"{len(arc_operators)} arc operators for {network.n_arcs} arcs"
            )
        if len(node_operators) != network.n_nodes:
            raise ConfigurationError(
                f"{len(node_operators)} node operators for {network.n_nodes} nodes"
            )
        n_comm = network.n_commodities
        for j, op in enumerate(arc_operators):
            if len(op.r.lo) != n_comm:
                raise ConfigurationError(
                    f"arc {j}: box has {len(op.r.lo)} intervals for {n_comm} commodities"
                )
        for i, op in enumerate(node_operators):
            if len(op.supply) != n_comm:
                raise ConfigurationError(
                    f"node {network.nodes[i]!r}: supply has {len(op.supply)} entries "
                    f"for {n_comm} commodities"
                )
        self.network = network
        self.arc_operators = arc_operators
        self.node_operators = node_operators
        self.box_lo = np.array([op.r.lo for op in arc_operators], dtype=float)
        self.box_hi = np.array([op.r.hi for op in arc_operators], dtype=float)
        self.supplies = np.array([op.supply for op in node_operators], dtype=float)
