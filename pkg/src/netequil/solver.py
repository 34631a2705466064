"""Block-iterative primal-dual splitting solver for network equilibrium.

The iterate is the triple (x, x*, v*): per-arc flows, per-arc duals, and
per-node potentials, each stored as an array with one row per entity and
one column per commodity.  One iteration

  1. activates a subset of arc blocks and node blocks chosen by the
     scheduler (iteration 0 always activates everything),
  2. evaluates the capacity, constraint-cone, and supply resolvents of
     the active blocks, caching their primal/dual outputs; inactive
     blocks keep the outputs from their last activation,
  3. assembles the step directions t* (arcs), u (arc duals), t (nodes)
     from the cached outputs and the current divergence/tension values,
  4. forms the coordination scalars tau (squared direction norm) and pi
     (separation value) and takes the relaxed projection step
     theta = relaxation * max(pi, 0) / tau.

tau = 0 only happens when the cached evaluation already certifies the
current point, so it triggers an immediate residual check.  The residual
itself re-evaluates every block at the current point (full activation)
and augments tau with the primal agreement terms |q - x| and
|s - div x|; it vanishes exactly at solutions and is what the stopping
rule monitors every ``check_interval`` iterations.

Reductions for tau and pi always run in ascending arc-then-node order, so
runs are bitwise reproducible regardless of scheduling or threading.
"""

from __future__ import annotations

import enum
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import ConfigurationError, NumericalFailure

__all__ = [
    "Full",
    "RoundRobin",
    "RandomSweep",
    "SolverConfig",
    "SolverState",
    "IterationWorkspace",
    "TraceRecord",
    "Termination",
    "initial_state",
    "new_workspace",
    "make_scheduler",
    "select_blocks",
    "step",
    "residual",
    "run",
]


# --------------------------------------------------------------------------
# schedulers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Full:
    """Activate every arc and node block at every iteration."""


@dataclass(frozen=True)
class RoundRobin:
    """Cycle through fixed partitions of the arc and node index sets.

    Arc j belongs to arc group j % arc_groups; iteration n >= 1 activates
    group n % arc_groups (iteration 0 activates everything).  Group counts
    must not exceed the sweep bound T + 1, otherwise some window of T + 1
    iterations misses a group.
    """

    arc_groups: int
    node_groups: Optional[int] = None

    def __post_init__(self):
        for count in (self.arc_groups, self.node_groups):
            if count is not None and (not isinstance(count, int) or count < 1):
                raise ConfigurationError(
                    "round-robin group counts must be positive integers"
                )


@dataclass(frozen=True)
class RandomSweep:
    """Activate each block independently with fixed probability.

    Any block that has not been active during the last T iterations is
    force-included, which makes the sweep condition hold deterministically
    for every realization.  If a draw selects nothing, the least recently
    activated block is activated.
    """

    seed: int = 0
    activation_prob: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.activation_prob <= 1.0:
            raise ConfigurationError(
                "random-sweep activation probability must lie in [0, 1]"
            )


class _FullScheduler:
    def __init__(self, network, T):
        self._arcs = np.ones(network.n_arcs, dtype=bool)
        self._nodes = np.ones(network.n_nodes, dtype=bool)

    def select(self, n):
        return self._arcs.copy(), self._nodes.copy()


class _RoundRobinScheduler:
    def __init__(self, network, T, spec):
        arc_groups = spec.arc_groups
        node_groups = spec.node_groups if spec.node_groups is not None else spec.arc_groups
        for label, count, size in (
            ("arc", arc_groups, network.n_arcs),
            ("node", node_groups, network.n_nodes),
        ):
            if not isinstance(count, int) or count < 1:
                raise ConfigurationError(f"round-robin {label} group count must be a positive integer")
            if count > size:
                raise ConfigurationError(
                    f"round-robin {label} group count {count} exceeds the {size} available blocks"
                )
            if count > T + 1:
                raise ConfigurationError(
                    f"round-robin {label} group count {count} cannot satisfy the sweep bound T={T}: "
                    f"some window of {T + 1} iterations would miss a group"
                )
        self._arc_group = np.arange(network.n_arcs) % arc_groups
        self._node_group = np.arange(network.n_nodes) % node_groups
        self._arc_groups = arc_groups
        self._node_groups = node_groups

    def select(self, n):
        if n == 0:
            return (
                np.ones(self._arc_group.size, dtype=bool),
                np.ones(self._node_group.size, dtype=bool),
            )
        return (
            self._arc_group == n % self._arc_groups,
            self._node_group == n % self._node_groups,
        )


class _RandomSweepScheduler:
    def __init__(self, network, T, spec):
        self._rng = np.random.default_rng(spec.seed)
        self._prob = float(spec.activation_prob)
        self._T = T
        self._last_arc = np.zeros(network.n_arcs, dtype=np.int64)
        self._last_node = np.zeros(network.n_nodes, dtype=np.int64)
        self._expected_n = 0

    def _pick(self, n, last):
        active = self._rng.random(last.size) < self._prob
        active |= n - last >= self._T + 1
        if not active.any():
            active[np.argmin(last)] = True
        last[active] = n
        return active

    def select(self, n):
        if n != self._expected_n:
            raise ConfigurationError(
                f"random-sweep scheduler must be queried sequentially (expected n={self._expected_n})"
            )
        self._expected_n += 1
        if n == 0:
            return (
                np.ones(self._last_arc.size, dtype=bool),
                np.ones(self._last_node.size, dtype=bool),
            )
        return self._pick(n, self._last_arc), self._pick(n, self._last_node)


def make_scheduler(spec, network, T):
    """Instantiate the scheduler for one run, validating it against T."""
    if T < 0 or not isinstance(T, (int, np.integer)):
        raise ConfigurationError("sweep bound T must be a nonnegative integer")
    if isinstance(spec, Full):
        return _FullScheduler(network, T)
    if isinstance(spec, RoundRobin):
        return _RoundRobinScheduler(network, T, spec)
    if isinstance(spec, RandomSweep):
        return _RandomSweepScheduler(network, T, spec)
    raise ConfigurationError(f"unknown scheduler spec {spec!r}")


def select_blocks(scheduler, n):
    """Active (arc_mask, node_mask) for iteration n.

    Schedulers are sequential objects: call with n = 0, 1, 2, ... in order.
    Iteration 0 always activates every block.
    """
    return scheduler.select(n)


# --------------------------------------------------------------------------
# configuration, state, workspace
# --------------------------------------------------------------------------


@dataclass
class SolverConfig:
    """Step parameters, relaxation schedule, scheduling, and stopping rule.

    gamma/mu are per-arc and sigma per-node; scalars broadcast.  The
    relaxation is either a constant in ]0, 2[ or a triple
    (fn, inf, sup) with 0 < inf <= sup < 2 bounding the values of fn(n).
    """

    gamma: Union[float, np.ndarray] = 1.0
    mu: Union[float, np.ndarray] = 1.0
    sigma: Union[float, np.ndarray] = 1.0
    relaxation: Union[float, tuple] = 1.8
    T: int = 0
    scheduler: object = field(default_factory=Full)
    tol: float = 1e-6
    max_iter: int = 10**6
    check_interval: int = 10
    threads: int = 1

    def __post_init__(self):
        if isinstance(self.relaxation, tuple):
            fn, lo, hi = self.relaxation
            if not callable(fn) or not 0.0 < lo <= hi < 2.0:
                raise ConfigurationError(
                    "relaxation schedule must be (fn, inf, sup) with 0 < inf <= sup < 2"
                )
        elif not 0.0 < float(self.relaxation) < 2.0:
            raise ConfigurationError("relaxation must lie strictly between 0 and 2")
        if not isinstance(self.T, (int, np.integer)) or self.T < 0:
            raise ConfigurationError("sweep bound T must be a nonnegative integer")
        if not self.tol > 0:
            raise ConfigurationError("tol must be positive")
        if self.max_iter < 0:
            raise ConfigurationError("max_iter must be nonnegative")
        if self.check_interval < 1:
            raise ConfigurationError("check_interval must be at least 1")
        if self.threads < 1:
            raise ConfigurationError("threads must be at least 1")

    def relaxation_at(self, n):
        if isinstance(self.relaxation, tuple):
            fn, lo, hi = self.relaxation
            lam = float(fn(n))
            if not lo <= lam <= hi:
                raise ConfigurationError(
                    f"relaxation schedule produced {lam} outside its stated bounds [{lo}, {hi}]"
                )
            return lam
        return float(self.relaxation)


def _positive_per_entity(value, size, name):
    arr = np.broadcast_to(np.asarray(value, dtype=float), (size,)).copy()
    if not np.all(np.isfinite(arr)) or not np.all(arr > 0):
        raise ConfigurationError(f"{name} must be strictly positive")
    return arr


@dataclass
class SolverState:
    """Current iterate (x, x*, v*) plus the iteration counter."""

    x: np.ndarray
    xstar: np.ndarray
    v: np.ndarray
    n: int = 0

    def copy(self):
        return SolverState(self.x.copy(), self.xstar.copy(), self.v.copy(), self.n)


def initial_state(network, x=None, xstar=None, v=None):
    """All-zero starting point unless components are given."""
    return SolverState(
        network.check_flow(x) if x is not None else network.zero_flow(),
        network.check_flow(xstar) if xstar is not None else network.zero_arc_dual(),
        network.check_potential(v) if v is not None else network.zero_potential(),
    )


@dataclass
class IterationWorkspace:
    """Cached block outputs and the latest coordination scalars.

    Rows of inactive blocks keep the values from their last activation;
    iteration 0 activates everything, so nothing is read uninitialized.
    """

    q: np.ndarray
    qstar: np.ndarray
    r: np.ndarray
    rstar: np.ndarray
    s: np.ndarray
    sstar: np.ndarray
    t_node: np.ndarray
    tstar: np.ndarray
    u: np.ndarray
    tau: float = 0.0
    pi: float = 0.0
    theta: float = 0.0


def new_workspace(network):
    a = network.zero_flow
    n = network.zero_potential
    return IterationWorkspace(a(), a(), a(), a(), n(), n(), n(), a(), a())


@dataclass
class TraceRecord:
    """Per-iteration diagnostics; residual is None when not evaluated."""

    n: int
    tau: float
    pi: float
    theta: float
    relaxation: float
    active_arcs: int
    active_nodes: int
    residual: Optional[float] = None
    millis: float = 0.0


class Termination(enum.Enum):
    CONVERGED = "converged"
    ITER_LIMIT = "iteration_limit"
    NUMERICAL_FAILURE = "numerical_failure"


# --------------------------------------------------------------------------
# one iteration
# --------------------------------------------------------------------------


def _lift_rows(ops, gammas, arc_idx, inputs, out, pool=None):
    """Capacity resolvents for the listed arcs; writes rows of `out`."""

    def eval_range(lo, hi):
        for k in range(lo, hi):
            j = arc_idx[k]
            out[j] = ops.arc_operators[j].q.resolvent(gammas[j], inputs[k])

    if pool is None or len(arc_idx) < 2:
        eval_range(0, len(arc_idx))
        return
    workers = pool._max_workers
    bounds = np.linspace(0, len(arc_idx), workers + 1, dtype=int)
    futures = [
        pool.submit(eval_range, int(lo), int(hi))
        for lo, hi in zip(bounds[:-1], bounds[1:])
        if hi > lo
    ]
    for fut in futures:
        fut.result()


def _evaluate_blocks(net, ops, gammas, mus, sigmas, state, ws, arc_mask, node_mask, pool=None):
    """One sweep of the block evaluations; fills ws and returns (tau, pi, div_x).

    Runs with numpy float warnings silenced: non-finite values are caught
    explicitly by the caller and reported as NumericalFailure.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return _evaluate_blocks_inner(
            net, ops, gammas, mus, sigmas, state, ws, arc_mask, node_mask, pool
        )


def _evaluate_blocks_inner(net, ops, gammas, mus, sigmas, state, ws, arc_mask, node_mask, pool):
    x, xstar, v = state.x, state.xstar, state.v
    tension_v = net.tension(v)

    act = np.flatnonzero(arc_mask)
    if act.size:
        lstar = xstar[act] - tension_v[act]
        gam = gammas[act, None]
        _lift_rows(ops, gammas, act, x[act] - gam * lstar, ws.q, pool)
        ws.qstar[act] = (x[act] - ws.q[act]) / gam - lstar
        mu = mus[act, None]
        ws.r[act] = np.minimum(np.maximum(x[act] + mu * xstar[act], ops.box_lo[act]), ops.box_hi[act])
        ws.rstar[act] = xstar[act] + (x[act] - ws.r[act]) / mu

    div_x = net.divergence(x)
    nact = np.flatnonzero(node_mask)
    if nact.size:
        ws.s[nact] = ops.supplies[nact]
        ws.sstar[nact] = v[nact] + (div_x[nact] - ws.s[nact]) / sigmas[nact, None]

    # t is refreshed for every node, t*/u for every arc, even when inactive
    ws.t_node[:] = ws.s - net.divergence(ws.q)
    ws.tstar[:] = ws.qstar + ws.rstar - net.tension(ws.sstar)
    ws.u[:] = ws.r - ws.q

    # fixed reduction order: arc terms first, then node terms
    tau = float(np.sum(ws.tstar * ws.tstar) + np.sum(ws.u * ws.u) + np.sum(ws.t_node * ws.t_node))
    pi = float(
        np.sum(x * ws.tstar)
        - np.sum(ws.q * ws.qstar)
        + np.sum(ws.u * xstar)
        - np.sum(ws.r * ws.rstar)
        + np.sum(ws.t_node * v)
        - np.sum(ws.s * ws.sstar)
    )
    return tau, pi, div_x


def step(net, ops, cfg, state, ws, active_arcs=None, active_nodes=None, pool=None):
    """Execute one iteration in place; returns the TraceRecord.

    `active_arcs`/`active_nodes` are boolean masks; omitting them
    activates everything.  The workspace caches must be valid for the
    inactive blocks (iteration 0 must activate all blocks).
    """
    t0 = time.perf_counter()
    gammas = _positive_per_entity(cfg.gamma, net.n_arcs, "gamma")
    mus = _positive_per_entity(cfg.mu, net.n_arcs, "mu")
    sigmas = _positive_per_entity(cfg.sigma, net.n_nodes, "sigma")
    if active_arcs is None:
        active_arcs = np.ones(net.n_arcs, dtype=bool)
    if active_nodes is None:
        active_nodes = np.ones(net.n_nodes, dtype=bool)
    if not active_arcs.any() or not active_nodes.any():
        raise ConfigurationError("activation sets must be nonempty")

    tau, pi, _ = _evaluate_blocks(
        net, ops, gammas, mus, sigmas, state, ws, active_arcs, active_nodes, pool
    )
    if not np.isfinite(tau) or not np.isfinite(pi):
        raise NumericalFailure("non-finite coordination scalars", iteration=state.n)

    lam = cfg.relaxation_at(state.n)
    theta = lam * max(pi, 0.0) / tau if tau > 0.0 else 0.0
    if theta != 0.0:
        state.x -= theta * ws.tstar
        state.xstar -= theta * ws.u
        state.v -= theta * ws.t_node
        if not (
            np.isfinite(state.x).all()
            and np.isfinite(state.xstar).all()
            and np.isfinite(state.v).all()
        ):
            raise NumericalFailure("non-finite iterate after update", iteration=state.n)

    ws.tau, ws.pi, ws.theta = tau, pi, theta
    record = TraceRecord(
        n=state.n,
        tau=tau,
        pi=pi,
        theta=theta,
        relaxation=lam,
        active_arcs=int(np.count_nonzero(active_arcs)),
        active_nodes=int(np.count_nonzero(active_nodes)),
        millis=(time.perf_counter() - t0) * 1e3,
    )
    state.n += 1
    return record


def residual(net, ops, cfg, state, pool=None):
    """Optimality residual at the current point, from a full re-evaluation.

    The square root of tau (with every block active) augmented with the
    primal agreement terms |q - x|^2 and |s - div x|^2; zero exactly at
    solutions of the underlying inclusion for the given step parameters.
    """
    gammas = _positive_per_entity(cfg.gamma, net.n_arcs, "gamma")
    mus = _positive_per_entity(cfg.mu, net.n_arcs, "mu")
    sigmas = _positive_per_entity(cfg.sigma, net.n_nodes, "sigma")
    ws = new_workspace(net)
    tau, _, div_x = _evaluate_blocks(
        net,
        ops,
        gammas,
        mus,
        sigmas,
        state,
        ws,
        np.ones(net.n_arcs, dtype=bool),
        np.ones(net.n_nodes, dtype=bool),
        pool,
    )
    gap = float(np.sum((ws.q - state.x) ** 2) + np.sum((ws.s - div_x) ** 2))
    return float(np.sqrt(tau + gap))


# --------------------------------------------------------------------------
# the driver
# --------------------------------------------------------------------------


def run(net, ops, cfg=None, state=None, trace_callback: Optional[Callable] = None):
    """Iterate until the residual drops below tol or max_iter is reached.

    Returns (state, trace, termination).  The flow/potential pair in the
    final state is the approximate equilibrium; the arc duals are the
    auxiliary constraint multipliers.  The residual is evaluated every
    ``check_interval`` iterations and immediately whenever tau = 0.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    state = state if state is not None else initial_state(net)
    scheduler = make_scheduler(cfg.scheduler, net, cfg.T)
    ws = new_workspace(net)
    trace = []
    reason = Termination.ITER_LIMIT
    pool = ThreadPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else None
    try:
        for k in range(cfg.max_iter):
            arc_mask, node_mask = scheduler.select(state.n)
            try:
                record = step(net, ops, cfg, state, ws, arc_mask, node_mask, pool)
            except NumericalFailure:
                reason = Termination.NUMERICAL_FAILURE
                break
            if ws.tau == 0.0 or (k + 1) % cfg.check_interval == 0:
                record.residual = residual(net, ops, cfg, state, pool)
            trace.append(record)
            if trace_callback is not None:
                trace_callback(record)
            if record.residual is not None and record.residual <= cfg.tol:
                reason = Termination.CONVERGED
                break
    finally:
        if pool is not None:
            pool.shutdown(wait=True)
    return state, trace, reason
