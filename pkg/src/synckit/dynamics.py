"""Random admissible dynamics and numerical invariance checks.

Functions are built from one intrinsic term per cell type and one
coupling term per type pair, with the integer edge weight acting as a
multiplier:

    f_c(x) = a_i(x_c) + sum_d m_cd * h_ij(x_c, x_d),   i = type(c), j = type(d)

Evaluation first folds the incoming terms by (sender type, sender
state), dropping zero totals and summing in sorted order.  That makes
the value a function of the multiset of inputs, so neighbor permutation,
same-state merging and zero-edge deletion hold bit for bit, and a
quotient system or an induced reachability subsystem reproduces the
full trajectory exactly in discrete mode.

The intrinsic term is an affine map plus a sinusoid and the coupling is
a degree-one polynomial in the sender state plus sinusoids; the linear
gains are scaled so every sampled system is globally bounded, which
keeps long verification runs away from the overflow guard.  With the
exo flag the coupling is replaced by h(x, y) - h(x, x), which vanishes
exactly for same-state senders.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from .errors import NumericalBlowup, SynckitError, UnsupportedMonoid
from .network import Network
from .partition import Partition, refines
from .synchrony import BalancedCertificate, quotient_network
from .connectivity import cumulative_in_k, in_reachability

OVERFLOW_GUARD = 1e12


@dataclass(frozen=True)
class SelfParams:
    bias: float
    gain: float
    amp: float
    freq: float
    phase: float


@dataclass(frozen=True)
class CouplingParams:
    lin: float
    amp1: float
    freq1: float
    phase1: float
    amp2: float
    freq_x: float
    freq_y: float
    phase2: float


@dataclass(frozen=True)
class AdmissibleFunctionSpec:
    """Seeded coefficients for one admissible system over a type set."""

    seed: int
    exo: bool
    num_types: int
    self_params: tuple[SelfParams, ...]
    coupling_params: tuple[tuple[CouplingParams, ...], ...]


def sample_admissible(net: Network, seed: int, exo: bool = False) -> AdmissibleFunctionSpec:
    """Draw a random admissible system for the network's type set.

    The linear coupling gain is scaled by the largest absolute in-row
    sum so the sampled map is a contraction plus bounded terms; the same
    spec then stays bounded on every quotient and subnetwork, whose
    in-rows can only shrink.
    """
    if net.monoids.kind != "int-add":
        raise UnsupportedMonoid("sampled dynamics require int-add weights")
    rng = random.Random(f"admissible:{seed}:{int(exo)}")
    weight_scale = max(
        (sum(abs(w) for _, w in net.in_edges[c]) for c in range(net.n_cells)),
        default=0,
    )
    lin_cap = 0.25 / max(1, weight_scale)
    if exo:
        lin_cap /= 2.0

    selfs = []
    for _ in range(net.num_types):
        selfs.append(
            SelfParams(
                bias=rng.uniform(-1.0, 1.0),
                gain=rng.uniform(-0.4, 0.4),
                amp=rng.uniform(0.2, 1.0),
                freq=rng.uniform(0.5, 2.5),
                phase=rng.uniform(0.0, 2 * math.pi),
            )
        )
    couplings = []
    for _ in range(net.num_types):
        row = []
        for _ in range(net.num_types):
            row.append(
                CouplingParams(
                    lin=rng.uniform(-1.0, 1.0) * lin_cap,
                    amp1=rng.uniform(0.2, 1.0),
                    freq1=rng.uniform(0.5, 2.5),
                    phase1=rng.uniform(0.0, 2 * math.pi),
                    amp2=rng.uniform(0.2, 1.0),
                    freq_x=rng.uniform(0.5, 2.5),
                    freq_y=rng.uniform(0.5, 2.5),
                    phase2=rng.uniform(0.0, 2 * math.pi),
                )
            )
        couplings.append(tuple(row))
    return AdmissibleFunctionSpec(seed, exo, net.num_types, tuple(selfs), tuple(couplings))


def _self_term(spec: AdmissibleFunctionSpec, cell_type: int, x: float) -> float:
    p = spec.self_params[cell_type - 1]
    return p.bias + p.gain * x + p.amp * math.sin(p.freq * x + p.phase)


def _coupling_raw(p: CouplingParams, x: float, y: float) -> float:
    return (
        p.lin * y
        + p.amp1 * math.sin(p.freq1 * y + p.phase1)
        + p.amp2 * math.sin(p.freq_x * x + p.freq_y * y + p.phase2)
    )


def _coupling_term(
    spec: AdmissibleFunctionSpec, receiver_type: int, sender_type: int, x: float, y: float
) -> float:
    p = spec.coupling_params[receiver_type - 1][sender_type - 1]
    v = _coupling_raw(p, x, y)
    if spec.exo:
        v -= _coupling_raw(p, x, x)
    return v


def eval_on_neighborhood(
    spec: AdmissibleFunctionSpec,
    cell_type: int,
    x_self: float,
    inputs: list[tuple[int, int, float]],
) -> float:
    """Evaluate one cell on an explicit in-neighborhood.

    inputs are (sender type, integer weight, sender state) triples.
    The fold by (type, state) with exact integer weight sums is what
    gives the multiset semantics.
    """
    groups: dict[tuple[int, float], int] = {}
    for sender_type, weight, state in inputs:
        key = (sender_type, state)
        groups[key] = groups.get(key, 0) + weight
    total = _self_term(spec, cell_type, x_self)
    for (sender_type, state), weight in sorted(groups.items()):
        if weight == 0:
            continue
        total += weight * _coupling_term(spec, cell_type, sender_type, x_self, state)
    return total


def component_value(
    net: Network, spec: AdmissibleFunctionSpec, x: tuple[float, ...], c: int
) -> float:
    inputs = [(net.cell_types[d], w, x[d]) for d, w in net.in_edges[c]]
    return eval_on_neighborhood(spec, net.cell_types[c], x[c], inputs)


def evaluate(net: Network, spec: AdmissibleFunctionSpec, x: tuple[float, ...]) -> tuple[float, ...]:
    """One application of the admissible function to a full state."""
    if spec.num_types < net.num_types:
        raise SynckitError("spec was sampled for fewer cell types than the network has")
    return tuple(component_value(net, spec, x, c) for c in range(net.n_cells))


@dataclass(frozen=True)
class Trajectory:
    times: tuple[float, ...]
    states: tuple[tuple[float, ...], ...]
    mode: str
    dt: Optional[float] = None


def _guard(x: tuple[float, ...]) -> None:
    for v in x:
        if not math.isfinite(v) or abs(v) > OVERFLOW_GUARD:
            raise NumericalBlowup(f"state magnitude {v!r} exceeded the overflow guard")


def evolve(
    net: Network,
    spec: AdmissibleFunctionSpec,
    x0: tuple[float, ...],
    steps: int,
    mode: str = "discrete",
    dt: float = 1e-3,
) -> Trajectory:
    """Iterate the map (discrete) or integrate with fixed-step RK4."""
    if len(x0) != net.n_cells:
        raise SynckitError("initial state length does not match the network")
    _guard(tuple(x0))
    states = [tuple(x0)]
    times = [0.0]
    x = tuple(x0)
    for step in range(steps):
        if mode == "discrete":
            x = evaluate(net, spec, x)
            times.append(float(step + 1))
        elif mode == "rk4":
            x = _rk4_step(net, spec, x, dt)
            times.append(dt * (step + 1))
        else:
            raise SynckitError(f"unknown mode {mode!r}")
        _guard(x)
        states.append(x)
    return Trajectory(tuple(times), tuple(states), mode, dt if mode == "rk4" else None)


def _rk4_step(
    net: Network, spec: AdmissibleFunctionSpec, x: tuple[float, ...], dt: float
) -> tuple[float, ...]:
    n = len(x)
    k1 = evaluate(net, spec, x)
    k2 = evaluate(net, spec, tuple(x[i] + 0.5 * dt * k1[i] for i in range(n)))
    k3 = evaluate(net, spec, tuple(x[i] + 0.5 * dt * k2[i] for i in range(n)))
    k4 = evaluate(net, spec, tuple(x[i] + dt * k3[i] for i in range(n)))
    return tuple(
        x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(n)
    )


# ---------------------------------------------------------------------------
# State helpers


def expand_state(xbar: tuple[float, ...], p: Partition) -> tuple[float, ...]:
    """Lift a per-color state onto the polydiagonal of p."""
    if len(xbar) != p.rank:
        raise SynckitError("per-color state length does not match the partition rank")
    return tuple(xbar[k] for k in p.colors)


def in_polydiagonal(x: tuple[float, ...], p: Partition, tol: float = 0.0) -> bool:
    """True iff same-colored entries agree within tol."""
    return color_spread(x, p) <= tol


def color_spread(x: tuple[float, ...], p: Partition) -> float:
    """Largest within-color state spread."""
    worst = 0.0
    for block in p.blocks():
        if len(block) < 2:
            continue
        values = [x[c] for c in block]
        worst = max(worst, max(values) - min(values))
    return worst


def _random_state(rng: random.Random, n: int) -> tuple[float, ...]:
    return tuple(rng.uniform(-1.5, 1.5) for _ in range(n))


# ---------------------------------------------------------------------------
# Verification reports


@dataclass(frozen=True)
class TrialResult:
    max_spread: float
    steps_run: int
    aborted: bool


@dataclass(frozen=True)
class InvarianceReport:
    partition: Partition
    trials: tuple[TrialResult, ...]
    tol: float
    max_spread: float
    invariant: bool

    def to_json(self) -> dict:
        return {
            "tol": self.tol,
            "max_spread": self.max_spread,
            "invariant": self.invariant,
            "trials": [
                {"max_spread": t.max_spread, "steps": t.steps_run, "aborted": t.aborted}
                for t in self.trials
            ],
        }


def check_invariance(
    net: Network,
    spec: AdmissibleFunctionSpec,
    p: Partition,
    trials: int = 20,
    steps: int = 100,
    tol: float = 1e-9,
    mode: str = "discrete",
    dt: float = 1e-3,
    rng_seed: int = 0,
    stop_above: Optional[float] = None,
) -> InvarianceReport:
    """Start on the polydiagonal, evolve, and track within-color spread."""
    results = []
    worst = 0.0
    for t in range(trials):
        rng = random.Random(f"invariance:{rng_seed}:{t}")
        xbar = _random_state(rng, p.rank)
        x = expand_state(xbar, p)
        spread = 0.0
        ran = 0
        aborted = False
        try:
            for step in range(steps):
                x = evaluate(net, spec, x) if mode == "discrete" else _rk4_step(net, spec, x, dt)
                _guard(x)
                ran = step + 1
                spread = max(spread, color_spread(x, p))
                if stop_above is not None and spread > stop_above:
                    break
        except NumericalBlowup:
            aborted = True
        results.append(TrialResult(spread, ran, aborted))
        worst = max(worst, spread)
        if stop_above is not None and worst > stop_above:
            break
    return InvarianceReport(p, tuple(results), tol, worst, worst <= tol)


def probe_non_invariance(
    net: Network,
    p: Partition,
    seeds: int = 20,
    trials: int = 10,
    steps: int = 100,
    threshold: float = 1e-3,
    exo: bool = False,
    rng_seed: int = 0,
) -> str:
    """Try to exhibit a spread above threshold; "falsified" or "inconclusive".

    A quiet run never counts as evidence of invariance, only as an
    inconclusive probe.
    """
    for s in range(seeds):
        spec = sample_admissible(net, seed=rng_seed * 7919 + s, exo=exo)
        report = check_invariance(
            net, spec, p,
            trials=trials, steps=steps, tol=threshold,
            rng_seed=rng_seed * 104729 + s, stop_above=threshold,
        )
        if report.max_spread > threshold:
            return "falsified"
    return "inconclusive"


@dataclass(frozen=True)
class LocalityTrial:
    agreed: bool
    first_mismatch_step: Optional[int]


@dataclass(frozen=True)
class LocalityReport:
    cell: int
    k: int
    trials: tuple[LocalityTrial, ...]
    all_agreed: bool

    def to_json(self) -> dict:
        return {
            "cell": self.cell,
            "k": self.k,
            "all_agreed": self.all_agreed,
            "trials": [
                {"agreed": t.agreed, "first_mismatch_step": t.first_mismatch_step}
                for t in self.trials
            ],
        }


def check_locality(
    net: Network,
    spec: AdmissibleFunctionSpec,
    c: int,
    k: int,
    trials: int = 5,
    rng_seed: int = 0,
    perturb_inside: bool = False,
) -> LocalityReport:
    """Perturb cells outside (or inside) the k-step neighborhood of c.

    Outside perturbations must leave x_c through step k bit-for-bit
    unchanged in discrete mode; inside perturbations are the
    falsification direction.  Trials with an empty perturbation support
    count as agreeing runs.
    """
    net.check_cell(c)
    cone = cumulative_in_k(net, c, k)
    if perturb_inside:
        support = sorted(cone - {c})
    else:
        support = sorted(set(range(net.n_cells)) - cone)
    results = []
    for t in range(trials):
        rng = random.Random(f"locality:{rng_seed}:{t}")
        x0 = _random_state(rng, net.n_cells)
        if not support:
            results.append(LocalityTrial(True, None))
            continue
        bumped = list(x0)
        for d in support:
            bumped[d] += rng.uniform(0.1, 1.0)
        base = evolve(net, spec, tuple(x0), k)
        other = evolve(net, spec, tuple(bumped), k)
        mismatch = None
        for step in range(k + 1):
            if base.states[step][c] != other.states[step][c]:
                mismatch = step
                break
        results.append(LocalityTrial(mismatch is None, mismatch))
    return LocalityReport(c, k, tuple(results), all(t.agreed for t in results))


@dataclass(frozen=True)
class ComparisonReport:
    label: str
    max_deviation: float
    exact: bool
    tol: float

    def to_json(self) -> dict:
        return {
            "check": self.label,
            "max_deviation": self.max_deviation,
            "exact": self.exact,
            "tol": self.tol,
        }


def check_subsystem(
    net: Network,
    spec: AdmissibleFunctionSpec,
    c: int,
    trials: int = 5,
    steps: int = 50,
    mode: str = "discrete",
    dt: float = 1e-3,
    tol: float = 1e-6,
    rng_seed: int = 0,
) -> ComparisonReport:
    """Restricting a trajectory to the reach-in set solves the subsystem."""
    net.check_cell(c)
    cells = sorted(in_reachability(net, c))
    sub = net.subnetwork(cells)
    worst = 0.0
    for t in range(trials):
        rng = random.Random(f"subsystem:{rng_seed}:{t}")
        x0 = _random_state(rng, net.n_cells)
        full = evolve(net, spec, x0, steps, mode=mode, dt=dt)
        part = evolve(sub, spec, tuple(x0[d] for d in cells), steps, mode=mode, dt=dt)
        for step in range(steps + 1):
            for i, d in enumerate(cells):
                worst = max(worst, abs(full.states[step][d] - part.states[step][i]))
    exact = worst == 0.0
    return ComparisonReport("subsystem", worst, exact, tol)


def check_quotient_consistency(
    net: Network,
    spec: AdmissibleFunctionSpec,
    cert: BalancedCertificate,
    trials: int = 5,
    steps: int = 50,
    mode: str = "discrete",
    dt: float = 1e-3,
    tol: float = 1e-6,
    rng_seed: int = 0,
) -> ComparisonReport:
    """The quotient system reproduces the full system on the polydiagonal."""
    p = cert.partition
    quotient = quotient_network(net, cert)
    worst = 0.0
    for t in range(trials):
        rng = random.Random(f"quotient:{rng_seed}:{t}")
        xbar = _random_state(rng, p.rank)
        full = evolve(net, spec, expand_state(xbar, p), steps, mode=mode, dt=dt)
        small = evolve(quotient, spec, xbar, steps, mode=mode, dt=dt)
        for step in range(steps + 1):
            for c in range(net.n_cells):
                worst = max(
                    worst, abs(full.states[step][c] - small.states[step][p.colors[c]])
                )
    exact = worst == 0.0
    return ComparisonReport("quotient", worst, exact, tol)


def numeric_exo_verdict(
    net: Network,
    p: Partition,
    seeds: int = 5,
    trials: int = 4,
    steps: int = 50,
    tol: float = 1e-9,
    rng_seed: int = 0,
) -> bool:
    """Numerical invariance verdict under the same-state-insensitive family."""
    if not refines(p, net.type_partition()):
        raise SynckitError("exo verdict needs a type-refining partition")
    for s in range(seeds):
        spec = sample_admissible(net, seed=rng_seed * 6101 + s, exo=True)
        report = check_invariance(
            net, spec, p,
            trials=trials, steps=steps, tol=tol,
            rng_seed=rng_seed * 31 + s, stop_above=tol,
        )
        if report.max_spread > tol:
            return False
    return True
