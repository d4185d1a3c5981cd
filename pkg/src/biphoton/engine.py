"""Timed optical bench: event ordering, single trials, Monte Carlo ensembles.

A bench places a pair source at the origin, a removable half-wave plate
and a polarizing prism on channel A, and a prism on channel B, all at
configurable distances.  Photons travel at c, so the order in which the
plate acts and the detections fire is set purely by geometry; exact ties
are broken by a fixed event precedence (plate, then B, then A).

Every trial is driven by counter-based uniform draws keyed on
(master_seed, trial_index, draw_counter), so a run is reproducible from
its seed alone, any single trial can be replayed in isolation, and the
vectorized ensemble path produces bit for bit the outcomes of the scalar
per-trial walk.  Draw discipline per trial: the quantum model consumes
two draws (first and second detection in time order), the naive model one
(its first, unpolarized detection), the hidden-angle model one (the
shared angle at emission).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import IntEnum
from typing import Callable, NamedTuple

import numpy as np

from .local import (
    ChshAngles,
    ChshReport,
    HiddenState,
    LocalTrialState,
    chsh_S,
    lhv_outcome,
    lhv_pair,
    lhv_sample,
    lhv_sign_correlator,
    naive_measure,
    naive_plate_action,
)
from .quantum import (
    XX,
    XY,
    YX,
    YY,
    AnalyzerSetting,
    Channel,
    PolAxis,
    ProbTable,
    apply_element,
    as_setting,
    hwp_jones,
    make_anticorrelated_pair,
    marginal,
    measure_channel,
)
from .rng import TrialStream, derive_seed, uniform_array

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact by definition

#: trials per vectorized chunk; fixed so the chunking (and therefore the
#: output) is identical for any worker count
CHUNK = 65_536

MODEL_NAMES = ("qm", "lhv-sign", "naive")

_HALF_PI = math.pi / 2.0
_QUARTER_PI = math.pi / 4.0


class BenchEvent(IntEnum):
    """Bench events; the enum value breaks ties between simultaneous events."""

    PLATE_A = 0
    DETECT_B = 1
    DETECT_A = 2


class TimedEvent(NamedTuple):
    time: float
    event: BenchEvent


@dataclass(frozen=True)
class OpticalBench:
    """Geometry and settings of one run; distances in meters from the source.

    When the plate is present it must sit no farther out than channel A's
    prism, so it always acts before A's detection.
    """

    d_plate_a: float = 0.5
    d_prism_a: float = 1.5
    d_prism_b: float = 1.0
    alpha: "AnalyzerSetting | float" = AnalyzerSetting(0.0)
    beta: "AnalyzerSetting | float" = AnalyzerSetting(0.0)
    plate_present: bool = True
    plate_angle: float = _QUARTER_PI

    def __post_init__(self):
        for name in ("d_plate_a", "d_prism_a", "d_prism_b"):
            d = getattr(self, name)
            if not (isinstance(d, (int, float)) and math.isfinite(d) and d >= 0.0):
                raise ValueError(f"{name} must be a nonnegative distance in meters, got {d!r}")
            object.__setattr__(self, name, float(d))
        object.__setattr__(self, "alpha", as_setting(self.alpha))
        object.__setattr__(self, "beta", as_setting(self.beta))
        object.__setattr__(self, "plate_present", bool(self.plate_present))
        pa = self.plate_angle
        if not (isinstance(pa, (int, float)) and math.isfinite(pa)):
            raise ValueError(f"plate_angle must be finite radians, got {pa!r}")
        object.__setattr__(self, "plate_angle", float(pa))
        if self.plate_present and self.d_plate_a > self.d_prism_a:
            raise ValueError("plate must sit between source and prism: d_plate_a <= d_prism_a")

    _CONFIG_KEYS = (
        "d_plate_a_m",
        "d_prism_a_m",
        "d_prism_b_m",
        "alpha_deg",
        "beta_deg",
        "plate_present",
        "plate_angle_deg",
    )

    @classmethod
    def from_config(cls, config: dict) -> "OpticalBench":
        """Build a bench from the JSON config layout (lengths _m, angles _deg).

        Missing keys fall back to the defaults; unknown keys are rejected
        rather than silently ignored.
        """
        unknown = set(config) - set(cls._CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown bench config keys: {sorted(unknown)}")
        kwargs = {}
        for key, field_name in (
            ("d_plate_a_m", "d_plate_a"),
            ("d_prism_a_m", "d_prism_a"),
            ("d_prism_b_m", "d_prism_b"),
        ):
            if key in config:
                kwargs[field_name] = _config_number(key, config[key])
        if "alpha_deg" in config:
            kwargs["alpha"] = AnalyzerSetting.from_degrees(_config_number("alpha_deg", config["alpha_deg"]))
        if "beta_deg" in config:
            kwargs["beta"] = AnalyzerSetting.from_degrees(_config_number("beta_deg", config["beta_deg"]))
        if "plate_present" in config:
            flag = config["plate_present"]
            if not isinstance(flag, bool):
                raise ValueError(f"plate_present must be true or false, got {flag!r}")
            kwargs["plate_present"] = flag
        if "plate_angle_deg" in config:
            kwargs["plate_angle"] = math.radians(_config_number("plate_angle_deg", config["plate_angle_deg"]))
        return cls(**kwargs)

    def to_config_dict(self) -> dict:
        """The bench as a JSON-ready config dict (lengths _m, angles _deg)."""
        return {
            "d_plate_a_m": self.d_plate_a,
            "d_prism_a_m": self.d_prism_a,
            "d_prism_b_m": self.d_prism_b,
            "alpha_deg": math.degrees(self.alpha.angle),
            "beta_deg": math.degrees(self.beta.angle),
            "plate_present": self.plate_present,
            "plate_angle_deg": math.degrees(self.plate_angle),
        }


def _config_number(key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"bench config key {key} must be a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class EventTimeline:
    """Bench events sorted by arrival time, ties broken by event precedence."""

    events: tuple[TimedEvent, ...]

    def order(self) -> tuple[BenchEvent, ...]:
        return tuple(ev.event for ev in self.events)

    def time_of(self, event: BenchEvent) -> float:
        for ev in self.events:
            if ev.event is event:
                return ev.time
        raise ValueError(f"{event.name} is not on this bench")

    def detections(self) -> tuple[BenchEvent, ...]:
        """The two detection events in the order they fire."""
        return tuple(e for e in self.order() if e is not BenchEvent.PLATE_A)


def build_timeline(bench: OpticalBench) -> EventTimeline:
    """Event list of one trial, each at time distance / c."""
    events = [
        TimedEvent(bench.d_prism_b / SPEED_OF_LIGHT, BenchEvent.DETECT_B),
        TimedEvent(bench.d_prism_a / SPEED_OF_LIGHT, BenchEvent.DETECT_A),
    ]
    if bench.plate_present:
        events.append(TimedEvent(bench.d_plate_a / SPEED_OF_LIGHT, BenchEvent.PLATE_A))
    return EventTimeline(tuple(sorted(events)))


def detect_b_before_plate(bench: OpticalBench) -> bool:
    """Whether channel B's detection fires before the plate acts.

    False when the plate is absent: there is nothing to beat.
    """
    if not bench.plate_present:
        return False
    order = build_timeline(bench).order()
    return order.index(BenchEvent.DETECT_B) < order.index(BenchEvent.PLATE_A)


@dataclass(frozen=True)
class TrialRecord:
    """One emitted pair: both outcomes plus the bench ordering flag."""

    trial_index: int
    model: str
    outcome_a: PolAxis
    outcome_b: PolAxis
    b_before_plate: bool


@dataclass(frozen=True)
class EnsembleStats:
    """Joint outcome counts of an ensemble; channel A's axis is named first."""

    n_xx: int
    n_xy: int
    n_yx: int
    n_yy: int

    def __post_init__(self):
        for name in ("n_xx", "n_xy", "n_yx", "n_yy"):
            c = getattr(self, name)
            if not isinstance(c, int) or c < 0:
                raise ValueError(f"{name} must be a nonnegative integer count, got {c!r}")
        if self.n == 0:
            raise ValueError("ensemble has no trials")

    @property
    def n(self) -> int:
        return self.n_xx + self.n_xy + self.n_yx + self.n_yy

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.n_xx, self.n_xy, self.n_yx, self.n_yy)

    @property
    def frequencies(self) -> tuple[float, ...]:
        n = self.n
        return tuple(c / n for c in self.counts)

    def cell_stderr(self) -> tuple[float, ...]:
        """Binomial standard error sqrt(f (1 - f) / n) of each cell frequency."""
        n = self.n
        return tuple(math.sqrt(f * (1.0 - f) / n) for f in self.frequencies)

    @property
    def e_hat(self) -> float:
        """Sample correlator of the +-1-valued outcomes."""
        return (self.n_xx + self.n_yy - self.n_xy - self.n_yx) / self.n

    @property
    def stderr_e(self) -> float:
        e = self.e_hat
        return math.sqrt(max(0.0, 1.0 - e * e) / self.n)

    def marginal_a(self) -> tuple[float, float]:
        n = self.n
        return ((self.n_xx + self.n_xy) / n, (self.n_yx + self.n_yy) / n)

    def marginal_b(self) -> tuple[float, float]:
        n = self.n
        return ((self.n_xx + self.n_yx) / n, (self.n_xy + self.n_yy) / n)

    def to_json_dict(self) -> dict:
        return {
            "n_xx": self.n_xx,
            "n_xy": self.n_xy,
            "n_yx": self.n_yx,
            "n_yy": self.n_yy,
            "e_hat": self.e_hat,
            "stderr_e": self.stderr_e,
        }


def _check_model(model: str) -> str:
    if model not in MODEL_NAMES:
        raise ValueError(f"unknown model {model!r}; expected one of {MODEL_NAMES}")
    return model


# ---------------------------------------------------------------------------
# scalar trial walks


def _qm_walk(bench, timeline, draw: Callable[[], float]):
    state = make_anticorrelated_pair()
    outcomes = {}
    for _, event in timeline.events:
        if event is BenchEvent.PLATE_A:
            state = apply_element(state, Channel.A, hwp_jones(bench.plate_angle))
            continue
        channel = Channel.A if event is BenchEvent.DETECT_A else Channel.B
        setting = bench.alpha if channel is Channel.A else bench.beta
        result = measure_channel(state, channel, setting, draw())
        outcomes[channel] = result.outcome
        state = result.collapsed
    return outcomes


def _naive_walk(bench, timeline, draw: Callable[[], float]):
    trial = LocalTrialState(HiddenState.unpolarized(), HiddenState.unpolarized())
    outcomes = {}
    for _, event in timeline.events:
        if event is BenchEvent.PLATE_A:
            trial.photon_a = naive_plate_action(trial.photon_a)
            trial.mark_plate_passed()
            continue
        channel = Channel.A if event is BenchEvent.DETECT_A else Channel.B
        setting = bench.alpha if channel is Channel.A else bench.beta
        photon = trial.photon_a if channel is Channel.A else trial.photon_b
        # a definite photon answers deterministically: no randomness consumed
        u = draw() if not photon.is_definite else 0.0
        outcome, partner = naive_measure(photon, setting, u)
        outcomes[channel] = outcome
        if channel is Channel.B:
            trial.mark_b_measured()
        if partner is not None:
            if channel is Channel.A:
                trial.photon_b = partner
            else:
                trial.photon_a = partner
    return outcomes


def _lhv_walk(bench, timeline, draw: Callable[[], float]):
    photon_a, photon_b = lhv_pair(lhv_sample(draw()))
    trial = LocalTrialState(photon_a, photon_b)
    outcomes = {}
    for _, event in timeline.events:
        if event is BenchEvent.PLATE_A:
            trial.photon_a = naive_plate_action(trial.photon_a)
            trial.mark_plate_passed()
        elif event is BenchEvent.DETECT_A:
            outcomes[Channel.A] = lhv_outcome(trial.photon_a.angle, bench.alpha)
        else:
            outcomes[Channel.B] = lhv_outcome(trial.photon_b.angle, bench.beta)
            trial.mark_b_measured()
    return outcomes


_WALKS = {"qm": _qm_walk, "naive": _naive_walk, "lhv-sign": _lhv_walk}


def run_trial(model: str, bench: OpticalBench, master_seed: int, trial_index: int) -> TrialRecord:
    """Simulate one pair emission under ``model``, walking the bench timeline.

    Draw k of trial i is the counter-based uniform at (master_seed, i, k),
    so any single trial can be replayed without rerunning its ensemble.
    """
    _check_model(model)
    timeline = build_timeline(bench)
    stream = TrialStream(master_seed, trial_index)
    outcomes = _WALKS[model](bench, timeline, stream.uniform)
    return TrialRecord(
        trial_index,
        model,
        outcomes[Channel.A],
        outcomes[Channel.B],
        detect_b_before_plate(bench),
    )


# ---------------------------------------------------------------------------
# vectorized trial batches, bit-identical to the scalar walks


def _qm_plan(bench, timeline):
    """Branch-walk thresholds that drive the vectorized quantum path.

    Returns the first-detected channel, P(first = X), and P(second = X)
    conditioned on each first outcome.  Uses the same collapse code as the
    scalar walk, so the thresholds agree bit for bit.
    """
    plate = hwp_jones(bench.plate_angle)
    state = make_anticorrelated_pair()
    events = list(timeline.events)
    i = 0
    while events[i].event is BenchEvent.PLATE_A:
        state = apply_element(state, Channel.A, plate)
        i += 1
    first_ch = Channel.A if events[i].event is BenchEvent.DETECT_A else Channel.B
    second_ch = Channel.B if first_ch is Channel.A else Channel.A
    first_setting = bench.alpha if first_ch is Channel.A else bench.beta
    second_setting = bench.alpha if second_ch is Channel.A else bench.beta
    p1x = marginal(state, first_ch, first_setting)[0]
    tail = events[i + 1 :]

    def second_threshold(forcing_u: float) -> float:
        branch = measure_channel(state, first_ch, first_setting, forcing_u).collapsed
        for ev in tail:
            if ev.event is BenchEvent.PLATE_A:
                branch = apply_element(branch, Channel.A, plate)
        return marginal(branch, second_ch, second_setting)[0]

    # u = 0 forces the X branch, u = p1x the Y branch; a dead branch keeps a
    # dummy threshold that no trial ever selects
    p2x_given_x = second_threshold(0.0) if p1x > 0.0 else 0.5
    p2x_given_y = second_threshold(p1x) if p1x < 1.0 else 0.5
    return first_ch, p1x, p2x_given_x, p2x_given_y


def _qm_outcomes(bench, timeline, master_seed, indices):
    first_ch, p1x, p2x_given_x, p2x_given_y = _qm_plan(bench, timeline)
    u0 = uniform_array(master_seed, indices, 0)
    u1 = uniform_array(master_seed, indices, 1)
    first_is_x = u0 < p1x
    second_is_x = u1 < np.where(first_is_x, p2x_given_x, p2x_given_y)
    if first_ch is Channel.A:
        return first_is_x, second_is_x
    return second_is_x, first_is_x


def _naive_outcomes(bench, timeline, master_seed, indices):
    # one draw decides the whole trial; enumerate both branches once
    branch_x = _naive_walk(bench, timeline, lambda: 0.0)
    branch_y = _naive_walk(bench, timeline, lambda: 0.5)
    first_is_x = uniform_array(master_seed, indices, 0) < 0.5
    a_is_x = np.where(first_is_x, branch_x[Channel.A] is PolAxis.X, branch_y[Channel.A] is PolAxis.X)
    b_is_x = np.where(first_is_x, branch_x[Channel.B] is PolAxis.X, branch_y[Channel.B] is PolAxis.X)
    return a_is_x, b_is_x


def _reduce_mod_pi_arr(x: np.ndarray) -> np.ndarray:
    # elementwise twin of quantum.reduce_mod_pi: same operations, same order
    r = np.fmod(x, math.pi)
    r = np.where(r < 0.0, r + math.pi, r)
    return np.where(r >= math.pi, r - math.pi, r)


def _fold_is_x(delta: np.ndarray) -> np.ndarray:
    # elementwise twin of the folded-distance sign rule in local.lhv_outcome
    r = _reduce_mod_pi_arr(delta)
    d = np.minimum(r, math.pi - r)
    return d <= _QUARTER_PI


def _lhv_outcomes(bench, timeline, master_seed, indices):
    lam = uniform_array(master_seed, indices, 0) * math.pi
    b_ang = _reduce_mod_pi_arr(lam + _HALF_PI)
    # the plate turns A's hidden angle by pi/2, landing on B's expression
    a_ang = b_ang if bench.plate_present else lam
    a_is_x = _fold_is_x(bench.alpha.angle - a_ang)
    b_is_x = _fold_is_x(bench.beta.angle - b_ang)
    return a_is_x, b_is_x


_VECTOR_PATHS = {"qm": _qm_outcomes, "naive": _naive_outcomes, "lhv-sign": _lhv_outcomes}


def _chunk_outcomes(model, bench, timeline, master_seed, start, stop):
    indices = np.arange(start, stop, dtype=np.uint64)
    return _VECTOR_PATHS[model](bench, timeline, master_seed, indices)


def _check_run_args(n_trials, workers):
    if isinstance(n_trials, bool) or not isinstance(n_trials, int) or n_trials < 1:
        raise ValueError(f"n_trials must be a positive integer, got {n_trials!r}")
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ValueError(f"workers must be a positive integer, got {workers!r}")


def simulate_outcomes(
    model: str,
    bench: OpticalBench,
    n_trials: int,
    master_seed: int,
    workers: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Boolean outcome arrays (a_is_x, b_is_x) for trials 0 .. n_trials - 1.

    Work is split into fixed-size chunks writing disjoint slices, so the
    arrays are byte-identical for any worker count.
    """
    _check_model(model)
    _check_run_args(n_trials, workers)
    timeline = build_timeline(bench)
    a_is_x = np.empty(n_trials, dtype=bool)
    b_is_x = np.empty(n_trials, dtype=bool)

    def fill(start: int) -> None:
        stop = min(start + CHUNK, n_trials)
        a, b = _chunk_outcomes(model, bench, timeline, master_seed, start, stop)
        a_is_x[start:stop] = a
        b_is_x[start:stop] = b

    starts = range(0, n_trials, CHUNK)
    if workers == 1:
        for start in starts:
            fill(start)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, starts))
    return a_is_x, b_is_x


def run_ensemble(
    model: str,
    bench: OpticalBench,
    n_trials: int,
    master_seed: int,
    workers: int = 1,
) -> EnsembleStats:
    """Monte Carlo ensemble: joint outcome counts over ``n_trials`` emissions.

    Counter-based draws make each chunk independent of execution order, so
    multi-worker runs return exactly the serial counts.
    """
    _check_model(model)
    _check_run_args(n_trials, workers)
    timeline = build_timeline(bench)

    def count(start: int) -> tuple[int, int, int, int]:
        stop = min(start + CHUNK, n_trials)
        a, b = _chunk_outcomes(model, bench, timeline, master_seed, start, stop)
        xx = int(np.count_nonzero(a & b))
        xy = int(np.count_nonzero(a & ~b))
        yx = int(np.count_nonzero(~a & b))
        return xx, xy, yx, (stop - start) - xx - xy - yx

    starts = range(0, n_trials, CHUNK)
    if workers == 1:
        parts = [count(start) for start in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(count, starts))
    n_xx = sum(p[0] for p in parts)
    n_xy = sum(p[1] for p in parts)
    n_yx = sum(p[2] for p in parts)
    n_yy = sum(p[3] for p in parts)
    return EnsembleStats(n_xx, n_xy, n_yx, n_yy)


def write_trials_csv(f, bench: OpticalBench, a_is_x, b_is_x, start_index: int = 0) -> None:
    """Write per-trial outcomes in the interchange layout.

    Header trial,outcome_a,outcome_b,b_before_plate; outcomes are X or Y
    and the ordering flag is true/false, constant for a fixed bench.
    """
    flag = "true" if detect_b_before_plate(bench) else "false"
    f.write("trial,outcome_a,outcome_b,b_before_plate\n")
    for i in range(len(a_is_x)):
        a = "X" if a_is_x[i] else "Y"
        b = "X" if b_is_x[i] else "Y"
        f.write(f"{start_index + i},{a},{b},{flag}\n")


# ---------------------------------------------------------------------------
# analytic references


def analytic_joint_table(model: str, bench: OpticalBench) -> ProbTable:
    """Model-exact joint probabilities on a bench, no sampling.

    The quantum table multiplies the branch-walk conditionals; the naive
    table enumerates its two equiprobable branches; the hidden-angle table
    comes from the sawtooth correlator with uniform marginals.
    """
    _check_model(model)
    timeline = build_timeline(bench)
    if model == "qm":
        first_ch, p1x, p2x_given_x, p2x_given_y = _qm_plan(bench, timeline)
        cells = {}
        for first_out, p_first, p2x in (
            (PolAxis.X, p1x, p2x_given_x),
            (PolAxis.Y, 1.0 - p1x, p2x_given_y),
        ):
            for second_out, p_second in ((PolAxis.X, p2x), (PolAxis.Y, 1.0 - p2x)):
                key = (first_out, second_out) if first_ch is Channel.A else (second_out, first_out)
                cells[key] = p_first * p_second
        return ProbTable(
            [
                cells[(PolAxis.X, PolAxis.X)],
                cells[(PolAxis.X, PolAxis.Y)],
                cells[(PolAxis.Y, PolAxis.X)],
                cells[(PolAxis.Y, PolAxis.Y)],
            ]
        )
    if model == "naive":
        cells = dict.fromkeys(
            [(a, b) for a in (PolAxis.X, PolAxis.Y) for b in (PolAxis.X, PolAxis.Y)], 0.0
        )
        for u in (0.0, 0.5):  # the two first-outcome branches, each probability 1/2
            out = _naive_walk(bench, timeline, lambda u=u: u)
            cells[(out[Channel.A], out[Channel.B])] += 0.5
        return ProbTable(
            [
                cells[(PolAxis.X, PolAxis.X)],
                cells[(PolAxis.X, PolAxis.Y)],
                cells[(PolAxis.Y, PolAxis.X)],
                cells[(PolAxis.Y, PolAxis.Y)],
            ]
        )
    e = lhv_sign_correlator(bench.plate_present)(bench.alpha, bench.beta)
    same = (1.0 + e) / 4.0
    diff = (1.0 - e) / 4.0
    return ProbTable([same, diff, diff, same])


def analytic_E(model: str, bench: OpticalBench) -> float:
    """Exact correlator of ``model`` on this bench."""
    p = analytic_joint_table(model, bench).p
    return float(p[XX] + p[YY] - p[XY] - p[YX])


def analytic_chsh(
    model: str,
    angles: ChshAngles,
    plate_present: bool = True,
    bench: OpticalBench | None = None,
) -> ChshReport:
    """CHSH report from the model's exact correlator (zero standard errors)."""
    base = bench if bench is not None else OpticalBench(plate_present=plate_present)

    def correlator(alpha, beta) -> float:
        return analytic_E(model, replace(base, alpha=alpha, beta=beta))

    return chsh_S(correlator, angles)


# ---------------------------------------------------------------------------
# higher-level experiments


@dataclass(frozen=True)
class OrderInvarianceReport:
    """Side-by-side ensembles of an early-detection and a late-detection bench.

    Each cell's frequency delta is judged against four combined standard
    errors; verdict SAME means every cell cleared that bar.
    """

    model: str
    n_per_bench: int
    early: EnsembleStats
    late: EnsembleStats
    analytic_early: tuple[float, ...]
    analytic_late: tuple[float, ...]
    delta_f: tuple[float, ...]
    combined_stderr: tuple[float, ...]
    delta_e: float
    delta_e_stderr: float
    same: bool

    @property
    def verdict(self) -> str:
        return "SAME" if self.same else "DIFFERENT"

    def to_json_dict(self) -> dict:
        return {
            "model": self.model,
            "n_per_bench": self.n_per_bench,
            "early": self.early.to_json_dict(),
            "late": self.late.to_json_dict(),
            "analytic_early": list(self.analytic_early),
            "analytic_late": list(self.analytic_late),
            "delta_f": list(self.delta_f),
            "combined_stderr": list(self.combined_stderr),
            "delta_e": self.delta_e,
            "delta_e_stderr": self.delta_e_stderr,
            "verdict": self.verdict,
        }


def order_invariance_report(
    model: str,
    bench_early: OpticalBench,
    bench_late: OpticalBench,
    n_trials: int,
    master_seed: int,
    workers: int = 1,
) -> OrderInvarianceReport:
    """Does moving channel B's prism across the plate time change the counts?

    The benches must be identical apart from d_prism_b, with the early
    bench detecting B before the plate acts and the late bench after.
    Each bench runs under its own derived child seed (streams 0 and 1).
    """
    _check_model(model)
    if replace(bench_early, d_prism_b=bench_late.d_prism_b) != bench_late:
        raise ValueError("benches must differ only in d_prism_b")
    if not detect_b_before_plate(bench_early):
        raise ValueError("early bench must detect B before the plate acts")
    if detect_b_before_plate(bench_late):
        raise ValueError("late bench must detect B after the plate acts")
    early = run_ensemble(model, bench_early, n_trials, derive_seed(master_seed, 0), workers)
    late = run_ensemble(model, bench_late, n_trials, derive_seed(master_seed, 1), workers)
    f_early = early.frequencies
    f_late = late.frequencies
    delta_f = tuple(fl - fe for fe, fl in zip(f_early, f_late))
    combined = tuple(
        math.sqrt(se * se + sl * sl) for se, sl in zip(early.cell_stderr(), late.cell_stderr())
    )
    # <= rather than <, so a cell reproduced exactly (delta 0, stderr 0) passes
    same = all(abs(d) <= 4.0 * c for d, c in zip(delta_f, combined))
    delta_e = late.e_hat - early.e_hat
    delta_e_stderr = math.sqrt(early.stderr_e**2 + late.stderr_e**2)
    return OrderInvarianceReport(
        model=model,
        n_per_bench=n_trials,
        early=early,
        late=late,
        analytic_early=tuple(float(p) for p in analytic_joint_table(model, bench_early).p),
        analytic_late=tuple(float(p) for p in analytic_joint_table(model, bench_late).p),
        delta_f=delta_f,
        combined_stderr=combined,
        delta_e=delta_e,
        delta_e_stderr=delta_e_stderr,
        same=same,
    )


def chsh_experiment(
    model: str,
    angles: ChshAngles,
    n_per_setting: int,
    master_seed: int,
    plate_present: bool = True,
    workers: int = 1,
) -> ChshReport:
    """Monte Carlo CHSH run: four ensembles, one per setting pair.

    Setting pairs follow the report order (a,b), (a,b'), (a',b), (a',b'),
    pair k running under derived child seed k so every term is independent
    and individually reproducible.
    """
    _check_model(model)
    base = OpticalBench(plate_present=plate_present)
    terms = []
    errors = []
    for k, (alpha, beta) in enumerate(angles.pairs()):
        bench = replace(base, alpha=alpha, beta=beta)
        stats = run_ensemble(model, bench, n_per_setting, derive_seed(master_seed, k), workers)
        terms.append(stats.e_hat)
        errors.append(stats.stderr_e)
    return ChshReport.from_terms(*terms, se=tuple(errors))
