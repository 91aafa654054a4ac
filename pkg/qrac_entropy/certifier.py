"""
Certified min-entropy as a function of the observed witness value.

For a target witness value t the adversary may choose any qubit strategy with
T = t; the certified bound is H∞(t) = -log2 p*(t) where p*(t) is the largest
outcome probability max_{b,a,y} P(b|a,y) such a strategy can have.

The search fixes a candidate position (a*, y*, b*) and maximizes that single
entry. Only the state s_{a*} and the measurements enter the entry; every other
state enters T through (1/2) s_a·v_a, v_a = Σ_y (-1)^{a_y} m_y, so those states
are eliminated: T can be brought to any value between the extremes
(1/2) s_{a*}·v_{a*} ± (1/2) Σ_{a≠a*} ‖v_a‖ by turning them along great circles.
The remaining search runs over the angles of s_{a*} and the measurements, with
M_1^0 = |0⟩⟨0| and the azimuth of measurement 2 fixed to 0.
"""

import functools
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize

from .classical import classical_max_T
from .config import CertifierConfig, SeesawConfig
from .exceptions import DomainError
from .seesaw import seesaw_optimize, witness_from_vectors
from .strategy import (
    Strategy,
    max_probability,
    probability_table,
    save_strategy,
    witness_t,
)
from .utils import (
    csv_text,
    derive_rng,
    format_decimal,
    validate_n,
    witness_signs,
    write_atomic,
)


logger = logging.getLogger(__name__)

CERTIFIER_MAX_N = 5
POSITIVITY_MARGIN = 1e-4
THRESHOLD_WIDTH = 1e-3
DEGENERATE_NORM = 1e-12
CERTAIN = 1.0 - 1e-12
STALL_GAIN = 1e-7

CURVE_COLUMNS = ("n", "t_target", "p_guess", "h_min", "feasible", "constraint_residual")

Candidate = Tuple[int, int, int]


@dataclass(frozen=True)
class EntropyPoint:
    """
    Certified bound at one witness value.

    :param n: Number of encoded bits.
    :param t_target: The witness value the adversary must reproduce.
    :param p_guess: Largest outcome probability attainable at `t_target`; `None` if infeasible.
    :param h_min: -log2 p_guess in bits; `None` if infeasible.
    :param feasible: Whether a strategy with T = t_target was found.
    :param witness_strategy: A strategy attaining `p_guess` at `t_target`.
    :param constraint_residual: |T(witness_strategy) - t_target|.
    :param feasible_starts: Number of local searches that ended feasible.
    """

    n: int
    t_target: float
    p_guess: Optional[float]
    h_min: Optional[float]
    feasible: bool
    witness_strategy: Optional[Strategy] = None
    constraint_residual: Optional[float] = None
    feasible_starts: int = 0


@dataclass
class _Completion:
    p_guess: float
    residual: float
    states: np.ndarray
    measurements: np.ndarray


#############
# GEOMETRY  #
#############


def _sphere(polar: np.ndarray, azimuth: np.ndarray):
    """Bloch vectors of angle arrays together with their two partial derivatives."""
    sp, cp = np.sin(polar), np.cos(polar)
    sa, ca = np.sin(azimuth), np.cos(azimuth)
    vectors = np.stack([sp * ca, sp * sa, cp], axis=-1)
    d_polar = np.stack([cp * ca, cp * sa, -sp], axis=-1)
    d_azimuth = np.stack([-sp * sa, sp * ca, np.zeros_like(sp)], axis=-1)
    return vectors, d_polar, d_azimuth


def _measurement_angles(x: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    psi = np.zeros(n)
    omega = np.zeros(n)
    if n >= 2:
        psi[1] = x[2]
    if n >= 3:
        psi[2:] = x[3::2]
        omega[2:] = x[4::2]
    return psi, omega


def _parameter_count(n: int) -> int:
    return 2 if n == 1 else 2 * n - 1


def _bounds(n: int) -> List[Tuple[Optional[float], Optional[float]]]:
    bounds = [(0.0, math.pi), (None, None)]
    if n >= 2:
        bounds.append((0.0, math.pi))
    for _ in range(3, n + 1):
        bounds.extend([(0.0, math.pi), (None, None)])
    return bounds


def _random_point(rng: np.random.Generator, n: int) -> np.ndarray:
    x = np.empty(_parameter_count(n))
    polar = [0] + ([2] if n >= 2 else []) + list(range(3, len(x), 2))
    azimuth = [1] + list(range(4, len(x), 2))
    x[polar] = np.arccos(rng.uniform(-1.0, 1.0, len(polar)))
    x[azimuth] = rng.uniform(0.0, 2 * math.pi, len(azimuth))
    return x


class _CandidateProblem:
    """
    Smooth sub-problem for one candidate position (a*, y*, b*).

    `entry` is P(b* | a*, y*) and `slack` is the largest witness reachable by the
    eliminated states minus the target; both come with gradients in the angles.
    """

    def __init__(self, n: int, candidate: Candidate, t_target: float):
        self.n = n
        self.a, y, b = candidate
        self.y = y - 1
        self.sign = 1.0 if b == 0 else -1.0
        self.t_target = t_target
        self.signs = witness_signs(n)
        self.others = np.ones(2**n, dtype=bool)
        self.others[self.a] = False

    def geometry(self, x: np.ndarray):
        state, state_dp, state_da = _sphere(x[0], x[1])
        psi, omega = _measurement_angles(x, self.n)
        measurements, meas_dp, meas_da = _sphere(psi, omega)
        return state, state_dp, state_da, measurements, meas_dp, meas_da

    def _to_angles(self, grad_state, grad_meas, geometry) -> np.ndarray:
        _, state_dp, state_da, _, meas_dp, meas_da = geometry
        grad = np.zeros(_parameter_count(self.n))
        grad[0] = grad_state @ state_dp
        grad[1] = grad_state @ state_da
        by_psi = np.sum(grad_meas * meas_dp, axis=1)
        by_omega = np.sum(grad_meas * meas_da, axis=1)
        if self.n >= 2:
            grad[2] = by_psi[1]
        if self.n >= 3:
            grad[3::2] = by_psi[2:]
            grad[4::2] = by_omega[2:]
        return grad

    def entry(self, x: np.ndarray, geometry=None) -> Tuple[float, np.ndarray]:
        geometry = geometry or self.geometry(x)
        state, measurements = geometry[0], geometry[3]
        value = 0.5 * (1.0 + self.sign * state @ measurements[self.y])
        grad_state = 0.5 * self.sign * measurements[self.y]
        grad_meas = np.zeros_like(measurements)
        grad_meas[self.y] = 0.5 * self.sign * state
        return value, self._to_angles(grad_state, grad_meas, geometry)

    def slack(self, x: np.ndarray, geometry=None) -> Tuple[float, np.ndarray]:
        geometry = geometry or self.geometry(x)
        state, measurements = geometry[0], geometry[3]
        v = self.signs @ measurements
        norms = np.linalg.norm(v, axis=1)
        value = 0.5 * state @ v[self.a] + 0.5 * norms[self.others].sum()

        directions = np.zeros_like(v)
        live = norms > DEGENERATE_NORM
        directions[live] = v[live] / norms[live, None]
        directions[self.a] = state
        grad_meas = 0.5 * self.signs.T @ directions
        grad_state = 0.5 * v[self.a]
        return value - self.t_target, self._to_angles(grad_state, grad_meas, geometry)

    def penalized(self, x: np.ndarray, weight: float) -> Tuple[float, np.ndarray]:
        geometry = self.geometry(x)
        entry, entry_grad = self.entry(x, geometry)
        slack, slack_grad = self.slack(x, geometry)
        violation = max(0.0, -slack)
        value = -entry + weight * violation**2
        grad = -entry_grad - 2.0 * weight * violation * slack_grad
        return value, grad

    def vectors(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        geometry = self.geometry(x)
        return geometry[0], geometry[3]


def _perpendicular(directions: np.ndarray) -> np.ndarray:
    axis = np.eye(3)[np.argmin(np.abs(directions), axis=1)]
    normal = np.cross(directions, axis)
    return normal / np.linalg.norm(normal, axis=1, keepdims=True)


def complete_strategy(
    measurements: np.ndarray, target: int, state: np.ndarray, t_target: float
) -> Tuple[np.ndarray, float]:
    """
    Fill in every state but `target` so that the witness equals `t_target`.

    The free states start at their optimal directions v_a/‖v_a‖ and are turned
    by a common angle along great circles, which scales their contribution by
    its cosine.

    :param measurements: n × 3 measurement vectors.
    :param target: Index of the state to keep.
    :param state: Bloch vector kept at `target`.
    :param t_target: Witness value to reach.
    :return: The 2^n × 3 state vectors and the remaining |T - t_target|.
    """
    n = len(measurements)
    signs = witness_signs(n)
    v = signs @ measurements
    norms = np.linalg.norm(v, axis=1)
    others = np.ones(2**n, dtype=bool)
    others[target] = False

    directions = np.tile((0.0, 0.0, 1.0), (2**n, 1))
    live = norms > DEGENERATE_NORM
    directions[live] = v[live] / norms[live, None]

    fixed = 0.5 * float(state @ v[target])
    reach = 0.5 * float(norms[others].sum())
    if reach > 0.0:
        cosine = min(1.0, max(-1.0, (t_target - fixed) / reach))
        sine = math.sqrt(max(0.0, 1.0 - cosine**2))
        directions = cosine * directions + sine * _perpendicular(directions)
    directions[target] = state

    residual = abs(witness_from_vectors(directions, measurements) - t_target)
    return directions, residual


def _table_max(states: np.ndarray, measurements: np.ndarray) -> float:
    return float(0.5 * (1.0 + np.max(np.abs(states @ measurements.T))))


##########
# SEARCH #
##########


def candidate_positions(n: int, exploit_symmetry: bool = True) -> List[Candidate]:
    """
    Positions (a, y, b) whose probability P(b | a, y) is maximized separately.

    Flipping bit y in every input while swapping the outcomes of measurement y
    leaves T unchanged, as does permuting the measurements together with the
    bit positions. Every position is then equivalent to y=1, b=0 with a_1 = 0
    or a_1 = 1, leaving two representatives.

    :param n: Number of encoded bits.
    :param exploit_symmetry: Return only orbit representatives.
    """
    n = validate_n(n)
    if exploit_symmetry:
        return [(0, 1, 0), (2 ** (n - 1), 1, 0)]
    return [(a, y, b) for y in range(1, n + 1) for a in range(2**n) for b in (0, 1)]


def _local_search(
    problem: _CandidateProblem,
    x0: np.ndarray,
    config: CertifierConfig,
) -> Optional[_Completion]:
    bounds = _bounds(problem.n)
    x = x0
    for weight in config.penalty_schedule:
        result = minimize(
            problem.penalized,
            x,
            args=(weight,),
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={
                "maxiter": config.max_iters_per_weight,
                "ftol": config.local_step_tol,
                "gtol": config.local_step_tol,
            },
        )
        x = result.x

    polish = minimize(
        lambda z: tuple(-part for part in problem.entry(z)),
        x,
        jac=True,
        method="SLSQP",
        bounds=bounds,
        constraints=[
            {
                "type": "ineq",
                "fun": lambda z: problem.slack(z)[0],
                "jac": lambda z: problem.slack(z)[1],
            }
        ],
        options={"maxiter": config.max_iters_per_weight, "ftol": config.local_step_tol},
    )
    best: Optional[_Completion] = None
    for point in (x, polish.x):
        if not np.all(np.isfinite(point)):
            continue
        state, measurements = problem.vectors(point)
        states, residual = complete_strategy(
            measurements, problem.a, state, problem.t_target
        )
        if residual > config.constraint_tol:
            continue
        p_guess = _table_max(states, measurements)
        if best is None or p_guess > best.p_guess:
            best = _Completion(p_guess, residual, states, measurements)
    return best


@functools.lru_cache(maxsize=None)
def _seesaw_optimum(n: int) -> Tuple[float, np.ndarray, np.ndarray]:
    result = seesaw_optimize(n, SeesawConfig(starts=50))
    strategy = result.strategy
    return result.t_quantum, strategy.state_matrix(), strategy.measurement_matrix()


def quantum_maximum(n: int) -> float:
    """
    Largest witness value of a qubit strategy, from a cached see-saw run.

    :param n: Number of encoded bits.
    """
    return _seesaw_optimum(validate_n(n, CERTIFIER_MAX_N))[0]


def _seesaw_anchor(n: int, t_target: float, tol: float) -> Optional[_Completion]:
    """The see-saw optimum turned down to `t_target`, keeping its most predictable state."""
    _, states, measurements = _seesaw_optimum(n)
    overlaps = np.abs(states @ measurements.T)
    target = int(np.unravel_index(np.argmax(overlaps), overlaps.shape)[0])
    completed, residual = complete_strategy(measurements, target, states[target], t_target)
    if residual > tol:
        return None
    return _Completion(
        p_guess=_table_max(completed, measurements),
        residual=residual,
        states=completed,
        measurements=measurements,
    )


def _check_target(n: int, t_target: float) -> None:
    bound = n * 2 ** (n - 1)
    if not math.isfinite(t_target) or abs(t_target) > bound:
        raise DomainError(f"t_target must lie in [-{bound}, {bound}] for n={n}, got {t_target}")


def guessing_probability(
    n: int, t_target: float, config: Optional[CertifierConfig] = None
) -> EntropyPoint:
    """
    Largest outcome probability of any qubit strategy whose witness equals `t_target`.

    Negative targets are handled through the global outcome flip: swapping the
    outcomes of every measurement negates T and leaves the set of outcome
    probabilities unchanged, so p*(-t) = p*(t).

    :param n: Number of encoded bits, 1 ≤ n ≤ 5.
    :param t_target: Observed witness value.
    :param config: Search settings, defaults to `CertifierConfig()`.
    :raises DomainError: If `t_target` lies outside [-n 2^{n-1}, n 2^{n-1}].
    :return: The bound; `feasible=False` when no qubit strategy reaches `t_target`.
    """
    n = validate_n(n, CERTIFIER_MAX_N)
    t_target = float(t_target)
    _check_target(n, t_target)
    config = config or CertifierConfig()
    flip = t_target < 0
    magnitude = abs(t_target)

    t_quantum = quantum_maximum(n)
    if magnitude > t_quantum + config.constraint_tol:
        logger.info("|T|=%.9f exceeds the qubit maximum %.9f for n=%d", magnitude, t_quantum, n)
        return EntropyPoint(n=n, t_target=t_target, p_guess=None, h_min=None, feasible=False)

    best: Optional[_Completion] = None
    feasible_starts = 0
    candidates = candidate_positions(n, config.exploit_symmetry)
    for candidate_index, candidate in enumerate(candidates):
        problem = _CandidateProblem(n, candidate, magnitude)
        candidate_best = -math.inf
        stalled = 0
        for start_index in range(config.starts):
            rng = derive_rng(config.seed, candidate_index, start_index)
            completion = _local_search(problem, _random_point(rng, n), config)
            if completion is None:
                stalled += 1
            else:
                feasible_starts += 1
                if completion.p_guess > candidate_best + STALL_GAIN:
                    stalled = 0
                else:
                    stalled += 1
                candidate_best = max(candidate_best, completion.p_guess)
                if best is None or completion.p_guess > best.p_guess:
                    best = completion
            if (best is not None and best.p_guess >= CERTAIN) or stalled >= config.stall_starts:
                break
        logger.debug(
            "Candidate %s at T=%.9f: best p=%s after %d starts",
            candidate,
            t_target,
            None if best is None else f"{best.p_guess:.9f}",
            start_index + 1,
        )
        if best is not None and best.p_guess >= CERTAIN:
            break

    anchor = _seesaw_anchor(n, magnitude, config.constraint_tol)
    if anchor is not None and (best is None or anchor.p_guess > best.p_guess):
        best = anchor

    if best is None:
        logger.warning("No feasible strategy found for n=%d at T=%.9f", n, t_target)
        return EntropyPoint(n=n, t_target=t_target, p_guess=None, h_min=None, feasible=False)

    measurements = -best.measurements if flip else best.measurements
    strategy = Strategy.from_vectors(best.states, measurements)
    table = probability_table(strategy)
    p_guess = max_probability(table)
    point = EntropyPoint(
        n=n,
        t_target=t_target,
        p_guess=p_guess,
        h_min=max(0.0, -math.log2(p_guess)),
        feasible=True,
        witness_strategy=strategy,
        constraint_residual=abs(witness_t(table) - t_target),
        feasible_starts=feasible_starts,
    )
    logger.info("n=%d T=%.9f: p_guess=%.9f H=%.6f", n, t_target, p_guess, point.h_min)
    return point


def entropy_curve(
    n: int,
    t_min: float,
    t_max: float,
    steps: int,
    config: Optional[CertifierConfig] = None,
) -> List[EntropyPoint]:
    """
    Evaluate `guessing_probability` on a uniform grid including both endpoints.

    :param n: Number of encoded bits.
    :param t_min: First grid value.
    :param t_max: Last grid value.
    :param steps: Number of grid points, at least 2.
    :param config: Search settings.
    """
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
        raise DomainError(f"steps must be an integer ≥ 2, got {steps!r}")
    if not t_min < t_max:
        raise DomainError(f"t_min must be below t_max, got {t_min} ≥ {t_max}")
    return [
        guessing_probability(n, float(t), config)
        for t in np.linspace(t_min, t_max, steps)
    ]


def is_positive(point: EntropyPoint) -> bool:
    """Whether the point certifies a positive amount of randomness."""
    return point.feasible and point.p_guess <= 1.0 - POSITIVITY_MARGIN


def positivity_threshold(n: int, config: Optional[CertifierConfig] = None) -> float:
    """
    Smallest witness value above which randomness is certified, by bisection.

    The bracket starts at the classical bound, where some strategy is
    deterministic, and the qubit maximum; it is narrowed to a width of 1e-3.

    :param n: Number of encoded bits, 2 ≤ n ≤ 5.
    """
    n = validate_n(n, CERTIFIER_MAX_N)
    if n < 2:
        raise DomainError("The positivity threshold is defined for n ≥ 2")

    low = classical_max_T(n).t_max
    high = quantum_maximum(n)
    if not is_positive(guessing_probability(n, high, config)):
        raise DomainError(f"No randomness is certified even at the qubit maximum for n={n}")

    while high - low > THRESHOLD_WIDTH:
        middle = 0.5 * (low + high)
        if is_positive(guessing_probability(n, middle, config)):
            high = middle
        else:
            low = middle
        logger.info("Threshold bracket for n=%d: [%.6f, %.6f]", n, low, high)
    return high


##########
# OUTPUT #
##########


def curve_csv(points: Iterable[EntropyPoint]) -> str:
    """CSV text of a curve, one row per point in the given order."""
    rows = []
    for point in points:
        rows.append(
            (
                str(point.n),
                format_decimal(point.t_target),
                "" if point.p_guess is None else format_decimal(point.p_guess),
                "" if point.h_min is None else format_decimal(point.h_min),
                "true" if point.feasible else "false",
                ""
                if point.constraint_residual is None
                else format_decimal(point.constraint_residual),
            )
        )
    return csv_text(CURVE_COLUMNS, rows)


def write_curve_csv(points: Iterable[EntropyPoint], path: Union[str, Path]) -> None:
    """Write a curve CSV atomically."""
    write_atomic(path, curve_csv(points))


def witness_filename(point: EntropyPoint) -> str:
    """File name under which a point's witness strategy is dumped."""
    return f"witness_n{point.n}_t{format_decimal(point.t_target)}.json"


def dump_witness(point: EntropyPoint, directory: Union[str, Path]) -> Optional[Path]:
    """
    Save the witness strategy of a feasible point into `directory`.

    :return: The written path, or `None` for an infeasible point.
    """
    if point.witness_strategy is None:
        return None
    path = Path(directory) / witness_filename(point)
    save_strategy(point.witness_strategy, path)
    return path
