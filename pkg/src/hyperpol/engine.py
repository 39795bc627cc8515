"""Exact numerical evolution of the protocol.

Composes segment propagators into the per-cycle 4x4 unitary, extracts the
nuclear Kraus pair from its first block column, iterates the channel to the
steady state, and measures the polarization rate from the simulated series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import ID2, ID4, SX, SY, SZ, hermitian_expm, kron2
from .params import SequenceParams, SystemParams
from .timeline import FREE_HYPERFINE, FREE_NUCLEAR, PULSE, Segment, Timeline, render_unit

UNITARITY_TOL = 1e-10
MAX_FIXED_POINT_ITERATIONS = 10 ** 6
MAX_RATE_CYCLES = 2 ** 21

IZ = SZ
IX = SX

E_FRACTION = 1.0 - math.exp(-1.0)


class ConvergenceError(RuntimeError):
    """Fixed-point iteration did not converge within the iteration cap."""

    def __init__(self, message: str, iterations: int, last_distance: float):
        super().__init__(f"{message} (iterations={iterations}, last_distance={last_distance:.3e})")
        self.iterations = iterations
        self.last_distance = last_distance


class BelowThresholdError(RuntimeError):
    """Series never reached the 1 - 1/e rate threshold."""

    def __init__(self, max_fraction: float):
        super().__init__(f"series never reached 1-1/e of the steady value "
                         f"(max fraction {max_fraction:.3e})")
        self.max_fraction = max_fraction


@dataclass(frozen=True)
class KrausPair:
    """Per-initialization nuclear channel operators (2x2 each)."""

    m_up: np.ndarray
    m_down: np.ndarray

    def cptp_defect(self) -> float:
        total = self.m_up.conj().T @ self.m_up + self.m_down.conj().T @ self.m_down
        return float(np.max(np.abs(total - ID2)))


@dataclass
class PolarizationSeries:
    """Polarization <2 I_z> per initialization cycle; values[i] is cycle i+1."""

    values: np.ndarray
    params: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)

    def to_csv(self, path) -> None:
        import json

        with open(path, "w") as fh:
            fh.write("# " + json.dumps(self.params, sort_keys=True) + "\n")
            fh.write("cycle,polarization\n")
            for i, v in enumerate(self.values, start=1):
                fh.write(f"{i},{v:.17g}\n")


def mixed_state() -> np.ndarray:
    return ID2 / 2


def polarization(rho: np.ndarray) -> float:
    """<2 I_z> = rho_uu - rho_dd."""
    return float(np.real(rho[0, 0] - rho[1, 1]))


def hyperfine_hamiltonian(sys: SystemParams) -> np.ndarray:
    """omega I_z + S_z (a_perp I_x + a_z I_z) in the 4x4 product space."""
    nuclear = sys.a_perp * IX + sys.a_z * IZ
    return sys.omega * kron2(ID2, IZ) + kron2(SZ, nuclear)


def nuclear_hamiltonian(sys: SystemParams) -> np.ndarray:
    """omega I_z only (hyperfine-free waits)."""
    return sys.omega * kron2(ID2, IZ)


_SPIN_BY_AXIS = {"+x": SX, "-x": -SX, "+y": SY, "-y": -SY}


def segment_propagator(sys: SystemParams, seg: Segment) -> np.ndarray:
    if seg.kind == FREE_HYPERFINE:
        return hermitian_expm(hyperfine_hamiltonian(sys), seg.duration)
    if seg.kind == FREE_NUCLEAR:
        return hermitian_expm(nuclear_hamiltonian(sys), seg.duration)
    if seg.kind == PULSE:
        spin = kron2(_SPIN_BY_AXIS[seg.axis], ID2)
        if seg.duration == 0.0:
            return hermitian_expm(spin, seg.angle)
        # rectangular drive, system Hamiltonian stays on during the pulse
        rabi = seg.angle / seg.duration
        return hermitian_expm(hyperfine_hamiltonian(sys) + rabi * spin, seg.duration)
    raise ValueError(f"unknown segment kind {seg.kind!r}")


def propagate(sys: SystemParams, timeline: Timeline) -> np.ndarray:
    """Ordered product of segment propagators (later segments on the left)."""
    cache: dict[Segment, np.ndarray] = {}
    u = ID4.copy()
    for seg in timeline.segments:
        prop = cache.get(seg)
        if prop is None:
            prop = segment_propagator(sys, seg)
            cache[seg] = prop
        u = prop @ u
    return u


def kraus(u: np.ndarray) -> KrausPair:
    """Kraus pair (<up|U|up>, <down|U|up>) of the electron-reset channel."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got {u.shape}")
    defect = linalg.unitarity_defect(u)
    if defect > UNITARITY_TOL:
        raise ValueError(f"input is not unitary (defect {defect:.3e})")
    return KrausPair(m_up=u[:2, :2].copy(), m_down=u[2:, :2].copy())


def cycle_kraus(sys: SystemParams, seq: SequenceParams) -> KrausPair:
    return kraus(propagate(sys, render_unit(sys, seq)))


def apply_channel(k: KrausPair, rho: np.ndarray) -> np.ndarray:
    return k.m_up @ rho @ k.m_up.conj().T + k.m_down @ rho @ k.m_down.conj().T


def _superop(k: KrausPair) -> np.ndarray:
    """Channel as a 4x4 matrix on row-major vec(rho)."""
    return np.kron(k.m_up, k.m_up.conj()) + np.kron(k.m_down, k.m_down.conj())


def simulate(k: KrausPair, rho0: np.ndarray, n: int, params: dict | None = None) -> PolarizationSeries:
    """Polarization for cycles 1..n; cycle 1 is the freshly prepared state."""
    if n < 1:
        raise ValueError("n must be >= 1")
    transfer = _superop(k)
    x = np.asarray(rho0, dtype=complex).reshape(4).copy()
    values = np.empty(n)
    values[0] = (x[0] - x[3]).real
    for i in range(1, n):
        x = transfer @ x
        values[i] = (x[0] - x[3]).real
    return PolarizationSeries(values=values, params=params or {})


def _tail_lambda(p_history: np.ndarray, moved: bool) -> float:
    """Deficit contraction factor estimated from the polarization tail.

    Ratios of successive polarization increments converge to the same
    limit as (P_s - P^(n+1))/(P_s - P^(n)) but carry no endpoint bias.
    """
    increments = np.diff(np.asarray(p_history))
    ratios = [b / a for a, b in zip(increments[:-1], increments[1:]) if abs(a) > 1e-14]
    ratios = ratios[-50:]
    if not ratios:
        return 0.0 if moved else 1.0
    r = np.asarray(ratios)
    est = float(np.mean(r))
    if len(r) >= 3 and float(np.max(np.abs(r - est))) > 1e-9:
        diffs = np.diff(r)
        if np.any(diffs[:-1] * diffs[1:] < 0):
            # oscillating tail: Aitken delta-squared on the ratio sequence
            denom = r[2:] - 2 * r[1:-1] + r[:-2]
            ok = np.abs(denom) > 1e-12 * np.maximum(np.abs(r[2:]), 1e-30)
            if np.any(ok):
                est = float((r[2:] - (r[2:] - r[1:-1]) ** 2 / np.where(ok, denom, 1.0))[ok][-1])
    return min(max(est, 0.0), 1.0)


def _aitken_vec(x0: np.ndarray, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Component-wise Aitken delta-squared extrapolation of three iterates."""
    d1 = x1 - x0
    d2 = x2 - x1
    denom = d2 - d1
    ok = np.abs(denom) > 1e-300
    return np.where(ok, x2 - d2 ** 2 / np.where(ok, denom, 1.0), x2)


def steady_state(k: KrausPair, tol: float = 1e-10) -> tuple[float, float]:
    """Fixed point of the channel from the mixed state: (P_s, lambda_est).

    Plain fixed-point iteration, with a periodic Aitken jump that kicks in
    once the approach has turned geometric (the contraction can sit close
    to 1 in weakly polarizing regions).  lambda_est is the limiting deficit
    ratio (P_s - P^(n+1))/(P_s - P^(n)) estimated from the iterate tail.
    Raises ConvergenceError after 1e6 iterations.
    """
    if not 0 < tol <= 1e-6:
        raise ValueError(f"tol must be in (0, 1e-6], got {tol}")
    transfer = _superop(k)
    x = np.array([0.5, 0, 0, 0.5], dtype=complex)
    history = [(x[0] - x[3]).real]  # plain-iteration stretch since the last jump
    lam_banked = None
    moved = False
    recent: list[np.ndarray] = [x]
    distance = math.inf
    iterations = 0
    while iterations < MAX_FIXED_POINT_ITERATIONS:
        new = transfer @ x
        iterations += 1
        distance = float(np.max(np.abs(new - x)))
        if distance > tol:
            moved = True
        x = new
        recent.append(x)
        if len(recent) > 6:
            recent.pop(0)
        history.append((x[0] - x[3]).real)
        if distance < tol:
            if len(history) >= 20 or lam_banked is None:
                return history[-1], _tail_lambda(np.asarray(history), moved)
            return history[-1], lam_banked
        if iterations % 256 == 0 and len(recent) == 6:
            # two-level Aitken: a slow tail of two geometric modes (the
            # conjugate coherence pair) is annihilated exactly
            level1 = [_aitken_vec(*recent[i:i + 3]) for i in range(4)]
            level2 = [_aitken_vec(*level1[i:i + 3]) for i in range(2)]
            candidate = np.where(np.isfinite(level2[-1]), level2[-1], x)
            probe = transfer @ candidate
            iterations += 1
            probe_distance = float(np.max(np.abs(probe - candidate)))
            if probe_distance < 0.1 * distance:
                lam_banked = _tail_lambda(np.asarray(history), moved)
                x = probe
                history = [(x[0] - x[3]).real]
                recent = [x]
                if probe_distance < tol:
                    return history[-1], lam_banked
    raise ConvergenceError("channel fixed point not found", MAX_FIXED_POINT_ITERATIONS, distance)


def measured_rate(series: PolarizationSeries, p_s: float, n_r: int, t_cycle: float) -> float:
    """Rate 1/(N_s t_cycle) from the first crossing of 1 - 1/e of P_s.

    t_cycle is the actual duration of one full initialization cycle (all
    n_r repetitions, pulse widths included).  The crossing cycle is found
    by linear interpolation; N_s counts the evolutions elapsed up to it
    (cycle 1 carries the freshly mixed state, so crossing at cycle N means
    N - 1 cycles of wall time), clamped at >= 1.
    """
    if n_r < 1:
        raise ValueError("n_r must be >= 1")
    if abs(p_s) <= 1e-6:
        # nothing to normalize against: the channel does not polarize
        raise BelowThresholdError(0.0)
    fractions = np.asarray(series.values) / p_s
    above = np.nonzero(fractions >= E_FRACTION)[0]
    if len(above) == 0:
        raise BelowThresholdError(float(np.max(fractions, initial=-math.inf)))
    i = int(above[0])
    if i == 0:
        n_s = 1.0
    else:
        lo, hi = fractions[i - 1], fractions[i]
        # entries i-1, i hold cycles i, i+1; the 1-based crossing cycle is i + t
        crossing = i + (E_FRACTION - lo) / (hi - lo)
        n_s = max(crossing - 1.0, 1.0)
    return 1.0 / (n_s * t_cycle)


@dataclass(frozen=True)
class ExactResult:
    p_s: float
    lambda_est: float
    gamma: float | None
    n_s: float | None
    t_cycle: float

    def to_dict(self) -> dict:
        return {
            "p_s": self.p_s,
            "lambda": self.lambda_est,
            "gamma": self.gamma,
            "n_s": self.n_s,
            "t_cycle": self.t_cycle,
        }


def evaluate_exact(sys: SystemParams, seq: SequenceParams, tol: float = 1e-10,
                   use_nominal_duration: bool = False,
                   with_rate: bool = True) -> ExactResult:
    """Steady polarization, contraction factor and rate for one configuration.

    The rate normalization uses the pulse-inclusive cycle duration unless
    use_nominal_duration is set.  gamma is None when the channel does not
    polarize (|P_s| below threshold) or when with_rate is off.
    """
    timeline = render_unit(sys, seq)
    pair = kraus(propagate(sys, timeline))
    p_s, lam = steady_state(pair, tol=tol)
    t_cycle = timeline.nominal_T if use_nominal_duration else timeline.actual_T
    if not with_rate or abs(p_s) <= 1e-6:
        return ExactResult(p_s=p_s, lambda_est=lam, gamma=None, n_s=None, t_cycle=t_cycle)
    if 0.0 < lam < 1.0:
        n = int(8 * max(1.0, -1.0 / math.log(lam))) + 16
    else:
        n = 256
    n = min(max(n, 256), MAX_RATE_CYCLES)
    gamma = None
    while gamma is None:
        series = simulate(pair, mixed_state(), n)
        try:
            gamma = measured_rate(series, p_s, seq.n_r, t_cycle)
        except BelowThresholdError:
            if n >= MAX_RATE_CYCLES:
                return ExactResult(p_s=p_s, lambda_est=lam, gamma=None, n_s=None, t_cycle=t_cycle)
            n = min(n * 4, MAX_RATE_CYCLES)
    return ExactResult(p_s=p_s, lambda_est=lam, gamma=gamma,
                       n_s=1.0 / (gamma * t_cycle), t_cycle=t_cycle)
