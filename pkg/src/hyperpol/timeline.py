"""Rendering of the protocol into piecewise-constant Hamiltonian segments.

One initialization cycle is n_r repetitions of

    DDX, wait t_s, DDY, wait t_w, DDX, wait t_s, DDY, wait t_c

where DDX is a half-pi(+y) pulse, n_p repeats of [tau/2, pi(-x), tau/2],
and a closing half-pi(+y); DDY is the same with pi(+y) pulses sandwiched
by half-pi(+x).  Free intervals inside the DD blocks evolve under the full
hyperfine Hamiltonian; the waits are hyperfine-free nuclear precession.

Finite pulses are rectangular drives with the system Hamiltonian kept on.
Each pi pulse is centered inside its tau cell (free halves shrink to
(tau - tau_pi)/2, so the pulse train's period stays tau regardless of the
pulse width), while the half-pi edges extend the block by tau_pi/2 each
and all waits keep their nominal durations.  With this layout the
resonance-restoring interval tau_ideal - tau_pi/n_p makes every
inter-block phase equal its ideal-pulse value: the 4 n_p shortened cells
per repetition give back exactly the 8 half-pi insertions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import FINITE, SequenceParams, SystemParams

FREE_HYPERFINE = "free_hyperfine"
FREE_NUCLEAR = "free_nuclear"
PULSE = "pulse"

PI = math.pi
HALF_PI = math.pi / 2


@dataclass(frozen=True)
class Segment:
    kind: str
    duration: float
    axis: str | None = None   # pulse only: one of +x, -x, +y, -y
    angle: float | None = None  # pulse only: pi or pi/2


@dataclass(frozen=True)
class Timeline:
    segments: tuple[Segment, ...]
    nominal_T: float
    actual_T: float


def _pulse(axis: str, angle: float, seq: SequenceParams) -> Segment:
    if seq.pulse_model.kind == FINITE:
        duration = angle / seq.pulse_model.rabi
    else:
        duration = 0.0
    return Segment(PULSE, duration, axis=axis, angle=angle)


def _dd_block(pi_axis: str, half_axis: str, seq: SequenceParams) -> list[Segment]:
    if seq.pulse_model.kind == FINITE:
        half_free = (seq.tau - seq.pulse_model.tau_pi) / 2
    else:
        half_free = seq.tau / 2
    half = _pulse(half_axis, HALF_PI, seq)
    segments = [half]
    for _ in range(seq.n_p):
        segments.append(Segment(FREE_HYPERFINE, half_free))
        segments.append(_pulse(pi_axis, PI, seq))
        segments.append(Segment(FREE_HYPERFINE, half_free))
    segments.append(half)
    return segments


def render_unit(sys: SystemParams, seq: SequenceParams) -> Timeline:
    """Timeline for one initialization cycle (n_r protocol repetitions)."""
    problems = seq.violations()
    if seq.pulse_model.kind == FINITE and seq.tau < seq.pulse_model.tau_pi:
        problems.append(f"tau {seq.tau} shorter than the pi-pulse duration "
                        f"{seq.pulse_model.tau_pi}")
    if problems:
        raise ValueError("invalid sequence: " + "; ".join(problems))

    ddx = _dd_block("-x", "+y", seq)
    ddy = _dd_block("+y", "+x", seq)
    repetition = (
        ddx
        + [Segment(FREE_NUCLEAR, seq.t_s)]
        + ddy
        + [Segment(FREE_NUCLEAR, seq.t_w)]
        + ddx
        + [Segment(FREE_NUCLEAR, seq.t_s)]
        + ddy
        + [Segment(FREE_NUCLEAR, seq.t_c)]
    )
    segments = tuple(repetition * seq.n_r)

    nominal_rep = 2 * seq.t_s + seq.t_w + 4 * seq.n_p * seq.tau + seq.t_c
    nominal_T = seq.n_r * nominal_rep
    if seq.pulse_model.kind == FINITE:
        # pi pulses live inside their cells; only the half-pi edges add time
        pulse_time = seq.n_r * 8 * (seq.pulse_model.tau_pi / 2)
    else:
        pulse_time = 0.0
    return Timeline(segments, nominal_T=nominal_T, actual_T=nominal_T + pulse_time)


def total_duration(timeline: Timeline) -> float:
    """Sum of segment durations; equals actual_T."""
    return float(sum(seg.duration for seg in timeline.segments))
