"""Empirical classification of consecutive-term ratios on a finite prefix.

All ratios are exact rationals.  The verdict is evidence about the tail of
a finite prefix, never a statement about the limit itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from ..algebra import as_rational, format_rational
from .recurrence import SequencePrefix


class KeplerClass(str, Enum):
    DIVERGENT_LIKE = "DIVERGENT_LIKE"
    CONVERGENT = "CONVERGENT"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class KeplerConfig:
    window: int = 16
    convergence_tolerance: Fraction = Fraction(1, 10**9)
    divergence_threshold: Fraction = Fraction(1000)
    # strictly increasing ratios whose increments do not shrink cannot
    # converge; this catches factorial-type growth below the threshold
    accept_nonshrinking_growth: bool = True

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "convergence_tolerance": format_rational(self.convergence_tolerance),
            "divergence_threshold": format_rational(self.divergence_threshold),
            "accept_nonshrinking_growth": self.accept_nonshrinking_growth,
        }


@dataclass(frozen=True)
class KeplerProfile:
    ratios: tuple[Fraction, ...]
    classification: KeplerClass
    interval: tuple[Fraction, Fraction] | None
    config: KeplerConfig = field(default_factory=KeplerConfig)
    drift: Fraction | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "classification": self.classification.value,
            "interval": None if self.interval is None else [format_rational(x) for x in self.interval],
            "drift": None if self.drift is None else format_rational(self.drift),
            "tail_ratios": [format_rational(r) for r in self.ratios],
            "config": self.config.to_json(),
            "note": self.note,
            "status": "heuristic evidence from a finite prefix",
        }


def kepler_profile(prefix: SequencePrefix, window: int | None = None, config: KeplerConfig | None = None) -> KeplerProfile:
    cfg = config or KeplerConfig()
    if window is not None:
        cfg = KeplerConfig(window, cfg.convergence_tolerance, cfg.divergence_threshold, cfg.accept_nonshrinking_growth)
    w = cfg.window
    if w < 2:
        raise ValueError("window must be >= 2")
    terms = [as_rational(t) for t in prefix.terms]
    if len(terms) < w + 1:
        raise ValueError(f"need at least {w + 1} terms, got {len(terms)}")
    tail = terms[-(w + 1):]
    if any(t == 0 for t in tail[:-1]):
        idx = len(terms) - (w + 1) + tail[:-1].index(0)
        raise ZeroDivisionError(f"zero term at index {idx} in the ratio window")
    ratios = tuple(tail[i + 1] / tail[i] for i in range(w))

    drifts = [abs(ratios[i + 1] - ratios[i]) / abs(ratios[i + 1]) if ratios[i + 1] else None for i in range(w - 1)]
    if all(d is not None for d in drifts):
        drift = max(drifts)
        last = ratios[-1]
        steps = [abs(ratios[i + 1] - ratios[i]) for i in range(w - 1)]
        step = steps[-1]
        # geometric tail: with contraction rho the limit lies within step * rho / (1 - rho) of the
        # last ratio; that bound is tight, so double it
        rhos = [steps[i + 1] / steps[i] for i in range(len(steps) - 4, len(steps) - 1) if steps[i]]
        rho = max(rhos, default=Fraction(0))
        half = 2 * step * max(Fraction(1), rho / (1 - rho)) if rho < 1 else None
        lo, hi = (last - half, last + half) if half is not None else (None, None)
        if drift < cfg.convergence_tolerance and half is not None:
            if min(abs(lo), abs(hi)) > 1 and (lo > 0) == (hi > 0):
                return KeplerProfile(ratios, KeplerClass.CONVERGENT, (lo, hi), cfg, drift)
            return KeplerProfile(
                ratios, KeplerClass.INCONCLUSIVE, (lo, hi), cfg, drift,
                note="ratios settle but the limit does not satisfy |kappa| > 1",
            )
    else:
        drift = None

    mags = [abs(r) for r in ratios]
    increasing = all(mags[i + 1] > mags[i] for i in range(w - 1))
    if increasing:
        if mags[-1] > cfg.divergence_threshold:
            return KeplerProfile(ratios, KeplerClass.DIVERGENT_LIKE, None, cfg, drift, note="ratio exceeds growth threshold")
        incs = [mags[i + 1] - mags[i] for i in range(w - 1)]
        if cfg.accept_nonshrinking_growth and all(incs[i + 1] >= incs[i] for i in range(len(incs) - 1)):
            return KeplerProfile(ratios, KeplerClass.DIVERGENT_LIKE, None, cfg, drift, note="ratio increments do not shrink")
    return KeplerProfile(ratios, KeplerClass.INCONCLUSIVE, None, cfg, drift)
