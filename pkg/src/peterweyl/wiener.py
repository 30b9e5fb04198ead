"""Truncated weighted averages that detect atoms of a measure.

For a finite label set F with weighted cardinality |F|_w, the three averages
are (writing mu_hat(a) = fourier_matrix(mu, a), d_a = dim(a)):

- atom:   (1/|F|_w) sum_a d_a trace(mu_hat(a) @ U^a(y)^H)   -> mu{y}
- energy: (1/|F|_w) sum_a d_a ||mu_hat(a)||_F^2             -> sum_x mu{x}^2
- char:   (1/|F|_w) sum_a d_a trace(mu_hat(a))              -> mu{e}

along any right Folner schedule.  The trace form is the double sum over
matrix entries, one matrix product per label, basis independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .fusion import FolnerSchedule, weighted_cardinality
from .measures import MeasureSpec, atom_weight_at, fourier_matrix

KINDS = ("atom", "energy", "char")


def _term(kind: str, mu: MeasureSpec, label, y=None) -> complex:
    d = mu.model.ring.dim(label)
    coeff = fourier_matrix(mu, label)
    if kind == "atom":
        u = mu.model.irrep_matrix(label, y)
        return d * complex(np.trace(coeff @ u.conj().T))
    if kind == "energy":
        return complex(d * float(np.linalg.norm(coeff) ** 2))
    if kind == "char":
        return d * complex(np.trace(coeff))
    raise InvalidInputError(f"unknown average kind {kind!r}; expected one of {KINDS}")


def _average(kind: str, mu: MeasureSpec, F, y=None, cache: dict | None = None) -> complex:
    ring = mu.model.ring
    F = frozenset(ring.check_label(a) for a in F)
    if not F:
        raise InvalidInputError("F must be nonempty")
    terms = []
    for label in ring.sorted_labels(F):
        if cache is not None and label in cache:
            terms.append(cache[label])
        else:
            t = _term(kind, mu, label, y)
            if cache is not None:
                cache[label] = t
            terms.append(t)
    return complex(np.sum(np.asarray(terms, dtype=complex))) / weighted_cardinality(F, ring)


def atom_average(mu: MeasureSpec, y, F) -> complex:
    """Truncated average localizing the measure at y; converges to mu{y}."""
    return _average("atom", mu, F, y=y)


def energy_average(mu: MeasureSpec, F) -> float:
    """Truncated Fourier energy; converges to the sum of squared atom weights.

    Real and nonnegative by construction (a weighted mean of squared
    Frobenius norms); any imaginary residue would exceed 1e-12 only through
    a bug, so it is asserted away rather than tolerated.
    """
    value = _average("energy", mu, F)
    assert abs(value.imag) <= 1e-12
    return value.real


def char_average(mu: MeasureSpec, F) -> complex:
    """Truncated character average; converges to the mass of the identity atom."""
    return _average("char", mu, F)


@dataclass
class AverageSeries:
    """Per-step values of one average along a schedule."""

    kind: str
    schedule: FolnerSchedule
    values: np.ndarray
    weighted_cardinalities: np.ndarray
    target: float | None = None

    def __post_init__(self):
        if len(self.values) != len(self.schedule):
            raise InvalidInputError("values and schedule lengths differ")

    @property
    def final(self) -> complex:
        return complex(self.values[-1])

    def real_values(self) -> np.ndarray:
        return np.real(self.values)


def run_series(kind: str, mu: MeasureSpec, schedule: FolnerSchedule, at=None,
               with_target: bool = False) -> AverageSeries:
    """Evaluate the chosen average at every schedule step.

    Each distinct label's term is computed once.  Nested schedules (every
    step containing the previous) update a running sum with the new labels
    of each step, so a full series costs one term per distinct label plus
    bookkeeping; arbitrary schedules fall back to a per-step reduction in
    ring order with a shared term cache.  With `with_target` the limit
    predicted by the stored atoms (an oracle, unavailable to the averaging
    itself) is attached: mu{y} for atom, sum of squared weights for energy,
    mu{e} for char.
    """
    if kind not in KINDS:
        raise InvalidInputError(f"unknown average kind {kind!r}; expected one of {KINDS}")
    if kind == "atom" and at is None:
        raise InvalidInputError("atom averages need an evaluation point")
    ring = mu.model.ring
    for label in set().union(*schedule.sets):
        ring.check_label(label)
    sets = schedule.sets
    values = []
    wcards = []
    if all(sets[i - 1] <= sets[i] for i in range(1, len(sets))):
        running = 0j
        wrun = 0
        prev: frozenset = frozenset()
        for F in sets:
            new = F - prev
            if new:
                terms = [_term(kind, mu, label, at) for label in ring.sorted_labels(new)]
                running += complex(np.sum(np.asarray(terms, dtype=complex)))
                wrun += weighted_cardinality(new, ring)
            prev = F
            values.append(running / wrun)
            wcards.append(wrun)
    else:
        cache: dict = {}
        for F in sets:
            values.append(_average(kind, mu, F, y=at, cache=cache))
            wcards.append(weighted_cardinality(F, ring))
    values = np.asarray(values, dtype=complex)
    wcards = np.asarray(wcards, dtype=np.int64)
    target = None
    if with_target:
        if kind == "atom":
            target = atom_weight_at(mu, at)
        elif kind == "energy":
            target = sum(w * w for _, w in mu.atoms)
        else:
            target = atom_weight_at(mu, mu.model.identity())
    return AverageSeries(kind, schedule, values, wcards, target)


@dataclass
class ContinuityVerdict:
    """Outcome of the atomic/continuous dichotomy test.

    verdict is "continuous", "atomic" or "inconclusive"; for "atomic" the
    estimate is the stabilized energy value, approximating the sum of
    squared atom weights.  The test is a finite-sample heuristic: no
    convergence rate is available, hence the explicit tail and tolerance
    and the honest third outcome.
    """

    verdict: str
    atom_mass_estimate: float | None
    series: AverageSeries

    def __str__(self):
        if self.verdict == "atomic":
            return f"atomic(mass~{self.atom_mass_estimate:.6g})"
        return self.verdict


def continuity_test(mu: MeasureSpec, schedule: FolnerSchedule, tol: float,
                    tail: int) -> ContinuityVerdict:
    """Classify mu as continuous or atomic from the energy series tail.

    Continuous: all of the last `tail` values are below tol and the tail is
    nonincreasing within 2*tol.  Atomic: the tail stabilizes within tol; the
    estimate is the last value.  Anything else is inconclusive.
    """
    if tail < 2:
        raise InvalidInputError("tail must be >= 2")
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    if len(schedule) < tail:
        raise InvalidInputError(f"schedule has {len(schedule)} steps, need >= {tail}")
    series = run_series("energy", mu, schedule)
    window = series.real_values()[-tail:]
    nonincreasing = bool(np.all(window[1:] <= window[:-1] + 2 * tol))
    if np.all(window < tol) and nonincreasing:
        return ContinuityVerdict("continuous", None, series)
    if float(np.max(window) - np.min(window)) <= tol:
        return ContinuityVerdict("atomic", float(window[-1]), series)
    return ContinuityVerdict("inconclusive", None, series)
