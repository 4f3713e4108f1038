"""Finite lotteries and the rank-dependent evaluation functional.

A lottery with payoffs x_1 <= ... <= x_n and probabilities p_1, ..., p_n is
evaluated as

    sum_i ( h(P_i) - h(P_{i-1}) ) * U(x_i),      P_i = p_1 + ... + p_i,

i.e. decision weights are differences of the distorted cumulative
distribution over the rank-sorted support.  With identity h this is
expected utility; with linear U it is the dual-theory functional.  The
equivalent decumulative form distorts survival probabilities through
hbar(p) = 1 - h(1 - p) instead and agrees up to rounding.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParseError
from .funclib import UtilityFn, WeightingFn

# Probabilities must sum to 1 this tightly; we refuse to renormalize since
# silent renormalization hides caller bugs.
PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Lottery:
    """An n-state risk in canonical form.

    Construction sorts states by payoff ascending and merges exactly equal
    payoffs by summing their probabilities, so evaluation is independent of
    the input state order.  Probabilities must lie in (0, 1] and sum to 1
    within PROB_SUM_TOL.
    """

    states: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pairs = []
        total = 0.0
        for raw in self.states:
            x, p = float(raw[0]), float(raw[1])
            if not (math.isfinite(x) and math.isfinite(p)):
                raise DomainError("non-finite lottery state")
            if not 0.0 < p <= 1.0:
                raise DomainError(f"state probability {p:g} outside (0, 1]")
            pairs.append((x, p))
            total += p
        if not pairs:
            raise DomainError("lottery needs at least one state")
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise DomainError(
                f"probabilities sum to {total:.17g}, not 1 within {PROB_SUM_TOL:g}"
            )
        pairs.sort(key=lambda s: s[0])
        merged: list[list[float]] = []
        for x, p in pairs:
            if merged and merged[-1][0] == x:
                merged[-1][1] += p
            else:
                merged.append([x, p])
        object.__setattr__(self, "states", tuple((x, p) for x, p in merged))

    @property
    def payoffs(self) -> np.ndarray:
        return np.array([x for x, _ in self.states])

    @property
    def probs(self) -> np.ndarray:
        return np.array([p for _, p in self.states])

    @property
    def n_states(self) -> int:
        return len(self.states)

    # ----- serialization -------------------------------------------------

    @classmethod
    def from_json(cls, text_or_obj) -> "Lottery":
        """Parse a JSON array of {"x": payoff, "p": probability} objects."""
        if isinstance(text_or_obj, str):
            try:
                obj = json.loads(text_or_obj)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid lottery JSON: {exc}") from None
        else:
            obj = text_or_obj
        if not isinstance(obj, list):
            raise ParseError("lottery JSON must be an array of {x, p} objects")
        states = []
        for i, entry in enumerate(obj):
            if not isinstance(entry, dict) or "x" not in entry or "p" not in entry:
                raise ParseError(f"lottery JSON entry {i} is missing 'x' or 'p'")
            try:
                states.append((float(entry["x"]), float(entry["p"])))
            except (TypeError, ValueError):
                raise ParseError(f"lottery JSON entry {i} has non-numeric fields") from None
        return cls(tuple(states))

    @classmethod
    def from_csv(cls, text: str) -> "Lottery":
        """Parse CSV with header columns x,p (extra columns rejected)."""
        reader = csv.reader(io.StringIO(text))
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
        if not rows:
            raise ParseError("empty lottery CSV")
        header = [cell.strip().lower() for cell in rows[0]]
        if header != ["x", "p"]:
            raise ParseError(f"lottery CSV header must be exactly 'x,p', got {rows[0]}")
        states = []
        for lineno, row in enumerate(rows[1:], start=2):
            if len(row) != 2:
                raise ParseError(f"lottery CSV line {lineno}: expected 2 fields, got {len(row)}")
            try:
                states.append((float(row[0]), float(row[1])))
            except ValueError as exc:
                raise ParseError(f"lottery CSV line {lineno}: {exc}") from None
        return cls(tuple(states))

    def to_jsonable(self) -> list[dict]:
        return [{"x": x, "p": p} for x, p in self.states]


@dataclass(frozen=True)
class DecisionMaker:
    """A rank-dependent agent: a utility function paired with a weighting
    function.  Identity weighting gives expected utility; linear utility
    gives the dual theory."""

    utility: UtilityFn
    weighting: WeightingFn
    label: str = ""

    def __post_init__(self):
        if not self.label:
            object.__setattr__(
                self, "label", f"u={self.utility.spec} h={self.weighting.spec}"
            )


def _decision_weights_cumulative(h: WeightingFn, probs: np.ndarray) -> np.ndarray:
    cums = np.minimum(np.cumsum(probs), 1.0)
    cums[-1] = 1.0  # probabilities sum to 1 within tolerance by construction
    grid = np.concatenate(([0.0], cums))
    hv = h.value(grid)
    return np.diff(hv)


def evaluate_rdu(dm: DecisionMaker, lottery: Lottery) -> float:
    """Rank-dependent value: decision-weighted sum of utilities over the
    sorted support."""
    utils = dm.utility.value(lottery.payoffs)
    weights = _decision_weights_cumulative(dm.weighting, lottery.probs)
    return float(np.dot(weights, utils))


def evaluate_dual_form(dm: DecisionMaker, lottery: Lottery) -> float:
    """Same functional computed by distorting decumulative probabilities
    through hbar(p) = 1 - h(1 - p); agrees with evaluate_rdu to rounding."""
    probs = lottery.probs
    cums = np.minimum(np.cumsum(probs), 1.0)
    cums[-1] = 1.0
    decum = 1.0 - np.concatenate(([0.0], cums))  # survival probabilities
    hbar = dm.weighting.dual(decum)
    weights = hbar[:-1] - hbar[1:]
    utils = dm.utility.value(lottery.payoffs)
    return float(np.dot(weights, utils))


def certainty_equivalent(dm: DecisionMaker, lottery: Lottery) -> float:
    """Payoff c with U(c) equal to the rank-dependent value."""
    return dm.utility.inverse(evaluate_rdu(dm, lottery))
