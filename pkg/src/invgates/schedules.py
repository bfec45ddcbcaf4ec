"""Parameter schedules in normalized time.

A schedule is a real function of ``s = t / tau`` on ``[0, 1]`` carrying its own
analytic derivative with respect to ``s``. Physical-time derivatives are
obtained by dividing by ``tau`` at the call site.

Built-in kinds (``a`` is ``start_value``, ``b`` is ``end_value``):

=============  =====================================================
constant       ``b``
linear         ``a + (b - a) s``
quadratic      ``a + (b - a) s**2``
trigonometric  ``a + (b - a) sin(pi s / 2)**2``
cycloid        ``r arccos(1 - s/r) - sqrt(s (2r - s))``
tabulated      cubic spline through user supplied ``(s, value)`` nodes
=============  =====================================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

__all__ = [
    "KINDS",
    "Schedule",
    "ScheduleError",
    "ScheduleDomainError",
    "InvalidScheduleError",
    "UnboundedDerivativeError",
    "NoSolutionError",
    "evaluate",
    "derivative",
    "cycloid_end_value",
    "solve_cycloid_ratio",
]

KINDS = ("constant", "linear", "quadratic", "trigonometric", "cycloid", "tabulated")

# bracket for the cycloid ratio; r < 0.5 puts arccos outside its domain at s = 1
CYCLOID_BRACKET = (0.5, 10.0)
_S_SLACK = 1e-12


class ScheduleError(ValueError):
    """Base class for schedule failures."""


class ScheduleDomainError(ScheduleError):
    """Normalized time outside ``[0, 1]``."""


class InvalidScheduleError(ScheduleError):
    """Schedule parameters that do not define a valid schedule."""


class UnboundedDerivativeError(ScheduleError):
    """The derivative diverges at the requested point."""


class NoSolutionError(ScheduleError):
    """Root finding found no admissible parameter."""


def _check_s(s):
    arr = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < -_S_SLACK) or np.any(arr > 1.0 + _S_SLACK):
        raise ScheduleDomainError(f"normalized time must lie in [0, 1], got {s!r}")
    return np.clip(arr, 0.0, 1.0)


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _cycloid(s, r):
    return r * np.arccos(1.0 - s / r) - np.sqrt(s * (2.0 * r - s))


def cycloid_end_value(r: float) -> float:
    """Value of the cycloid schedule at ``s = 1`` for ratio ``r``."""
    if not r >= 0.5:
        raise InvalidScheduleError(f"cycloid ratio must satisfy r >= 0.5, got {r}")
    return float(_cycloid(1.0, r))


def solve_cycloid_ratio(target_end: float) -> float:
    """Find the cycloid ratio ``r`` whose arc ends at ``target_end``.

    The end value decreases monotonically from ``pi/2`` at ``r = 0.5``, so a
    bracketed root search on ``[0.5, 10]`` is used.

    Raises
    ------
    NoSolutionError
        If ``target_end`` is not attained for any ``r`` in the bracket.
    """
    lo, hi = CYCLOID_BRACKET
    f_lo = cycloid_end_value(lo) - target_end
    f_hi = cycloid_end_value(hi) - target_end
    if f_lo == 0.0:
        return lo
    if f_lo * f_hi > 0.0:
        raise NoSolutionError(
            f"no cycloid ratio in [{lo}, {hi}] reaches end value {target_end!r}; "
            f"attainable range is [{cycloid_end_value(hi):.6g}, {math.pi / 2:.6g}]"
        )
    return float(brentq(lambda r: cycloid_end_value(r) - target_end, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))


@dataclass(frozen=True)
class Schedule:
    """Immutable real schedule on normalized time ``[0, 1]``.

    Prefer the named constructors (:meth:`linear`, :meth:`cycloid`, ...) over
    calling the dataclass directly.
    """

    kind: str
    start_value: float = 0.0
    end_value: float = 0.0
    r: float | None = None
    nodes: tuple[float, ...] | None = None
    values: tuple[float, ...] | None = None
    _spline: Any = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidScheduleError(f"unknown schedule kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "constant" and self.start_value != self.end_value:
            raise InvalidScheduleError("constant schedule needs start_value == end_value")
        if self.kind == "cycloid":
            if self.r is None or not self.r >= 0.5:
                raise InvalidScheduleError(f"cycloid ratio must satisfy r >= 0.5, got {self.r}")
            if self.start_value != 0.0:
                raise InvalidScheduleError("cycloid schedule always starts at 0")
            end = cycloid_end_value(self.r)
            if abs(end - self.end_value) > 1e-9:
                raise InvalidScheduleError(
                    f"cycloid with r={self.r} ends at {end!r}, not at declared {self.end_value!r}"
                )
        if self.kind == "tabulated":
            if self.nodes is None or self.values is None or len(self.nodes) != len(self.values):
                raise InvalidScheduleError("tabulated schedule needs equally long nodes and values")
            x = np.asarray(self.nodes, dtype=float)
            y = np.asarray(self.values, dtype=float)
            if len(x) < 2 or x[0] != 0.0 or x[-1] != 1.0 or np.any(np.diff(x) <= 0):
                raise InvalidScheduleError("tabulated nodes must increase strictly from 0 to 1")
            if y[0] != self.start_value or y[-1] != self.end_value:
                raise InvalidScheduleError("tabulated start/end values must match the first/last node values")
            object.__setattr__(self, "_spline", CubicSpline(x, y))

    # construction helpers

    @classmethod
    def constant(cls, value: float) -> Schedule:
        return cls("constant", float(value), float(value))

    @classmethod
    def linear(cls, end_value: float, start_value: float = 0.0) -> Schedule:
        return cls("linear", float(start_value), float(end_value))

    @classmethod
    def quadratic(cls, end_value: float, start_value: float = 0.0) -> Schedule:
        return cls("quadratic", float(start_value), float(end_value))

    @classmethod
    def trigonometric(cls, end_value: float, start_value: float = 0.0) -> Schedule:
        return cls("trigonometric", float(start_value), float(end_value))

    @classmethod
    def cycloid(cls, r: float | None = None, end_value: float | None = None) -> Schedule:
        """Cycloid arc, given either its ratio ``r`` or the end value to hit."""
        if r is None:
            if end_value is None:
                raise InvalidScheduleError("cycloid needs r or end_value")
            r = solve_cycloid_ratio(end_value)
        return cls("cycloid", 0.0, cycloid_end_value(r), r=float(r))

    @classmethod
    def tabulated(cls, nodes, values) -> Schedule:
        nodes = tuple(float(v) for v in nodes)
        values = tuple(float(v) for v in values)
        if not values:
            raise InvalidScheduleError("tabulated schedule needs at least two nodes")
        return cls("tabulated", values[0], values[-1], nodes=nodes, values=values)

    @classmethod
    def from_config(cls, config: Mapping[str, Any] | str, end_value: float | None = None) -> Schedule:
        """Build a schedule from a JSON-style mapping.

        ``{"kind": "cycloid", "end_value": 0.785}`` or ``{"kind": "cycloid", "r": 0.69}``,
        ``{"kind": "tabulated", "nodes": [...], "values": [...]}``. A bare kind
        string is accepted too. ``end_value`` supplies the default end point
        when the mapping leaves it out.
        """
        if isinstance(config, str):
            config = {"kind": config}
        cfg = dict(config)
        kind = cfg.pop("kind", None)
        if kind not in KINDS:
            raise InvalidScheduleError(f"unknown schedule kind {kind!r}; expected one of {KINDS}")
        end = cfg.pop("end_value", end_value)
        start = cfg.pop("start_value", None)
        r = cfg.pop("r", None)
        nodes = cfg.pop("nodes", None)
        values = cfg.pop("values", None)
        if cfg:
            raise InvalidScheduleError(f"unexpected schedule keys {sorted(cfg)}")
        if kind == "tabulated":
            return cls.tabulated(nodes, values)
        if kind == "cycloid":
            if r is not None:
                sched = cls.cycloid(r=float(r))
                if end is not None and abs(sched.end_value - float(end)) > 1e-9:
                    raise InvalidScheduleError(f"cycloid r={r} ends at {sched.end_value!r}, not {end!r}")
                return sched
            return cls.cycloid(end_value=None if end is None else float(end))
        if end is None:
            raise InvalidScheduleError(f"{kind} schedule needs an end_value")
        if kind == "constant":
            if start is not None and float(start) != float(end):
                raise InvalidScheduleError("constant schedule needs start_value == end_value")
            return cls.constant(float(end))
        return cls(kind, 0.0 if start is None else float(start), float(end))

    def to_config(self) -> dict[str, Any]:
        cfg: dict[str, Any] = {"kind": self.kind, "start_value": self.start_value, "end_value": self.end_value}
        if self.kind == "cycloid":
            cfg["r"] = self.r
        if self.kind == "tabulated":
            cfg["nodes"] = list(self.nodes)
            cfg["values"] = list(self.values)
        return cfg

    # evaluation

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    def value(self, s):
        """Schedule value at normalized time ``s`` (scalar or array)."""
        x = _check_s(s)
        a, b = self.start_value, self.end_value
        k = self.kind
        if k == "constant":
            out = np.full_like(x, b)
        elif k == "linear":
            out = a + (b - a) * x
        elif k == "quadratic":
            out = a + (b - a) * x**2
        elif k == "trigonometric":
            out = a + (b - a) * np.sin(np.pi * x / 2) ** 2
        elif k == "cycloid":
            out = _cycloid(x, self.r)
        else:
            out = self._spline(x)
        return _out(out, s)

    def derivative(self, s):
        """Analytic ``d value / ds``.

        Raises
        ------
        UnboundedDerivativeError
            For the limiting cycloid ``r = 0.5`` at ``s = 1`` where the slope is infinite.
        """
        x = _check_s(s)
        a, b = self.start_value, self.end_value
        k = self.kind
        if k == "constant":
            out = np.zeros_like(x)
        elif k == "linear":
            out = np.full_like(x, b - a)
        elif k == "quadratic":
            out = 2.0 * (b - a) * x
        elif k == "trigonometric":
            out = (b - a) * (np.pi / 2) * np.sin(np.pi * x)
        elif k == "cycloid":
            # r arccos(1 - s/r) - sqrt(s(2r - s)) differentiates to sqrt(s / (2r - s))
            denom = 2.0 * self.r - x
            if np.any(denom <= 0.0):
                raise UnboundedDerivativeError(
                    f"cycloid derivative diverges at s = {2.0 * self.r} (r = {self.r})"
                )
            out = np.sqrt(x / denom)
        else:
            out = self._spline(x, 1)
        return _out(out, s)

    def __call__(self, s):
        return self.value(s)


def evaluate(schedule: Schedule, s):
    return schedule.value(s)


def derivative(schedule: Schedule, s):
    return schedule.derivative(s)
