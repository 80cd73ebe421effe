"""Strictly concave traffic flux models and flux-derived quantities.

A flux H maps density p in [0, rmax] to a flow rate, vanishes at both
endpoints, and is strictly concave with a unique maximizer p_crit where
it attains the capacity (the largest achievable flow).  Two concrete
kinds are provided:

* ``QuadraticFlux``: H(p) = 4 * hmax * p * (rmax - p) / rmax**2, every
  derived quantity in closed form.
* ``PiecewiseLinearFlux``: a concave polygon through user breakpoints,
  every derived quantity by vertex enumeration or interpolation on the
  monotone branches.  Offered as an engineering extension; convergence
  rate guarantees are only claimed for the quadratic kind.

On top of pointwise evaluation the module computes

* ``roots(a)``: the smallest/largest densities carrying flow level a,
* ``demand`` / ``supply``: the nondecreasing / nonincreasing envelopes
  of H (smallest monotone majorants), the building blocks of every
  interface flux in the solvers,
* ``truncated_conjugate(a, v)``: sup over y in [0, rmax] of
  -v*y + min(H(y), a), the concave conjugate of H truncated at level a,
  which drives the closed-form wedge solutions in ``hj_solver``,
* canonical initial data (wedges and steps) built from the roots.

Densities are validated with an absolute tolerance of 1e-9 at the
domain boundaries and clamped on ingestion, so solver round-off never
trips spurious domain errors.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np

from .errors import DomainError, LevelError

if TYPE_CHECKING:
    from .junction import JunctionModel

ArrayLike = Union[float, np.ndarray]

#: Absolute slack allowed outside [0, rmax] (resp. [0, capacity]) before
#: a DomainError (resp. LevelError) is raised; values inside the slack
#: are clamped.
BOUNDARY_TOL = 1e-9


def _as_input(p) -> tuple[np.ndarray, bool]:
    arr = np.asarray(p, dtype=float)
    return arr, arr.ndim == 0


def _as_output(arr: np.ndarray, scalar: bool) -> ArrayLike:
    return float(arr) if scalar else arr


class ConcaveFlux:
    """Base interface for a strictly concave flux on [0, rmax].

    Subclasses provide ``eval``, ``derivative``, ``inv_derivative``,
    ``roots`` and the candidate set for conjugate maximization; the
    envelopes and the truncated conjugate are generic.
    """

    rmax: float

    # -- subclass surface -------------------------------------------------

    @property
    def p_crit(self) -> float:
        """Density of maximum flow."""
        raise NotImplementedError

    @property
    def capacity(self) -> float:
        """Maximum flow max H = H(p_crit)."""
        raise NotImplementedError

    @property
    def lipschitz_bound(self) -> float:
        """max |H'|, the fastest wave speed the flux can produce."""
        raise NotImplementedError

    @property
    def equality_tol(self) -> float:
        """Absolute tolerance for 'this flow equals that flow' tests."""
        raise NotImplementedError

    def eval(self, p: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def derivative(self, p: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def inv_derivative(self, v: ArrayLike) -> ArrayLike:
        """A density whose subdifferential of H contains slope v.

        For v above H'(0) returns 0, below H'(rmax) returns rmax; used to
        evaluate rarefaction fans.
        """
        raise NotImplementedError

    def roots(self, a: float) -> tuple[float, float]:
        """Smallest and largest densities with H(p) = a, a in [0, capacity]."""
        raise NotImplementedError

    def _conjugate_candidates(self, a: float, v: float) -> np.ndarray:
        """Finite candidate set containing the maximizer of -v*y + min(H(y), a)."""
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError

    # -- generic operations -----------------------------------------------

    def clamp(self, p: ArrayLike) -> ArrayLike:
        """Validate p against [0, rmax] (tolerance BOUNDARY_TOL) and clamp."""
        arr, scalar = _as_input(p)
        if not np.all(np.isfinite(arr)):
            raise DomainError("density must be finite")
        if np.any(arr < -BOUNDARY_TOL) or np.any(arr > self.rmax + BOUNDARY_TOL):
            bad = arr if scalar else arr[(arr < -BOUNDARY_TOL) | (arr > self.rmax + BOUNDARY_TOL)].flat[0]
            raise DomainError(f"density {float(bad)} outside [0, {self.rmax}]")
        return _as_output(np.clip(arr, 0.0, self.rmax), scalar)

    def clamp_level(self, a: float) -> float:
        """Validate a flow level against [0, capacity] and clamp."""
        a = float(a)
        cap = self.capacity
        if a < -BOUNDARY_TOL:
            raise DomainError(f"flow level {a} is negative")
        if a > cap * (1.0 + 1e-12) + BOUNDARY_TOL:
            raise LevelError(f"flow level {a} exceeds capacity {cap}")
        return min(max(a, 0.0), cap)

    def demand(self, p: ArrayLike) -> ArrayLike:
        """Nondecreasing envelope of H: H(p) up to p_crit, capacity beyond."""
        arr, scalar = _as_input(self.clamp(p))
        return _as_output(self.eval(np.minimum(arr, self.p_crit)), scalar)

    def supply(self, p: ArrayLike) -> ArrayLike:
        """Nonincreasing envelope of H: capacity up to p_crit, H(p) beyond."""
        arr, scalar = _as_input(self.clamp(p))
        return _as_output(self.eval(np.maximum(arr, self.p_crit)), scalar)

    def truncated_conjugate_argmax(self, a: float, v: float) -> tuple[float, float]:
        """(value, maximizer) of y -> -v*y + min(H(y), a) over [0, rmax].

        The objective is concave, so its maximum sits at a boundary point,
        a kink (plateau edge or breakpoint), or an interior stationary
        point; the candidate set enumerates exactly those.
        """
        a = self.clamp_level(a)
        v = float(v)
        ys = self._conjugate_candidates(a, v)
        vals = -v * ys + np.minimum(self.eval(ys), a)
        i = int(np.argmax(vals))
        return float(vals[i]), float(ys[i])

    def truncated_conjugate(self, a: float, v: float) -> float:
        """sup over y in [0, rmax] of -v*y + min(H(y), a)."""
        return self.truncated_conjugate_argmax(a, v)[0]


@dataclass(frozen=True)
class QuadraticFlux(ConcaveFlux):
    """H(p) = 4 * hmax * p * (rmax - p) / rmax**2 on [0, rmax]."""

    rmax: float
    hmax: float

    def __post_init__(self):
        if not (self.rmax > 0.0 and math.isfinite(self.rmax)):
            raise DomainError(f"rmax must be positive, got {self.rmax}")
        if not (self.hmax > 0.0 and math.isfinite(self.hmax)):
            raise DomainError(f"hmax must be positive, got {self.hmax}")

    @property
    def _coef(self) -> float:
        return 4.0 * self.hmax / (self.rmax * self.rmax)

    @property
    def p_crit(self) -> float:
        return 0.5 * self.rmax

    @property
    def capacity(self) -> float:
        return self.hmax

    @property
    def lipschitz_bound(self) -> float:
        return 4.0 * self.hmax / self.rmax

    @property
    def equality_tol(self) -> float:
        return 1e-12

    def eval(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _as_input(self.clamp(p))
        return _as_output(self._coef * arr * (self.rmax - arr), scalar)

    def derivative(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _as_input(self.clamp(p))
        return _as_output(self._coef * (self.rmax - 2.0 * arr), scalar)

    def inv_derivative(self, v: ArrayLike) -> ArrayLike:
        arr, scalar = _as_input(v)
        p = 0.5 * (self.rmax - arr / self._coef)
        return _as_output(np.clip(p, 0.0, self.rmax), scalar)

    def roots(self, a: float) -> tuple[float, float]:
        a = self.clamp_level(a)
        # stable form: p = rmax/2 * (1 -/+ sqrt(1 - a/hmax))
        s = math.sqrt(max(1.0 - a / self.hmax, 0.0))
        lo = 0.5 * self.rmax * (1.0 - s)
        hi = 0.5 * self.rmax * (1.0 + s)
        return lo, hi

    def _conjugate_candidates(self, a: float, v: float) -> np.ndarray:
        lo, hi = self.roots(a)
        stat = float(np.clip(0.5 * (self.rmax - v / self._coef), 0.0, self.rmax))
        return np.array([0.0, self.rmax, lo, hi, stat])

    def to_config(self) -> dict:
        return {"kind": "quadratic", "rmax": self.rmax, "hmax": self.hmax}


@dataclass(frozen=True)
class PiecewiseLinearFlux(ConcaveFlux):
    """Concave polygon through ``points``; first point (0, 0), last (rmax, 0).

    Chord slopes must be strictly decreasing and nowhere zero, which
    forces positivity inside the interval and a unique vertex of maximum
    flow.
    """

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(x), float(h)) for (x, h) in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 3:
            raise DomainError("piecewise linear flux needs at least 3 points")
        px = np.array([x for x, _ in pts])
        hy = np.array([h for _, h in pts])
        if px[0] != 0.0 or hy[0] != 0.0:
            raise DomainError("first breakpoint must be (0, 0)")
        if hy[-1] != 0.0 or px[-1] <= 0.0:
            raise DomainError("last breakpoint must be (rmax, 0) with rmax > 0")
        if np.any(np.diff(px) <= 0.0):
            raise DomainError("breakpoint densities must strictly increase")
        slopes = np.diff(hy) / np.diff(px)
        if np.any(np.diff(slopes) >= 0.0):
            raise DomainError("chord slopes must strictly decrease (strict concavity)")
        if np.any(slopes == 0.0):
            raise DomainError("zero-slope segment breaks the unique-maximizer requirement")
        object.__setattr__(self, "_px", px)
        object.__setattr__(self, "_hy", hy)
        object.__setattr__(self, "_slopes", slopes)
        object.__setattr__(self, "_ivert", int(np.argmax(hy)))

    @property
    def rmax(self) -> float:  # type: ignore[override]
        return float(self._px[-1])

    @property
    def p_crit(self) -> float:
        return float(self._px[self._ivert])

    @property
    def capacity(self) -> float:
        return float(self._hy[self._ivert])

    @property
    def lipschitz_bound(self) -> float:
        return float(np.max(np.abs(self._slopes)))

    @property
    def equality_tol(self) -> float:
        return 1e-9

    def eval(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _as_input(self.clamp(p))
        return _as_output(np.interp(arr, self._px, self._hy), scalar)

    def derivative(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _as_input(self.clamp(p))
        idx = np.clip(np.searchsorted(self._px, arr, side="right") - 1, 0, len(self._slopes) - 1)
        return _as_output(self._slopes[idx], scalar)

    def inv_derivative(self, v: ArrayLike) -> ArrayLike:
        arr, scalar = _as_input(v)
        # breakpoint whose subdifferential [slope_k, slope_{k-1}] contains v
        idx = np.searchsorted(-self._slopes, -arr, side="left")
        return _as_output(self._px[idx], scalar)

    def roots(self, a: float) -> tuple[float, float]:
        a = self.clamp_level(a)
        iv = self._ivert
        lo = float(np.interp(a, self._hy[: iv + 1], self._px[: iv + 1]))
        hi = float(np.interp(a, self._hy[iv:][::-1], self._px[iv:][::-1]))
        return lo, hi

    def _conjugate_candidates(self, a: float, v: float) -> np.ndarray:
        lo, hi = self.roots(a)
        return np.concatenate([self._px, [lo, hi]])

    def to_config(self) -> dict:
        return {"kind": "piecewise_linear", "points": [list(p) for p in self.points]}


def flux_from_config(block: dict, path: str = "flux") -> ConcaveFlux:
    """Build a flux from its config dictionary; see ``to_config`` for shapes."""
    from .errors import ConfigError

    if not isinstance(block, dict):
        raise ConfigError(f"{path}: expected an object, got {type(block).__name__}")
    kind = block.get("kind")
    try:
        if kind == "quadratic":
            return QuadraticFlux(rmax=float(block["rmax"]), hmax=float(block["hmax"]))
        if kind == "piecewise_linear":
            pts = tuple((float(x), float(h)) for x, h in block["points"])
            return PiecewiseLinearFlux(points=pts)
    except KeyError as exc:
        raise ConfigError(f"{path}.{exc.args[0]}: missing field") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.kind: expected 'quadratic' or 'piecewise_linear', got {kind!r}")


class DatumShape(str, enum.Enum):
    """Canonical initial data built from the roots of a shared flow level.

    The phi shapes are continuous wedges (values of a potential); the psi
    shapes are their slope fields (densities).  ``*_hat`` puts the large
    root upstream and the small root downstream (roof wedge / step down),
    ``*_check`` swaps them (valley wedge / step up).
    """

    PHI_HAT = "phi_hat"
    PHI_CHECK = "phi_check"
    PSI_HAT = "psi_hat"
    PSI_CHECK = "psi_check"


@dataclass(frozen=True)
class CanonicalDatum:
    shape: DatumShape
    level: float

    def __post_init__(self):
        object.__setattr__(self, "shape", DatumShape(self.shape))
        object.__setattr__(self, "level", float(self.level))
        if not (self.level >= 0.0 and math.isfinite(self.level)):
            raise DomainError(f"datum level must be a finite nonnegative flow, got {self.level}")


def canonical_eval(datum: CanonicalDatum, junction: "JunctionModel", x: ArrayLike) -> ArrayLike:
    """Evaluate a canonical datum at position(s) x for the given junction.

    The level must not exceed the junction's joint capacity, otherwise one
    side has no density carrying that flow.
    """
    a = float(datum.level)
    if a > junction.a_max * (1.0 + 1e-12) + BOUNDARY_TOL:
        raise LevelError(f"datum level {a} exceeds joint capacity {junction.a_max}")
    left_lo, left_hi = junction.left.roots(a)
    right_lo, right_hi = junction.right.roots(a)
    shape = datum.shape
    arr, scalar = _as_input(x)
    if shape is DatumShape.PHI_HAT:
        out = np.where(arr <= 0.0, left_hi * arr, right_lo * arr)
    elif shape is DatumShape.PHI_CHECK:
        out = np.where(arr <= 0.0, left_lo * arr, right_hi * arr)
    elif shape is DatumShape.PSI_HAT:
        out = np.where(arr < 0.0, left_hi, right_lo)
    else:
        out = np.where(arr < 0.0, left_lo, right_hi)
    return _as_output(out, scalar)
