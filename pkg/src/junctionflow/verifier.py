"""Executable battery of semi-group properties for junction solvers.

Each check runs a black-box semi-group handle (the internal solvers, or
an external process speaking the CSV protocol) on constructed or seeded
random data and measures how badly a structural property is violated:
L1 contraction and the comparison principle, mass conservation,
commutation with constants, finite propagation speed, locality relative
to the single-flux solvers, scale invariance, stationarity of the
admissible junction states, and recovery of the junction cap from the
canonical wedge and step data.  A report collects one record per check
with the measured margin and its allowance.

Margins are normalized so a check passes iff measured <= tolerance;
quantities whose contract is "at least" are stored as violation depths.
"""

from __future__ import annotations

import math
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import cl_solver as cl
from . import hj_solver as hj
from .errors import StepError
from .flux_models import CanonicalDatum, DatumShape
from .junction import JunctionModel, TracePair, germ_contains, germ_dissipative, junction_flux, riemann_traces

DESK_DX = 1.0 / 200.0
DESK_DOMAIN = (-2.0, 2.0)


@dataclass
class CheckRecord:
    name: str
    passed: bool
    measured: float
    tolerance: float
    scenario: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "measured_margin": self.measured,
            "tolerance": self.tolerance,
            "scenario": self.scenario,
        }

    def summary(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: measured {self.measured:.3e} vs tolerance {self.tolerance:.3e} ({self.scenario})"


@dataclass
class VerificationReport:
    records: list[CheckRecord] = field(default_factory=list)
    seed: int = 0
    identified_limiter: float | None = None

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.records)

    def to_dict(self) -> dict:
        out = {
            "seed": self.seed,
            "all_passed": self.all_passed,
            "checks": [r.to_dict() for r in self.records],
        }
        if self.identified_limiter is not None:
            out["identified_limiter"] = self.identified_limiter
        return out

    def summary_lines(self) -> list[str]:
        lines = [r.summary() for r in self.records]
        lines.append(
            f"{'ALL CHECKS PASSED' if self.all_passed else 'CHECK FAILURES PRESENT'}"
            f" ({sum(r.passed for r in self.records)}/{len(self.records)})"
        )
        return lines


@dataclass
class SemigroupHandle:
    """A semi-group that can be evolved from a state to requested times.

    ``cl_internal`` and ``hj_internal`` call the in-process solvers;
    ``external_process`` shells out to ``command`` with arguments
    (input CSV path, time, output CSV path) and reads the result back,
    using the cell CSV schema for state_kind 'cl' and the node schema
    for 'hj'.
    """

    kind: str
    model: JunctionModel
    dx: float = DESK_DX
    domain: tuple[float, float] = DESK_DOMAIN
    cfl: float = 0.8
    command: tuple[str, ...] = ()
    state_kind: str = "cl"

    def __post_init__(self):
        if self.kind not in ("cl_internal", "hj_internal", "external_process"):
            raise ValueError(f"unknown handle kind {self.kind!r}")
        if not (self.dx > 0.0):
            raise ValueError("resolution dx must be positive")
        if self.kind == "external_process" and not self.command:
            raise ValueError("external_process handle needs a command")

    @property
    def is_cl(self) -> bool:
        return self.kind == "cl_internal" or (self.kind == "external_process" and self.state_kind == "cl")

    @property
    def is_hj(self) -> bool:
        return self.kind == "hj_internal" or (self.kind == "external_process" and self.state_kind == "hj")

    @property
    def grid(self) -> cl.Grid:
        x_min, x_max = self.domain
        n_cells = max(2, int(round((x_max - x_min) / self.dx)))
        return cl.Grid.from_domain(x_min, x_max, n_cells)

    def count_steps(self, t_grid: Sequence[float]) -> int:
        dt_max = self.cfl * self.grid.dx / self.model.lipschitz_bound
        total, t_now = 0, 0.0
        for t in t_grid:
            n, _ = cl.plan_steps(t_now, t, dt_max)
            total += n
            t_now = t
        return total

    def evolve_cl(self, rho0: cl.CellField, snapshot_times: Sequence[float]) -> list[cl.CellField]:
        if not self.is_cl:
            raise StepError(f"handle kind {self.kind}/{self.state_kind} does not evolve densities")
        if self.kind == "cl_internal":
            return cl.solve(rho0, self.model, max(snapshot_times), cfl=self.cfl, snapshot_times=snapshot_times)
        return self._evolve_external(rho0, snapshot_times, is_cl=True)

    def evolve_hj(self, u0: hj.NodeField, snapshot_times: Sequence[float]) -> list[hj.NodeField]:
        if not self.is_hj:
            raise StepError(f"handle kind {self.kind}/{self.state_kind} does not evolve potentials")
        if self.kind == "hj_internal":
            return hj.hj_direct_solve(u0, self.model, max(snapshot_times), cfl=self.cfl, snapshot_times=snapshot_times)
        return self._evolve_external(u0, snapshot_times, is_cl=False)

    def _evolve_external(self, state0, snapshot_times, is_cl: bool):
        from . import formats

        out = []
        with tempfile.TemporaryDirectory(prefix="junctionflow-ext-") as td:
            src = Path(td) / "state_in.csv"
            if is_cl:
                formats.write_cell_csv(src, state0)
            else:
                formats.write_node_csv(src, state0)
            for k, t in enumerate(snapshot_times):
                dst = Path(td) / f"state_out_{k}.csv"
                argv = [*self.command, str(src), repr(float(t)), str(dst)]
                proc = subprocess.run(argv, capture_output=True, text=True)
                if proc.returncode != 0:
                    raise StepError(
                        f"external semi-group {argv[0]} exited {proc.returncode}: {proc.stderr.strip()[-500:]}"
                    )
                if is_cl:
                    state = formats.read_cell_csv(dst, grid=state0.grid)
                else:
                    state = formats.read_node_csv(dst, grid=state0.grid)
                state.time = float(t)
                out.append(state)
        return out


# -- seeded data generators -------------------------------------------------


def random_cell_field(
    grid: cl.Grid,
    j: JunctionModel,
    rng: np.random.Generator,
    support: tuple[float, float] = (-0.75, 0.75),
    background: tuple[float, float] | None = None,
    vmax: tuple[float, float] | None = None,
) -> cl.CellField:
    """Piecewise-constant random density equal to the background outside support.

    The default support keeps differences inside the domain of dependence
    of [-2, 2] through t = 1: with open copy-cell boundaries, contraction
    only holds while the data still agree near the edges of the domain.
    """
    if background is None:
        background = (rng.uniform(0.0, j.left.rmax), rng.uniform(0.0, j.right.rmax))
    if vmax is None:
        vmax = (j.left.rmax, j.right.rmax)
    xs = grid.cell_centers()
    v = np.where(xs < 0.0, background[0], background[1])
    n_pieces = int(rng.integers(2, 7))
    edges = np.sort(rng.uniform(support[0], support[1], size=n_pieces + 1))
    for k in range(n_pieces):
        block = (xs >= edges[k]) & (xs < edges[k + 1])
        v[block & (xs < 0.0)] = rng.uniform(0.0, vmax[0])
        v[block & (xs >= 0.0)] = rng.uniform(0.0, vmax[1])
    return cl.CellField(grid=grid, values=v)


def random_node_field(
    grid: cl.Grid,
    j: JunctionModel,
    rng: np.random.Generator,
    support: tuple[float, float] = (-0.6, 0.6),
    background: tuple[float, float] | None = None,
) -> hj.NodeField:
    """Random potential in the discrete Lip class, slopes random inside support."""
    rho = random_cell_field(grid, j, rng, support=support, background=background)
    u = np.empty(grid.n_cells + 1)
    u[0] = 0.0
    np.cumsum(rho.values * grid.dx, out=u[1:])
    return hj.NodeField(grid=grid, values=u)


# -- CL checks ---------------------------------------------------------------


def check_l1_contraction(
    h: SemigroupHandle,
    n_trials: int = 100,
    t_grid: Sequence[float] = (0.25, 0.5, 1.0),
    seed: int = 0,
) -> CheckRecord:
    """Distance between two evolutions never exceeds the initial distance."""
    rng = np.random.default_rng(seed)
    grid = h.grid
    worst = 0.0
    for _ in range(n_trials):
        background = (rng.uniform(0.0, h.model.left.rmax), rng.uniform(0.0, h.model.right.rmax))
        f1 = random_cell_field(grid, h.model, rng, background=background)
        f2 = random_cell_field(grid, h.model, rng, background=background)
        d0 = cl.l1_distance(f1, f2)
        runs = zip(h.evolve_cl(f1, t_grid), h.evolve_cl(f2, t_grid))
        for s1, s2 in runs:
            worst = max(worst, cl.l1_distance(s1, s2) - d0)
    tol = 1e-12 * (1 + h.count_steps(t_grid))
    return CheckRecord(
        name="l1_contraction",
        passed=worst <= tol,
        measured=worst,
        tolerance=tol,
        scenario=f"{n_trials} random pairs, t in {tuple(t_grid)}, dx={grid.dx:g}",
    )


def check_comparison(
    h: SemigroupHandle,
    n_trials: int = 20,
    t_grid: Sequence[float] = (0.5, 1.0),
    seed: int = 1,
) -> CheckRecord:
    """Cellwise-ordered data must stay ordered: monotone semi-group."""
    rng = np.random.default_rng(seed)
    grid = h.grid
    worst = -math.inf
    for _ in range(n_trials):
        lo = random_cell_field(grid, h.model, rng)
        bump = rng.uniform(0.0, 0.3, size=lo.values.shape)
        caps = np.where(grid.cell_centers() < 0.0, h.model.left.rmax, h.model.right.rmax)
        hi = cl.CellField(grid=grid, values=np.minimum(lo.values + bump, caps))
        for s_lo, s_hi in zip(h.evolve_cl(lo, t_grid), h.evolve_cl(hi, t_grid)):
            worst = max(worst, float(np.max(s_lo.values - s_hi.values)))
    return CheckRecord(
        name="comparison_principle",
        passed=worst <= 0.0,
        measured=worst,
        tolerance=0.0,
        scenario=f"{n_trials} ordered pairs, t in {tuple(t_grid)}, dx={grid.dx:g}",
    )


def check_mass(
    h: SemigroupHandle,
    n_trials: int = 5,
    t_end: float = 1.0,
    seed: int = 2,
    support: tuple[float, float] = (-0.5, 0.5),
) -> CheckRecord:
    """Mass conservation with zero background (so outer edge fluxes vanish)."""
    rng = np.random.default_rng(seed)
    grid = h.grid
    worst = 0.0
    for _ in range(n_trials):
        f = random_cell_field(grid, h.model, rng, support=support, background=(0.0, 0.0))
        final = h.evolve_cl(f, [t_end])[-1]
        worst = max(worst, abs(cl.mass(final) - cl.mass(f)))
    return CheckRecord(
        name="mass_conservation",
        passed=worst <= 1e-10,
        measured=worst,
        tolerance=1e-10,
        scenario=f"{n_trials} compact data, {h.count_steps([t_end])} steps to t={t_end:g}, dx={grid.dx:g}",
    )


def check_finite_speed(
    h: SemigroupHandle,
    a: float = -1.2,
    b: float = 1.2,
    t_end: float = 0.5,
    seed: int = 3,
) -> CheckRecord:
    """Data equal on [a, b] evolve identically inside the shrunken interval.

    The numerical domain of dependence grows one cell per step, so after
    n steps the solutions must agree bitwise on [a + n dx, b - n dx]
    (one extra cell of padding on each side).
    """
    rng = np.random.default_rng(seed)
    grid = h.grid
    f1 = random_cell_field(grid, h.model, rng, support=(grid.x_min, grid.x_max))
    v2 = random_cell_field(grid, h.model, rng, support=(grid.x_min, grid.x_max)).values
    xs = grid.cell_centers()
    inside = (xs >= a) & (xs <= b)
    v2[inside] = f1.values[inside]
    f2 = cl.CellField(grid=grid, values=v2)
    steps = h.count_steps([t_end])
    pad = (steps + 1) * grid.dx
    window = (xs >= a + pad) & (xs <= b - pad)
    if not np.any(window):
        raise StepError("finite-speed window is empty; enlarge [a, b] or reduce t_end")
    s1 = h.evolve_cl(f1, [t_end])[-1]
    s2 = h.evolve_cl(f2, [t_end])[-1]
    worst = float(np.max(np.abs(s1.values[window] - s2.values[window])))
    return CheckRecord(
        name="finite_speed",
        passed=worst == 0.0,
        measured=worst,
        tolerance=0.0,
        scenario=f"data equal on [{a:g},{b:g}], window shrunk by {steps}+1 cells at t={t_end:g}",
    )


def check_locality(
    h: SemigroupHandle,
    t_end: float = 0.5,
    seed: int = 4,
) -> CheckRecord:
    """Away from the junction the solution matches single-flux whole-line runs.

    The comparison run replaces the junction by the same flux on both
    sides with the cap at full capacity, which reduces the interface
    flux to the plain interior flux; agreement is required bitwise
    outside the cone that the junction can influence.
    """
    grid = h.grid
    rng = np.random.default_rng(seed)
    vcap = min(h.model.left.rmax, h.model.right.rmax)
    f0 = random_cell_field(grid, h.model, rng, support=(-1.5, 1.5), vmax=(vcap, vcap))
    f0.values[:] = np.minimum(f0.values, vcap)
    steps = h.count_steps([t_end])
    xs = grid.cell_centers()
    cone = (steps + 1) * grid.dx

    s_junction = h.evolve_cl(f0, [t_end])[-1]
    worst = 0.0
    for flux, side_mask in (
        (h.model.left, xs < -cone),
        (h.model.right, xs > cone),
    ):
        line_model = JunctionModel(left=flux, right=flux, limiter=flux.capacity)
        line_handle = SemigroupHandle(kind="cl_internal", model=line_model, dx=h.dx, domain=h.domain, cfl=h.cfl)
        s_line = line_handle.evolve_cl(f0, [t_end])[-1]
        worst = max(worst, float(np.max(np.abs(s_junction.values[side_mask] - s_line.values[side_mask]))))
    return CheckRecord(
        name="locality",
        passed=worst == 0.0,
        measured=worst,
        tolerance=0.0,
        scenario=f"junction vs whole-line runs outside |x| > {cone:g} at t={t_end:g}",
    )


def _sample_profile(state: cl.CellField, x: np.ndarray) -> np.ndarray:
    idx = np.clip(((x - state.grid.x_min) / state.grid.dx).astype(int), 0, state.grid.n_cells - 1)
    return state.values[idx]


def check_scale_invariance_cl(
    h: SemigroupHandle,
    eps_list: Sequence[float] = (2.0, 4.0),
    riemann: tuple[float, float] | None = None,
    t_base: float = 0.5,
) -> CheckRecord:
    """Riemann data are self-similar: runs at (t, dx) and (t/eps, dx/eps) agree in xi = x/t.

    The gap is measured in L1 over xi in [-2, 2] and allowed twice the
    single-run error budget at resolution dx (0.01 at dx = 1/200).
    """
    if riemann is None:
        riemann = (0.5 * h.model.left.rmax, 0.5 * h.model.right.rmax)
    grid = h.grid
    tol = 2.0 * 0.01 * (h.dx / (1.0 / 200.0))
    base = h.evolve_cl(cl.riemann_field(grid, *riemann), [t_base])[-1]
    xi = np.linspace(-2.0, 2.0, 1601)
    d_xi = xi[1] - xi[0]
    worst = 0.0
    for eps in eps_list:
        fine = SemigroupHandle(kind="cl_internal", model=h.model, dx=h.dx / eps, domain=h.domain, cfl=h.cfl)
        scaled = fine.evolve_cl(cl.riemann_field(fine.grid, *riemann), [t_base / eps])[-1]
        gap = np.abs(_sample_profile(base, xi * t_base) - _sample_profile(scaled, xi * (t_base / eps)))
        worst = max(worst, float(np.sum(gap) * d_xi))
    return CheckRecord(
        name="scale_invariance_cl",
        passed=worst <= tol,
        measured=worst,
        tolerance=tol,
        scenario=f"riemann {riemann}, eps in {tuple(eps_list)}, t={t_base:g}, dx={h.dx:g}",
    )


def check_riemann_admissibility(model: JunctionModel, grid_n: int = 41) -> CheckRecord:
    """Traces from every Riemann pair must be admissible fixed points."""
    tol = model.equality_tol
    worst = 0.0
    for ql in np.linspace(0.0, model.left.rmax, grid_n):
        for qr in np.linspace(0.0, model.right.rmax, grid_n):
            tr = riemann_traces(model, ql, qr)
            fl = model.left.eval(tr.q_minus)
            fr = model.right.eval(tr.q_plus)
            fj = junction_flux(model, tr.q_minus, tr.q_plus)
            worst = max(worst, abs(fl - fr), abs(fl - fj), abs(tr.flux_value - fj))
    return CheckRecord(
        name="riemann_traces_admissible",
        passed=worst <= tol,
        measured=worst,
        tolerance=tol,
        scenario=f"{grid_n}x{grid_n} density grid",
    )


def check_germ_dissipativity(model: JunctionModel, grid_n: int = 41) -> CheckRecord:
    """Entropy dissipation margin >= 0 between all pairs of admissible states."""
    members: list[TracePair] = []
    for ql in np.linspace(0.0, model.left.rmax, grid_n):
        for qr in np.linspace(0.0, model.right.rmax, grid_n):
            pair = TracePair(float(ql), float(qr), model.left.eval(ql))
            if germ_contains(model, pair):
                members.append(pair)
    worst = 0.0  # violation depth
    for p1 in members:
        for p2 in members:
            worst = max(worst, -germ_dissipative(model, p1, p2))
    return CheckRecord(
        name="germ_dissipativity",
        passed=worst <= 1e-12,
        measured=worst,
        tolerance=1e-12,
        scenario=f"{len(members)} admissible pairs from a {grid_n}x{grid_n} grid",
    )


# -- HJ checks ---------------------------------------------------------------


def check_linf_contraction(
    h: SemigroupHandle,
    n_trials: int = 20,
    t_grid: Sequence[float] = (0.5, 1.0),
    seed: int = 5,
) -> CheckRecord:
    rng = np.random.default_rng(seed)
    grid = h.grid
    worst = 0.0
    for _ in range(n_trials):
        background = (rng.uniform(0.0, h.model.left.rmax), rng.uniform(0.0, h.model.right.rmax))
        u1 = random_node_field(grid, h.model, rng, background=background)
        u2 = random_node_field(grid, h.model, rng, background=background)
        d0 = hj.sup_distance(u1, u2)
        for s1, s2 in zip(h.evolve_hj(u1, t_grid), h.evolve_hj(u2, t_grid)):
            worst = max(worst, hj.sup_distance(s1, s2) - d0)
    return CheckRecord(
        name="linf_contraction",
        passed=worst <= 1e-12,
        measured=worst,
        tolerance=1e-12,
        scenario=f"{n_trials} random Lip pairs, t in {tuple(t_grid)}, dx={grid.dx:g}",
    )


def check_constants(
    h: SemigroupHandle,
    n_trials: int = 5,
    shifts: Sequence[float] = (0.7, -1.3, 2.5),
    t_end: float = 1.0,
    seed: int = 6,
) -> CheckRecord:
    """S(u + c) = S(u) + c for constants c."""
    rng = np.random.default_rng(seed)
    grid = h.grid
    worst = 0.0
    for _ in range(n_trials):
        u = random_node_field(grid, h.model, rng)
        base = h.evolve_hj(u, [t_end])[-1]
        for c in shifts:
            shifted = hj.NodeField(grid=grid, values=u.values + c)
            s = h.evolve_hj(shifted, [t_end])[-1]
            worst = max(worst, float(np.max(np.abs(s.values - base.values - c))))
    return CheckRecord(
        name="constants_commute",
        passed=worst <= 1e-10,
        measured=worst,
        tolerance=1e-10,
        scenario=f"{n_trials} data x shifts {tuple(shifts)}, t={t_end:g}, dx={grid.dx:g}",
    )


def check_duality(
    h: SemigroupHandle,
    levels: Sequence[float] | None = None,
    t_end: float = 1.0,
) -> CheckRecord:
    """Cumulative sums of the density run match the direct node scheme.

    Gap allowance 2 dx (1 + t L): the two discretizations share their
    slope dynamics, so the gap is pure round-off plus one flux quadrature.
    """
    if levels is None:
        levels = (0.0, 0.75 * h.model.a_max)
    grid = h.grid
    L = h.model.lipschitz_bound
    tol = 2.0 * grid.dx * (1.0 + t_end * L)
    worst = 0.0
    for level in levels:
        u0 = hj.canonical_node_field(grid, h.model, CanonicalDatum(shape=DatumShape.PHI_HAT, level=level))
        rho0 = cl.CellField(grid=grid, values=u0.slopes())
        cl_run = cl.solve(rho0, h.model, t_end, cfl=h.cfl, snapshot_times=[0.0, t_end])
        via_cl = hj.hj_from_cl(cl_run, u0, h.model)[-1]
        direct = h.evolve_hj(u0, [t_end])[-1]
        worst = max(worst, hj.sup_distance(via_cl, direct))
    return CheckRecord(
        name="duality_gap",
        passed=worst <= tol,
        measured=worst,
        tolerance=tol,
        scenario=f"roof data at levels {tuple(levels)}, t={t_end:g}, dx={grid.dx:g}",
    )


def check_supersolution_floor(
    h: SemigroupHandle,
    t_end: float = 1.0,
    valley_levels: Sequence[float] | None = None,
) -> CheckRecord:
    """Evolved potentials stay above the uncapped evolution minus 2 dx."""
    if valley_levels is None:
        valley_levels = (0.2 * h.model.a_max, 0.6 * h.model.a_max)
    grid = h.grid
    xs = grid.node_coords()
    slack = 2.0 * grid.dx
    violation = -math.inf

    u0 = hj.canonical_node_field(grid, h.model, CanonicalDatum(shape=DatumShape.PHI_HAT, level=0.0))
    out = h.evolve_hj(u0, [t_end])[-1]
    floor = np.array([hj.exact_roof0_uncapped(h.model, t_end, x) for x in xs])
    violation = max(violation, float(np.max(floor - slack - out.values)))

    for level in valley_levels:
        datum = CanonicalDatum(shape=DatumShape.PHI_CHECK, level=level)
        u0 = hj.canonical_node_field(grid, h.model, datum)
        out = h.evolve_hj(u0, [t_end])[-1]
        # uncapped junction passes the valley's own level: uniform drain
        floor = u0.values - t_end * level
        violation = max(violation, float(np.max(floor - slack - out.values)))
    return CheckRecord(
        name="supersolution_floor",
        passed=violation <= 0.0,
        measured=violation,
        tolerance=0.0,
        scenario=f"roof level 0 and valley levels {tuple(valley_levels)}, t={t_end:g}",
    )


def check_oracle_scale_invariance(
    model: JunctionModel,
    n_samples: int = 100,
    seed: int = 7,
) -> CheckRecord:
    """eps * exact(t/eps, x/eps) = exact(t, x) for the closed-form solutions."""
    rng = np.random.default_rng(seed)
    amax = model.a_max
    cap = model.limiter
    worst = 0.0
    for _ in range(n_samples):
        eps = rng.uniform(0.25, 4.0)
        t = rng.uniform(0.1, 2.0)
        x = rng.uniform(-2.0, 2.0)
        level = rng.uniform(0.0, amax)
        for f, fs in (
            (hj.exact_roof0_uncapped(model, t, x), hj.exact_roof0_uncapped(model, t / eps, x / eps)),
            (hj.exact_roof0_capped(model, cap, t, x), hj.exact_roof0_capped(model, cap, t / eps, x / eps)),
            (hj.exact_roof_drain(model, level, t, x), hj.exact_roof_drain(model, level, t / eps, x / eps)),
            (hj.exact_valley_capped(model, level, t, x), hj.exact_valley_capped(model, level, t / eps, x / eps)),
        ):
            worst = max(worst, abs(eps * fs - f))
    return CheckRecord(
        name="oracle_scale_invariance",
        passed=worst <= 1e-12,
        measured=worst,
        tolerance=1e-12,
        scenario=f"{n_samples} random (eps, t, x, level) samples",
    )


def check_hj_exact_agreement(
    h: SemigroupHandle,
    t_end: float = 1.0,
    window: tuple[float, float] = (-1.0, 1.0),
) -> CheckRecord:
    """Direct scheme from the level-0 roof matches the closed form, sup norm on window."""
    grid = h.grid
    tol = 8.0 * grid.dx
    u0 = hj.canonical_node_field(grid, h.model, CanonicalDatum(shape=DatumShape.PHI_HAT, level=0.0))
    out = h.evolve_hj(u0, [t_end])[-1]
    xs = grid.node_coords()
    mask = (xs >= window[0]) & (xs <= window[1])
    exact = np.array([hj.exact_roof0_capped(h.model, h.model.limiter, t_end, x) for x in xs[mask]])
    worst = float(np.max(np.abs(out.values[mask] - exact)))
    return CheckRecord(
        name="hj_exact_agreement",
        passed=worst <= tol,
        measured=worst,
        tolerance=tol,
        scenario=f"roof level 0 vs closed form on [{window[0]:g},{window[1]:g}], t={t_end:g}, dx={grid.dx:g}",
    )


# -- limiter identification and germ scan ------------------------------------


def identify_limiter_hj(h: SemigroupHandle, t_probe: float = 1.0) -> float:
    """Cap estimate: minus the junction-node value after evolving the level-0 roof."""
    grid = h.grid
    u0 = hj.canonical_node_field(grid, h.model, CanonicalDatum(shape=DatumShape.PHI_HAT, level=0.0))
    out = h.evolve_hj(u0, [t_probe])[-1]
    return float(-out.value_at_zero() / t_probe + 0.0)


def identify_limiter_cl(h: SemigroupHandle, t_probe: float = 1.0, rh_tol: float = 0.05) -> float:
    """Cap estimate: trace flux after evolving the joint-capacity step datum.

    The two one-sided trace fluxes must agree (discrete Rankine-Hugoniot)
    within rh_tol; their left value is the estimate.
    """
    grid = h.grid
    datum = CanonicalDatum(shape=DatumShape.PSI_HAT, level=h.model.a_max)
    rho0 = cl.canonical_field(grid, h.model, datum)
    out = h.evolve_cl(rho0, [t_probe])[-1]
    q_minus, q_plus = cl.trace_estimate(out)
    fl = h.model.left.eval(q_minus)
    fr = h.model.right.eval(q_plus)
    if abs(fl - fr) > rh_tol:
        raise StepError(f"trace fluxes {fl} / {fr} violate flux continuity beyond {rh_tol}")
    return fl


@dataclass
class GermScanResult:
    stationary: list[TracePair]
    evolving: list[TracePair]
    misclassified: list[TracePair]
    limiter_estimate: float
    record: CheckRecord


def empirical_germ_scan(
    h: SemigroupHandle,
    grid_n: int = 21,
    t_end: float = 0.5,
    drift_threshold: float = 0.005,
    germ_tol: float = 0.005,
    limiter_estimate: float | None = None,
) -> GermScanResult:
    """Classify flux-compatible density pairs by evolving their Riemann data.

    A pair is called stationary when its trace flux drifts less than
    drift_threshold by t_end; the stationary set must coincide with the
    admissibility predicate evaluated at the identified cap.
    """
    model = h.model
    if limiter_estimate is None:
        limiter_estimate = identify_limiter_cl(h)
    a_hat = min(max(limiter_estimate, 0.0), model.a_max)
    probe = JunctionModel(left=model.left, right=model.right, limiter=a_hat)
    grid = h.grid
    compat_tol = max(model.equality_tol, 1e-12)

    stationary: list[TracePair] = []
    evolving: list[TracePair] = []
    misclassified: list[TracePair] = []
    for ql in np.linspace(0.0, model.left.rmax, grid_n):
        for qr in np.linspace(0.0, model.right.rmax, grid_n):
            f_left = model.left.eval(ql)
            if abs(f_left - model.right.eval(qr)) > compat_tol:
                continue
            pair = TracePair(float(ql), float(qr), f_left)
            final = h.evolve_cl(cl.riemann_field(grid, ql, qr), [t_end])[-1]
            q_m, q_p = cl.trace_estimate(final)
            drift = max(
                abs(model.left.eval(q_m) - f_left),
                abs(model.right.eval(q_p) - f_left),
            )
            is_stationary = drift < drift_threshold
            (stationary if is_stationary else evolving).append(pair)
            if is_stationary != germ_contains(probe, pair, germ_tol):
                misclassified.append(pair)
    n_pairs = len(stationary) + len(evolving)
    record = CheckRecord(
        name="germ_scan",
        passed=not misclassified,
        measured=float(len(misclassified)),
        tolerance=0.0,
        scenario=(
            f"{n_pairs} compatible pairs on a {grid_n}x{grid_n} grid, t={t_end:g}, dx={grid.dx:g},"
            f" drift threshold {drift_threshold:g}, cap estimate {a_hat:.6g}"
        ),
    )
    return GermScanResult(
        stationary=stationary,
        evolving=evolving,
        misclassified=misclassified,
        limiter_estimate=a_hat,
        record=record,
    )


# -- battery -----------------------------------------------------------------


def run_battery(
    model: JunctionModel,
    dx: float = DESK_DX,
    domain: tuple[float, float] = DESK_DOMAIN,
    cfl: float = 0.8,
    seed: int = 0,
    l1_trials: int = 100,
    linf_trials: int = 20,
    scan_grid_n: int = 21,
    cl_handle: SemigroupHandle | None = None,
    hj_handle: SemigroupHandle | None = None,
) -> VerificationReport:
    """Run every check and collect a report.

    By default the internal solvers are verified; pass external-process
    handles to subject a third-party semi-group to the same battery
    (the bitwise finite-speed/locality checks then compare it against
    the reference scheme, which an independent implementation will fail
    unless it reproduces it exactly).
    """
    h_cl = cl_handle or SemigroupHandle(kind="cl_internal", model=model, dx=dx, domain=domain, cfl=cfl)
    h_hj = hj_handle or SemigroupHandle(kind="hj_internal", model=model, dx=dx, domain=domain, cfl=cfl)
    report = VerificationReport(seed=seed)

    report.add(check_riemann_admissibility(model))
    report.add(check_germ_dissipativity(model))
    report.add(check_l1_contraction(h_cl, n_trials=l1_trials, seed=seed))
    report.add(check_comparison(h_cl, seed=seed + 1))
    report.add(check_mass(h_cl, seed=seed + 2))
    report.add(check_finite_speed(h_cl, seed=seed + 3))
    report.add(check_locality(h_cl, seed=seed + 4))
    report.add(check_scale_invariance_cl(h_cl))

    report.add(check_linf_contraction(h_hj, n_trials=linf_trials, seed=seed + 5))
    report.add(check_constants(h_hj, seed=seed + 6))
    report.add(check_duality(h_hj))
    report.add(check_supersolution_floor(h_hj))
    report.add(check_oracle_scale_invariance(model, seed=seed + 7))
    report.add(check_hj_exact_agreement(h_hj))

    a_cl = identify_limiter_cl(h_cl)
    a_hj = identify_limiter_hj(h_hj)
    a_true = model.limiter
    report.add(
        CheckRecord(
            name="limiter_id_cl",
            passed=abs(a_cl - a_true) <= 0.01,
            measured=abs(a_cl - a_true),
            tolerance=0.01,
            scenario=f"step datum estimate {a_cl:.6g} vs configured {a_true:.6g}, dx={dx:g}",
        )
    )
    report.add(
        CheckRecord(
            name="limiter_id_hj",
            passed=abs(a_hj - a_true) <= 0.01,
            measured=abs(a_hj - a_true),
            tolerance=0.01,
            scenario=f"roof datum estimate {a_hj:.6g} vs configured {a_true:.6g}, dx={dx:g}",
        )
    )
    report.add(
        CheckRecord(
            name="limiter_id_agreement",
            passed=abs(a_cl - a_hj) <= 0.01,
            measured=abs(a_cl - a_hj),
            tolerance=0.01,
            scenario="density-trace estimate vs potential-drain estimate",
        )
    )
    report.identified_limiter = a_hj

    scan = empirical_germ_scan(h_cl, grid_n=scan_grid_n, limiter_estimate=a_cl)
    report.add(scan.record)
    return report
