"""Steady-state response of a lossy lattice to single-site driving.

Models the resonator-network measurement: uniform loss gamma on every
site, a point drive of given amplitude at one node, and the linear
steady state x solving ((omega + i gamma) I - H) x = amplitude * e_src.
With gamma above the largest Im(E) the system is net-decaying and the
response near omega = Re(E) of the least-damped mode is dominated by
that mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .decay import _fit_chain, spec_chains
from .errors import SingularSystem, ZeroAmplitude
from .lattice import Hamiltonian
from .spectra import EigenSystem, eigendecompose, least_damped_mode

SOLVE_RESIDUAL_FACTOR = 1e-10
SINGULAR_DISTANCE = 1e-12
DEFAULT_OMEGA_POINTS = 401
DEFAULT_GAMMA_MARGIN = 0.05


@dataclass(frozen=True)
class DriveConfig:
    """Point drive: source node (0-based), uniform loss, frequency grid."""

    source_node: int
    gamma: float
    omega_grid: np.ndarray
    amplitude: float = 1.0

    def __post_init__(self):
        grid = np.atleast_1d(np.asarray(self.omega_grid, dtype=float))
        grid.setflags(write=False)
        object.__setattr__(self, "omega_grid", grid)
        if grid.size == 0:
            raise ValueError("omega grid must be nonempty")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("omega grid must be strictly increasing")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.amplitude <= 0:
            raise ValueError("drive amplitude must be positive")

    def validate_against(self, sys: EigenSystem) -> None:
        """Net decay requires gamma above every Im(E)."""
        top = float(np.max(sys.values.imag))
        if self.gamma <= top:
            raise SingularSystem(
                f"gamma = {self.gamma} must exceed max Im(E) = {top} for a decaying system"
            )


def default_drive_config(h: Hamiltonian, sys: EigenSystem | None = None, source_node: int = 0) -> DriveConfig:
    """Desk-scale defaults: gamma = max Im(E) + 0.05 ||H||_inf, 401-point grid
    spanning [min Re(E) - 1, max Re(E) + 1]."""
    if sys is None:
        sys = eigendecompose(h)
    gamma = float(np.max(sys.values.imag) + DEFAULT_GAMMA_MARGIN * h.norm_inf())
    grid = np.linspace(
        float(np.min(sys.values.real)) - 1.0,
        float(np.max(sys.values.real)) + 1.0,
        DEFAULT_OMEGA_POINTS,
    )
    return DriveConfig(source_node, gamma, grid)


@dataclass(frozen=True)
class ResponseProfile:
    """Steady-state node amplitudes at one drive frequency."""

    omega: float
    x: np.ndarray
    solve_residual: float

    def __post_init__(self):
        arr = np.asarray(self.x)
        arr.setflags(write=False)
        object.__setattr__(self, "x", arr)


def steady_state(
    h: Hamiltonian, cfg: DriveConfig, omega: float, sys: EigenSystem | None = None
) -> ResponseProfile:
    """Solve ((omega + i gamma) I - H) x = amplitude * e_source, certified.

    Passing the precomputed eigensystem avoids one diagonalization per
    call; it is also used for the singularity pre-check.
    """
    if sys is not None:
        cfg.validate_against(sys)
        z = omega + 1j * cfg.gamma
        if float(np.min(np.abs(sys.values - z))) < SINGULAR_DISTANCE:
            raise SingularSystem(f"omega + i gamma = {z} sits on an eigenvalue")
    n = h.dim
    if not 0 <= cfg.source_node < n:
        raise ValueError(f"source node {cfg.source_node} outside 0..{n - 1}")
    rhs = np.zeros(n, dtype=complex)
    rhs[cfg.source_node] = cfg.amplitude
    a = (omega + 1j * cfg.gamma) * np.eye(n) - h.matrix
    try:
        lu = scipy.linalg.lu_factor(a)
        x = scipy.linalg.lu_solve(lu, rhs)
        # near a resolvent pole ||x|| is large and one solve pass leaves a
        # residual ~ eps ||A|| ||x||; refine until the drive-scaled
        # certificate holds
        residual = float(np.max(np.abs(a @ x - rhs)))
        for _ in range(3):
            if residual <= SOLVE_RESIDUAL_FACTOR * cfg.amplitude:
                break
            x = x + scipy.linalg.lu_solve(lu, rhs - a @ x)
            residual = float(np.max(np.abs(a @ x - rhs)))
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularSystem(f"shifted matrix is numerically singular at omega={omega}") from exc
    if residual > SOLVE_RESIDUAL_FACTOR * cfg.amplitude:
        raise SingularSystem(
            f"solve residual {residual:.3e} exceeds {SOLVE_RESIDUAL_FACTOR:.0e} * drive "
            f"at omega={omega} (shifted matrix too close to singular)"
        )
    return ResponseProfile(float(omega), x, residual)


def frequency_sweep(
    h: Hamiltonian, cfg: DriveConfig, sys: EigenSystem | None = None
) -> list[ResponseProfile]:
    """One steady state per grid frequency, in grid order."""
    if sys is None:
        sys = eigendecompose(h)
    cfg.validate_against(sys)
    out = []
    for omega in cfg.omega_grid:
        try:
            out.append(steady_state(h, cfg, float(omega), sys))
        except SingularSystem as exc:
            raise SingularSystem(f"sweep failed at omega={float(omega)}: {exc}") from exc
    return out


def resolvent_response(
    sys: EigenSystem, cfg: DriveConfig, omega: float
) -> np.ndarray:
    """Independent route to the same steady state via the biorthogonal
    eigenmode expansion sum_n v_n (w_n . e_src) / ((omega + i gamma) - E_n)."""
    if sys.left_vectors is None:
        raise ValueError("eigensystem lacks left vectors; use eigendecompose()")
    z = omega + 1j * cfg.gamma
    weights = sys.left_vectors[:, cfg.source_node] * cfg.amplitude / (z - sys.values)
    return sys.right_vectors @ weights


@dataclass(frozen=True)
class ModeSelection:
    """Which eigenmode the driven response actually singles out."""

    selected_mode: int
    least_damped: int
    overlap: float
    matches: bool


def mode_selection_check(profile: ResponseProfile, sys: EigenSystem) -> ModeSelection:
    """Overlap |<v_hat, x_hat>| of the response with the least-damped mode,
    plus the mode that maximizes the overlap (they should agree when the
    loss sits just above the least-damped line)."""
    x_hat = profile.x / np.linalg.norm(profile.x)
    overlaps = np.empty(sys.dim)
    for n in range(sys.dim):
        v = sys.right_vectors[:, n]
        overlaps[n] = abs(np.vdot(v / np.linalg.norm(v), x_hat))
    ld = least_damped_mode(sys)
    best = int(np.argmax(overlaps))
    return ModeSelection(best, ld, float(overlaps[ld]), best == ld)


@dataclass(frozen=True)
class LogProfile:
    """log|x| per node plus per-chain linear fits (mirrors decay fitting)."""

    log_abs: np.ndarray
    slopes: tuple[float, ...]
    residual: float
    chain_ids: tuple[str, ...] = field(default=())

    def __post_init__(self):
        arr = np.asarray(self.log_abs)
        arr.setflags(write=False)
        object.__setattr__(self, "log_abs", arr)


def log_profile(profile: ResponseProfile, spec=None) -> LogProfile:
    """Fit log|x| chainwise (with a spec) or as one run (without).

    The residual is the worst max-abs fit deviation over chains: small for
    a pure-exponential response, large for an oscillatory one.
    """
    amp = np.abs(profile.x)
    if np.any(amp == 0.0):
        raise ZeroAmplitude("response vanishes at a site; log profile undefined")
    log_amp = np.log(amp)
    if spec is None:
        chains = [("all", "open", tuple(range(len(amp))))]
    else:
        chains = spec_chains(spec)
    slopes = []
    ids = []
    worst = 0.0
    for chain_id, _, sites in chains:
        slope, _, residual = _fit_chain(log_amp, sites)
        slopes.append(slope)
        ids.append(chain_id)
        worst = max(worst, residual)
    return LogProfile(log_amp, tuple(slopes), float(worst), tuple(ids))
