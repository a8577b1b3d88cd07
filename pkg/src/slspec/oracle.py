"""Independent ground truth for the spectral problem.

Nothing in this module uses the asymptotic expansions except as root seeds.
Three routes are provided and cross-checked against each other in the test
suite:

* the first-order quasi-derivative system for (y, y' - u y), integrated with
  a fixed-step 4th-order scheme inside smooth pieces and with the exact
  constant-coefficient propagator inside constant pieces;
* the phase/log-modulus equations obtained from the modified Prufer
  substitution y = r sin(theta), y' - u y = sqrt(lam) r cos(theta);
* exact transfer matrices in the classical (y, y') variables for piecewise
  constant u, where q = u' is a finite sum of point interactions.

Eigenvalues solve Delta(lam) = (y' - u y)(pi) = 0 for the solution vanishing
at 0.  The classical Neumann condition y'(pi) = 0 is ill-defined for
distributional q; the quasi-derivative condition is the correct reading, and
it makes a constant shift of u act as a Robin parameter (documented in the
potential module).

Fixed deterministic steps are used on purpose: the trajectories are
oscillatory, and deterministic grids keep cross-method and step-halving
comparisons exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from . import asymptotics, moments
from .errors import (IndexingError, IntegrationBlowupError, InternalError,
                     NonconvergenceError, SingularArgumentError)
from .oscillatory import SpectralDomain, principal_sqrt
from .potential import PI, PotentialSpec

_DEFAULT_STEP_SCALE = 0.004     # phase advance |sqrt(lam)| * h per RK4 step
_PRUFER_STEP_SCALE = 0.02
_DEFAULT_H_MAX = 0.05


@dataclass(frozen=True)
class QuasiDerivState:
    y1: complex
    y2: complex

    @property
    def trivial(self) -> bool:
        return self.y1 == 0 and self.y2 == 0


@dataclass(frozen=True)
class PruferState:
    theta: complex
    log_r: complex


@dataclass
class QuasiTrajectory:
    x: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    sqrt_lambda: complex

    def state(self, i: int) -> QuasiDerivState:
        return QuasiDerivState(complex(self.y1[i]), complex(self.y2[i]))


@dataclass
class PruferTrajectory:
    x: np.ndarray
    theta: np.ndarray
    log_r: np.ndarray
    sqrt_lambda: complex

    @property
    def y1(self) -> np.ndarray:
        return np.exp(self.log_r) * np.sin(self.theta)

    @property
    def y2(self) -> np.ndarray:
        return self.sqrt_lambda * np.exp(self.log_r) * np.cos(self.theta)

    def state(self, i: int) -> PruferState:
        return PruferState(complex(self.theta[i]), complex(self.log_r[i]))


@dataclass
class SecularResult:
    n: int
    lam: complex
    sqrt_lambda: complex
    residual: float
    multiplicity_hint: int
    iterations: int
    method: str


def _require_lambda(lam) -> complex:
    s = principal_sqrt(lam)
    if abs(s) < 1e-12:
        raise SingularArgumentError("lambda = 0 is a singular argument")
    return s


def _piece_constant(pe: moments.PiecewiseExp, i: int):
    """Height of piece i if it is a constant, else None."""
    atoms = pe.pieces[i]
    if len(atoms) == 0:
        return 0j
    if len(atoms) == 1 and atoms[0][0] == 0 and len(atoms[0][1]) == 1:
        return complex(atoms[0][1][0])
    return None


def _sinc_s(s: complex, d):
    """sin(s d)/s, stable for small |s d|."""
    z = s * np.asarray(d, dtype=complex)
    out = np.where(np.abs(z) < 1e-6,
                   np.asarray(d, dtype=complex) * (1 - z * z / 6),
                   np.sin(np.where(np.abs(z) < 1e-6, 1.0, z)) / s)
    return out


def _const_advance(y, const, lamc, s, d):
    """Exact propagation over distance d in a piece where u == const.

    The system matrix A = [[c, 1], [-lam - c^2, -c]] satisfies A^2 = -lam I,
    so exp(A d) = cos(s d) I + (sin(s d)/s) A.  d may be an array.
    """
    cd = np.cos(s * np.asarray(d, dtype=complex))
    sd = _sinc_s(s, d)
    y1 = cd * y[0] + sd * (const * y[0] + y[1])
    y2 = sd * ((-lamc - const * const) * y[0] - const * y[1]) + cd * y[1]
    return y1, y2


def _rk4_matrices(u0, um, u1, lam, h):
    """Batched RK4 one-step propagators for Y' = A(x) Y; h scalar or array."""
    n = len(u0)
    h = np.asarray(h, dtype=float)
    if h.ndim == 1:
        h = h[:, None, None]
    eye = np.broadcast_to(np.eye(2, dtype=complex), (n, 2, 2))

    def amat(u):
        a = np.empty((n, 2, 2), dtype=complex)
        a[:, 0, 0] = u
        a[:, 0, 1] = 1.0
        a[:, 1, 0] = -lam - u * u
        a[:, 1, 1] = -u
        return a

    a0, am, a1 = amat(np.asarray(u0)), amat(np.asarray(um)), amat(np.asarray(u1))
    k1 = a0
    k2 = np.einsum("nij,njk->nik", am, eye + (h / 2) * k1)
    k3 = np.einsum("nij,njk->nik", am, eye + (h / 2) * k2)
    k4 = np.einsum("nij,njk->nik", a1, eye + h * k3)
    return eye + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def _chain(mats: np.ndarray) -> np.ndarray:
    """Ordered product mats[-1] @ ... @ mats[0] by pairwise reduction."""
    cur = mats
    while cur.shape[0] > 1:
        k = cur.shape[0] // 2
        prod = np.einsum("nij,njk->nik", cur[1:2 * k:2], cur[0:2 * k:2])
        if cur.shape[0] % 2:
            prod = np.concatenate([prod, cur[-1:]], axis=0)
        cur = prod
    return cur[0]


def _n_sub(span, s_mag, step_scale, h_max) -> int:
    need = max(span * max(1.0, s_mag) / step_scale, span / h_max)
    return max(1, int(math.ceil(need - 1e-12)))


def _dense_states(pot: PotentialSpec, lam, nodes, *, step_scale, h_max,
                  force_rk4=False, init=None):
    """(y1, y2) at every node of a sorted unique array in [0, pi]."""
    s = _require_lambda(lam)
    lamc = complex(lam)
    pe = pot.piecewise
    nodes = np.asarray(nodes, dtype=float)
    y1 = np.empty(len(nodes), dtype=complex)
    y2 = np.empty(len(nodes), dtype=complex)
    y = (0j, complex(s)) if init is None else (complex(init[0]), complex(init[1]))
    pos = 0
    while pos < len(nodes) and nodes[pos] <= 1e-15:
        y1[pos], y2[pos] = y
        pos += 1
    maxnode = float(nodes[-1])
    for i, (a, b) in enumerate(zip(pe.breaks, pe.breaks[1:])):
        if pos >= len(nodes) or a >= maxnode - 1e-15:
            break
        end = min(b, maxnode)
        j1 = pos + int(np.searchsorted(nodes[pos:], end + 1e-15))
        sel = nodes[pos:j1]
        const = None if force_rk4 else _piece_constant(pe, i)
        if const is not None:
            vals = _const_advance(y, const, lamc, s, sel - a)
            y1[pos:j1], y2[pos:j1] = vals
            ye = _const_advance(y, const, lamc, s, end - a)
            y = (complex(ye[0]), complex(ye[1]))
        else:
            stops = list(sel)
            record = [True] * len(sel)
            if not stops or end - stops[-1] > 1e-15:
                stops.append(end)
                record.append(False)
            lefts, hs, bnd = [], [], []
            prev = a
            count = 0
            for t in stops:
                nsub = _n_sub(t - prev, abs(s), step_scale, h_max)
                h = (t - prev) / nsub
                lefts.append(prev + h * np.arange(nsub))
                hs.append(np.full(nsub, h))
                count += nsub
                bnd.append(count)
                prev = t
            lefts = np.concatenate(lefts)
            hs = np.concatenate(hs)
            u_lo = moments._eval_atoms(pe.pieces[i], lefts - a)
            u_mid = moments._eval_atoms(pe.pieces[i], lefts + hs / 2 - a)
            u_hi = moments._eval_atoms(pe.pieces[i], lefts + hs - a)
            mats = _rk4_matrices(u_lo, u_mid, u_hi, lamc, hs)
            if not any(record):
                p = _chain(mats)
                y = (complex(p[0, 0] * y[0] + p[0, 1] * y[1]),
                     complex(p[1, 0] * y[0] + p[1, 1] * y[1]))
            else:
                flat = mats.reshape(len(mats), 4).tolist()
                marks = {e - 1: k for k, e in enumerate(bnd) if record[k]}
                a1, a2 = y
                for j, (m00, m01, m10, m11) in enumerate(flat):
                    a1, a2 = m00 * a1 + m01 * a2, m10 * a1 + m11 * a2
                    k = marks.get(j)
                    if k is not None:
                        y1[pos + k], y2[pos + k] = a1, a2
                y = (a1, a2)
        if not (math.isfinite(y[0].real) and math.isfinite(y[0].imag)
                and math.isfinite(y[1].real) and math.isfinite(y[1].imag)):
            raise IntegrationBlowupError(f"non-finite state at x = {end}",
                                         location=float(end))
        pos = j1
    return y1, y2


def integrate_quasi_system(pot: PotentialSpec, lam, grid, *,
                           step_scale: float = _DEFAULT_STEP_SCALE,
                           h_max: float = _DEFAULT_H_MAX,
                           force_rk4: bool = False,
                           init=None) -> QuasiTrajectory:
    """Trajectory of (y1, y2) = (y, y' - u y) from (0, sqrt(lam)) at x = 0.

    Constant pieces propagate with the exact matrix exponential (the free
    evolution conjugated by the u-shear) unless force_rk4 is set; smooth
    pieces use fixed-step RK4 with phase advance <= step_scale per step.
    """
    s = _require_lambda(lam)
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if np.any(grid < -1e-12) or np.any(grid > PI + 1e-9):
        raise ValueError("grid must lie in [0, pi]")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    nodes = np.union1d(np.union1d(grid, np.asarray([0.0])),
                       np.asarray([b for b in pot.breaks if b < grid.max()]))
    y1n, y2n = _dense_states(pot, lam, nodes, step_scale=step_scale,
                             h_max=h_max, force_rk4=force_rk4, init=init)
    idx = np.searchsorted(nodes, grid)
    return QuasiTrajectory(x=grid.copy(), y1=y1n[idx], y2=y2n[idx], sqrt_lambda=s)


def characteristic(pot: PotentialSpec, lam, *,
                   step_scale: float = _DEFAULT_STEP_SCALE,
                   force_rk4: bool = False) -> complex:
    """Delta(lam) = y2(pi) for the solution with (y1, y2)(0) = (0, sqrt(lam)).

    Zeros of Delta are exactly the eigenvalues of the Dirichlet/regularized
    Neumann problem.
    """
    traj = integrate_quasi_system(pot, lam, np.asarray([PI]),
                                  step_scale=step_scale, force_rk4=force_rk4)
    return complex(traj.y2[0])


def _char_reduced(pot: PotentialSpec, lam, *, step_scale=_DEFAULT_STEP_SCALE,
                  force_rk4=False) -> complex:
    """The characteristic function for initial slope one instead of sqrt(lam).

    Same zeros, but real-valued for real potentials at every real lam
    including lam <= 0, which makes it the right object for sign brackets.
    """
    traj = integrate_quasi_system(pot, lam, np.asarray([PI]),
                                  step_scale=step_scale, force_rk4=force_rk4,
                                  init=(0.0, 1.0))
    return complex(traj.y2[0])


def secular_step_exact(pot: PotentialSpec, lam) -> complex:
    """Exact quasi-derivative boundary value for piecewise-constant u.

    Propagates the classical pair (y, y') with free 2x2 blocks between
    breakpoints and applies the jump y' -> y' + c_k y at each interior
    breakpoint x_k, c_k being the height jump of u (the weight of the point
    interaction).  Returns y'(pi) - u(pi) y(pi).
    """
    if pot.kind != "step":
        raise ValueError("secular_step_exact requires a step-kind potential")
    s = _require_lambda(lam)
    lamc = complex(lam)
    y, yp = 0j, complex(s)
    heights = [c[0] for c in pot.coeffs]
    for i, (a, b) in enumerate(zip(pot.breaks, pot.breaks[1:])):
        if i > 0:
            yp = yp + (heights[i] - heights[i - 1]) * y
        d = b - a
        cd, sd = cmath.cos(s * d), complex(_sinc_s(s, d))
        y, yp = cd * y + sd * yp, -lamc * sd * y + cd * yp
    return yp - heights[-1] * y


def _step_states_classical(pot: PotentialSpec, lam, nodes):
    """(y, y') of the transfer-matrix solution at sorted unique nodes."""
    s = _require_lambda(lam)
    lamc = complex(lam)
    nodes = np.asarray(nodes, dtype=float)
    heights = [c[0] for c in pot.coeffs]
    yv = np.empty(len(nodes), dtype=complex)
    ypv = np.empty(len(nodes), dtype=complex)
    y, yp = 0j, complex(s)
    pos = 0
    for i, (a, b) in enumerate(zip(pot.breaks, pot.breaks[1:])):
        if i > 0:
            yp = yp + (heights[i] - heights[i - 1]) * y
        hi = b + 1e-12 if i == len(pot.coeffs) - 1 else b - 1e-15
        j1 = pos + int(np.searchsorted(nodes[pos:], hi))
        d = nodes[pos:j1] - a
        cd, sd = np.cos(s * d), _sinc_s(s, d)
        yv[pos:j1] = cd * y + sd * yp
        ypv[pos:j1] = -lamc * sd * y + cd * yp
        pos = j1
        d = b - a
        cd1, sd1 = cmath.cos(s * d), complex(_sinc_s(s, d))
        y, yp = cd1 * y + sd1 * yp, -lamc * sd1 * y + cd1 * yp
    return yv, ypv


def integrate_prufer(pot: PotentialSpec, lam, grid, *,
                     step_scale: float = _PRUFER_STEP_SCALE,
                     h_max: float = _DEFAULT_H_MAX) -> PruferTrajectory:
    """Phase and log-modulus trajectories with theta(0) = 0, log r(0) = 0.

    Integrates theta' = s + u^2 sin^2(theta)/s + u sin(2 theta) and
    (log r)' = -(u cos(2 theta) + u^2 sin(2 theta)/(2 s)) with fixed RK4
    steps; the log-modulus rather than r itself is integrated so complex
    lam cannot overflow.
    """
    s = _require_lambda(lam)
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    nodes = np.union1d(np.union1d(grid, np.asarray([0.0])),
                       np.asarray([b for b in pot.breaks if b < grid.max()]))
    pe = pot.piecewise
    sc = complex(s)
    th, lr = 0j, 0j
    rec = {0.0: (0j, 0j)}

    def rhs(u, theta):
        u2 = u * u
        c2 = cmath.cos(2 * theta)
        s2 = cmath.sin(2 * theta)
        return (sc + (u2 / sc) * (1 - c2) / 2 + u * s2,
                -(u * c2 + (u2 / (2 * sc)) * s2))

    for x0, x1 in zip(nodes, nodes[1:]):
        i = int(pe._piece_index(0.5 * (x0 + x1)))
        nsub = _n_sub(x1 - x0, abs(s), step_scale, h_max)
        h = (x1 - x0) / nsub
        offs = (x0 - pe.breaks[i]) + (h / 2) * np.arange(2 * nsub + 1)
        uu = list(moments._eval_atoms(pe.pieces[i], offs))
        h2, h6 = h / 2, h / 6
        try:
            for j in range(nsub):
                u0, um, u1 = uu[2 * j], uu[2 * j + 1], uu[2 * j + 2]
                k1t, k1l = rhs(u0, th)
                k2t, k2l = rhs(um, th + h2 * k1t)
                k3t, k3l = rhs(um, th + h2 * k2t)
                k4t, k4l = rhs(u1, th + h * k3t)
                th = th + h6 * (k1t + 2 * k2t + 2 * k3t + k4t)
                lr = lr + h6 * (k1l + 2 * k2l + 2 * k3l + k4l)
        except OverflowError:
            # the substitution degenerates where y1^2 + y2^2/lam hits a
            # complex zero; the phase equation then runs away
            raise IntegrationBlowupError(
                f"Prufer phase blow-up inside ({x0}, {x1})", location=float(x1))
        if not (math.isfinite(th.real) and math.isfinite(th.imag)
                and math.isfinite(lr.real) and math.isfinite(lr.imag)):
            raise IntegrationBlowupError(f"non-finite Prufer state at x = {x1}",
                                         location=float(x1))
        rec[float(x1)] = (th, lr)
    theta = np.array([rec[float(t)][0] for t in grid], dtype=complex)
    log_r = np.array([rec[float(t)][1] for t in grid], dtype=complex)
    return PruferTrajectory(x=grid.copy(), theta=theta, log_r=log_r, sqrt_lambda=s)


# -- eigenvalue location ------------------------------------------------------


def _count_zero_crossings(pot: PotentialSpec, lam, *, step_scale) -> int:
    """Number of interior zeros of y1 for real lam and real potential."""
    s = abs(principal_sqrt(lam))
    nodes = np.union1d(np.linspace(0.0, PI, int(16 * (s + 2)) + 9),
                       np.asarray(pot.breaks))
    y1, _ = _dense_states(pot, lam, nodes, step_scale=max(step_scale, 0.02),
                          h_max=_DEFAULT_H_MAX)
    vals = y1.real[1:]
    signs = np.sign(vals[np.abs(vals) > 0])
    return int(np.count_nonzero(signs[1:] * signs[:-1] < 0))


def _scan_real_root(pot: PotentialSpec, n: int, g, s_seed: float) -> float:
    """n-th root of the reduced secular function counted from the bottom.

    Fallback for low indices where the asymptotic seed is useless.  The
    lower end of the scan sits below the spectrum (Robin-type bound states
    included) via a crude sup|u| bound; the upper end safely above the
    expected n-th root.
    """
    sup_u = float(np.abs(pot.eval_u(np.linspace(0.0, PI, 513))).max())
    lam_lo = -4.0 * (1.0 + sup_u) ** 2
    lam_hi = max((abs(s_seed) + 1.5) ** 2, (n + 1.0) ** 2)
    neg = np.linspace(lam_lo, 0.0, max(64, int(abs(lam_lo) / 0.05)))
    pos = np.linspace(0.05, math.sqrt(lam_hi), int(math.sqrt(lam_hi) / 0.05)) ** 2
    lams = np.concatenate([neg, pos])
    roots = []
    lam_prev = float(lams[0])
    f_prev = g(lam_prev)
    for lam in lams[1:]:
        lam = float(lam)
        f_cur = g(lam)
        if f_cur == 0.0:
            roots.append(lam)
        elif f_prev * f_cur < 0:
            roots.append(brentq(g, lam_prev, lam, xtol=1e-13, rtol=8.9e-16,
                                maxiter=200))
        if len(roots) >= n:
            return roots[n - 1]
        lam_prev, f_prev = lam, f_cur
    raise NonconvergenceError(
        f"scan found only {len(roots)} roots below lambda = {lam_hi:.4g}, "
        f"needed {n}", best=roots[-1] if roots else None)


def solve_eigenvalue(pot: PotentialSpec, n: int, seed=None, *,
                     domain: SpectralDomain | None = None,
                     tol_root: float = 1e-12,
                     max_iter: int = 80,
                     verify_index: bool = True,
                     method: str = "auto",
                     step_scale: float = _DEFAULT_STEP_SCALE) -> SecularResult:
    """Locate the n-th eigenvalue starting from the asymptotic seed.

    Real potentials: a sign bracket of the reduced secular function around
    the seed plus Brent refinement; ``method="phase"`` instead brackets and
    bisects g(lam) = theta(pi, lam) - pi (n - 1/2) on the Prufer phase,
    which follows the oscillation count directly but costs more.  The
    converged root is verified by counting interior zeros of y1.

    Complex potentials: damped secant iteration in the sqrt(lam) variable
    seeded at the asymptotic prediction, steps clamped to 0.25 and iterates
    clamped to the parabolic domain; verified by an argument-principle
    winding count on a small circle.
    """
    domain = domain or SpectralDomain()
    point = seed if seed is not None else asymptotics.eigenvalue_asym(pot, n)
    s0 = complex(point.sqrt_lambda_asym)
    m = n - 0.5
    calls = [0]

    if pot.is_real and abs(s0.imag) < 1e-9:
        if method == "phase":
            def g(lam):
                calls[0] += 1
                th = integrate_prufer(pot, lam, np.asarray([PI])).theta[0]
                return float(th.real) - PI * m
        elif pot.kind == "step":
            def g(lam):
                calls[0] += 1
                if lam == 0.0:
                    lam = 1e-24
                return float((secular_step_exact(pot, lam)
                              / principal_sqrt(lam)).real)
        else:
            def g(lam):
                calls[0] += 1
                if lam == 0.0:
                    lam = 1e-24
                return float(_char_reduced(pot, lam, step_scale=step_scale).real)
        s0r = s0.real
        root = None
        for w in (0.35, 0.45, 0.49):
            lo_s, hi_s = s0r - w, s0r + w
            lo, hi = lo_s * abs(lo_s), hi_s * abs(hi_s)
            f_lo, f_hi = g(lo), g(hi)
            if f_lo == 0.0:
                root = lo
                break
            if f_hi == 0.0:
                root = hi
                break
            if f_lo * f_hi < 0:
                root = brentq(g, lo, hi, xtol=1e-13, rtol=8.9e-16,
                              maxiter=200)
                break
        how = "phase" if method == "phase" else "bracket"
        if root is None and method != "phase":
            root = _scan_real_root(pot, n, g, s0r)
            how = "scan"
        if root is None:
            raise NonconvergenceError(
                f"no sign bracket for index {n} near sqrt(lambda) = {s0r:.6g}",
                best=s0r * s0r)
        lam_root = float(root)
        s_root = principal_sqrt(lam_root)
        if pot.kind == "step":
            residual = abs(secular_step_exact(pot, lam_root))
        else:
            residual = abs(characteristic(pot, lam_root, step_scale=step_scale))
        if verify_index:
            k = _count_zero_crossings(pot, lam_root, step_scale=step_scale)
            if k != n - 1:
                raise IndexingError(
                    f"root at lambda = {lam_root:.9g} has {k} interior zeros, "
                    f"expected {n - 1}")
        return SecularResult(n=n, lam=lam_root, sqrt_lambda=s_root,
                             residual=float(residual), multiplicity_hint=1,
                             iterations=calls[0], method=how)

    # complex potential: damped secant in the sqrt(lam) plane
    if pot.kind == "step":
        def F(s):
            calls[0] += 1
            return secular_step_exact(pot, s * s) / s
    else:
        def F(s):
            calls[0] += 1
            return _char_reduced(pot, s * s, step_scale=step_scale)

    def clamp(s):
        im = min(max(s.imag, -domain.alpha + 1e-9), domain.alpha - 1e-9)
        return complex(s.real, im)

    s_cur = clamp(s0)
    f_cur = F(s_cur)
    fd = 1e-6 * max(1.0, abs(s_cur))
    deriv = (F(s_cur + fd) - F(s_cur - fd)) / (2 * fd)
    best = (abs(f_cur), s_cur)
    converged = False
    for _ in range(max_iter):
        if deriv == 0:
            break
        step = -f_cur / deriv
        if abs(step) > 0.25:
            step *= 0.25 / abs(step)
        s_new = clamp(s_cur + step)
        f_new = F(s_new)
        if abs(f_new) < best[0]:
            best = (abs(f_new), s_new)
        done = abs(s_new - s_cur) <= tol_root * max(1.0, abs(s_new))
        if f_new != f_cur and s_new != s_cur:
            deriv = (f_new - f_cur) / (s_new - s_cur)
        s_cur, f_cur = s_new, f_new
        if done:
            converged = True
            break
    if not converged:
        raise NonconvergenceError(
            f"no convergence for index {n} within {max_iter} iterations",
            best=best[1] ** 2, residual=best[0])
    s_root = s_cur
    lam_root = s_root * s_root
    residual = abs(s_root * f_cur)
    mult = 1
    if verify_index:
        if abs(s_root - s0) > 0.5:
            raise IndexingError(
                f"converged sqrt(lambda) {s_root:.6g} drifted from seed {s0:.6g}")
        mult = _winding(F, s_root, radius=0.2)
        if mult < 1:
            raise IndexingError(
                f"argument-principle count {mult} around lambda = {lam_root:.6g}")
    return SecularResult(n=n, lam=complex(lam_root), sqrt_lambda=complex(s_root),
                         residual=float(residual), multiplicity_hint=int(mult),
                         iterations=calls[0], method="secant")


def _winding(F, center: complex, radius: float = 0.2, points: int = 16) -> int:
    """Zero count of F inside the circle via a trapezoid winding number."""
    angles = 2 * PI * np.arange(points + 1) / points
    vals = np.array([F(center + radius * cmath.exp(1j * a)) for a in angles])
    if np.any(vals == 0):
        return 1
    phases = np.unwrap(np.angle(vals))
    return int(round((phases[-1] - phases[0]) / (2 * PI)))


def solve_spectrum(pot: PotentialSpec, n_values, **kwargs) -> list:
    """solve_eigenvalue over a range, collecting failures as flagged points."""
    points = []
    for n in n_values:
        point = asymptotics.eigenvalue_asym(pot, n)
        try:
            res = solve_eigenvalue(pot, n, seed=point, **kwargs)
            point.sqrt_lambda_numeric = res.sqrt_lambda
            point.residual = res.residual
        except (NonconvergenceError, IndexingError, IntegrationBlowupError) as exc:
            point.flag = f"degraded: {exc}"
        points.append(point)
    return points


# -- numeric eigenfunctions ---------------------------------------------------


def eigenfunction_numeric(pot: PotentialSpec, lam, grid, *, n: int | None = None,
                          step_scale: float = _DEFAULT_STEP_SCALE,
                          norm_intervals: int = 32768):
    """Normalized y1 trajectory at a converged eigenvalue.

    The norm is a composite Simpson integral of |y|^2 on a dense uniform
    grid (norm_intervals intervals), so tables on different grids share one
    normalization.  When n is given the sign (unimodular phase in the
    complex case) is aligned to the asymptotic table of the same index.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    dense = np.linspace(0.0, PI, int(norm_intervals) + 1)
    nodes = np.union1d(np.union1d(dense, grid), np.asarray(pot.breaks))
    y1n, _ = _dense_states(pot, lam, nodes, step_scale=step_scale,
                           h_max=_DEFAULT_H_MAX)
    dense_vals = y1n[np.searchsorted(nodes, dense)]
    nrm2 = float(simpson(np.abs(dense_vals) ** 2, x=dense))
    if not nrm2 > 0:
        raise InternalError("zero-norm trajectory cannot be an eigenfunction")
    vals = y1n[np.searchsorted(nodes, grid)] / math.sqrt(nrm2)
    note = f"unit L2 norm (Simpson, {int(norm_intervals)} intervals)"
    if n is not None:
        ref = asymptotics.eigenfunction_asym(pot, n, grid)
        z = complex(np.sum(ref.values * np.conj(vals)))
        if abs(z) > 0:
            phase = z / abs(z)
            if pot.is_real and abs(phase.imag) < 1e-6:
                phase = math.copysign(1.0, phase.real)
            vals = vals * phase
        note += "; aligned to asymptotic table"
    return asymptotics.EigenfunctionTable(
        index=n if n is not None else 0, grid=grid, values=vals, kind="oracle",
        normalization=note)


def table_norm_sq(table) -> float:
    """Composite Simpson norm of a table on its own grid (diagnostic)."""
    return float(simpson(np.abs(table.values) ** 2, x=table.grid))
