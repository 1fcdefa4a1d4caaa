"""Relative entropy of entanglement over the PPT set.

The minimization runs projected gradient descent on the convex objective
f(rho) = S(sigma||rho), with feasibility restored after every trial step
by alternating projections (Dykstra) onto the intersection of the density
set and the partial-transpose image of the density set.  Internals work on
raw ndarrays in natural-log units; results are converted to bits at the
boundary.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .entropy import EIG_ZERO_TOL, _LN2
from .errors import ConvergenceWarning, InputError, NormalizationError, ShapeError
from .hermitian import HermitianMatrix, _eigh, _log_divided_differences
from .states import (
    BipartiteDims,
    DensityMatrix,
    PureState,
    _as_dims,
    _partial_transpose_b,
)

# backtracking below ~2**-60 cannot produce a representable new iterate
_MAX_BACKTRACKS = 60

_YY_FLIP = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)


@dataclass(frozen=True)
class ReeOptions:
    """Tuning knobs for the projected-gradient minimization.

    All fields must be positive; ``eps`` additionally must stay below 1e-3
    so the interior floor does not visibly bias the optimal value.
    """

    max_iters: int = 5000
    grad_tol: float = 1e-7
    eps: float = 1e-9
    dykstra_max: int = 500
    dykstra_tol: float = 1e-11
    armijo_shrink: float = 0.5
    armijo_slope: float = 1e-4
    armijo_step: float = 1.0

    def __post_init__(self):
        for name in (
            "max_iters",
            "grad_tol",
            "eps",
            "dykstra_max",
            "dykstra_tol",
            "armijo_shrink",
            "armijo_slope",
            "armijo_step",
        ):
            value = getattr(self, name)
            if not value > 0:
                raise InputError(f"{name} must be positive, got {value!r}")
        if self.eps >= 1e-3:
            raise InputError(f"eps must stay below 1e-3, got {self.eps!r}")
        if self.armijo_shrink >= 1:
            raise InputError("armijo_shrink must be below 1")


@dataclass(frozen=True)
class ReeResult:
    """Outcome of one minimization run.

    ``value_bits`` is the attained relative entropy in bits and
    ``closest_state`` the minimizing density matrix.  ``converged`` is set
    when the projected-gradient norm fell under the tolerance before the
    iteration budget ran out.
    """

    value_bits: float
    closest_state: DensityMatrix
    iterations: int
    converged: bool
    final_grad_norm: float


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a real vector onto the probability simplex."""
    u = np.sort(v)[::-1]
    shifted = np.cumsum(u) - 1.0
    counts = np.arange(1, v.size + 1)
    k = counts[u - shifted / counts > 0][-1]
    tau = shifted[k - 1] / k
    return np.clip(v - tau, 0.0, None)


def _project_density_arr(mat: np.ndarray) -> np.ndarray:
    w, u = _eigh(mat)
    w = _project_simplex(w)
    return (u * w) @ u.conj().T


def _project_ppt_arr(mat: np.ndarray, da: int, db: int) -> np.ndarray:
    flipped = _partial_transpose_b(mat, da, db)
    return _partial_transpose_b(_project_density_arr(flipped), da, db)


def _dykstra_arr(
    mat: np.ndarray, da: int, db: int, max_sweeps: int, tol: float
) -> tuple[np.ndarray, int, bool]:
    """Alternating projections with correction terms onto density AND PPT.

    Each sweep ends on the density-set projection, so the returned iterate
    is exactly unit-trace PSD and PPT up to the convergence tolerance.
    """
    current = mat
    corr_ppt = np.zeros_like(mat)
    corr_den = np.zeros_like(mat)
    for sweep in range(1, max_sweeps + 1):
        shifted = current + corr_ppt
        onto_ppt = _project_ppt_arr(shifted, da, db)
        corr_ppt = shifted - onto_ppt
        shifted = onto_ppt + corr_den
        onto_den = _project_density_arr(shifted)
        corr_den = shifted - onto_den
        delta = float(np.linalg.norm(onto_den - current))
        current = onto_den
        if delta < tol:
            return current, sweep, True
    return current, max_sweeps, False


def _require_bipartite(state) -> BipartiteDims:
    dims = getattr(state, "dims", None)
    if dims is None:
        raise ShapeError("state carries no bipartite dimensions")
    return dims


def project_density(h: HermitianMatrix) -> DensityMatrix:
    """Nearest density matrix in Frobenius distance.

    Eigenvalues are projected onto the probability simplex while the
    eigenbasis is kept, e.g. diag(2, 0) -> diag(1, 0) and
    diag(0.6, 0.6) -> diag(0.5, 0.5).
    """
    return DensityMatrix(_project_density_arr(h.mat))


def project_ppt(h: HermitianMatrix, dims) -> HermitianMatrix:
    """Nearest matrix whose partial transpose is a density matrix."""
    bdims = _as_dims(dims)
    if bdims is None:
        raise ShapeError("bipartite dimensions are required")
    if bdims.total != h.dim:
        raise ShapeError(f"dims {bdims.da}x{bdims.db} do not match dimension {h.dim}")
    return HermitianMatrix(_project_ppt_arr(h.mat, bdims.da, bdims.db))


def dykstra_ppt_density(h: HermitianMatrix, dims, opts: ReeOptions | None = None) -> DensityMatrix:
    """Project onto the set of PPT density matrices.

    Non-convergence within the sweep budget is reported through a
    ConvergenceWarning; the last iterate is still returned so the caller
    can decide what to do with it.
    """
    opts = opts or ReeOptions()
    bdims = _as_dims(dims)
    if bdims is None:
        raise ShapeError("bipartite dimensions are required")
    if bdims.total != h.dim:
        raise ShapeError(f"dims {bdims.da}x{bdims.db} do not match dimension {h.dim}")
    out, sweeps, ok = _dykstra_arr(h.mat, bdims.da, bdims.db, opts.dykstra_max, opts.dykstra_tol)
    if not ok:
        warnings.warn(
            f"alternating projection stopped on budget after {sweeps} sweeps",
            ConvergenceWarning,
            stacklevel=2,
        )
    return DensityMatrix(out, dims=bdims)


def _entropy_term_nat(mat: np.ndarray) -> float:
    """tr{m ln m} over the support of m, natural log."""
    w = _eigh(mat)[0]
    w = w[w >= EIG_ZERO_TOL]
    return float(np.sum(w * np.log(w)))


def _objective_and_spec(sig: np.ndarray, rho: np.ndarray, sigma_term: float):
    """Cross entropy part of S(sigma||rho) plus the spectral data of rho.

    Assumes rho has been floored away from singularity, so every
    eigenvalue is safely positive.
    """
    w, u = _eigh(rho)
    overlaps_full = u.conj().T @ sig @ u
    value = sigma_term - float(np.real(np.sum(np.diag(overlaps_full) * np.log(w))))
    return value, w, u, overlaps_full


def _gradient(w: np.ndarray, u: np.ndarray, overlaps_full: np.ndarray) -> np.ndarray:
    """Gradient of rho -> -tr{sigma ln rho} at the current spectral data."""
    ladder = _log_divided_differences(w)
    g = -(u @ (ladder * overlaps_full) @ u.conj().T)
    return (g + g.conj().T) / 2.0


# phase-2 refinement: barrier path following with damped Newton steps.
# the linear system is (d^2+1)-dimensional, so cap the dimensions it runs at
_NEWTON_DIM_CAP = 32
_CENTER_MIX = 0.05
_RECENTER_MIX = 1e-3
_PHASE1_BUDGET = 40
_NEWTON_ROUNDS = 2
_MU_INIT = 1e-3
_MU_FLOOR = 1e-12
_MU_SHRINK = 0.2
_INNER_CAP = 6


def _neg_log_dd2(w: np.ndarray) -> np.ndarray:
    """Fully symmetric table T[i,j,k] = integral dz/((w_i+z)(w_j+z)(w_k+z)).

    These are the second divided differences of -ln evaluated on the
    eigenvalues, with the degenerate limits filled in:
    T(x,y,x) = (dd1(x,y) - 1/x)/(x - y) and T(x,x,x) = 1/(2 x^2).
    Every entry is positive for positive eigenvalues.
    """
    L = _log_divided_differences(w)
    scale = max(float(w[-1]), 1e-300)
    inv_w = 1.0 / w
    diff = w[:, None] - w[None, :]
    near = np.abs(diff) < 1e-12 * scale
    pair = (L - inv_w[:, None]) / np.where(near, 1.0, diff)
    pair = np.where(near, (0.5 * inv_w * inv_w)[:, None], pair)
    xz = w[:, None, None] - w[None, None, :]
    near_xz = np.abs(xz) < 1e-12 * scale
    generic = -(L[:, :, None] - L[None, :, :]) / np.where(near_xz, 1.0, xz)
    return np.where(near_xz, np.broadcast_to(pair[:, :, None], generic.shape), generic)


def _pt_perm(da: int, db: int) -> np.ndarray:
    """Index permutation p with vec(X^PT) = vec(X)[p] for row-major vec.

    Partial transposition permutes matrix entries, and the permutation is
    an involution.
    """
    d = da * db
    return np.arange(d * d).reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(d * d)


def _chol_step_cap(mat: np.ndarray, dirn: np.ndarray) -> float:
    """Largest t keeping mat + t*dirn positive definite (inf if unbounded)."""
    try:
        chol = np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        return 0.0
    inv = np.linalg.inv(chol)
    pencil = inv @ dirn @ inv.conj().T
    low = float(_eigh((pencil + pencil.conj().T) / 2.0)[0][0])
    if low >= 0.0:
        return math.inf
    return -1.0 / low


def _newton_step(
    sig: np.ndarray,
    rho: np.ndarray,
    w: np.ndarray,
    u: np.ndarray,
    overlaps_full: np.ndarray,
    grad: np.ndarray,
    mu: float,
    perm: np.ndarray,
    da: int,
    db: int,
):
    """Damped-Newton direction for f(rho) + mu barriers at a strictly feasible rho.

    The model Hessian is the exact second derivative of -tr{sigma ln rho},
    assembled in rho's eigenframe from second divided differences, plus
    the curvature of -mu ln det rho and -mu ln det rho^PT.  The direction
    solves the trace-zero Newton system through one bordered linear solve.
    Returns (direction, decrement, tau, tau_eigs); direction is None when
    the solve fails or the decrement is not positive.
    """
    d = len(w)
    n = d * d
    tau = _partial_transpose_b(rho, da, db)
    s, v = _eigh(tau)
    if s[0] <= 0.0 or w[0] <= 0.0:
        return None, -1.0, tau, s

    table = _neg_log_dd2(w)
    eye = np.eye(d)
    frame = np.einsum("ia,bk,ibk->ikab", eye, overlaps_full, table) + np.einsum(
        "kl,ij,ijk->ikjl", eye, overlaps_full, table
    )
    basis = np.kron(u, u.conj())
    hess = basis @ frame.reshape(n, n) @ basis.conj().T

    rho_inv = (u * (1.0 / w)) @ u.conj().T
    tau_inv = (v * (1.0 / s)) @ v.conj().T
    hess = hess + mu * np.kron(rho_inv, rho_inv.T)
    ppt_part = np.kron(tau_inv, tau_inv.T)
    hess = hess + mu * ppt_part[np.ix_(perm, perm)]
    hess = (hess + hess.conj().T) / 2.0

    g_mu = grad - mu * rho_inv - mu * _partial_transpose_b(tau_inv, da, db)

    bordered = np.zeros((n + 1, n + 1), dtype=complex)
    bordered[:n, :n] = hess
    tvec = np.eye(d).reshape(n)
    bordered[:n, n] = tvec
    bordered[n, :n] = tvec
    rhs = np.zeros(n + 1, dtype=complex)
    rhs[:n] = -g_mu.reshape(n)
    try:
        sol = np.linalg.solve(bordered, rhs)
    except np.linalg.LinAlgError:
        return None, -1.0, tau, s
    direction = sol[:n].reshape(d, d)
    direction = (direction + direction.conj().T) / 2.0
    decrement = -float(np.real(np.vdot(g_mu, direction)))
    if not np.isfinite(decrement):
        return None, -1.0, tau, s
    return direction, decrement, tau, s


def ree_ppt(sigma: DensityMatrix, opts: ReeOptions | None = None) -> ReeResult:
    """Minimize S(sigma||rho) over PPT density matrices rho.

    Two cooperating phases.  Plain projected gradient descent with Armijo
    backtracking and a secant warm start handles the easy bulk: every
    trial point is pulled back into the feasible set by alternating
    projections and floored to (1-eps) rho + eps I/d.  When that stalls,
    which happens near rank-deficient optima, a strictly interior
    refinement follows the logarithmic-barrier path of both positivity
    cones with damped Newton steps, no projections needed, until the
    barrier weight reaches its floor; descent then resumes for the final
    stationarity measurement.

    The reported value is in bits, evaluated at the best feasible iterate
    seen, so it is always an upper bound on the minimum (up to the
    interior floor).  Convergence means the projected-gradient
    displacement at the reference step fell below grad_tol.
    """
    opts = opts or ReeOptions()
    bdims = _require_bipartite(sigma)
    da, db = bdims.da, bdims.db
    d = bdims.total
    if d > 64:
        raise InputError(f"total dimension {d} exceeds the supported limit 64")

    sig = sigma.mat
    sigma_term = _entropy_term_nat(sig)
    uniform = np.eye(d, dtype=complex) / d
    eps = opts.eps

    def floor_interior(mat: np.ndarray) -> np.ndarray:
        return (1.0 - eps) * mat + eps * uniform

    def pull_feasible(mat: np.ndarray) -> np.ndarray:
        return _dykstra_arr(mat, da, db, opts.dykstra_max, opts.dykstra_tol)[0]

    # starting point: project a slightly mixed copy of sigma.  mixing
    # before the projection keeps the spectrum away from zero, so the
    # first gradients are bounded, and it speeds the projection up when
    # sigma itself is rank deficient
    rho = floor_interior(pull_feasible((1.0 - _CENTER_MIX) * sig + _CENTER_MIX * uniform))
    f_cur, w, u, overlaps = _objective_and_spec(sig, rho, sigma_term)
    grad = _gradient(w, u, overlaps)
    best_f = f_cur
    best_rho = rho

    newton_ok = d <= _NEWTON_DIM_CAP
    perm = _pt_perm(da, db) if newton_ok else None

    step_ref = opts.armijo_step
    step = step_ref
    iterations = 0
    converged = False
    grad_norm = math.inf
    proxy = math.inf
    phase2 = False
    newton_rounds = 0
    phase1_left = _PHASE1_BUDGET
    mu = _MU_INIT
    inner = 0

    while iterations < opts.max_iters:
        iterations += 1

        if not phase2:
            # convergence is judged on the true gradient at the reference
            # step; the projection there is costly, so it only runs once
            # the cheap displacement proxy says it could plausibly pass
            if iterations == 1 or proxy < 100.0 * opts.grad_tol:
                reference = pull_feasible(rho - step_ref * grad)
                grad_norm = float(np.linalg.norm(reference - rho)) / step_ref
                if grad_norm < opts.grad_tol:
                    converged = True
                    break
            step = min(step_ref, 2.0 * step)
            accepted = False
            for _ in range(_MAX_BACKTRACKS):
                candidate = floor_interior(pull_feasible(rho - step * grad))
                f_new, w2, u2, overlaps2 = _objective_and_spec(sig, candidate, sigma_term)
                predicted = float(np.real(np.vdot(grad, candidate - rho)))
                if f_new <= f_cur + opts.armijo_slope * predicted and f_new <= f_cur:
                    accepted = True
                    break
                step *= opts.armijo_shrink
            if accepted:
                displacement = candidate - rho
                proxy = float(np.linalg.norm(displacement)) / step
                grad_new = _gradient(w2, u2, overlaps2)
                bend = float(np.real(np.vdot(displacement, grad_new - grad)))
                if bend > 0.0:
                    step = float(np.real(np.vdot(displacement, displacement))) / bend
                else:
                    step = 2.0 * step
                step = min(step_ref, max(step, 1e-12))
                rho, f_cur, w, u, overlaps = candidate, f_new, w2, u2, overlaps2
                grad = grad_new
                if f_cur < best_f:
                    best_f = f_cur
                    best_rho = rho
            phase1_left -= 1
            if (not accepted) or (newton_ok and phase1_left <= 0):
                if newton_ok and newton_rounds < _NEWTON_ROUNDS:
                    # hand over to the interior refinement, nudged off the
                    # boundary so both barriers are finite
                    phase2 = True
                    newton_rounds += 1
                    mu = _MU_INIT
                    inner = 0
                    rho = (1.0 - _RECENTER_MIX) * rho + _RECENTER_MIX * uniform
                    f_cur, w, u, overlaps = _objective_and_spec(sig, rho, sigma_term)
                    grad = _gradient(w, u, overlaps)
                elif not accepted:
                    # a failed search still deserves an honest measurement
                    reference = pull_feasible(rho - step_ref * grad)
                    grad_norm = float(np.linalg.norm(reference - rho)) / step_ref
                    converged = grad_norm < opts.grad_tol
                    break
                else:
                    phase1_left = _PHASE1_BUDGET
            continue

        direction, decrement, tau, s = _newton_step(
            sig, rho, w, u, overlaps, grad, mu, perm, da, db
        )
        moved = False
        if direction is not None and decrement > 0.0:
            cap = min(
                _chol_step_cap(rho, direction),
                _chol_step_cap(tau, _partial_transpose_b(direction, da, db)),
            )
            t = min(1.0, 0.95 * cap)
            barrier_cur = float(np.sum(np.log(w))) + float(np.sum(np.log(s)))
            model_cur = f_cur - mu * barrier_cur
            for _ in range(_MAX_BACKTRACKS):
                candidate = rho + t * direction
                w2, u2 = _eigh(candidate)
                if w2[0] > 0.0:
                    s2 = _eigh(_partial_transpose_b(candidate, da, db))[0]
                    if s2[0] > 0.0:
                        overlaps2 = u2.conj().T @ sig @ u2
                        f_new = sigma_term - float(
                            np.real(np.sum(np.diag(overlaps2) * np.log(w2)))
                        )
                        model_new = f_new - mu * (
                            float(np.sum(np.log(w2))) + float(np.sum(np.log(s2)))
                        )
                        if model_new <= model_cur - opts.armijo_slope * t * decrement:
                            moved = True
                            break
                t *= 0.5
                if t < 1e-16:
                    break
            if moved:
                proxy = float(np.linalg.norm(direction))
                rho, f_cur, w, u, overlaps = candidate, f_new, w2, u2, overlaps2
                grad = _gradient(w, u, overlaps)
                inner += 1
                if f_cur < best_f:
                    best_f = f_cur
                    best_rho = rho
        # the inner loop settles once the decrement is small on the
        # barrier scale, the step count is spent, or no step was possible
        if (not moved) or decrement < 0.25 * mu or inner >= _INNER_CAP:
            if mu <= _MU_FLOOR:
                # hand the best point back to plain descent for the final
                # stationarity measurement
                phase2 = False
                phase1_left = _PHASE1_BUDGET
                proxy = 0.0
                step = step_ref
                rho = best_rho
                f_cur, w, u, overlaps = _objective_and_spec(sig, rho, sigma_term)
                grad = _gradient(w, u, overlaps)
            else:
                mu = max(_MU_SHRINK * mu, _MU_FLOOR)
                inner = 0

    final = floor_interior(pull_feasible(best_rho))
    f_fin, w_f, u_f, overlaps_f = _objective_and_spec(sig, final, sigma_term)
    if not converged:
        grad_fin = _gradient(w_f, u_f, overlaps_f)
        reference = pull_feasible(final - step_ref * grad_fin)
        grad_norm = float(np.linalg.norm(reference - final)) / step_ref
        converged = grad_norm < opts.grad_tol
    if iterations >= opts.max_iters and not converged:
        warnings.warn(
            f"descent stopped on the iteration budget after {iterations} steps",
            ConvergenceWarning,
            stacklevel=2,
        )

    closest = DensityMatrix(final, dims=bdims)
    value_bits = max(0.0, f_fin) / _LN2
    return ReeResult(
        value_bits=value_bits,
        closest_state=closest,
        iterations=iterations,
        converged=converged,
        final_grad_norm=grad_norm,
    )


def closest_state_for_pure(psi: PureState) -> DensityMatrix:
    """Minimizer of S(psi||rho) over PPT states, in closed form.

    Dephasing the pure state in its Schmidt basis: the amplitude matrix is
    singular-value decomposed and the squared singular values weight the
    corresponding product projectors.
    """
    dims = _require_bipartite(psi)
    amps = psi.amplitudes.reshape(dims.da, dims.db)
    left, svals, right = np.linalg.svd(amps)
    out = np.zeros((dims.total, dims.total), dtype=complex)
    for i, s in enumerate(svals):
        if s <= 0.0:
            continue
        vec = np.kron(left[:, i], right[i, :])
        out += (s * s) * np.outer(vec, vec.conj())
    return DensityMatrix(out, dims=dims)


def _binary_entropy_bits(p: float) -> float:
    total = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            total -= q * math.log2(q)
    return max(0.0, total)


def eof_two_qubit(sigma: DensityMatrix) -> float:
    """Entanglement of formation of a two-qubit state, in bits.

    Concurrence route: with R = sigma (Y x Y) sigma* (Y x Y), the square
    roots of R's eigenvalues in decreasing order give
    C = max(0, mu1 - mu2 - mu3 - mu4) and
    E_F = h((1 + sqrt(1 - C^2)) / 2).
    """
    dims = getattr(sigma, "dims", None)
    if dims is None or (dims.da, dims.db) != (2, 2):
        raise ShapeError("entanglement of formation requires dims (2, 2)")
    mat = sigma.mat
    spun = mat @ _YY_FLIP @ mat.conj() @ _YY_FLIP
    roots = np.sqrt(np.clip(np.real(np.linalg.eigvals(spun)), 0.0, None))
    roots = np.sort(roots)[::-1]
    concurrence = max(0.0, float(roots[0] - roots[1] - roots[2] - roots[3]))
    inner = (1.0 + math.sqrt(max(0.0, 1.0 - concurrence * concurrence))) / 2.0
    return _binary_entropy_bits(inner)


def bell_diagonal_ree_oracle(p, grid_steps: int = 2000) -> float:
    """Exhaustive-grid relative entropy of entanglement for Bell-diagonal weights.

    The minimizing state can be taken Bell diagonal with every weight at
    most 1/2, and on that set the relative entropy reduces to the
    classical 4-outcome divergence.  The grid scans all integer weight
    splits q_k = i_k / grid_steps with sum 1 and max component <= 1/2,
    returning the minimum.  Resolution scales like 1/grid_steps.
    """
    weights = np.asarray(p, dtype=float).ravel()
    if weights.shape != (4,):
        raise ShapeError(f"expected 4 weights, got shape {weights.shape}")
    if np.any(weights < 0):
        raise NormalizationError("weights must be nonnegative")
    if abs(float(np.sum(weights)) - 1.0) > 1e-10:
        raise NormalizationError("weights must sum to one")
    n = int(grid_steps)
    if n < 100:
        raise InputError(f"grid_steps must be at least 100, got {grid_steps!r}")

    cap = n // 2
    with np.errstate(divide="ignore"):
        log2_frac = np.log2(np.arange(n + 1) / n)

    def penalty(weight: float) -> np.ndarray:
        if weight <= 0.0:
            return np.zeros(n + 1)
        # -w log2(i/n); +inf at i = 0 marks an infeasible zero cell
        return -weight * log2_frac

    c1, c2, c3, c4 = (penalty(wk) for wk in weights)

    # best split of a remaining total m between the last two weights
    best_tail = np.full(n + 1, np.inf)
    for m in range(0, min(n, 2 * cap) + 1):
        lo = max(0, m - cap)
        hi = min(m, cap)
        head = c3[lo : hi + 1]
        tail = c4[m - hi : m - lo + 1][::-1]
        best_tail[m] = np.min(head + tail)

    i = np.arange(cap + 1)
    remaining = n - i[:, None] - i[None, :]
    feasible = remaining >= 0
    cross = c1[i][:, None] + c2[i][None, :]
    cross = cross + np.where(feasible, best_tail[np.where(feasible, remaining, 0)], np.inf)
    best = float(np.min(cross))

    support = weights[weights > 0]
    sigma_term = float(np.sum(support * np.log2(support)))
    return max(0.0, sigma_term + best)
