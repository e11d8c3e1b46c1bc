"""Numerical checks of the spectral noise-amplification picture, the stage-wise
PL convergence rate, the acceleration bound and the noise-imprint bounds on
small linear problems.

Everything here works on explicit small matrices. Weighted iterations follow
``x <- x - eta A^H diag(v) (A x - y)``; stage objectives are
``||diag(v) (A J theta - r)||^2`` with Hessian ``2 J^H A^H V^2 A J``.
"""

from dataclasses import dataclass, field

import numpy as np

from .core_math import power_iteration, svd_small
from .errors import (
    BadInputs,
    BoundViolated,
    DimMismatch,
    NonExpansivenessViolated,
    StepSizeTooLarge,
)
from .forward import distance_grid, make_rng

RANK_CUTOFF = 1e-12
SLACK = 1e-9


# --------------------------------------------------------------------------
# spectral noise amplification
# --------------------------------------------------------------------------


@dataclass
class LinearProblem:
    A: np.ndarray
    x_star: np.ndarray
    noise: np.ndarray
    eta: float
    U: np.ndarray = field(init=False, repr=False)
    singular_values: np.ndarray = field(init=False)
    V: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.A = np.asarray(self.A)
        self.x_star = np.asarray(self.x_star)
        self.noise = np.asarray(self.noise)
        m, n = self.A.shape
        if self.x_star.shape != (n,) or self.noise.shape != (m,):
            raise DimMismatch("x_star / noise do not match A")
        self.U, self.singular_values, self.V = svd_small(self.A)
        smax = self.singular_values[0]
        if not 0 < self.eta < 2.0 / smax**2:
            raise StepSizeTooLarge(f"eta={self.eta} violates 0 < eta < 2/sigma_max^2 = {2 / smax**2}")

    @property
    def y(self):
        return self.A @ self.x_star + self.noise

    @property
    def norm(self):
        return float(self.singular_values[0])


@dataclass
class LandweberTrajectory:
    sigma: np.ndarray
    mode_noise: np.ndarray
    history: np.ndarray
    steady_state: np.ndarray
    eta: float

    @property
    def final(self):
        return self.history[-1]

    def converged_modes(self, min_sigma=0.05):
        return self.sigma >= min_sigma

    def relative_error(self, min_sigma=0.05):
        keep = self.converged_modes(min_sigma)
        return np.abs(self.final[keep] - self.steady_state[keep]) / np.abs(self.steady_state[keep])


def landweber_trajectory(p, iterations, x0=None):
    """Run ``x <- x - eta A^H (A x - y)`` and return per-mode errors.

    ``history[t, i]`` is the error ``x^(t) - x_star`` projected on the i-th
    right singular vector, for the modes with non-zero singular value; the
    steady state of mode i is ``u_i^H eps / sigma_i``.
    """
    A = p.A
    x = np.zeros(A.shape[1], dtype=np.result_type(A, p.noise, 1.0)) if x0 is None else np.array(x0)
    step = np.eye(A.shape[1]) - p.eta * (A.conj().T @ A)
    drive = p.eta * (A.conj().T @ p.y)
    rank = int(np.sum(p.singular_values > RANK_CUTOFF * p.singular_values[0]))
    Vh = p.V[:, :rank].conj().T
    hist = np.empty((iterations + 1, rank), dtype=np.result_type(Vh, x))
    hist[0] = Vh @ (x - p.x_star)
    for t in range(iterations):
        x = step @ x + drive
        hist[t + 1] = Vh @ (x - p.x_star)
    sigma = p.singular_values[:rank]
    eps = p.U[:, :rank].conj().T @ p.noise
    return LandweberTrajectory(sigma, eps, hist, eps / sigma, p.eta)


# --------------------------------------------------------------------------
# PL constants and stage-wise linear convergence
# --------------------------------------------------------------------------


@dataclass
class PlConstants:
    mu: float
    L: float
    sigma: np.ndarray
    tangent: np.ndarray = field(repr=False)


def _weight_diag(v, m):
    v = np.asarray(v)
    if v.ndim == 2:
        if v.shape != (m, m):
            raise DimMismatch(f"weight matrix {v.shape} vs {m} measurements")
        return v
    if v.shape != (m,):
        raise DimMismatch(f"{v.shape[0] if v.ndim else 1} weights vs {m} measurements")
    return np.diag(v)


def weighted_operator(J, A, v):
    J, A = np.atleast_2d(J), np.atleast_2d(A)
    if A.shape[1] != J.shape[0]:
        raise DimMismatch(f"A {A.shape} cannot act on J {J.shape}")
    return _weight_diag(v, A.shape[0]) @ A @ J


def stage_hessian(J, A, v):
    B = weighted_operator(J, A, v)
    return 2.0 * B.conj().T @ B


def pl_constants(J, A, v):
    """Curvature range ``(mu, L)`` of the stage objective over its tangent subspace.

    ``mu`` is twice the smallest non-negligible squared singular value of
    ``diag(v) A J`` (cut-off ``1e-12 * sigma_max``), ``L`` twice the largest.
    """
    B = weighted_operator(J, A, v)
    _, s, Vr = svd_small(B)
    if s.size == 0 or s[0] == 0.0:
        return PlConstants(0.0, 0.0, s, Vr[:, :0])
    keep = s > RANK_CUTOFF * s[0]
    return PlConstants(2.0 * s[keep][-1] ** 2, 2.0 * s[0] ** 2, s, Vr[:, keep])


@dataclass
class StageLinearReport:
    mu: float
    L: float
    eta: float
    gaps: np.ndarray
    bound: np.ndarray

    @property
    def ratios(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.gaps[1:] / self.gaps[:-1]

    @property
    def holds(self):
        return bool(np.all(self.gaps <= self.bound * (1.0 + SLACK) + 1e-300))


def hessian_spectrum(H):
    """``(mu, L)`` of a Hermitian PSD matrix over its range."""
    _, s, _ = svd_small(H)
    if s[0] == 0.0:
        return 0.0, 0.0
    return float(s[s > RANK_CUTOFF * s[0]][-1]), float(s[0])


def verify_stage_linear(H, theta0, iterations, eta=None, theta_star=None):
    """Gradient descent on ``1/2 (t - t*)^H H (t - t*)`` against ``(1 - eta mu)^k``.

    Raises :class:`BoundViolated` if the measured gap ever exceeds the bound.
    """
    H = np.asarray(H)
    U, s, _ = svd_small(H)
    if s[0] == 0.0:
        mu, L = 0.0, 0.0
        keep = s > 0
    else:
        keep = s > RANK_CUTOFF * s[0]
        mu, L = float(s[keep][-1]), float(s[0])
    eta = 1.0 / L if eta is None else float(eta)
    if L > 0 and eta > 1.0 / L * (1.0 + 1e-12):
        raise StepSizeTooLarge(f"eta={eta} exceeds 1/L={1 / L}")
    theta = np.array(theta0, dtype=np.result_type(H, np.asarray(theta0), 1.0))
    star = np.zeros_like(theta) if theta_star is None else np.asarray(theta_star)
    Ur, sr = U[:, keep].conj().T, s[keep]

    # evaluated in the eigenbasis of H so null-space components of the
    # iterate cannot leak rounding error into the gap
    def gap(t):
        c = Ur @ (t - star)
        return 0.5 * float(np.sum(sr * np.abs(c) ** 2))

    gaps = np.empty(iterations + 1)
    gaps[0] = gap(theta)
    for k in range(iterations):
        theta = theta - eta * (H @ (theta - star))
        gaps[k + 1] = gap(theta)
    bound = gaps[0] * (1.0 - eta * mu) ** np.arange(iterations + 1)
    report = StageLinearReport(mu, L, eta, gaps, bound)
    if not report.holds:
        k = int(np.argmax(gaps > bound * (1.0 + SLACK)))
        raise BoundViolated(f"gap {gaps[k]} exceeds bound {bound[k]} at step {k}")
    return report


def acceleration_bound(rho_accuracy, eta, mu_early, mu_uniform):
    """Iteration bounds ``log(1/rho) / (eta mu)`` for the early-stage and uniform curvatures."""
    if not 0.0 < rho_accuracy < 1.0:
        raise BadInputs("rho must lie in (0, 1)")
    if not eta > 0:
        raise BadInputs("eta must be positive")
    if not mu_early > mu_uniform > 0:
        raise BadInputs(f"need mu_early > mu_uniform > 0, got {mu_early}, {mu_uniform}")
    k_coggen = np.log(1.0 / rho_accuracy) / (eta * mu_early)
    k_dip = np.log(1.0 / rho_accuracy) / (eta * mu_uniform)
    return float(k_coggen), float(k_dip)


def iterations_to_accuracy(B, r, eta, rho_accuracy, max_iter=100000):
    """GD steps on ``||B theta - r||^2`` from zero until the gap falls below ``rho``."""
    B = np.asarray(B)
    theta = np.zeros(B.shape[1], dtype=np.result_type(B, r, 1.0))
    best = np.linalg.lstsq(B, r, rcond=None)[0]
    floor = np.linalg.norm(B @ best - r) ** 2

    def gap(t):
        return np.linalg.norm(B @ t - r) ** 2 - floor

    g0 = gap(theta)
    for k in range(max_iter + 1):
        if gap(theta) <= rho_accuracy * g0:
            return k
        theta = theta - eta * 2.0 * (B.conj().T @ (B @ theta - r))
    return -1


def dft_matrix(n):
    """Dense unitary 2D DFT on an ``n x n`` grid, rows in centred k-space order."""
    k = np.arange(n)
    f1 = np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)
    f1 = np.fft.fftshift(f1, axes=0)
    return np.kron(f1, f1)


@dataclass
class AccelerationReport:
    mu_early: float
    mu_uniform: float
    L: float
    eta: float
    rho: float
    k_coggen_bound: float
    k_dip_bound: float
    k_coggen_measured: int
    k_uniform_measured: int

    @property
    def premise_holds(self):
        return self.mu_early > self.mu_uniform

    @property
    def bound_holds(self):
        return 0 <= self.k_coggen_measured <= self.k_coggen_bound


def acceleration_experiment(n=8, af=2.0, early_radius=2.5, decay=0.35, rho=0.01, seed=0):
    """Masked-DFT problem whose generator Jacobian favours low frequencies.

    The Jacobian is ``F^H diag(a) Q`` with gaussian spectral decay ``a`` and
    a random orthogonal ``Q``; the early stage keeps only acquired samples
    within ``early_radius`` of the k-space centre (a 0/1 weighting), the
    uniform stage keeps all of them.
    """
    rng = make_rng(seed, stream=5)
    N = n * n
    F = dft_matrix(n)
    d = distance_grid(n, n).ravel()
    keep = np.zeros(N, dtype=bool)
    budget = int(round(N / af))
    keep[np.argsort(d + 0.5 * rng.random(N), kind="stable")[:budget]] = True
    A = F[keep]
    amp = np.exp(-decay * d)
    Q, _ = np.linalg.qr(rng.standard_normal((N, N)))
    J = F.conj().T @ np.diag(amp) @ Q
    v_uniform = np.ones(A.shape[0])
    v_early = (d[keep] < early_radius).astype(np.float64)
    pl_u = pl_constants(J, A, v_uniform)
    pl_e = pl_constants(J, A, v_early)
    L = max(pl_u.L, pl_e.L)
    eta = 1.0 / L
    k_c, k_d = acceleration_bound(rho, eta, pl_e.mu, pl_u.mu)
    r = rng.standard_normal(A.shape[0]) + 1j * rng.standard_normal(A.shape[0])
    B_e = weighted_operator(J, A, v_early)
    B_u = weighted_operator(J, A, v_uniform)
    return AccelerationReport(
        pl_e.mu,
        pl_u.mu,
        L,
        eta,
        rho,
        k_c,
        k_d,
        iterations_to_accuracy(B_e, v_early * r, eta, rho),
        iterations_to_accuracy(B_u, r, eta, rho),
    )


# --------------------------------------------------------------------------
# noise-imprint bounds
# --------------------------------------------------------------------------


def operator_norm_of_step(A, v, eta):
    """``||I - eta A^H diag(v) A||_2`` by power iteration on its square."""
    A = np.asarray(A)
    M = np.eye(A.shape[1]) - eta * (A.conj().T @ (np.asarray(v)[:, None] * A))
    lam = power_iteration(lambda x: M.conj().T @ (M @ x), A.shape[1], iters=5000, tol=1e-15)
    return float(np.sqrt(max(lam, 0.0)))


@dataclass
class StageWeighting:
    """Per-stage diagonal weights with their lengths and contraction factors."""

    weights: list
    lengths: list
    tau: int
    v_bar: float
    rho: list

    def __post_init__(self):
        if len(self.weights) != len(self.lengths) or len(self.rho) != len(self.lengths):
            raise BadInputs("weights, lengths and rho must have one entry per stage")
        if any(not 0.0 < p < 1.0 for p in self.rho):
            raise BadInputs("every rho_t must lie in (0, 1)")
        if not 0.0 < self.v_bar <= 1.0:
            raise BadInputs("v_bar must lie in (0, 1]")

    @property
    def T(self):
        return int(sum(self.lengths))

    def stage_of(self):
        return np.repeat(np.arange(len(self.lengths)), self.lengths)

    def rho_per_iteration(self):
        return np.asarray(self.rho, dtype=np.float64)[self.stage_of()]

    @classmethod
    def measure(cls, A, weights, lengths, eta, noise, tau=None):
        """Measure ``rho_t`` and ``v_bar`` from actual weights and noise.

        ``tau`` defaults to the length of the first stage; ``v_bar`` is the
        largest ``||v eps|| / ||eps||`` over iterations before ``tau``.
        """
        tau = int(lengths[0]) if tau is None else int(tau)
        rho = [operator_norm_of_step(A, v, eta) for v in weights]
        noise = np.asarray(noise)
        nn = np.linalg.norm(noise)
        stage = np.repeat(np.arange(len(lengths)), lengths)
        early = sorted(set(stage[:tau].tolist()))
        v_bar = max(np.linalg.norm(weights[s] * noise) / nn for s in early) if early and nn > 0 else 1.0
        return cls(list(weights), [int(x) for x in lengths], tau, float(v_bar), rho)


def _tail_products(rho):
    """``P[t] = prod_{s=t+1}^{T-1} rho_s`` for t = 0..T-1."""
    T = len(rho)
    out = np.ones(T)
    for t in range(T - 2, -1, -1):
        out[t] = out[t + 1] * rho[t + 1]
    return out


def noise_imprint_bounds(w, normA, noise_norm, eta, T=None):
    """Uniform-weighting and curriculum-weighted noise-imprint bounds at step ``T``."""
    T = w.T if T is None else int(T)
    if T < 1 or T > w.T:
        raise BadInputs(f"T={T} outside [1, {w.T}]")
    if not eta > 0 or normA < 0 or noise_norm < 0:
        raise BadInputs("eta must be positive and norms non-negative")
    tails = _tail_products(w.rho_per_iteration()[:T])
    scale = eta * normA * noise_norm
    b_dip = scale * float(tails.sum())
    tau = min(w.tau, T)
    b_coggen = scale * float(w.v_bar * tails[:tau].sum() + tails[tau:].sum())
    if tau >= 1 and w.v_bar < 1.0 and scale > 0 and not b_coggen < b_dip:
        raise BoundViolated(f"B_coggen={b_coggen} is not below B_dip={b_dip}")
    return b_dip, b_coggen


def geometric_bound_factor(rho, T):
    """Closed form of ``sum_t prod rho`` for a constant ``rho``."""
    return (1.0 - rho**T) / (1.0 - rho)


@dataclass
class NoiseTrajectory:
    norms: np.ndarray
    bounds: np.ndarray
    b_dip: float
    b_coggen: float

    @property
    def final(self):
        return float(self.norms[-1])


def simulate_weighted_noise_error(problem, w, T=None):
    """Weighted iteration driven by noise alone (``x_star = 0``, ``e0 = 0``).

    Checks every stage step is a contraction by ``rho_t`` and that the noise
    error stays under the curriculum bound at every step.
    """
    T = w.T if T is None else int(T)
    A = problem.A
    eta = problem.eta
    for v, rho in zip(w.weights, w.rho):
        measured = operator_norm_of_step(A, v, eta)
        if measured > rho * (1.0 + SLACK):
            raise NonExpansivenessViolated(f"||I - eta A^H V A|| = {measured} exceeds rho = {rho}")
    eps = problem.noise
    normA = problem.norm
    nn = float(np.linalg.norm(eps))
    stage = w.stage_of()
    e = np.zeros(A.shape[1], dtype=np.result_type(A, eps, 1.0))
    norms = np.zeros(T + 1)
    bounds = np.zeros(T + 1)
    for t in range(T):
        v = w.weights[stage[t]]
        e = e - eta * (A.conj().T @ (v * (A @ e))) + eta * (A.conj().T @ (v * eps))
        norms[t + 1] = np.linalg.norm(e)
        bounds[t + 1] = noise_imprint_bounds(w, normA, nn, eta, t + 1)[1]
    b_dip, b_coggen = noise_imprint_bounds(w, normA, nn, eta, T)
    if np.any(norms > bounds * (1.0 + SLACK) + 1e-300):
        k = int(np.argmax(norms > bounds * (1.0 + SLACK)))
        raise BoundViolated(f"noise error {norms[k]} exceeds bound {bounds[k]} at step {k}")
    return NoiseTrajectory(norms, bounds, b_dip, b_coggen)


def diagonal_curriculum_problem(n_modes=16, T=200, low_modes=4, early_weight=0.1, eta=0.5, seed=0):
    """Diagonal system with decaying singular values and a two-stage curriculum.

    Returns ``(problem, curriculum StageWeighting, uniform StageWeighting)``;
    the first ``T // 2`` steps down-weight all but the ``low_modes`` largest
    singular directions.
    """
    rng = make_rng(seed, stream=6)
    sigma = 1.0 / np.sqrt(1.0 + np.arange(n_modes))
    A = np.diag(sigma)
    noise = 0.05 * rng.standard_normal(n_modes)
    problem = LinearProblem(A, np.zeros(n_modes), noise, eta)
    early = np.where(np.arange(n_modes) < low_modes, 1.0, early_weight)
    late = np.ones(n_modes)
    lengths = [T // 2, T - T // 2]
    cur = StageWeighting.measure(A, [early, late], lengths, eta, noise)
    uni = StageWeighting.measure(A, [late, late], lengths, eta, noise)
    return problem, cur, uni


# --------------------------------------------------------------------------
# packaged verification runs (used by the CLI and the acceptance suite)
# --------------------------------------------------------------------------


def landweber_iterations_needed(p, rel_tol=1e-4, min_sigma=0.05, cap=500_000):
    """Steps after which every mode with ``sigma >= min_sigma`` is within
    ``rel_tol`` of its steady state, from the exact per-mode contraction."""
    s = p.singular_values
    eps = p.U.conj().T @ p.noise
    e0 = -(p.V.conj().T @ p.x_star)
    need = 1
    for i in np.flatnonzero(s >= min_sigma):
        ss = eps[i] / s[i]
        rho = abs(1.0 - p.eta * s[i] ** 2)
        gap = abs(e0[i] - ss)
        if gap == 0 or rho == 0:
            continue
        if ss == 0:
            return cap
        k = np.log(rel_tol * abs(ss) / gap) / np.log(rho)
        need = max(need, int(np.ceil(k)))
    return min(max(need, 1), cap)


def spectral_check(seed=0, size=6, min_sigma=0.05, tolerance=0.01):
    """Random square system: simulated steady-state mode errors against eps_i / sigma_i."""
    rng = make_rng(seed, stream=7)
    A = rng.standard_normal((size, size)) / np.sqrt(size)
    x_star = rng.standard_normal(size)
    noise = 0.1 * rng.standard_normal(size)
    s = svd_small(A)[1]
    p = LinearProblem(A, x_star, noise, 1.0 / s[0] ** 2)
    traj = landweber_trajectory(p, landweber_iterations_needed(p, min_sigma=min_sigma))
    rel = traj.relative_error(min_sigma)
    return {
        "passed": bool(np.all(rel < tolerance)),
        "iterations": int(traj.history.shape[0] - 1),
        "modes_checked": int(rel.size),
        "max_relative_error": float(rel.max()) if rel.size else 0.0,
        "sigma": traj.sigma.tolist(),
    }


def random_quadratic(rng, n, rank=None, condition=(20.0, 1000.0)):
    """Hermitian PSD ``H = Q diag(lam) Q^H`` with a chosen rank and a random start.

    The non-zero spectrum spans ``[L / kappa, L]`` with ``kappa`` log-uniform
    in ``condition``; well-conditioned draws would reach round-off within a
    few dozen steps and leave nothing to measure.
    """
    rank = n if rank is None else rank
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    L = float(rng.uniform(0.5, 5.0))
    kappa = float(np.exp(rng.uniform(np.log(condition[0]), np.log(condition[1]))))
    lam = np.zeros(n)
    lam[:rank] = L
    if rank > 1:
        lam[rank - 1] = L / kappa
        lam[1 : rank - 1] = rng.uniform(L / kappa, L, rank - 2)
    theta0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return (Q * lam) @ Q.conj().T, theta0


def stage_linear_check(n_problems=10, iterations=200, seed=0):
    rng = make_rng(seed, stream=8)
    worst = 0.0
    passed = True
    for k in range(n_problems):
        n = int(rng.integers(3, 9))
        rank = n if k % 2 == 0 else int(rng.integers(2, n))
        H, theta0 = random_quadratic(rng, n, rank)
        try:
            rep = verify_stage_linear(H, theta0, iterations)
        except BoundViolated:
            passed = False
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(rep.bound > 0, rep.gaps / rep.bound, 0.0)
        worst = max(worst, float(np.nanmax(ratio[1:])))
    return {"passed": passed, "problems": n_problems, "iterations": iterations, "max_gap_over_bound": worst}


def acceleration_check(seed=0):
    rep = acceleration_experiment(seed=seed)
    return {
        "passed": bool(rep.premise_holds and rep.bound_holds),
        "mu_early": rep.mu_early,
        "mu_uniform": rep.mu_uniform,
        "eta": rep.eta,
        "k_measured": rep.k_coggen_measured,
        "k_bound": rep.k_coggen_bound,
        "k_uniform_measured": rep.k_uniform_measured,
        "k_uniform_bound": rep.k_dip_bound,
    }


def random_weighting_config(rng):
    """A tall full-rank system with a two- or three-stage soft weighting."""
    n = int(rng.integers(3, 7))
    m = n + int(rng.integers(0, 5))
    A = rng.standard_normal((m, n)) / np.sqrt(m)
    smax = svd_small(A)[1][0]
    eta = float(rng.uniform(0.3, 1.0)) / smax**2
    noise = rng.standard_normal(m)
    n_stages = int(rng.integers(2, 4))
    weights = [rng.uniform(0.1, 1.0, m) for _ in range(n_stages - 1)] + [np.ones(m)]
    lengths = [int(x) for x in rng.integers(5, 60, n_stages)]
    tau = int(rng.integers(1, lengths[0] + 1))
    problem = LinearProblem(A, np.zeros(n), noise, eta)
    return problem, StageWeighting.measure(A, weights, lengths, eta, noise, tau)


def noise_bound_check(n_configs=50, seed=0):
    rng = make_rng(seed, stream=9)
    strict = True
    simulated = True
    worst = 0.0
    for _ in range(n_configs):
        problem, w = random_weighting_config(rng)
        try:
            b_dip, b_cog = noise_imprint_bounds(w, problem.norm, float(np.linalg.norm(problem.noise)), problem.eta)
        except BoundViolated:
            strict = False
            continue
        strict &= bool(b_cog < b_dip)
        try:
            traj = simulate_weighted_noise_error(problem, w)
        except (BoundViolated, NonExpansivenessViolated):
            simulated = False
            continue
        worst = max(worst, float(np.max(traj.norms[1:] / traj.bounds[1:])))
    return {
        "passed": bool(strict and simulated),
        "configurations": n_configs,
        "strict_ordering": bool(strict),
        "simulation_within_bound": bool(simulated),
        "max_norm_over_bound": worst,
    }


SECTIONS = ("spectral", "pl", "bounds")


def run_verification(section="all", seed=0):
    """Run one or all theory sections; each entry carries a ``passed`` flag."""
    chosen = SECTIONS if section == "all" else (section,)
    if any(s not in SECTIONS for s in chosen):
        raise BadInputs(f"unknown theory section {section!r}")
    out = {}
    if "spectral" in chosen:
        out["spectral"] = spectral_check(seed)
    if "pl" in chosen:
        out["stage_linear"] = stage_linear_check(seed=seed)
        out["acceleration"] = acceleration_check(seed)
    if "bounds" in chosen:
        out["noise_imprint"] = noise_bound_check(seed=seed)
    return out
