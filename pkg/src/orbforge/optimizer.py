"""L-BFGS with a strong-Wolfe line search, multi-start VQE and exact ground energies."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .pauli import PauliSum, to_dense
from .simulator import CompiledHamiltonian, Objective

ObjectiveFn = Callable[[np.ndarray], tuple[float, np.ndarray]]

INIT_KINDS = ("uniform", "small")


@dataclass
class OptResult:
    theta: np.ndarray
    energy: float
    iterations: int
    converged: bool
    n_evals: int = 0
    message: str = ""
    restart_energies: list[float] = field(default_factory=list)

    @property
    def median_energy(self) -> float:
        return float(np.median(self.restart_energies)) if self.restart_energies else self.energy


class _Counted:
    def __init__(self, fun: ObjectiveFn):
        self.fun = fun
        self.evals = 0

    def __call__(self, x):
        self.evals += 1
        f, g = self.fun(x)
        return float(f), np.asarray(g, dtype=float)


def _cubic_min(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi):
    d1 = d_lo + d_hi - 3 * (f_lo - f_hi) / (a_lo - a_hi)
    disc = d1 * d1 - d_lo * d_hi
    if disc < 0 or not math.isfinite(disc):
        return None
    d2 = math.copysign(math.sqrt(disc), a_hi - a_lo)
    den = d_hi - d_lo + 2 * d2
    if den == 0:
        return None
    return a_hi - (a_hi - a_lo) * (d_hi + d2 - d1) / den


def wolfe_line_search(fun, x, f0, g0, d, alpha0=1.0, c1=1e-4, c2=0.9, max_evals=40, alpha_max=1e4):
    """Step length satisfying the strong Wolfe conditions along ``d``.

    Returns ``(alpha, f, g)`` or ``None`` if no acceptable step was found.
    Non-finite objective values shrink the trial step.
    """
    dphi0 = float(g0 @ d)
    if dphi0 >= 0:
        return None

    def phi(a):
        f, g = fun(x + a * d)
        return f, g, float(g @ d)

    best = None  # lowest sufficient-decrease point seen, returned as a fallback

    def note(a, f, g):
        nonlocal best
        if f <= f0 + c1 * a * dphi0 and (best is None or f < best[1]):
            best = (a, f, g)

    def zoom(lo, hi, evals):
        a_lo, f_lo, _, d_lo = lo
        a_hi, f_hi, _, d_hi = hi
        while evals < max_evals:
            span = a_hi - a_lo
            a = _cubic_min(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi)
            if a is None or not (min(a_lo, a_hi) + 0.1 * abs(span) <= a <= max(a_lo, a_hi) - 0.1 * abs(span)):
                a = a_lo + 0.5 * span
            f, g, da = phi(a)
            evals += 1
            if not math.isfinite(f):
                a_hi, f_hi, d_hi = a, math.inf, 0.0
                continue
            note(a, f, g)
            if f > f0 + c1 * a * dphi0 or f >= f_lo:
                a_hi, f_hi, d_hi = a, f, da
            else:
                if abs(da) <= -c2 * dphi0:
                    return a, f, g
                if da * (a_hi - a_lo) >= 0:
                    a_hi, f_hi, d_hi = a_lo, f_lo, d_lo
                a_lo, f_lo, d_lo = a, f, da
            if abs(a_hi - a_lo) < 1e-16 * max(1.0, abs(a_lo)):
                break
        return best

    a_prev, f_prev, g_prev, d_prev = 0.0, f0, g0, dphi0
    a = alpha0
    evals = 0
    nonfinite = 0
    while evals < max_evals:
        f, g, da = phi(a)
        evals += 1
        if not math.isfinite(f):
            nonfinite += 1
            if nonfinite > 10:
                return best
            a = a_prev + 0.5 * (a - a_prev)
            continue
        note(a, f, g)
        if f > f0 + c1 * a * dphi0 or (evals > 1 and f >= f_prev):
            return zoom((a_prev, f_prev, g_prev, d_prev), (a, f, g, da), evals)
        if abs(da) <= -c2 * dphi0:
            return a, f, g
        if da >= 0:
            return zoom((a, f, g, da), (a_prev, f_prev, g_prev, d_prev), evals)
        a_prev, f_prev, g_prev, d_prev = a, f, g, da
        a = min(2 * a, alpha_max)
    return best


def minimize(fun: ObjectiveFn, theta0, tol_grad: float = 1e-9, tol_step: float = 1e-12,
             max_iter: int = 5000, history: int = 10, c1: float = 1e-4, c2: float = 0.9) -> OptResult:
    """Limited-memory BFGS on ``fun(theta) -> (value, gradient)``."""
    x = np.array(theta0, dtype=float, copy=True)
    if not np.all(np.isfinite(x)):
        raise ValueError("initial parameters must be finite")
    fun = _Counted(fun)
    f, g = fun(x)
    if not math.isfinite(f):
        raise ValueError("objective is not finite at the initial point")
    mem: deque = deque(maxlen=history)
    message = "max_iter reached"
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        if x.size == 0 or np.max(np.abs(g)) < tol_grad:
            converged, message = True, "gradient tolerance"
            it -= 1
            break
        # two-loop recursion
        q = g.copy()
        alphas = []
        for s, y, rho in reversed(mem):
            a = rho * (s @ q)
            alphas.append(a)
            q -= a * y
        if mem:
            s, y, _ = mem[-1]
            q *= (s @ y) / (y @ y)
        else:
            q *= min(1.0, 1.0 / max(np.max(np.abs(g)), 1e-300))
        for (s, y, rho), a in zip(mem, reversed(alphas)):
            b = rho * (y @ q)
            q += (a - b) * s
        d = -q
        if g @ d >= 0:
            mem.clear()
            d = -g
        step = wolfe_line_search(fun, x, f, g, d, 1.0, c1, c2)
        if step is None and mem:
            mem.clear()
            d = -g * min(1.0, 1.0 / max(np.max(np.abs(g)), 1e-300))
            step = wolfe_line_search(fun, x, f, g, d, 1.0, c1, c2)
        if step is None:
            message = "line search failed"
            converged = np.max(np.abs(g)) < math.sqrt(tol_grad)
            break
        alpha, f_new, g_new = step
        s = alpha * d
        y = g_new - g
        sy = s @ y
        if sy > 1e-12 * (y @ y):
            mem.append((s, y, 1.0 / sy))
        df = f - f_new
        x = x + s
        f, g = f_new, g_new
        if abs(df) <= tol_step * max(1.0, abs(f)) or np.max(np.abs(s)) <= tol_step:
            converged, message = True, "step tolerance"
            break
    return OptResult(x, f, it, converged, fun.evals, message)


def initial_parameters(rng: np.random.Generator, size: int, kind: str = "uniform") -> np.ndarray:
    if kind == "uniform":
        return rng.uniform(-np.pi, np.pi, size)
    if kind == "small":
        return rng.normal(0.0, 0.01, size)
    raise ValueError(f"unknown initialisation {kind!r}; expected one of {INIT_KINDS}")


def restart_seeds(seed, n_rep: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(n_rep)


def multistart_vqe(template, layers: int, h, n_rep: int = 25, seed=0, init: str = "uniform",
                   theta0=None, **opt_kw) -> OptResult:
    """Best of ``n_rep`` independent L-BFGS runs; all final energies are kept.

    ``theta0`` (optional, one vector) replaces the first restart's draw.
    """
    if n_rep < 1:
        raise ValueError("n_rep must be at least 1")
    obj = Objective(template, layers, h)
    results = []
    for k, ss in enumerate(restart_seeds(seed, n_rep)):
        x0 = initial_parameters(np.random.default_rng(ss), obj.n_params, init)
        if k == 0 and theta0 is not None:
            x0 = np.asarray(theta0, dtype=float)
        results.append(minimize(obj, x0, **opt_kw))
    best = min(results, key=lambda r: r.energy)
    best = OptResult(best.theta, best.energy, best.iterations, best.converged, best.n_evals,
                     best.message, [r.energy for r in results])
    return best


def ground_energy(h: PauliSum, method: str = "auto", tol: float = 1e-12) -> float:
    """Smallest eigenvalue of ``h``.

    ``lanczos`` uses ARPACK on the matrix-free action; ``dense`` diagonalises
    the full matrix (n <= 10); ``auto`` picks dense below 5 qubits.
    """
    if method == "auto":
        method = "dense" if h.n < 5 else "lanczos"
    if method == "dense":
        return float(np.linalg.eigvalsh(to_dense(h))[0])
    if method != "lanczos":
        raise ValueError(f"unknown method {method!r}")
    from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

    ch = CompiledHamiltonian(h)
    dim = 1 << h.n
    op = LinearOperator((dim, dim), matvec=lambda v: ch.apply(np.ascontiguousarray(v, dtype=complex).ravel()),
                        dtype=complex)
    v0 = np.random.default_rng(0).normal(size=dim).astype(complex)
    for ncv in (None, 40, 80):
        try:
            vals = eigsh(op, k=1, which="SA", tol=tol, v0=v0, ncv=ncv, maxiter=20 * dim)[0]
            return float(vals[0].real)
        except ArpackNoConvergence:
            continue
    raise RuntimeError("Lanczos did not converge")
