"""Numerical lab for the multilinear estimates behind the local theory.

"Less-than-or-similar" statements are not provable numerically; the
contract here is falsifiable surrogates: empirical ratio suprema that
stay finite and stable under ensemble doubling and grid refinement for
admissible exponents, and that visibly grow for exponents violating the
conditions.  Every report records the generator parameters of its worst
case so runs are reproducible.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft

from .errors import ConfigurationError, DegenerateInputError
from .norms import SpaceTimeField, XsbSpec, mixed_norm, sobolev_norm, xsb_norm
from .spectral import GridSpec, SpectralField2D, pointwise_product

__all__ = [
    "ExponentTuple",
    "FrequencyTriple",
    "RatioReport",
    "FuzzConfig",
    "angle_ratio",
    "angle_scan",
    "free_wave",
    "strichartz_tataru_ratio",
    "bilinear_conditions",
    "bilinear_ratio_fuzz",
    "sobolev_product_ratio",
    "sobolev_ratio_fuzz",
    "worker_count",
]


def worker_count() -> int:
    """Parallel trial workers, capped by the MKG2D_THREADS variable."""
    raw = os.environ.get("MKG2D_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigurationError(f"MKG2D_THREADS={raw!r} is not an integer")


# ---------------------------------------------------------------------------
# Angle estimate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrequencyTriple:
    """Convolution triple: frequencies summing to zero, with wave signs."""

    xi1: tuple[float, float]
    xi2: tuple[float, float]
    xi3: tuple[float, float]
    tau1: float
    tau2: float
    tau3: float
    signs: tuple[int, int, int] = (1, 1, 1)

    def __post_init__(self):
        for a, b, c in zip(self.xi1, self.xi2, self.xi3):
            if a + b + c != 0.0:
                raise ConfigurationError("xi1 + xi2 + xi3 must vanish exactly")
        if self.tau1 + self.tau2 + self.tau3 != 0.0:
            raise ConfigurationError("tau1 + tau2 + tau3 must vanish exactly")
        if any(s not in (-1, 1) for s in self.signs):
            raise ConfigurationError("signs must be +1 or -1")

    @classmethod
    def closed(cls, xi1, xi2, tau1, tau2, signs=(1, 1, 1)) -> "FrequencyTriple":
        """Complete (xi3, tau3) so the zero-sum constraints hold exactly."""
        xi3 = (-(xi1[0] + xi2[0]), -(xi1[1] + xi2[1]))
        return cls(tuple(xi1), tuple(xi2), xi3, tau1, tau2, -(tau1 + tau2), tuple(signs))


def _angle_ratios_vec(
    x1: np.ndarray,
    x2: np.ndarray,
    t1: np.ndarray,
    t2: np.ndarray,
    t3: np.ndarray,
    s1: np.ndarray,
    s2: np.ndarray,
    alpha: float,
    beta: float,
    gamma: float,
) -> np.ndarray:
    """Vectorized angle/(three-term bound) over triples (axis 0)."""
    n1 = np.hypot(x1[:, 0], x1[:, 1])
    n2 = np.hypot(x2[:, 0], x2[:, 1])
    n3 = np.hypot(x1[:, 0] + x2[:, 0], x1[:, 1] + x2[:, 1])  # |xi3|
    u = s1[:, None] * x1
    v = s2[:, None] * x2
    cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    dot = u[:, 0] * v[:, 0] + u[:, 1] * v[:, 1]
    angle = np.arctan2(np.abs(cross), dot)
    angle[(n1 == 0) | (n2 == 0)] = 0.0  # degenerate vectors: angle 0

    def jb(x):  # <x> = (1 + x^2)^{1/2}
        return np.sqrt(1.0 + x * x)

    m = np.minimum(jb(n1), jb(n2))
    term1 = (jb(-t1 + s1 * n1) / m) ** alpha
    term2 = (jb(-t2 + s2 * n2) / m) ** beta
    term3 = (jb(np.abs(t3) - n3) / m) ** gamma
    return angle / (term1 + term2 + term3)


def angle_ratio(
    t: FrequencyTriple, alpha: float, beta: float, gamma: float
) -> float:
    """angle(s1 xi1, s2 xi2) divided by the three-weight right-hand side."""
    for e, name in ((alpha, "alpha"), (beta, "beta"), (gamma, "gamma")):
        if not (0.0 <= e <= 0.5):
            raise ConfigurationError(f"{name}={e} must lie in [0, 1/2]")
    out = _angle_ratios_vec(
        np.array([t.xi1]),
        np.array([t.xi2]),
        np.array([t.tau1]),
        np.array([t.tau2]),
        np.array([t.tau3]),
        np.array([t.signs[0]], dtype=float),
        np.array([t.signs[1]], dtype=float),
        alpha,
        beta,
        gamma,
    )
    return float(out[0])


@dataclass
class AngleScanReport:
    n_samples: int
    max_ratio: float
    argmax: dict
    alpha: float
    beta: float
    gamma: float
    seed: int


def _extremal_triples(max_xi: float):
    """Deterministic near-extremal family: (anti)parallel on-cone pairs.

    These dominate the ratio, which pins the scan maximum and makes it
    stable under ensemble doubling.
    """
    mags = np.geomspace(1.0, max_xi, 24)
    cs = np.geomspace(0.05, 20.0, 23)
    rows = []
    for m in mags:
        for c in cs:
            for s1 in (1.0, -1.0):
                for s2 in (1.0, -1.0):
                    for orient in (1.0, -1.0):  # parallel / antiparallel
                        x1 = (m, 0.0)
                        x2 = (orient * c * m, 0.0)
                        # on-cone sheets matched to the angle signs
                        t1 = s1 * m
                        t2 = s2 * abs(x2[0])
                        rows.append((x1, x2, t1, t2, s1, s2))
    x1 = np.array([r[0] for r in rows])
    x2 = np.array([r[1] for r in rows])
    t1 = np.array([r[2] for r in rows])
    t2 = np.array([r[3] for r in rows])
    s1 = np.array([r[4] for r in rows])
    s2 = np.array([r[5] for r in rows])
    return x1, x2, t1, t2, s1, s2


def _random_triples(n: int, max_xi: float, rng: np.random.Generator):
    mag1 = np.exp(rng.uniform(0.0, math.log(max_xi), n))
    mag2 = np.exp(rng.uniform(0.0, math.log(max_xi), n))
    th1 = rng.uniform(0.0, 2.0 * np.pi, n)
    th2 = rng.uniform(0.0, 2.0 * np.pi, n)
    x1 = np.stack([mag1 * np.cos(th1), mag1 * np.sin(th1)], axis=1)
    x2 = np.stack([mag2 * np.cos(th2), mag2 * np.sin(th2)], axis=1)
    s1 = rng.choice([-1.0, 1.0], n)
    s2 = rng.choice([-1.0, 1.0], n)
    sheet1 = rng.choice([-1.0, 1.0], n)
    sheet2 = rng.choice([-1.0, 1.0], n)
    # jitter scale from exactly on-cone to far off-cone
    scale = np.exp(rng.uniform(math.log(1e-3), math.log(30.0), n))
    t1 = sheet1 * mag1 + scale * rng.standard_normal(n)
    t2 = sheet2 * mag2 + scale * rng.standard_normal(n)
    on = rng.random(n) < 0.35  # a good fraction exactly on-cone
    t1 = np.where(on, sheet1 * mag1, t1)
    t2 = np.where(on, sheet2 * mag2, t2)
    return x1, x2, t1, t2, s1, s2


def angle_scan(
    n_samples: int,
    seed: int = 0,
    alpha: float = 0.5,
    beta: float = 0.5,
    gamma: float = 0.49,
    max_xi: float = 1e3,
    permute_23: bool = False,
) -> AngleScanReport:
    """Sample triples (all four sign combinations) and report the sup ratio.

    permute_23 exchanges the roles of the second and third frequencies
    (signed weight on slot 3, wave weight on slot 2), the form used when
    the output frequency is the small one.
    """
    rng = np.random.default_rng(seed)
    parts = [_extremal_triples(max_xi), _random_triples(n_samples, max_xi, rng)]
    x1 = np.concatenate([p[0] for p in parts])
    x2 = np.concatenate([p[1] for p in parts])
    t1 = np.concatenate([p[2] for p in parts])
    t2 = np.concatenate([p[3] for p in parts])
    s1 = np.concatenate([p[4] for p in parts])
    s2 = np.concatenate([p[5] for p in parts])
    t3 = -(t1 + t2)
    if permute_23:
        x3 = -(x1 + x2)
        x2, x3 = x3, x2
        t2, t3 = t3, t2
    ratios = _angle_ratios_vec(x1, x2, t1, t2, t3, s1, s2, alpha, beta, gamma)
    i = int(np.argmax(ratios))
    argmax = {
        "xi1": x1[i].tolist(),
        "xi2": x2[i].tolist(),
        "tau1": float(t1[i]),
        "tau2": float(t2[i]),
        "signs": [int(s1[i]), int(s2[i])],
        "ratio": float(ratios[i]),
    }
    return AngleScanReport(
        n_samples=len(ratios),
        max_ratio=float(ratios[i]),
        argmax=argmax,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Free waves and Strichartz/Tataru-type ratios
# ---------------------------------------------------------------------------


def free_wave(
    u0: SpectralField2D,
    nt: int = 64,
    t_span: float = 2.0 * np.pi,
    window: str = "hann",
) -> SpaceTimeField:
    """u(t) = exp(i t |grad|) u0 sampled on nt uniform times, windowed."""
    times = t_span * np.arange(nt) / nt
    xi = u0.grid.xi_abs[:, :, None]
    coeffs_t = u0.coeffs[:, :, None] * np.exp(1j * xi * times[None, None, :])
    from .norms import make_window

    w = make_window(nt, window)
    coeffs = _fft.fft(coeffs_t * w, axis=-1) / nt
    return SpaceTimeField(
        u0.grid, nt, t_span, coeffs, window, meta={"generator": "free_wave"}
    )


_VARIANTS = ("strichartz_L6xt", "lp_l2", "lp_l2plus")


def strichartz_tataru_ratio(
    u0: SpectralField2D,
    p: float,
    variant: str = "lp_l2",
    nt: int = 64,
    t_span: float = 2.0 * np.pi,
    eps: float = 0.01,
) -> float:
    """Mixed-norm / weighted-norm ratio for the windowed free wave.

    lp_l2 compares Lp_x L2_t against the wave-weighted space with
    exponents ((1/2)(1/2 - 1/p), (3/2)(1/2 - 1/p) + eps); lp_l2plus uses
    the (+, +) pair with L^{2+eps} in time; strichartz_L6xt compares the
    space-time L6 norm against exponents (1/2, 1/2 + eps).
    """
    if variant not in _VARIANTS:
        raise ConfigurationError(f"unknown variant {variant!r}")
    if not (2.0 <= p <= 6.0):
        raise ConfigurationError("p must lie in [2, 6]")
    u = free_wave(u0, nt=nt, t_span=t_span)
    if variant == "strichartz_L6xt":
        lhs = mixed_norm(u, 6.0, 6.0)
        rhs = xsb_norm(u, XsbSpec(0.5, 0.5 + eps, "wave", eps))
    else:
        gap = 0.5 * (0.5 - 1.0 / p)
        mod = 1.5 * (0.5 - 1.0 / p)
        if variant == "lp_l2":
            lhs = mixed_norm(u, p, 2.0)
            rhs = xsb_norm(u, XsbSpec(gap, mod + eps, "wave", eps))
        else:
            lhs = mixed_norm(u, p, 2.0 + eps)
            rhs = xsb_norm(u, XsbSpec(gap + eps, mod + eps, "wave", eps))
    if rhs == 0.0:
        raise DegenerateInputError("zero denominator norm")
    return lhs / rhs


# ---------------------------------------------------------------------------
# Bilinear condition list
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentTuple:
    s0: float
    s1: float
    s2: float
    b0: float
    b1: float
    b2: float


_BILINEAR_CONDITIONS = (
    ("b0 + b1 + b2 > 1/2", lambda e: e.b0 + e.b1 + e.b2 > 0.5),
    ("b0 + b1 >= 0", lambda e: e.b0 + e.b1 >= 0.0),
    ("b0 + b2 >= 0", lambda e: e.b0 + e.b2 >= 0.0),
    ("b1 + b2 >= 0", lambda e: e.b1 + e.b2 >= 0.0),
    (
        "s0 + s1 + s2 > 3/2 - (b0 + b1 + b2)",
        lambda e: e.s0 + e.s1 + e.s2 > 1.5 - (e.b0 + e.b1 + e.b2),
    ),
    (
        "s0 + s1 + s2 > 1 - min(b0 + b1, b0 + b2, b1 + b2)",
        lambda e: e.s0 + e.s1 + e.s2 > 1.0 - min(e.b0 + e.b1, e.b0 + e.b2, e.b1 + e.b2),
    ),
    (
        "s0 + s1 + s2 > 1/2 - min(b0, b1, b2)",
        lambda e: e.s0 + e.s1 + e.s2 > 0.5 - min(e.b0, e.b1, e.b2),
    ),
    ("s0 + s1 + s2 > 3/4", lambda e: e.s0 + e.s1 + e.s2 > 0.75),
    ("(s0 + b0) + 2 s1 + 2 s2 > 1", lambda e: (e.s0 + e.b0) + 2 * e.s1 + 2 * e.s2 > 1.0),
    ("2 s0 + (s1 + b1) + 2 s2 > 1", lambda e: 2 * e.s0 + (e.s1 + e.b1) + 2 * e.s2 > 1.0),
    ("2 s0 + 2 s1 + (s2 + b2) > 1", lambda e: 2 * e.s0 + 2 * e.s1 + (e.s2 + e.b2) > 1.0),
    ("s1 + s2 >= max(0, -b0)", lambda e: e.s1 + e.s2 >= max(0.0, -e.b0)),
    ("s0 + s2 >= max(0, -b1)", lambda e: e.s0 + e.s2 >= max(0.0, -e.b1)),
    ("s0 + s1 >= max(0, -b2)", lambda e: e.s0 + e.s1 >= max(0.0, -e.b2)),
)


def bilinear_conditions(e: ExponentTuple) -> tuple[bool, list[str]]:
    """Evaluate the product-estimate exponent conditions, naming violations."""
    violated = [name for name, pred in _BILINEAR_CONDITIONS if not pred(e)]
    return (not violated, violated)


# ---------------------------------------------------------------------------
# Ratio fuzzing
# ---------------------------------------------------------------------------


@dataclass
class RatioReport:
    """Empirical supremum record for one estimate target."""

    target: str
    n_trials: int
    max_ratio: float
    median_ratio: float
    argmax: dict
    grid_meta: dict
    exponents: dict
    n_degenerate: int = 0
    trial_ratios: list = field(default_factory=list)

    def __post_init__(self):
        if not (self.max_ratio >= self.median_ratio >= 0.0):
            raise ConfigurationError("need max_ratio >= median_ratio >= 0")


@dataclass(frozen=True)
class FuzzConfig:
    """Ensemble configuration for the ratio fuzzers."""

    n: int = 32
    nt: int = 32
    t_span: float = 2.0 * np.pi
    n_trials: int = 200
    seed: int = 0
    eps: float = 0.01
    input_weight: str = "wave"
    third_exponents: tuple[float, float] = (0.75, 0.75)  # (s, b) of the held factor

    def grid(self) -> GridSpec:
        return GridSpec(nx=self.n, ny=self.n)


def _st_mask(grid: GridSpec, nt: int) -> np.ndarray:
    kt = np.fft.fftfreq(nt, d=1.0 / nt)
    tmask = np.abs(kt) < nt / 3.0
    return grid.dealias_mask[:, :, None] & tmask[None, None, :]


def _st_gaussian(grid, nt, rng, k_band, w_band):
    """Flat complex Gaussian coefficients in a space-time band."""
    c = rng.standard_normal((grid.nx, grid.ny, nt)) + 1j * rng.standard_normal(
        (grid.nx, grid.ny, nt)
    )
    keep_x = (np.abs(grid.k1) <= k_band) & (np.abs(grid.k2) <= k_band)
    kt = np.fft.fftfreq(nt, d=1.0 / nt)
    keep_t = np.abs(kt) <= w_band
    return c * keep_x[:, :, None] * keep_t[None, None, :]


def _st_cone_packet(grid, nt, t_span, rng, k_center, thickness, sign, ang_width):
    """Random-phase packet localized near the cone |omega| = |xi|."""
    kk = grid.xi_abs
    om = np.fft.fftfreq(nt, d=1.0 / nt) * (2.0 * np.pi / t_span)
    theta = np.arctan2(np.asarray(grid.k2 + 0 * grid.k1), np.asarray(grid.k1 + 0 * grid.k2))
    th0 = rng.uniform(0, 2 * np.pi)
    dth = np.angle(np.exp(1j * (theta - th0)))
    radial = np.exp(-((kk - k_center) ** 2) / (2.0 * max(0.5, 0.15 * k_center) ** 2))
    angular = np.exp(-(dth**2) / (2.0 * ang_width**2))
    envelope = (radial * angular)[:, :, None] * np.exp(
        -((om[None, None, :] - sign * kk[:, :, None]) ** 2) / (2.0 * thickness**2)
    )
    phases = np.exp(2j * np.pi * rng.random((grid.nx, grid.ny, nt)))
    return envelope * phases


def _draw_field(grid, nt, t_span, rng, kind):
    kmax = grid.nx * grid.dealias_fraction / 2.0 - 1
    if kind == "gaussian":
        params = {
            "kind": "gaussian",
            "k_band": float(rng.uniform(2.0, kmax)),
            "w_band": float(rng.uniform(2.0, nt / 3.0 - 1)),
        }
        c = _st_gaussian(grid, nt, rng, params["k_band"], params["w_band"])
    else:
        params = {
            "kind": "cone",
            "k_center": float(rng.uniform(2.0, 0.8 * kmax)),
            "thickness": float(np.exp(rng.uniform(np.log(0.5), np.log(4.0)))),
            "sign": int(rng.choice([-1, 1])),
            "ang_width": float(rng.uniform(0.2, 1.5)),
        }
        c = _st_cone_packet(
            grid, nt, t_span, rng, params["k_center"], params["thickness"],
            params["sign"], params["ang_width"],
        )
    c = c * _st_mask(grid, nt)
    return c, params


def _st_samples(c):
    return _fft.ifftn(c, axes=(0, 1, 2)) * c.size


def _st_coeffs(samples, mask3):
    return (_fft.fftn(samples, axes=(0, 1, 2)) / samples.size) * mask3


def _st_field(grid, nt, t_span, coeffs):
    return SpaceTimeField(grid, nt, t_span, coeffs, window="none", meta={"generator": "fuzz"})


def _bilinear_output(target, grid, nt, t_span, cu, cv, cw=None):
    mask3 = _st_mask(grid, nt)
    if target == "product":
        out = _st_coeffs(_st_samples(cu) * _st_samples(cv), mask3)
    elif target == "nullform_q12":
        d1u = _st_samples(1j * grid.xi1[:, :, None] * cu)
        d2u = _st_samples(1j * grid.xi2[:, :, None] * cu)
        d1v = _st_samples(1j * grid.xi1[:, :, None] * cv)
        d2v = _st_samples(1j * grid.xi2[:, :, None] * cv)
        out = _st_coeffs(d1u * d2v - d2u * d1v, mask3)
    elif target == "triple_product":
        uv = _st_coeffs(_st_samples(cu) * _st_samples(cv), mask3)
        out = _st_coeffs(_st_samples(uv) * _st_samples(cw), mask3)
    else:
        raise ConfigurationError(f"unknown fuzz target {target!r}")
    return out


def _fuzz_trial(args):
    (seed, target, exps, n, nt, t_span, input_weight, third_exps) = args
    rng = np.random.default_rng(seed)
    grid = GridSpec(nx=n, ny=n)
    kind_u = "gaussian" if rng.random() < 0.5 else "cone"
    kind_v = "gaussian" if rng.random() < 0.5 else "cone"
    cu, pu = _draw_field(grid, nt, t_span, rng, kind_u)
    cv, pv = _draw_field(grid, nt, t_span, rng, kind_v)
    s0, s1, s2, b0, b1, b2 = exps
    cw = pw = None
    if target == "triple_product":
        cw, pw = _draw_field(grid, nt, t_span, rng, "gaussian")
    num_field = _st_field(grid, nt, t_span,
                          _bilinear_output(target, grid, nt, t_span, cu, cv, cw))
    numerator = xsb_norm(num_field, XsbSpec(-s0, -b0, "wave"))
    den_u = xsb_norm(_st_field(grid, nt, t_span, cu), XsbSpec(s1, b1, input_weight))
    den_v = xsb_norm(_st_field(grid, nt, t_span, cv), XsbSpec(s2, b2, input_weight))
    denominator = den_u * den_v
    if target == "triple_product":
        sw, bw = third_exps
        denominator *= xsb_norm(_st_field(grid, nt, t_span, cw), XsbSpec(sw, bw, "wave"))
    params = {"trial_seed": int(seed), "u": pu, "v": pv}
    if pw is not None:
        params["w"] = pw
    if denominator < 1e-12:
        return None, params
    return numerator / denominator, params


def _run_trials(fn, arglist):
    workers = worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, arglist, chunksize=4))
    return [fn(a) for a in arglist]


def bilinear_ratio_fuzz(
    target: str,
    exponents: ExponentTuple,
    config: FuzzConfig,
) -> RatioReport:
    """Empirical sup of ||B(u,v)|| / (||u|| ||v||) over the mixed ensemble.

    Half of the draws are flat band-limited Gaussians, half cone-adapted
    packets (the near-extremizers of wave estimates).  Degenerate
    denominators are skipped and counted.
    """
    ok, violated = bilinear_conditions(exponents)
    if not ok:
        import warnings

        warnings.warn(
            "exponent conditions violated (" + "; ".join(violated) + "); "
            "ratios may grow under refinement",
            stacklevel=2,
        )
    exps = (
        exponents.s0, exponents.s1, exponents.s2,
        exponents.b0, exponents.b1, exponents.b2,
    )
    seeds = np.random.SeedSequence(config.seed).generate_state(config.n_trials)
    args = [
        (int(s), target, exps, config.n, config.nt, config.t_span,
         config.input_weight, config.third_exponents)
        for s in seeds
    ]
    results = _run_trials(_fuzz_trial, args)
    ratios, params = [], []
    n_degenerate = 0
    for r, p in results:
        if r is None:
            n_degenerate += 1
        else:
            ratios.append(r)
            params.append(p)
    if not ratios:
        raise DegenerateInputError("all trials degenerate")
    arr = np.asarray(ratios)
    i = int(np.argmax(arr))
    return RatioReport(
        target=target,
        n_trials=len(ratios),
        max_ratio=float(arr[i]),
        median_ratio=float(np.median(arr)),
        argmax=params[i],
        grid_meta={
            "nx": config.n, "ny": config.n, "nt": config.nt,
            "t_span": config.t_span, "window": "none",
            "eps": config.eps, "seed": config.seed,
            "input_weight": config.input_weight,
        },
        exponents={
            "s0": exponents.s0, "s1": exponents.s1, "s2": exponents.s2,
            "b0": exponents.b0, "b1": exponents.b1, "b2": exponents.b2,
        },
        n_degenerate=n_degenerate,
        trial_ratios=[float(r) for r in arr],
    )


# ---------------------------------------------------------------------------
# Spatial Sobolev product ratios
# ---------------------------------------------------------------------------


def sobolev_product_ratio(
    u: SpectralField2D, v: SpectralField2D, s0: float, s1: float, s2: float
) -> float:
    """||u v||_{H^{-s0}} / (||u||_{H^{s1}} ||v||_{H^{s2}})."""
    den = sobolev_norm(u, s1) * sobolev_norm(v, s2)
    if den < 1e-300:
        raise DegenerateInputError("zero denominator norm")
    return sobolev_norm(pointwise_product(u, v), -s0) / den


def _sml_trial(args):
    seed, s0, s1, s2, n = args
    rng = np.random.default_rng(seed)
    grid = GridSpec(nx=n, ny=n)
    kmax = grid.nx * grid.dealias_fraction / 2.0 - 1
    from .spectral import random_band_limited

    u = random_band_limited(grid, rng, k_max=rng.uniform(2, kmax))
    v = random_band_limited(grid, rng, k_max=rng.uniform(2, kmax))
    try:
        ratio = sobolev_product_ratio(u, v, s0, s1, s2)
    except DegenerateInputError:
        return None, {}
    return ratio, {"trial_seed": int(seed)}


def sml_conditions(s0: float, s1: float, s2: float) -> bool:
    """Exponent conditions of the two-dimensional multiplication law:
    both sums at least their thresholds, with at most one equality."""
    total = s0 + s1 + s2
    if total < 1.0 or total < max(s0, s1, s2):
        return False
    return not (total == 1.0 and total == max(s0, s1, s2))


def sobolev_ratio_fuzz(
    s0: float, s1: float, s2: float, n: int = 64, n_trials: int = 200, seed: int = 0
) -> RatioReport:
    """Ensemble version of sobolev_product_ratio; warns off-condition."""
    if not sml_conditions(s0, s1, s2):
        import warnings

        warnings.warn("multiplication-law conditions not met", stacklevel=2)
    seeds = np.random.SeedSequence(seed).generate_state(n_trials)
    results = _run_trials(_sml_trial, [(int(s), s0, s1, s2, n) for s in seeds])
    ratios = [r for r, _ in results if r is not None]
    params = [p for r, p in results if r is not None]
    n_deg = sum(1 for r, _ in results if r is None)
    if not ratios:
        raise DegenerateInputError("all trials degenerate")
    arr = np.asarray(ratios)
    i = int(np.argmax(arr))
    return RatioReport(
        target="sobolev_product",
        n_trials=len(ratios),
        max_ratio=float(arr[i]),
        median_ratio=float(np.median(arr)),
        argmax=params[i],
        grid_meta={"nx": n, "ny": n, "seed": seed},
        exponents={"s0": s0, "s1": s1, "s2": s2},
        n_degenerate=n_deg,
        trial_ratios=[float(r) for r in arr],
    )
