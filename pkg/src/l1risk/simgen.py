"""Seeded dataset generators for the three simulation scenarios.

Scenarios
---------
section4      high-dimensional classification: y = sign(V + W) where V is the
              mean of the first 25 standard-normal columns, plus five noisy
              proxy columns V + U appended after the big_m main columns.
sparse_linear Gaussian regression y = beta_star . x + noise with i.i.d.
              standard-normal design.
null          y independent of the design (beta_star = 0).

Determinism contract: a generator is a pure function of (parameters, seed).
Seeds feed numpy's PCG64 via ``np.random.default_rng(seed)``; derived streams
use list seeds ``[base, index, ...]``. The per-dataset draw order is fixed and
the seed is recorded in ``Dataset.meta``.

The dispersion notation "0.25" / "9" for the section4 noise terms is read as a
variance by default; ``variance_convention="std"`` switches to reading it as a
standard deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from l1risk.risk import Coefficients, Dataset

VARIANCE_CONVENTIONS = ("var", "std")


@dataclass(frozen=True)
class ScenarioSpec:
    """Declarative description of one generator call (used by sweeps and the CLI)."""

    kind: str
    n: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("section4", "sparse_linear", "null"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        p = self.params
        if self.kind == "section4":
            if int(p.get("big_m", 0)) < 25:
                raise ValueError("section4 needs big_m >= 25")
            if p.get("variance_convention", "var") not in VARIANCE_CONVENTIONS:
                raise ValueError("variance_convention must be 'var' or 'std'")
        elif self.kind == "sparse_linear":
            if not isinstance(p.get("beta_star"), Coefficients):
                raise ValueError("sparse_linear needs params['beta_star']: Coefficients")
            if float(p.get("sigma", -1.0)) < 0:
                raise ValueError("sparse_linear needs params['sigma'] >= 0")
        else:
            if int(p.get("m", -1)) < 0:
                raise ValueError("null needs params['m'] >= 0")
            if float(p.get("sigma", -1.0)) < 0:
                raise ValueError("null needs params['sigma'] >= 0")


def _seed_record(seed):
    return [int(s) for s in seed] if np.ndim(seed) else int(seed)


def gen_section4(n: int, big_m: int, seed, variance_convention: str = "var") -> Dataset:
    """Classification scenario: m = big_m + 5 columns, labels in {-1, +1}.

    Columns 1..big_m (1-based, as in meta and the file formats) are i.i.d.
    N(0, 1). V = (x_1 + ... + x_25) / 5, y = sign(V + W) with sign(0) := +1,
    and the last five columns are V + U_j. Under the default "var" convention
    W has variance 0.25 and U has variance 9. Meta records the two coordinate
    groups as inclusive 1-based ranges.
    """
    if big_m < 25:
        raise ValueError("big_m must be at least 25")
    if variance_convention not in VARIANCE_CONVENTIONS:
        raise ValueError("variance_convention must be 'var' or 'std'")
    w_scale = 0.5 if variance_convention == "var" else 0.25
    u_scale = 3.0 if variance_convention == "var" else 9.0
    rng = np.random.default_rng(seed)
    x_main = rng.standard_normal((n, big_m))
    w = rng.normal(0.0, w_scale, size=n)
    u = rng.normal(0.0, u_scale, size=(n, 5))
    v = x_main[:, :25].sum(axis=1) / 5.0
    y = np.where(v + w >= 0.0, 1.0, -1.0)
    x = np.concatenate([x_main, v[:, None] + u], axis=1)
    meta = {
        "scenario": "section4",
        "seed": _seed_record(seed),
        "params": {"n": n, "big_m": big_m, "variance_convention": variance_convention},
        "relevant_range": [1, 25],
        "proxy_range": [big_m + 1, big_m + 5],
    }
    return Dataset(x, y, meta)


def gen_sparse_linear(spec: ScenarioSpec, seed) -> Dataset:
    """Regression scenario y = beta_star . x + N(0, sigma^2) with N(0,1) design."""
    if spec.kind != "sparse_linear":
        raise ValueError("spec.kind must be 'sparse_linear'")
    beta_star: Coefficients = spec.params["beta_star"]
    sigma = float(spec.params["sigma"])
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((spec.n, beta_star.m))
    noise = rng.normal(0.0, sigma, size=spec.n) if sigma > 0 else np.zeros(spec.n)
    y = x @ beta_star.values + noise
    nonzeros = [[int(j) + 1, float(v)] for j, v in enumerate(beta_star.values) if v != 0.0]
    meta = {
        "scenario": "sparse_linear",
        "seed": _seed_record(seed),
        "params": {"m": beta_star.m, "sigma": sigma, "beta_star": nonzeros},
        "relevant_range": None,
        "proxy_range": None,
    }
    return Dataset(x, y, meta)


def gen_null(n: int, m: int, sigma: float, seed) -> Dataset:
    """Null scenario: y ~ N(0, sigma^2) independent of the N(0,1) design."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, m))
    y = rng.normal(0.0, sigma, size=n) if sigma > 0 else np.zeros(n)
    meta = {
        "scenario": "null",
        "seed": _seed_record(seed),
        "params": {"m": m, "sigma": sigma},
        "relevant_range": None,
        "proxy_range": None,
    }
    return Dataset(x, y, meta)


def generate(spec: ScenarioSpec, seed) -> Dataset:
    """Dispatch a ScenarioSpec to its generator."""
    if spec.kind == "section4":
        return gen_section4(spec.n, int(spec.params["big_m"]), seed,
                            spec.params.get("variance_convention", "var"))
    if spec.kind == "sparse_linear":
        return gen_sparse_linear(spec, seed)
    return gen_null(spec.n, int(spec.params["m"]), float(spec.params["sigma"]), seed)


def true_risk_gaussian(beta: Coefficients, beta_star: Coefficients, sigma: float) -> float:
    """Population squared-loss risk sigma^2 + ||beta - beta_star||_2^2.

    Exact for the sparse_linear / null scenarios, whose design is i.i.d.
    standard normal (orthonormal in population).
    """
    if beta.m != beta_star.m:
        raise ValueError(f"dimension mismatch: {beta.m} vs {beta_star.m}")
    diff = beta.values - beta_star.values
    return float(sigma) ** 2 + float(diff @ diff)


def sparse_unit_vector(m: int, support_size: int) -> Coefficients:
    """k-sparse vector with equal weights on the first k coordinates, ||.||_2 = 1."""
    if not 1 <= support_size <= m:
        raise ValueError("need 1 <= support_size <= m")
    v = np.zeros(m)
    v[:support_size] = 1.0 / math.sqrt(support_size)
    return Coefficients(v)
