"""Riemann-Siegel evaluation of theta, Hardy's Z and |zeta(1/2+it)|^2.

The hot loop (the main Riemann-Siegel sum) runs in a compiled Cython kernel
when it is available and falls back to a numpy implementation otherwise.
Set ``LADDERLAB_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import _rs_numpy
from ._rs_coeffs import RS_COEFFS
from .errors import HeightTooLow

try:
    if os.environ.get("LADDERLAB_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from . import _rs_kernel as _compiled
except ImportError:
    _compiled = None

MAX_CORRECTION_ORDER = len(RS_COEFFS) - 1

_LENGTHS = np.array([len(c) for c in RS_COEFFS], dtype=np.int_)
_COEFFS = np.zeros((len(RS_COEFFS), int(_LENGTHS.max())), dtype=np.float64)
for _k, _c in enumerate(RS_COEFFS):
    _COEFFS[_k, : len(_c)] = _c

_KERNELS = {"numpy": _rs_numpy.hardy_z_many}
if _compiled is not None:
    _KERNELS["cython"] = _compiled.hardy_z_many

BACKEND = "cython" if _compiled is not None else "numpy"


def available_backends() -> list[str]:
    return sorted(_KERNELS)


@dataclass(frozen=True)
class EvalConfig:
    """Evaluator settings.

    Attributes:
        correction_order: number of Riemann-Siegel remainder terms beyond C_0
            (0..6).
        min_height: heights below this are refused.
    """

    correction_order: int = 6
    min_height: float = 50.0

    def __post_init__(self):
        if not 0 <= self.correction_order <= MAX_CORRECTION_ORDER:
            raise ValueError(f"correction_order must be in 0..{MAX_CORRECTION_ORDER}")
        if self.min_height < 10.0:
            raise ValueError("min_height must be >= 10")


DEFAULT_CONFIG = EvalConfig()


def _check_height(t, cfg: EvalConfig):
    lowest = np.min(t) if np.ndim(t) else t
    if np.size(t) and not lowest >= cfg.min_height:
        raise HeightTooLow(f"height {float(lowest)!r} below min_height {cfg.min_height}")


def riemann_siegel_theta(t, cfg: EvalConfig = DEFAULT_CONFIG):
    """Riemann-Siegel theta from its asymptotic series (through the t^-3 term)."""
    _check_height(t, cfg)
    if np.ndim(t):
        return _rs_numpy._theta(np.asarray(t, dtype=np.float64))
    t = float(t)
    return 0.5 * t * math.log(t / (2.0 * math.pi)) - 0.5 * t - math.pi / 8.0 + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t**3)


def hardy_z_array(t, cfg: EvalConfig = DEFAULT_CONFIG, backend: str | None = None) -> np.ndarray:
    """Vectorised Hardy Z-function."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    shape = t.shape
    t = t.ravel()
    _check_height(t, cfg)
    if t.size == 0:
        return np.empty(shape)
    name = backend or BACKEND
    if name not in _KERNELS:
        raise ValueError(f"unknown backend {name!r}; available: {', '.join(available_backends())}")
    kernel = _KERNELS[name]
    return kernel(t, _COEFFS, _LENGTHS, cfg.correction_order).reshape(shape)


def hardy_z(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Hardy's Z(t), real with |Z(t)| = |zeta(1/2 + it)|.

    Raises:
        HeightTooLow: if ``t < cfg.min_height``.
    """
    return float(hardy_z_array(np.array([t], dtype=np.float64), cfg)[0])


def zeta_mod_sq_array(t, cfg: EvalConfig = DEFAULT_CONFIG) -> np.ndarray:
    z = hardy_z_array(t, cfg)
    return z * z


def zeta_mod_sq(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|zeta(1/2 + it)|^2 as the square of ``hardy_z``."""
    z = hardy_z(t, cfg)
    return z * z
