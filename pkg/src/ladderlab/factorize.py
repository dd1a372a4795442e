"""Closed-form segment means and the certificate generator.

For a nonnegative weight f on the base segment [pi L, pi L + U] and its
reverse iterates under phi_1, define

    J_r = integral over the r-th component of f(phi_1^r(t)) dt,
    K_r = length of the r-th component,

with J_0 = U * mean(f) and K_0 = U.  Since phi_1' = Ztilde^2, each ratio
J_{r-1}/J_r is an f-weighted mean of Ztilde^2 over component r and each
K_{r-1}/K_r a plain mean, so both are attained at interior points alpha_r and
beta_r.  Finally f(alpha_0) = J_k/K_k.  Telescoping gives

    prod_r Ztilde^2(alpha_r) / Ztilde^2(beta_r) = mean(f) / f(alpha_0).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadU, TransportViolation, ZeroDenominator
from .ladder import (
    DEFAULT_L0,
    LadderModel,
    check_U,
    compose_to_base,
    disconnected_set,
    omega,
    segment_maps,
)
from .numerics import ZETA_NOISE_FLOOR, integrate_adaptive, mean_value_point

DEFAULT_K0 = 3
TRANSPORT_TOL = 1e-7
POINT_TOL = 1e-10
WEIGHT_NOISE_FLOOR = 1e-11
J_REL_TOL = 1e-10
FAMILY_IDS = ("f1", "f2", "f3", "unit", "power")


@dataclass(frozen=True)
class FunctionFamily:
    """One of the admissible weights on [pi L, pi L + U].

    ``f1 = t sin^2 t``, ``f2 = t cos^2 t``, ``f3 = t cos 2t``, ``unit = 1`` and
    ``power = (t - pi L)^delta``.  The power anchor is always pi L of the
    segment in use, so it is supplied at evaluation time.
    """

    id: str
    delta: float | None = None

    def __post_init__(self):
        if self.id not in FAMILY_IDS:
            raise ValueError(f"unknown family {self.id!r}")
        if self.id == "power":
            if self.delta is None or not self.delta > 0:
                raise ValueError("power family needs delta > 0")
        elif self.delta is not None:
            raise ValueError(f"family {self.id} takes no exponent")

    @classmethod
    def power(cls, delta: float) -> "FunctionFamily":
        return cls("power", float(delta))

    @property
    def label(self) -> str:
        return f"power({self.delta:g})" if self.id == "power" else self.id

    def trig_factor(self, t):
        """sin^2 t, cos^2 t or cos 2t for the trigonometric families."""
        t = np.asarray(t, dtype=np.float64)
        if self.id == "f1":
            return np.sin(t) ** 2
        if self.id == "f2":
            return np.cos(t) ** 2
        if self.id == "f3":
            return np.cos(2.0 * t)
        raise ValueError(f"family {self.id} has no trigonometric factor")

    def __call__(self, t, L: int):
        t = np.asarray(t, dtype=np.float64)
        if self.id == "unit":
            out = np.ones_like(t)
        elif self.id == "power":
            out = np.maximum(t - math.pi * L, 0.0) ** self.delta
        else:
            out = t * self.trig_factor(t)
        return out if out.ndim else float(out)


F1 = FunctionFamily("f1")
F2 = FunctionFamily("f2")
F3 = FunctionFamily("f3")
UNIT = FunctionFamily("unit")


def closed_form_mean(family: FunctionFamily, L: int, U: float) -> float:
    """(1/U) * integral of the family over [pi L, pi L + U], in closed form.

    Raises:
        BadU: U outside (0, pi/4).
    """
    check_U(U)
    a = math.pi * L
    s = math.sin(2.0 * U) / (2.0 * U)
    q = math.sin(U) ** 2 / U
    if family.id == "f1":
        return 0.25 * (2.0 * a + U) - 0.5 * (a + U) * s + 0.25 * q
    if family.id == "f2":
        return 0.25 * (2.0 * a + U) + 0.5 * (a + U) * s - 0.25 * q
    if family.id == "f3":
        return (a + U) * s - 0.5 * q
    if family.id == "unit":
        return 1.0
    return U**family.delta / (1.0 + family.delta)


def _check_k(k: int, k0: int, allow_zero: bool = False) -> None:
    if not (0 if allow_zero else 1) <= k <= k0:
        raise ValueError(f"k={k} outside {0 if allow_zero else 1}..{k0}")


def iterated_integrals(family: FunctionFamily, L: int, U: float, k: int, model: LadderModel | None,
                       k0: int = DEFAULT_K0) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """J_0..J_k and K_0..K_k for ``family`` on the disconnected set of order k.

    Every J_r with r >= 1 is checked against the change of variables
    ``integral f(phi_1^r t) Ztilde^2(t) dt = J_{r-1}`` over component r.

    Raises:
        TransportViolation: the change of variables misses by more than
            1e-7 relative, which points at a corrupt ladder cache.
    """
    _check_k(k, k0, allow_zero=True)
    j0 = U * closed_form_mean(family, L, U)
    J, K = [j0], [float(U)]
    if k == 0:
        return tuple(J), tuple(K)
    comps = disconnected_set(L, U, k, model).components
    for comp in comps[1:]:
        K.append(comp.length)
    if family.id == "unit":
        return tuple(K), tuple(K)

    maps = segment_maps(int(L), float(U), int(k), model)
    for r in range(1, k + 1):
        comp = comps[r]
        scale = 1.0 + abs(J[r - 1])

        def weight(t, r=r):
            return family(compose_to_base(t, r, maps), L)

        def transported(t, r=r):
            return weight(t) * model.z_tilde_sq(t)

        # phi_1^r evaluated at heights ~1e4 is only good to ~1e-12 absolute,
        # which caps the attainable relative accuracy of the weight.
        jr = integrate_adaptive(weight, comp.left_r, comp.right_r, J_REL_TOL * scale, WEIGHT_NOISE_FLOOR)
        back = integrate_adaptive(transported, comp.left_r, comp.right_r, J_REL_TOL * scale, ZETA_NOISE_FLOOR)
        if abs(back - J[r - 1]) > TRANSPORT_TOL * abs(J[r - 1]):
            raise TransportViolation(
                f"order {r}: transported integral {back!r} vs {J[r - 1]!r} ({family.label}, L={L}, U={U})")
        J.append(jr)
    return tuple(J), tuple(K)


@dataclass(frozen=True)
class FactorizationCertificate:
    """Points realising one exact factorization identity.

    ``z_alpha`` and ``z_beta`` hold Ztilde^2 at the alphas and betas as they
    were evaluated during construction.
    """

    family: FunctionFamily
    L: int
    U: float
    k: int
    alpha0: float
    alphas: tuple[float, ...]
    betas: tuple[float, ...]
    J: tuple[float, ...]
    K: tuple[float, ...]
    z_alpha: tuple[float, ...]
    z_beta: tuple[float, ...]
    residual: float

    @property
    def mean(self) -> float:
        return closed_form_mean(self.family, self.L, self.U)

    @property
    def product(self) -> float:
        """prod_r Ztilde^2(alpha_r) / Ztilde^2(beta_r)."""
        return math.prod(a / b for a, b in zip(self.z_alpha, self.z_beta))

    @property
    def alpha_product(self) -> float:
        return math.prod(self.z_alpha)

    @property
    def beta_product(self) -> float:
        return math.prod(self.z_beta)

    def zeta_ratio_product(self, t0: float) -> float:
        """prod_r |zeta(1/2+i alpha_r)|^2 / |zeta(1/2+i beta_r)|^2."""
        return math.prod(za * omega(a, t0) / (zb * omega(b, t0))
                         for za, zb, a, b in zip(self.z_alpha, self.z_beta, self.alphas, self.betas))

    def zeta_alpha_product(self, t0: float) -> float:
        """prod_r |zeta(1/2+i alpha_r)|^2."""
        return math.prod(za * omega(a, t0) for za, a in zip(self.z_alpha, self.alphas))

    def points(self) -> list[tuple[int, float]]:
        """(order, height) for alpha_0 and every alpha_r and beta_r."""
        out = [(0, self.alpha0)]
        out.extend((r, a) for r, a in enumerate(self.alphas, 1))
        out.extend((r, b) for r, b in enumerate(self.betas, 1))
        return out

    def to_record(self) -> dict:
        """Flat record: family, L, U, k, alpha0, alpha_1..k, beta_1..k, residual."""
        rec = {"family": self.family.label, "L": self.L, "U": _g17(self.U), "k": self.k,
               "alpha0": _g17(self.alpha0)}
        for r, a in enumerate(self.alphas, 1):
            rec[f"alpha{r}"] = _g17(a)
        for r, b in enumerate(self.betas, 1):
            rec[f"beta{r}"] = _g17(b)
        rec["residual"] = _g17(self.residual)
        return rec


def _g17(x: float) -> float:
    return float(f"{x:.17g}")


def _identity_residual(product: float, mean: float, f_alpha0: float) -> float:
    rhs = mean / f_alpha0
    return abs(product - rhs) / (1.0 + abs(rhs))


def factorize(family: FunctionFamily, L: int, U: float, k: int, model: LadderModel,
              k0: int = DEFAULT_K0, point_tol: float = POINT_TOL) -> FactorizationCertificate:
    """Construct alpha_0, alpha_1..alpha_k and beta_1..beta_k for ``family``.

    Raises:
        TargetOutsideRange: a mean-value solve found no bracket.
        ZeroDenominator: f(alpha_0) <= 0.
    """
    _check_k(k, k0)
    if L < DEFAULT_L0:
        raise ValueError(f"L={L} below L0={DEFAULT_L0}")
    J, K = iterated_integrals(family, L, U, k, model, k0)
    comps = disconnected_set(L, U, k, model).components
    alphas, betas = [], []
    for r in range(1, k + 1):
        a, b = comps[r].left_r, comps[r].right_r
        betas.append(mean_value_point(model.z_tilde_sq, a, b, K[r - 1] / K[r], point_tol))
        if family.id == "unit":
            alphas.append(betas[-1])
        else:
            alphas.append(mean_value_point(model.z_tilde_sq, a, b, J[r - 1] / J[r], point_tol))

    base_left, base_right = comps[0].left_r, comps[0].right_r
    alpha0 = mean_value_point(lambda t: family(t, L), base_left, base_right, J[k] / K[k], point_tol)
    f0 = family(alpha0, L)
    if not f0 > 0:
        raise ZeroDenominator(f"f(alpha0) = {f0!r} for {family.label}")
    z_alpha = tuple(float(v) for v in model.z_tilde_sq(np.array(alphas)))
    z_beta = tuple(float(v) for v in model.z_tilde_sq(np.array(betas)))
    product = math.prod(x / y for x, y in zip(z_alpha, z_beta))
    residual = _identity_residual(product, closed_form_mean(family, L, U), f0)
    return FactorizationCertificate(family=family, L=int(L), U=float(U), k=int(k), alpha0=alpha0,
                                    alphas=tuple(alphas), betas=tuple(betas), J=J, K=K,
                                    z_alpha=z_alpha, z_beta=z_beta, residual=residual)


@functools.lru_cache(maxsize=1024)
def certificate(family: FunctionFamily, L: int, U: float, k: int, model: LadderModel,
                k0: int = DEFAULT_K0) -> FactorizationCertificate:
    """Memoised :func:`factorize`."""
    return factorize(family, int(L), float(U), int(k), model, k0)


def verify_certificate(cert: FactorizationCertificate, model: LadderModel) -> float:
    """Relative defect of the identity, recomputed with fresh evaluator calls."""
    za = model.z_tilde_sq(np.array(cert.alphas, dtype=np.float64))
    zb = model.z_tilde_sq(np.array(cert.betas, dtype=np.float64))
    product = math.prod(float(a) / float(b) for a, b in zip(za, zb))
    return _identity_residual(product, closed_form_mean(cert.family, cert.L, cert.U), cert.family(cert.alpha0, cert.L))


__all__ = [
    "BadU",
    "DEFAULT_K0",
    "F1",
    "F2",
    "F3",
    "UNIT",
    "FactorizationCertificate",
    "FunctionFamily",
    "certificate",
    "closed_form_mean",
    "factorize",
    "iterated_integrals",
    "verify_certificate",
]
