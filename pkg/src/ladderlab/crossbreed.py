"""Hybrid identities assembled from factorization certificates.

Each certificate for a weight f satisfies ``f(alpha_0) * P = mean(f)`` with
``P = prod Ztilde^2(alpha_r) / Ztilde^2(beta_r)``.  Combining the three
trigonometric weights (sin^2 + cos^2 = 1, cos^2 - sin^2 = cos 2t) and the
power weights (t - pi L)^delta gives the exact and asymptotic relations
checked here.  Every check returns a :class:`HybridReport`.

Formula ids:

    X32  f1 term + f3 term / 2 = (pi L + U/2) / 2
    X33  f2 term + f1 term = pi L + U/2
    T35  f2 term - f1 term = f3 term                       (exact, any k1, k2, k3)
    A41  T35 with raw |zeta|^2 ratios and alpha_0 prefactors dropped (asymptotic)
    A43  A41 with k1 = k2 = k3, beta products cancelled (asymptotic)
    C18  A43 with k = 1
    P51  (1+D)^(1/D) (alpha_0 - pi L) P^(1/D) = U for two exponents
    B52  prod Ztilde^2(beta_r) rebuilt from two power certificates
    T53  T35 with every beta product replaced by its B52 expression
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import EqualDeltas, MismatchedParams, PointOutsideSet, RhsNearZero, UnequalK
from .factorize import DEFAULT_K0, F1, F2, F3, FactorizationCertificate, FunctionFamily, certificate
from .ladder import LadderModel, disconnected_set

FORMULA_IDS = ("X32", "X33", "T35", "A41", "A43", "C18", "P51", "B52", "T53")


@dataclass(frozen=True)
class Budgets:
    """Pass thresholds for each kind of report.

    ``exact`` covers X32, X33, T35; ``power`` covers P51; ``secondary`` covers
    B52 and T53, whose exponents amplify certificate errors.  Asymptotic
    reports pass when ``|lhs/rhs - 1| <= asym_const * k * U / (pi L) + asym_floor``.
    """

    exact: float = 1e-6
    power: float = 1e-6
    secondary: float = 1e-5
    asym_const: float = 5.0
    asym_floor: float = 1e-6

    def asymptotic(self, k: int, L: int, U: float) -> float:
        return self.asym_const * k * U / (math.pi * L) + self.asym_floor


DEFAULT_BUDGETS = Budgets()


@dataclass(frozen=True)
class HybridReport:
    formula_id: str
    inputs: dict
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    tol_budget: float
    deviation: float | None = None
    passed: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_record(self) -> dict:
        """Flat JSON-ready mapping with floats at 17 significant digits."""
        def g(x):
            return None if x is None else float(f"{x:.17g}")

        return {
            "formula_id": self.formula_id,
            "inputs": {key: (g(v) if isinstance(v, float) else v) for key, v in self.inputs.items()},
            "lhs": g(self.lhs),
            "rhs": g(self.rhs),
            "abs_residual": g(self.abs_residual),
            "rel_residual": g(self.rel_residual),
            "deviation": g(self.deviation),
            "budget": g(self.tol_budget),
            "passed": self.passed,
            "notes": list(self.notes),
        }


def _report(formula_id: str, inputs: dict, lhs: float, rhs: float, budget: float,
            deviation: float | None = None, notes=()) -> HybridReport:
    diff = abs(lhs - rhs)
    rel = diff / (1.0 + max(abs(lhs), abs(rhs)))
    measure = rel if deviation is None else deviation
    return HybridReport(formula_id=formula_id, inputs=inputs, lhs=lhs, rhs=rhs, abs_residual=diff,
                        rel_residual=rel, tol_budget=budget, deviation=deviation,
                        passed=bool(measure <= budget), notes=tuple(notes))


def _shared_params(*certs: FactorizationCertificate) -> tuple[int, float]:
    L, U = certs[0].L, certs[0].U
    for c in certs[1:]:
        if (c.L, c.U) != (L, U):
            raise MismatchedParams(f"certificates disagree on (L, U): {(L, U)} vs {(c.L, c.U)}")
    return L, U


def _family_notes(certs, expected) -> list[str]:
    got = tuple(c.family for c in certs)
    if got != tuple(expected):
        return ["certificate families " + ",".join(f.label for f in got)
                + " differ from " + ",".join(f.label for f in expected)]
    return []


def assert_membership(certs, model: LadderModel) -> None:
    """Every alpha and beta lies strictly inside its component.

    Raises:
        PointOutsideSet: some point falls outside the disconnected set of
            order max(k).
    """
    L, U = _shared_params(*certs)
    comps = disconnected_set(L, U, max(c.k for c in certs), model).components
    for c in certs:
        for order, x in c.points():
            comp = comps[order]
            if not comp.contains(x):
                raise PointOutsideSet(
                    f"{c.family.label} point {x!r} of order {order} outside ({comp.left_r!r}, {comp.right_r!r})")


def _term(cert: FactorizationCertificate, weight: FunctionFamily) -> float:
    """alpha_0 * P * (trigonometric factor of ``weight`` at alpha_0)."""
    return cert.alpha0 * cert.product * float(weight.trig_factor(cert.alpha0))


def _inputs(L, U, ks, deltas=None) -> dict:
    out = {"L": int(L), "U": float(U), "k": list(ks)}
    if deltas is not None:
        out["delta"] = [float(d) for d in deltas]
    return out


def check_exact_32_33(c1, c2, c3, model: LadderModel | None = None,
                      budgets: Budgets = DEFAULT_BUDGETS) -> tuple[HybridReport, HybridReport]:
    """The two linear combinations that eliminate the trigonometric means.

    Raises:
        MismatchedParams: certificates built for different (L, U).
    """
    L, U = _shared_params(c1, c2, c3)
    if model is not None:
        assert_membership((c1, c2, c3), model)
    notes = _family_notes((c1, c2, c3), (F1, F2, F3))
    t1, t2, t3 = _term(c1, F1), _term(c2, F2), _term(c3, F3)
    base = math.pi * L + 0.5 * U
    x32 = _report("X32", _inputs(L, U, (c1.k, c3.k)), t1 + 0.5 * t3, 0.5 * base, budgets.exact, notes=notes)
    x33 = _report("X33", _inputs(L, U, (c1.k, c2.k)), t2 + t1, base, budgets.exact, notes=notes)
    return x32, x33


def check_exact_hybrid_35(c1, c2, c3, model: LadderModel | None = None,
                          budgets: Budgets = DEFAULT_BUDGETS) -> HybridReport:
    """cos^2 - sin^2 = cos 2 carried by three certificates with free k's.

    Raises:
        MismatchedParams, PointOutsideSet
    """
    L, U = _shared_params(c1, c2, c3)
    if model is not None:
        assert_membership((c1, c2, c3), model)
    notes = _family_notes((c1, c2, c3), (F1, F2, F3))
    lhs = _term(c2, F2) - _term(c1, F1)
    rhs = _term(c3, F3)
    return _report("T35", _inputs(L, U, (c1.k, c2.k, c3.k)), lhs, rhs, budgets.exact, notes=notes)


def _asymptotic(formula_id, ks, L, U, p1, p2, p3, c1, c2, c3, budgets, notes):
    lhs = p2 * float(F2.trig_factor(c2.alpha0)) - p1 * float(F1.trig_factor(c1.alpha0))
    rhs = p3 * float(F3.trig_factor(c3.alpha0))
    scale = max(abs(lhs), abs(rhs), abs(p1), abs(p2), abs(p3))
    if abs(rhs) < 1e-12 * scale:
        raise RhsNearZero(f"{formula_id}: right side {rhs!r} vanishes")
    deviation = abs(lhs / rhs - 1.0)
    budget = budgets.asymptotic(max(ks), L, U)
    notes = list(notes) + ["asymptotic: deviation measures the large-L approximation, not numerical error"]
    return _report(formula_id, _inputs(L, U, ks), lhs, rhs, budget, deviation=deviation, notes=notes)


def check_asymptotic_41(c1, c2, c3, model: LadderModel, budgets: Budgets = DEFAULT_BUDGETS) -> HybridReport:
    """The exact hybrid with |zeta|^2 ratios in place of Ztilde^2 ratios and
    without the alpha_0 prefactors.

    Raises:
        MismatchedParams, RhsNearZero
    """
    L, U = _shared_params(c1, c2, c3)
    assert_membership((c1, c2, c3), model)
    p1, p2, p3 = (c.zeta_ratio_product(model.t0) for c in (c1, c2, c3))
    return _asymptotic("A41", (c1.k, c2.k, c3.k), L, U, p1, p2, p3, c1, c2, c3, budgets,
                       _family_notes((c1, c2, c3), (F1, F2, F3)))


def check_secondary_43(c1, c2, c3, model: LadderModel, budgets: Budgets = DEFAULT_BUDGETS) -> HybridReport:
    """Equal-k asymptotic hybrid with the shared beta products cancelled.

    Reported as C18 when k = 1.

    Raises:
        UnequalK, MismatchedParams, RhsNearZero
    """
    if not c1.k == c2.k == c3.k:
        raise UnequalK(f"equal k required, got {(c1.k, c2.k, c3.k)}")
    L, U = _shared_params(c1, c2, c3)
    assert_membership((c1, c2, c3), model)
    notes = _family_notes((c1, c2, c3), (F1, F2, F3))
    if not c1.betas == c2.betas == c3.betas:
        notes.append("beta sequences differ between certificates")
    p1, p2, p3 = (c.zeta_alpha_product(model.t0) for c in (c1, c2, c3))
    formula_id = "C18" if c1.k == 1 else "A43"
    return _asymptotic(formula_id, (c1.k,), L, U, p1, p2, p3, c1, c2, c3, budgets, notes)


def _check_deltas(d4: float, d5: float) -> None:
    if not (d4 > 0 and d5 > 0):
        raise ValueError("exponents must be positive")
    if d4 == d5:
        raise EqualDeltas(f"exponents must differ, both are {d4!r}")


def power_side(cert: FactorizationCertificate) -> float:
    """(1+D)^(1/D) (alpha_0 - pi L) P^(1/D) for a power certificate."""
    d = cert.family.delta
    return (1.0 + d) ** (1.0 / d) * (cert.alpha0 - math.pi * cert.L) * cert.product ** (1.0 / d)


def check_power_pair_51(L: int, U: float, k4: int, k5: int, delta4: float, delta5: float,
                        model: LadderModel, budgets: Budgets = DEFAULT_BUDGETS,
                        k0: int = DEFAULT_K0) -> HybridReport:
    """Both power-family sides evaluate to U.

    Raises:
        EqualDeltas
    """
    _check_deltas(delta4, delta5)
    c4 = certificate(FunctionFamily.power(delta4), L, U, k4, model, k0)
    c5 = certificate(FunctionFamily.power(delta5), L, U, k5, model, k0)
    lhs, rhs = power_side(c4), power_side(c5)
    deviation = max(abs(lhs - U), abs(rhs - U)) / U
    return _report("P51", _inputs(L, U, (k4, k5), (delta4, delta5)), lhs, rhs, budgets.power,
                   deviation=deviation, notes=["deviation is the larger relative distance of either side from U"])


def beta_product_formula(c4: FactorizationCertificate, c5: FactorizationCertificate,
                         delta5: float | None = None) -> float:
    """prod Ztilde^2(beta_r) rebuilt from the alphas of two power certificates.

    ``delta5`` overrides the second exponent inside the formula only (the
    certificate itself is untouched); used by perturbation probes.
    """
    d4 = c4.family.delta
    d5 = c5.family.delta if delta5 is None else delta5
    _check_deltas(d4, d5)
    e = d4 * d5 / (d5 - d4)
    const = (1.0 + d4) ** (1.0 / d4) / (1.0 + d5) ** (1.0 / d5)
    a4 = c4.alpha0 - math.pi * c4.L
    a5 = c5.alpha0 - math.pi * c5.L
    return ((const * a4 / a5) ** e * c4.alpha_product ** (d5 / (d5 - d4))
            * c5.alpha_product ** (-d4 / (d5 - d4)))


def compute_beta_product_52(k: int, delta4: float, delta5: float, L: int, U: float, model: LadderModel,
                            budgets: Budgets = DEFAULT_BUDGETS, k0: int = DEFAULT_K0) -> HybridReport:
    """Direct prod Ztilde^2(beta_r) (lhs) against its power-pair expression (rhs).

    Raises:
        EqualDeltas; ValueError for k < 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_deltas(delta4, delta5)
    c4 = certificate(FunctionFamily.power(delta4), L, U, k, model, k0)
    c5 = certificate(FunctionFamily.power(delta5), L, U, k, model, k0)
    if c4.betas != c5.betas:
        raise MismatchedParams("power certificates do not share their betas")
    return _report("B52", _inputs(L, U, (k,), (delta4, delta5)), c4.beta_product,
                   beta_product_formula(c4, c5), budgets.secondary)


def check_secondary_exact_53(k1: int, k2: int, k3: int, delta4: float, delta5: float, L: int, U: float,
                             model: LadderModel, budgets: Budgets = DEFAULT_BUDGETS, k0: int = DEFAULT_K0,
                             exponent_delta5: float | None = None) -> HybridReport:
    """Exact hybrid with each beta product expressed through power certificates.

    The constant ((1+D4)^(1/D4) / (1+D5)^(1/D5))^e multiplies every term
    alike and is left out, as in the substituted form.  ``exponent_delta5``
    replaces D5 in the exponents only, for perturbation probes.

    Raises:
        EqualDeltas, MismatchedParams
    """
    _check_deltas(delta4, delta5)
    d4 = delta4
    d5 = delta5 if exponent_delta5 is None else exponent_delta5
    _check_deltas(d4, d5)
    e = d4 * d5 / (d5 - d4)
    terms = []
    certs = []
    for family, k in ((F1, k1), (F2, k2), (F3, k3)):
        c = certificate(family, L, U, k, model, k0)
        c4 = certificate(FunctionFamily.power(delta4), L, U, k, model, k0)
        c5 = certificate(FunctionFamily.power(delta5), L, U, k, model, k0)
        a4 = c4.alpha0 - math.pi * L
        a5 = c5.alpha0 - math.pi * L
        modulated = (c.alpha_product * c5.alpha_product ** (d4 / (d5 - d4))
                     * c4.alpha_product ** (-d5 / (d5 - d4)))
        terms.append(c.alpha0 * modulated / (a4 / a5) ** e * float(family.trig_factor(c.alpha0)))
        certs.extend((c, c4, c5))
    assert_membership(certs, model)
    notes = [] if exponent_delta5 is None else [f"exponent delta5 overridden to {exponent_delta5!r}"]
    return _report("T53", _inputs(L, U, (k1, k2, k3), (delta4, delta5)), terms[1] - terms[0], terms[2],
                   budgets.secondary, notes=notes)


def trig_certificates(L: int, U: float, ks, model: LadderModel, k0: int = DEFAULT_K0):
    """Certificates for f1, f2, f3 with orders ``ks = (k1, k2, k3)``."""
    return tuple(certificate(f, L, U, k, model, k0) for f, k in zip((F1, F2, F3), ks))


def run_formula(formula_id: str, L: int, U: float, ks, model: LadderModel, deltas=(0.5, 2.0),
                budgets: Budgets = DEFAULT_BUDGETS, k0: int = DEFAULT_K0) -> list[HybridReport]:
    """Dispatch one formula id to its check.

    ``ks`` is (k1, k2, k3) for the trigonometric checks, (k4, k5) for P51 and
    (k,) for B52; a single value is broadcast.
    """
    ks = tuple(int(k) for k in ks)
    d4, d5 = deltas
    if formula_id in ("X32", "X33", "T35", "A41", "A43", "C18", "T53"):
        ks3 = ks * 3 if len(ks) == 1 else ks
        if len(ks3) != 3:
            raise ValueError(f"{formula_id} takes one or three k values")
        if formula_id == "T53":
            return [check_secondary_exact_53(*ks3, d4, d5, L, U, model, budgets, k0)]
        certs = trig_certificates(L, U, ks3, model, k0)
        if formula_id == "X32":
            return [check_exact_32_33(*certs, model, budgets)[0]]
        if formula_id == "X33":
            return [check_exact_32_33(*certs, model, budgets)[1]]
        if formula_id == "T35":
            return [check_exact_hybrid_35(*certs, model, budgets)]
        if formula_id == "A41":
            return [check_asymptotic_41(*certs, model, budgets)]
        if formula_id == "C18" and ks3 != (1, 1, 1):
            raise ValueError("C18 is the k = 1 case")
        return [check_secondary_43(*certs, model, budgets)]
    if formula_id == "P51":
        ks2 = ks * 2 if len(ks) == 1 else ks
        if len(ks2) != 2:
            raise ValueError("P51 takes one or two k values")
        return [check_power_pair_51(L, U, ks2[0], ks2[1], d4, d5, model, budgets, k0)]
    if formula_id == "B52":
        if len(ks) != 1:
            raise ValueError("B52 takes a single k")
        return [compute_beta_product_52(ks[0], d4, d5, L, U, model, budgets, k0)]
    raise ValueError(f"unknown formula id {formula_id!r}")
