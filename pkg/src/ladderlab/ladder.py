"""Operational Jacob's ladder: phi_1, its inverse, iterated segments, gaps.

phi_1 is realised as

    phi_1(t) = t0 - (1 - c) pi(t0) + integral_{t0}^{t} Ztilde^2(u) du,
    Ztilde^2(u) = |zeta(1/2 + iu)|^2 / omega(u),  omega(u) = ln(u / 2 pi) + 1 + c,

with c Euler's constant and pi(x) the prime-counting function.  The
normaliser makes the expected drift t - phi_1(t) grow like (1 - c) pi(t).
The cumulative integral is cached at unit spacing; everything between
checkpoints is integrated on demand.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import Chebyshev

from .errors import (
    BadU,
    CacheMismatch,
    HeightAboveCache,
    HeightTooLow,
    NotSeparated,
    OutOfRange,
    OverlapDetected,
    RangeTooLarge,
)
from .numerics import ZETA_NOISE_FLOOR, integrate_adaptive, integrate_panels
from .zeta_eval import DEFAULT_CONFIG, EvalConfig, zeta_mod_sq_array

EULER_GAMMA = 0.57721566490153286061
OMEGA_TAG = "ln(t/2pi)+1+euler_gamma"
CACHE_VERSION = 1
DEFAULT_T0 = 200.0
DEFAULT_L0 = 64
PRIME_COUNT_LIMIT = 10**7
LOCAL_TOL = 1e-12


@functools.lru_cache(maxsize=4)
def _sieve(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.cumsum(flags)


def prime_count(x: float) -> int:
    """Exact number of primes <= x (x <= 10**7)."""
    if x < 0:
        raise ValueError("prime_count requires x >= 0")
    if x > PRIME_COUNT_LIMIT:
        raise RangeTooLarge(f"prime_count limited to x <= {PRIME_COUNT_LIMIT}")
    n = int(math.floor(x))
    if n < 2:
        return 0
    size = 1 << max(n.bit_length(), 10)
    return int(_sieve(min(size, PRIME_COUNT_LIMIT))[n])


def omega(t, t0: float = DEFAULT_T0):
    """Normaliser ln(t/2pi) + 1 + c; accepts scalars or arrays."""
    lowest = np.min(t) if np.ndim(t) else t
    if np.size(t) and not lowest >= t0:
        raise HeightTooLow(f"height {float(lowest)!r} below ladder anchor {t0}")
    if np.ndim(t):
        return np.log(np.asarray(t, dtype=np.float64) / (2.0 * math.pi)) + 1.0 + EULER_GAMMA
    return math.log(t / (2.0 * math.pi)) + 1.0 + EULER_GAMMA


def z_tilde_sq(t, t0: float = DEFAULT_T0, cfg: EvalConfig = DEFAULT_CONFIG):
    """|zeta(1/2+it)|^2 / omega(t); scalars give floats, arrays give arrays."""
    if np.ndim(t):
        w = omega(t, t0)
        return zeta_mod_sq_array(t, cfg) / w
    w = omega(t, t0)
    return float(zeta_mod_sq_array(np.array([t], dtype=np.float64), cfg)[0]) / w


@dataclass(frozen=True)
class Segment:
    left: float
    right: float

    def __post_init__(self):
        if not self.left < self.right:
            raise ValueError("segment requires left < right")

    @property
    def length(self) -> float:
        return self.right - self.left


@dataclass(frozen=True)
class IteratedSegment:
    """r-th reverse iterate ``[left_r, right_r]`` of a base segment."""

    base: Segment
    order: int
    left_r: float
    right_r: float

    @property
    def length(self) -> float:
        return self.right_r - self.left_r

    def contains(self, x: float) -> bool:
        """Open-interval membership."""
        return self.left_r < x < self.right_r


@dataclass(frozen=True)
class DisconnectedSet:
    L: int
    U: float
    k: int
    components: tuple[IteratedSegment, ...]

    @property
    def base(self) -> Segment:
        return self.components[0].base

    def gaps(self) -> list[float]:
        return [rho_gap(a, b) for a, b in zip(self.components, self.components[1:])]


@dataclass(frozen=True, eq=False)
class LadderModel:
    """Frozen checkpoint table of Phi(t) = integral_{t0}^{t} Ztilde^2.

    Instances hash by identity, so derived results can be memoised per model.
    """

    t0: float
    t_max: float
    anchor_offset: float
    grid: np.ndarray
    phi_cum: np.ndarray
    eval_config: EvalConfig = DEFAULT_CONFIG
    spacing: float = 1.0
    omega_tag: str = field(default=OMEGA_TAG)

    def __post_init__(self):
        self.grid.setflags(write=False)
        self.phi_cum.setflags(write=False)

    @property
    def shift(self) -> float:
        """phi_1(t0)."""
        return self.t0 - self.anchor_offset

    def z_tilde_sq(self, t):
        return z_tilde_sq(t, self.t0, self.eval_config)

    def phi(self, t: float) -> float:
        """Phi(t), the cached cumulative integral plus a local piece."""
        if not t >= self.t0:
            raise HeightTooLow(f"height {t!r} below ladder anchor {self.t0}")
        if t > self.t_max:
            raise HeightAboveCache(f"height {t!r} above cached t_max {self.t_max}")
        i = min(int(np.searchsorted(self.grid, t, side="right")) - 1, len(self.grid) - 2)
        return float(self.phi_cum[i]) + integrate_adaptive(self.z_tilde_sq, float(self.grid[i]), t, LOCAL_TOL, ZETA_NOISE_FLOOR)

    @property
    def phi1_max(self) -> float:
        return self.shift + float(self.phi_cum[-1])


def _compensated_cumsum(values) -> np.ndarray:
    out = np.empty(len(values) + 1)
    out[0] = 0.0
    total, comp = 0.0, 0.0
    for i, v in enumerate(values):
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
        out[i + 1] = total + comp
    return out


def build_ladder(t0: float = DEFAULT_T0, t_max: float = 6000.0, cfg: EvalConfig = DEFAULT_CONFIG,
                 spacing: float = 1.0, tol: float = 1e-11, chunk: int = 2000) -> LadderModel:
    """Integrate Ztilde^2 between unit-spaced checkpoints over [t0, t_max]."""
    if t0 < cfg.min_height:
        raise HeightTooLow(f"t0 {t0} below evaluator min_height {cfg.min_height}")
    if not t_max > t0:
        raise ValueError("t_max must exceed t0")
    if not 0 < spacing <= 1.0:
        raise ValueError("checkpoint spacing must be in (0, 1]")
    n = int(math.ceil((t_max - t0) / spacing - 1e-9))
    grid = t0 + spacing * np.arange(n + 1, dtype=np.float64)
    grid[-1] = t_max

    def integrand(x):
        return z_tilde_sq(x, t0, cfg)

    panels = []
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        panels.append(integrate_panels(integrand, grid[start : stop + 1], tol, ZETA_NOISE_FLOOR))
    phi_cum = _compensated_cumsum(np.concatenate(panels))
    if np.any(np.diff(phi_cum) <= 0):
        raise OverlapDetected("cumulative integral is not strictly increasing")
    offset = (1.0 - EULER_GAMMA) * prime_count(t0)
    return LadderModel(t0=float(t0), t_max=float(t_max), anchor_offset=offset, grid=grid,
                       phi_cum=phi_cum, eval_config=cfg, spacing=float(spacing))


def _header(model: LadderModel) -> str:
    return (f"# ladderlab-cache version={CACHE_VERSION} t0={model.t0!r} t_max={model.t_max!r} "
            f"spacing={model.spacing!r} omega={model.omega_tag} "
            f"correction_order={model.eval_config.correction_order}")


def save_cache(model: LadderModel, path) -> None:
    """Write the checkpoint table as ``t<TAB>Phi`` lines under a header."""
    lines = [_header(model)]
    lines.extend(f"{t:.17g}\t{p:.17g}" for t, p in zip(model.grid, model.phi_cum))
    Path(path).write_text("\n".join(lines) + "\n")


def read_cache_header(path) -> dict[str, str]:
    with open(path) as fh:
        first = fh.readline().strip()
    parts = first.split()
    if len(parts) < 2 or parts[:2] != ["#", "ladderlab-cache"]:
        raise CacheMismatch(f"{path}: not a ladderlab cache file")
    return dict(p.split("=", 1) for p in parts[2:])


def load_cache(path, t0: float | None = None, t_max: float | None = None,
               correction_order: int | None = None, min_height: float = DEFAULT_CONFIG.min_height) -> LadderModel:
    """Load a cache file, rejecting any header that disagrees with expectations.

    Raises:
        CacheMismatch: version, omega definition, or a requested parameter
            differs, or the table itself is malformed.
    """
    head = read_cache_header(path)
    try:
        version = int(head["version"])
        h_t0, h_tmax = float(head["t0"]), float(head["t_max"])
        spacing = float(head["spacing"])
        order = int(head["correction_order"])
        tag = head["omega"]
    except (KeyError, ValueError) as exc:
        raise CacheMismatch(f"{path}: incomplete header ({exc})") from exc
    if version != CACHE_VERSION:
        raise CacheMismatch(f"{path}: cache version {version}, expected {CACHE_VERSION}")
    if tag != OMEGA_TAG:
        raise CacheMismatch(f"{path}: omega definition {tag!r}, expected {OMEGA_TAG!r}")
    for name, want, got in (("t0", t0, h_t0), ("t_max", t_max, h_tmax), ("correction_order", correction_order, order)):
        if want is not None and want != got:
            raise CacheMismatch(f"{path}: {name}={got!r} but {want!r} was requested")
    data = np.loadtxt(path, comments="#", delimiter="\t", dtype=np.float64, ndmin=2)
    grid, phi_cum = np.ascontiguousarray(data[:, 0]), np.ascontiguousarray(data[:, 1])
    if grid[0] != h_t0 or grid[-1] != h_tmax or phi_cum[0] != 0.0:
        raise CacheMismatch(f"{path}: table endpoints disagree with header")
    if np.any(np.diff(grid) <= 0) or np.any(np.diff(phi_cum) <= 0):
        raise CacheMismatch(f"{path}: table is not strictly increasing")
    cfg = EvalConfig(correction_order=order, min_height=min(min_height, h_t0))
    return LadderModel(t0=h_t0, t_max=h_tmax, anchor_offset=(1.0 - EULER_GAMMA) * prime_count(h_t0),
                       grid=grid, phi_cum=phi_cum, eval_config=cfg, spacing=spacing)


def phi1(t: float, model: LadderModel) -> float:
    """Jacob's ladder surrogate phi_1(t)."""
    return model.shift + model.phi(t)


def phi1_inverse(y: float, model: LadderModel) -> float:
    """Unique t with phi1(t) = y.

    The checkpoint table is bisected first, then the bracket is halved on
    Phi itself until it collapses in floating point.  No derivative steps are
    taken since Ztilde^2 vanishes at zeta zeros.

    Raises:
        OutOfRange: y outside [phi1(t0), phi1(t_max)].
    """
    target = y - model.shift
    if not 0.0 <= target <= model.phi_cum[-1]:
        raise OutOfRange(f"{y!r} outside the cached range [{model.shift!r}, {model.phi1_max!r}]")
    i = int(np.searchsorted(model.phi_cum, target, side="right")) - 1
    if model.phi_cum[i] == target:
        return float(model.grid[i])
    base_t, base_phi = float(model.grid[i]), float(model.phi_cum[i])
    lo, hi = base_t, float(model.grid[i + 1])
    best, best_res = lo, target - base_phi
    while True:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        val = base_phi + integrate_adaptive(model.z_tilde_sq, base_t, mid, LOCAL_TOL, ZETA_NOISE_FLOOR)
        if abs(val - target) < best_res:
            best, best_res = mid, abs(val - target)
        if val < target:
            lo = mid
        elif val > target:
            hi = mid
        else:
            break
    return best


def reverse_iterate_segment(seg: Segment, r: int, model: LadderModel) -> IteratedSegment:
    """Apply phi1_inverse r times to both endpoints of ``seg``."""
    if r < 0:
        raise ValueError("iteration order must be >= 0")
    left, right = seg.left, seg.right
    for _ in range(r):
        left, right = phi1_inverse(left, model), phi1_inverse(right, model)
    return IteratedSegment(base=seg, order=r, left_r=left, right_r=right)


@functools.lru_cache(maxsize=512)
def _components(L: int, U: float, k: int, model: LadderModel) -> tuple[IteratedSegment, ...]:
    base = Segment(math.pi * L, math.pi * L + U)
    comps = [IteratedSegment(base, 0, base.left, base.right)]
    for r in range(1, k + 1):
        prev = comps[-1]
        comps.append(IteratedSegment(base, r, phi1_inverse(prev.left_r, model), phi1_inverse(prev.right_r, model)))
    return tuple(comps)


def check_U(U: float) -> None:
    if not 0.0 < U < math.pi / 4:
        raise BadU(f"U={U!r} outside (0, pi/4)")


def disconnected_set(L: int, U: float, k: int, model: LadderModel, L0: int = DEFAULT_L0) -> DisconnectedSet:
    """Base segment [pi L, pi L + U] together with its first k reverse iterates.

    Raises:
        BadU, OutOfRange, OverlapDetected
    """
    check_U(U)
    if k < 1:
        raise ValueError("k must be >= 1")
    if L < L0:
        raise ValueError(f"L={L} below L0={L0}")
    comps = _components(int(L), float(U), int(k), model)
    for a, b in zip(comps, comps[1:]):
        if not a.right_r < b.left_r:
            raise OverlapDetected(f"components of order {a.order} and {b.order} overlap")
    return DisconnectedSet(L=int(L), U=float(U), k=int(k), components=comps)


def rho_gap(a: IteratedSegment, b: IteratedSegment) -> float:
    """Distance from the right end of ``a`` to the left end of ``b``."""
    gap = b.left_r - a.right_r
    if not gap > 0:
        raise NotSeparated(f"segments are not separated (gap {gap!r})")
    return gap


def gap_ratio(L: int, U: float, model: LadderModel, order: int = 0) -> float:
    """rho between orders ``order`` and ``order + 1`` over (1 - c) pi(pi L)."""
    dset = disconnected_set(L, U, order + 1, model)
    rho = rho_gap(dset.components[order], dset.components[order + 1])
    return rho / ((1.0 - EULER_GAMMA) * prime_count(math.pi * L))


class SegmentMap:
    """phi_1 restricted to one iterated segment, as a Chebyshev antiderivative.

    Maps ``[left_r, right_r]`` onto (approximately) the previous component.
    The degree is doubled until the trailing coefficients of Ztilde^2 drop
    below 1e-15 of the largest or stop shrinking, which happens once they
    reach the evaluator's own noise level.
    """

    def __init__(self, comp: IteratedSegment, model: LadderModel, max_degree: int = 1024):
        a, b = comp.left_r, comp.right_r
        deg, prev_tail = 32, math.inf
        while True:
            cheb = Chebyshev.interpolate(model.z_tilde_sq, deg, domain=[a, b])
            c = np.abs(cheb.coef)
            tail = c[-4:].max() / c.max()
            if tail <= 1e-15 or tail > 0.25 * prev_tail or deg >= max_degree:
                break
            deg, prev_tail = 2 * deg, tail
        self.comp = comp
        self.density = cheb
        self.antiderivative = cheb.integ(lbnd=a)
        self.anchor = phi1(a, model)

    def __call__(self, t):
        return self.anchor + self.antiderivative(t)


@functools.lru_cache(maxsize=512)
def segment_maps(L: int, U: float, k: int, model: LadderModel) -> tuple[SegmentMap, ...]:
    """Maps for components 1..k of the disconnected set (index 0 is order 1)."""
    dset = disconnected_set(L, U, k, model)
    return tuple(SegmentMap(c, model) for c in dset.components[1:])


def compose_to_base(t, r: int, maps) -> np.ndarray:
    """phi_1 applied r times, for t inside the r-th component."""
    u = np.asarray(t, dtype=np.float64)
    for j in range(r, 0, -1):
        u = maps[j - 1](u)
    return u
