"""The acceptance suite: ten executable checks covering every module.

Each criterion exercises one quantitative claim end to end:

  1   scaled radial eigenvalues reach their predicted limits
  2   sphere-with-caps closed forms agree with the ODE oracle
  3   model SN/SD families bracket the FEM torus spectrum
  4   eps * sigma_2 on the torus trends to its limit 1
  5   eps * sigma_1 stays below the limsup envelope
  6   explicit lower-bound constant and threshold checks
  7   torus Neumann gap is stable under small excisions
  8   energy-inequality property suites on random functions
  9   FEM agrees with separated closed forms (annulus, disk)
  10  Bessel Wronskian identity and the radial scaling law

run() executes a subset and returns one CriterionResult per criterion;
heavy artifacts (meshes, spectra) are built once in a SuiteCache and
shared.  Checks record one line per assertion; any line starting with
"FAIL" fails its criterion.  Everything random is seeded.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import bounds as bounds_mod
from . import families, spherecaps
from .bessel import iv_prime_scaled, iv_scaled, kv_prime_scaled, kv_scaled
from .errors import ConfigurationError
from .fem import (
    Annulus,
    Disk,
    dirichlet_energy_check,
    mesh_planar,
    mesh_torus_minus_disks,
    neumann_spectrum,
    poincare_check,
    steklov_spectrum,
)
from .harmonics import (
    Circle,
    ExcisionScenario,
    Point,
    RoundSphere,
    SubmanifoldSpec,
)
from .radial import RadialMode, sigma_annulus_pair, sigma_mixed

LAMBDA1_TORUS = 4.0 * math.pi**2
TORUS_CENTERS = ((0.25, 0.25), (0.75, 0.75))
BRACKET_EPS = 0.03
BRACKET_DELTA = 0.12
TREND_EPS = (0.04, 0.02, 0.01)

# Criterion 4 refines the mesh faster than eps: with the collar meshed
# self-similarly, a fixed h/eps gives an eps-independent eigenvalue bias
# (~0.6%) that would swamp the shrinking distance to the limit.  Scaling
# h by an extra sqrt(eps/eps0) makes the bias itself decrease across the
# grid, so the measured deviation reflects the limit process.
def _trend_h(eps: float) -> float:
    return (eps / 6.0) * math.sqrt(eps / TREND_EPS[0])


def torus_scenario() -> ExcisionScenario:
    """Unit flat torus with two point excisions."""
    point = SubmanifoldSpec(dim=0, volume=1.0, kind=Point())
    return ExcisionScenario(m=2, lambda1_M=LAMBDA1_TORUS, submanifolds=(point, point))


def sphere_scenario() -> ExcisionScenario:
    """Round 2-sphere with two antipodal point excisions."""
    point = SubmanifoldSpec(dim=0, volume=1.0, kind=Point())
    return ExcisionScenario(m=2, lambda1_M=2.0, submanifolds=(point, point))


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    checks: tuple[str, ...]
    elapsed: float


class SuiteCache:
    """Memoizes meshes and spectra shared between criteria."""

    def __init__(self):
        self._store: dict = {}

    def _get(self, key, build):
        if key not in self._store:
            self._store[key] = build()
        return self._store[key]

    def torus_mesh(self, eps: float, h: float):
        return self._get(
            ("torus", eps, h),
            lambda: mesh_torus_minus_disks(1.0, TORUS_CENTERS, eps, h),
        )

    def torus_steklov(self, eps: float, h: float, count: int) -> np.ndarray:
        return self._get(
            ("torus-steklov", eps, h, count),
            lambda: steklov_spectrum(self.torus_mesh(eps, h), count),
        )

    def torus_neumann(self, eps: float, h: float, count: int) -> np.ndarray:
        return self._get(
            ("torus-neumann", eps, h, count),
            lambda: neumann_spectrum(self.torus_mesh(eps, h), count),
        )

    def annulus_mesh(self, h: float):
        return self._get(
            ("annulus", h), lambda: mesh_planar(Annulus(0.5, 1.0), h)
        )

    def disk_mesh(self, h: float):
        return self._get(("disk", h), lambda: mesh_planar(Disk(1.0), h))


def _check(lines: list[str], ok: bool, msg: str) -> None:
    lines.append(("ok: " if ok else "FAIL: ") + msg)


# ---------------------------------------------------------------------------
# 1: radial model limits


_KINDS = {
    0: lambda: SubmanifoldSpec(0, 1.0, Point()),
    1: lambda: SubmanifoldSpec(1, 2.0 * math.pi, Circle(2.0 * math.pi)),
    2: lambda: SubmanifoldSpec(2, 4.0 * math.pi, RoundSphere(2, 1.0)),
}

_MN_PAIRS = ((2, 0), (3, 0), (3, 1), (4, 1), (4, 2), (5, 0))


def _criterion_1(cache: SuiteCache, seed: int) -> list[str]:
    lines: list[str] = []
    delta = 0.5
    for m, n in _MN_PAIRS:
        scenario = ExcisionScenario(m, 1.0, (_KINDS[n](),))
        for case in families.rate_cases(scenario, q_max=2):
            log_case = case.normalization != "inverse_eps"
            eps = 1e-6 if log_case else 1e-5
            tol = 0.06 if log_case else 0.01
            val = families.scaled_sigma(scenario, case, eps, delta)
            rel = abs(val - case.predicted) / abs(case.predicted)
            _check(
                lines,
                rel <= tol,
                f"(m={m}, n={n}, q={case.q}, {case.family}, k={case.k}) "
                f"{case.normalization}: {val:.6f} vs {case.predicted} "
                f"(rel {rel:.2e}, tol {tol})",
            )
    return lines


# ---------------------------------------------------------------------------
# 2: sphere caps closed forms vs oracle


def _criterion_2(cache: SuiteCache, seed: int) -> list[str]:
    lines: list[str] = []
    for n in range(6):
        for eps in (0.1, 0.3, 0.5):
            lo, hi = spherecaps.ode_oracle(n, eps, grid=4000)
            if n == 0:
                exact = spherecaps.sigma_zero(eps)
                _check(
                    lines,
                    abs(lo) <= 1e-5 * exact and abs(hi - exact) <= 1e-5 * exact,
                    f"n=0 eps={eps}: oracle ({lo:.2e}, {hi:.8f}) vs (0, {exact:.8f})",
                )
            else:
                exlo, exhi = spherecaps.sigma_pm(n, eps)
                ok = abs(lo - exlo) <= 1e-5 * exlo and abs(hi - exhi) <= 1e-5 * exhi
                _check(
                    lines,
                    ok,
                    f"n={n} eps={eps}: oracle ({lo:.8f}, {hi:.8f}) "
                    f"vs closed ({exlo:.8f}, {exhi:.8f})",
                )
                res = max(
                    abs(spherecaps.determinant_residual(n, eps, exlo)),
                    abs(spherecaps.determinant_residual(n, eps, exhi)),
                )
                _check(lines, res <= 1e-9, f"n={n} eps={eps}: residual {res:.2e}")
    for n in range(1, 6):
        eps = 1e-3
        lo, hi = spherecaps.sigma_pm(n, eps)
        dev = max(abs(eps * lo - n), abs(eps * hi - n)) / n
        _check(lines, dev <= 0.005, f"n={n}: eps*sigma dev {dev:.2e} at eps=1e-3")
    return lines


# ---------------------------------------------------------------------------
# 3: torus bracketing


def _criterion_3(cache: SuiteCache, seed: int) -> list[str]:
    lines: list[str] = []
    h = BRACKET_EPS / 6.0
    fem_vals = cache.torus_steklov(BRACKET_EPS, h, 10)
    scenario = torus_scenario()
    for ell in range(9):
        lower, upper = families.bracket(scenario, BRACKET_EPS, BRACKET_DELTA, ell)
        sig = float(fem_vals[ell])
        ok = lower <= sig * 1.02 and sig <= upper * 1.02
        _check(
            lines,
            ok,
            f"ell={ell}: {lower:.6f} <= {sig:.6f} <= {upper:.6f} (2% slack)",
        )
    return lines


# ---------------------------------------------------------------------------
# 4: scaled sigma_2 trend on the torus


def _criterion_4(cache: SuiteCache, seed: int) -> list[str]:
    lines: list[str] = []
    devs = []
    for eps in TREND_EPS:
        vals = cache.torus_steklov(eps, _trend_h(eps), 3)
        devs.append(abs(eps * float(vals[2]) - 1.0))
    for (eps, dev), prev in zip(zip(TREND_EPS[1:], devs[1:]), devs):
        _check(lines, dev < prev, f"deviation {dev:.5f} < {prev:.5f} at eps={eps}")
    _check(lines, devs[-1] < 0.15, f"final deviation {devs[-1]:.5f} < 0.15")
    return lines


# ---------------------------------------------------------------------------
# 5: upper bound proxy


def _criterion_5(cache: SuiteCache, seed: int) -> list[str]:
    lines: list[str] = []
    limit = bounds_mod.upper_bound_limit(torus_scenario())
    eps = 0.01
    sig1 = float(cache.torus_steklov(eps, eps / 6.0, 2)[1])
    _check(
        lines,
        eps * sig1 <= 1.1 * limit,
        f"torus: eps*sigma_1 = {eps * sig1:.4f} <= {1.1 * limit}",
    )
    cap_limit = bounds_mod.upper_bound_limit(sphere_scenario())
    worst = 0.0
    for eps in (0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 1e-4):
        sig1 = min(spherecaps.sigma_zero(eps), spherecaps.sigma_pm(1, eps)[0])
        worst = max(worst, eps * sig1)
    _check(
        lines,
        worst <= 1.1 * cap_limit,
        f"caps: max eps*sigma_1 = {worst:.4f} <= {1.1 * cap_limit}",
    )
    return lines


# ---------------------------------------------------------------------------
# 6: lower bound constant and thresholds


def _criterion_6(cache: SuiteCache, seed: int) -> list[str]:
    lines: list[str] = []
    report = bounds_mod.constant_C(torus_scenario())
    target = math.pi**2 / 128.0
    _check(
        lines,
        abs(report.constant_C - target) <= 1e-12,
        f"C = {report.constant_C!r} vs pi^2/128 = {target!r}",
    )
    _check(lines, report.binding_term == "spectral", f"binding {report.binding_term}")
    for eps in TREND_EPS:
        sig1 = float(cache.torus_steklov(eps, eps / 6.0, 2)[1])
        res = bounds_mod.lower_bound_check(torus_scenario(), eps, sig1, slack=0.0)
        _check(
            lines,
            res.holds,
            f"torus eps={eps}: sigma_1 {sig1:.4f} >= threshold {res.threshold:.4f}",
        )
    for eps in (0.1, 0.01, 0.001):
        sig1 = min(spherecaps.sigma_zero(eps), spherecaps.sigma_pm(1, eps)[0])
        res = bounds_mod.lower_bound_check(sphere_scenario(), eps, sig1, slack=0.0)
        _check(
            lines,
            res.holds,
            f"caps eps={eps}: sigma_1 {sig1:.4f} >= threshold {res.threshold:.4f}",
        )
    return lines


# ---------------------------------------------------------------------------
# 7: torus Neumann gap stability


def _criterion_7(cache: SuiteCache, seed: int) -> list[str]:
    lines: list[str] = []
    eps = 0.01
    lam1 = float(cache.torus_neumann(eps, eps / 6.0, 2)[1])
    rel = abs(lam1 - LAMBDA1_TORUS) / LAMBDA1_TORUS
    _check(
        lines,
        rel <= 0.05,
        f"lambda_1 = {lam1:.4f} vs 4 pi^2 = {LAMBDA1_TORUS:.4f} (rel {rel:.4f})",
    )
    return lines


# ---------------------------------------------------------------------------
# 8: energy inequality property suites


def _random_annulus_functions(mesh, rng, count):
    x, y = mesh.vertices[:, 0], mesh.vertices[:, 1]
    r = np.hypot(x, y)
    theta = np.arctan2(y, x)
    for _ in range(count):
        f = np.zeros(len(r))
        for k in range(4):
            amp = rng.standard_normal()
            phase = rng.uniform(0.0, 2.0 * math.pi)
            power = rng.uniform(-2.0, 2.0)
            f += amp * np.cos(k * theta + phase) * r**power
        yield f


def _random_torus_functions(mesh, dof, ndof, rng, count):
    x, y = mesh.vertices[:, 0], mesh.vertices[:, 1]
    for _ in range(count):
        fv = np.zeros(len(x))
        for _ in range(3):
            kx, ky = rng.integers(-3, 4), rng.integers(-3, 4)
            amp = rng.standard_normal()
            phase = rng.uniform(0.0, 2.0 * math.pi)
            fv += amp * np.cos(2.0 * math.pi * (kx * x + ky * y) + phase)
        f = np.zeros(ndof)
        f[dof] = fv
        yield f


def _criterion_8(cache: SuiteCache, seed: int) -> list[str]:
    lines: list[str] = []
    rng = np.random.default_rng(seed)

    annulus = cache.annulus_mesh(0.04)
    sigma1_sn = sigma_mixed(RadialMode(1, 1, 0.0), 0.5, 1.0, "Neumann")
    fails = sum(
        not dirichlet_energy_check(annulus, f, sigma1_sn, marker=0).holds
        for f in _random_annulus_functions(annulus, rng, 100)
    )
    _check(lines, fails == 0, f"dirichlet energy: {fails}/100 failures")

    h = BRACKET_EPS / 6.0
    torus = cache.torus_mesh(BRACKET_EPS, h)
    dof, ndof = torus.dof_map()
    centroids = torus.vertices[torus.triangles].mean(axis=1)

    def near(cx, cy):
        d = np.abs(centroids - np.array([cx, cy])) % 1.0
        d = np.minimum(d, 1.0 - d)
        return np.flatnonzero(np.hypot(d[:, 0], d[:, 1]) < 0.15)

    tris_a, tris_b = near(0.25, 0.75), near(0.75, 0.25)
    lam1 = float(cache.torus_neumann(BRACKET_EPS, h, 2)[1])
    fails = sum(
        not poincare_check(torus, f, tris_a, tris_b, lambda1=lam1).holds
        for f in _random_torus_functions(torus, dof, ndof, rng, 100)
    )
    _check(lines, fails == 0, f"poincare: {fails}/100 failures")
    return lines


# ---------------------------------------------------------------------------
# 9: FEM vs separated closed forms


def _annulus_reference(count: int) -> list[float]:
    vals: list[float] = []
    for q in range(count + 2):
        pair = sigma_annulus_pair(RadialMode(1, q, 0.0), 0.5, 1.0)
        mult = 1 if q == 0 else 2
        vals.extend([pair[0]] * mult)
        vals.extend([pair[1]] * mult)
    return sorted(vals)[:count]


def _criterion_9(cache: SuiteCache, seed: int) -> list[str]:
    lines: list[str] = []
    fem_vals = steklov_spectrum(cache.annulus_mesh(0.005), 8)
    exact = _annulus_reference(8)
    for i, (got, want) in enumerate(zip(fem_vals, exact)):
        if want == 0.0:
            ok = abs(got) <= 1e-8
            _check(lines, ok, f"annulus sigma_{i}: {got:.2e} vs 0")
        else:
            rel = abs(got - want) / want
            _check(
                lines,
                rel <= 0.01,
                f"annulus sigma_{i}: {got:.6f} vs {want:.6f} (rel {rel:.2e})",
            )
    fem_vals = steklov_spectrum(cache.disk_mesh(0.02), 8)
    disk_exact = [0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0]
    for i, (got, want) in enumerate(zip(fem_vals, disk_exact)):
        if want == 0.0:
            _check(lines, abs(got) <= 1e-8, f"disk sigma_{i}: {got:.2e} vs 0")
        else:
            rel = abs(got - want) / want
            _check(
                lines,
                rel <= 0.01,
                f"disk sigma_{i}: {got:.6f} vs {want} (rel {rel:.2e})",
            )
    return lines


# ---------------------------------------------------------------------------
# 10: Bessel Wronskian and radial scaling


def _criterion_10(cache: SuiteCache, seed: int) -> list[str]:
    lines: list[str] = []
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    for _ in range(1000):
        nu = rng.uniform(0.0, 50.0)
        x = 10.0 ** rng.uniform(-3.0, math.log10(700.0))
        w = x * (
            iv_scaled(nu, x) * kv_prime_scaled(nu, x)
            - iv_prime_scaled(nu, x) * kv_scaled(nu, x)
        )
        worst = max(worst, abs(w + 1.0))
    _check(lines, worst <= 1e-10, f"Wronskian worst residual {worst:.2e}")

    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(1, 4))
        q = int(rng.integers(0, 6))
        lam = 0.0 if rng.random() < 0.25 else float(rng.uniform(0.01, 25.0))
        eps = 10.0 ** rng.uniform(-4.0, -0.7)
        delta = eps * rng.uniform(2.0, 50.0)
        c = 10.0 ** rng.uniform(-1.0, 1.0)
        outer = "Neumann" if rng.random() < 0.5 else "Dirichlet"
        base = sigma_mixed(RadialMode(d, q, lam), eps, delta, outer)
        scaled = sigma_mixed(
            RadialMode(d, q, lam / c**2), c * eps, c * delta, outer
        )
        if base == 0.0:
            rel = abs(scaled)
        else:
            rel = abs(c * scaled - base) / abs(base)
        worst = max(worst, rel)
    _check(lines, worst <= 1e-10, f"scaling law worst residual {worst:.2e}")
    return lines


# ---------------------------------------------------------------------------
# runner


_CRITERIA: tuple[tuple[str, object], ...] = (
    ("radial model limits", _criterion_1),
    ("sphere caps vs oracle", _criterion_2),
    ("torus bracketing SN <= FEM <= SD", _criterion_3),
    ("scaled sigma_2 torus trend", _criterion_4),
    ("upper bound proxy", _criterion_5),
    ("lower bound constant and thresholds", _criterion_6),
    ("torus Neumann gap stability", _criterion_7),
    ("energy inequality property suites", _criterion_8),
    ("FEM vs separated closed forms", _criterion_9),
    ("Bessel Wronskian and radial scaling", _criterion_10),
)


def run(
    indices: list[int] | None = None,
    seed: int = 0,
    cache: SuiteCache | None = None,
) -> list[CriterionResult]:
    """Run the selected acceptance criteria (all ten by default)."""
    if indices is None:
        indices = list(range(1, len(_CRITERIA) + 1))
    bad = [i for i in indices if not 1 <= i <= len(_CRITERIA)]
    if bad:
        raise ConfigurationError(f"criteria must be in 1..{len(_CRITERIA)}, got {bad}")
    if cache is None:
        cache = SuiteCache()
    results = []
    for i in indices:
        name, fn = _CRITERIA[i - 1]
        start = time.perf_counter()
        lines = fn(cache, seed)
        elapsed = time.perf_counter() - start
        passed = not any(line.startswith("FAIL") for line in lines)
        results.append(CriterionResult(i, name, passed, tuple(lines), elapsed))
    return results
