"""Metric families and run configuration.

All built-in families live in null coordinates (u, x1..xd, v):

  ds^2 = 2 du dv + H du^2 + ...

with polynomial data, so exact-rational jets cover every construction.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .polynomials import Polynomial, PolynomialError, parse_polynomial

FAMILIES = ("ppwave", "brinkmann", "walker", "galaev", "two_symmetric",
            "custom", "perturbed_minkowski")


class FamilyError(ValueError):
    """Violated family invariant (e.g. lambda sum nonzero, H depends on v)."""


class ConfigError(ValueError):
    """Malformed run configuration document."""


def null_chart(d: int):
    return ("u",) + tuple(f"x{i}" for i in range(1, d + 1)) + ("v",)


@dataclass(frozen=True)
class MetricSpec:
    """A symmetric matrix of polynomial components over a coordinate chart."""
    family: str
    n: int
    coords: tuple
    components: tuple            # n x n tuple-of-tuples of Polynomial
    provenance: dict = field(default_factory=dict, compare=False)
    potential: Polynomial | None = None        # pp-wave H, when applicable
    expected_psi: Polynomial | None = None     # recorded family prediction
    conformal_sigma: Polynomial | None = None  # float-mode e^{2 sigma} factor
    warnings: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise FamilyError(f"unknown family {self.family!r}")
        if len(self.components) != self.n or any(len(r) != self.n for r in self.components):
            raise FamilyError("component matrix shape does not match dimension")
        for i in range(self.n):
            for j in range(i):
                if self.components[i][j] != self.components[j][i]:
                    raise FamilyError(f"components not symmetric at ({i},{j})")

    def component_strings(self):
        return [[repr(c) for c in row] for row in self.components]


def _zero(coords):
    return Polynomial(coords, {})


def _as_chart_poly(p, coords):
    if isinstance(p, str):
        return parse_polynomial(p, coords)
    if isinstance(p, Polynomial):
        return p if p.variables == tuple(coords) else p.rename(coords)
    return Polynomial.constant(coords, p)


def _ppwave_components(coords, H):
    n = len(coords)
    comp = [[_zero(coords) for _ in range(n)] for _ in range(n)]
    one = Polynomial.constant(coords, 1)
    comp[0][0] = H
    comp[0][n - 1] = comp[n - 1][0] = one
    for r in range(1, n - 1):
        comp[r][r] = one
    return tuple(tuple(row) for row in comp)


def _transverse_laplacian(H: Polynomial, coords) -> Polynomial:
    acc = _zero(coords)
    for x in coords[1:-1]:
        acc = acc + H.derivative(x).derivative(x)
    return acc


def build_ppwave(H, d: int, family: str = "ppwave") -> MetricSpec:
    """Metric 2dudv + H(x,u)du^2 + sum dx^2 in the chart (u, x1..xd, v)."""
    if d < 2:
        raise FamilyError(f"pp-wave needs d >= 2 transverse coordinates, got {d}")
    coords = null_chart(d)
    H = _as_chart_poly(H, coords)
    if H.depends_on("v"):
        raise FamilyError("pp-wave potential H must not depend on v")
    psi = _transverse_laplacian(H, coords) * Fraction(-1, 2)
    return MetricSpec(
        family=family, n=d + 2, coords=coords,
        components=_ppwave_components(coords, H),
        provenance={"d": d, "H": repr(H)},
        potential=H, expected_psi=psi)


def build_galaev(d: int, lambdas, a, F) -> MetricSpec:
    """Recurrent-Weyl potential H = sum_rho x_rho^2 (a(u) + F(u) lambda_rho^2).

    Requires sum(lambdas) = 0.  The recorded psi is derived from H itself,
    psi = -(d a(u) + F(u) sum lambda^2); it depends on u only, which is the
    property every downstream identity uses.
    """
    if d < 2:
        raise FamilyError(f"galaev family needs d >= 2, got {d}")
    lambdas = [Fraction(x) for x in lambdas]
    if len(lambdas) != d:
        raise FamilyError(f"need {d} lambda values, got {len(lambdas)}")
    if sum(lambdas) != 0:
        raise FamilyError("lambda sum must be zero")
    coords = null_chart(d)
    a = _as_chart_poly(a, coords)
    F = _as_chart_poly(F, coords)
    for p, name in ((a, "a"), (F, "F")):
        for x in coords[1:]:
            if p.depends_on(x):
                raise FamilyError(f"{name}(u) must depend on u only")
    H = _zero(coords)
    for rho, lam in enumerate(lambdas, start=1):
        xr = Polynomial.variable(coords, f"x{rho}")
        H = H + xr * xr * (a + F * (lam * lam))
    spec = build_ppwave(H, d, family="galaev")
    warnings = ()
    if d == 2:
        warnings = ("galaev with d=2 has identically zero Weyl tensor "
                    "(lambda_1^2 = lambda_2^2 forced); conformal-recurrence "
                    "checks are vacuous",)
    n = d + 2
    return MetricSpec(
        family="galaev", n=n, coords=coords, components=spec.components,
        provenance={"d": d, "lambda": [str(l) for l in lambdas],
                    "a": repr(a), "F": repr(F)},
        potential=H, expected_psi=spec.expected_psi, warnings=warnings)


def build_two_symmetric(a_vec, b_mat) -> MetricSpec:
    """Two-symmetric potential H = sum (u a_mu delta + b_munu) x^mu x^nu."""
    a_vec = [Fraction(x) for x in a_vec]
    d = len(a_vec)
    if d < 2:
        raise FamilyError(f"two_symmetric needs d >= 2, got {d}")
    if any(a_vec[i] > a_vec[i + 1] for i in range(d - 1)) or a_vec[0] < 0:
        raise FamilyError("need 0 <= a_1 <= ... <= a_d")
    b = [[Fraction(x) for x in row] for row in b_mat] if b_mat else \
        [[Fraction(0)] * d for _ in range(d)]
    if len(b) != d or any(len(r) != d for r in b):
        raise FamilyError("b matrix must be d x d")
    for i in range(d):
        for j in range(i):
            if b[i][j] != b[j][i]:
                raise FamilyError("b matrix must be symmetric")
    coords = null_chart(d)
    u = Polynomial.variable(coords, "u")
    H = _zero(coords)
    for mu in range(d):
        for nu in range(d):
            xm = Polynomial.variable(coords, f"x{mu + 1}")
            xn = Polynomial.variable(coords, f"x{nu + 1}")
            coeff = b[mu][nu] + (u * a_vec[mu] if mu == nu else 0)
            if isinstance(coeff, Polynomial) or coeff:
                H = H + xm * xn * coeff
    spec = build_ppwave(H, d, family="two_symmetric")
    psi = -(u * sum(a_vec) + sum(b[m][m] for m in range(d)))
    return MetricSpec(
        family="two_symmetric", n=d + 2, coords=coords,
        components=spec.components,
        provenance={"d": d, "a_vec": [str(x) for x in a_vec],
                    "b_mat": [[str(x) for x in row] for row in b]},
        potential=H, expected_psi=psi)


def build_walker(H, a_rho, gstar, d: int) -> MetricSpec:
    """General Walker-form metric; H may depend on v, g* and a_rho may not."""
    if d < 2:
        raise FamilyError(f"walker needs d >= 2, got {d}")
    coords = null_chart(d)
    H = _as_chart_poly(H, coords)
    a_rho = [_as_chart_poly(p, coords) for p in (a_rho or [0] * d)]
    if len(a_rho) != d:
        raise FamilyError(f"need {d} entries in a_rho")
    if gstar is None:
        gstar = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    gs = [[_as_chart_poly(p, coords) for p in row] for row in gstar]
    if len(gs) != d or any(len(r) != d for r in gs):
        raise FamilyError("g* must be d x d")
    for row in gs:
        if not any(p.terms for p in row):
            raise FamilyError("g* has a zero row; transverse block degenerate")
    for name, polys in (("a_rho", a_rho), ("g*", [p for r in gs for p in r])):
        for p in polys:
            if p.depends_on("v"):
                raise FamilyError(f"{name} must not depend on v")
    n = d + 2
    comp = [[_zero(coords) for _ in range(n)] for _ in range(n)]
    one = Polynomial.constant(coords, 1)
    comp[0][0] = H
    comp[0][n - 1] = comp[n - 1][0] = one
    half = Fraction(1, 2)
    for r in range(d):
        comp[0][r + 1] = comp[r + 1][0] = a_rho[r] * half
        for c in range(d):
            if r <= c:
                comp[r + 1][c + 1] = comp[c + 1][r + 1] = gs[r][c]
    return MetricSpec(
        family="walker", n=n, coords=coords,
        components=tuple(tuple(row) for row in comp),
        provenance={"d": d, "H": repr(H)},
        potential=H)


def build_custom(components, coords=None) -> MetricSpec:
    """User-supplied symmetric polynomial metric."""
    n = len(components)
    if coords is None:
        coords = tuple(f"x{i}" for i in range(n))
    coords = tuple(coords)
    comp = [[_as_chart_poly(p, coords) for p in row] for row in components]
    if any(len(r) != n for r in comp):
        raise FamilyError("custom components must form a square matrix")
    for i in range(n):
        for j in range(i):
            if comp[i][j] != comp[j][i]:
                raise FamilyError(f"custom components not symmetric at ({i},{j})")
    return MetricSpec(family="custom", n=n, coords=coords,
                      components=tuple(tuple(row) for row in comp),
                      provenance={"coords": list(coords)})


def build_perturbed_minkowski(seed: int, n: int = 4, max_degree: int = 2) -> MetricSpec:
    """Minkowski plus a seeded random symmetric polynomial perturbation.

    Perturbation coefficients are rationals k/16 with |k| <= 4 (so within
    [-1/4, 1/4]); used as the generic non-pp-wave control metric.
    """
    rng = random.Random(seed)
    coords = tuple(f"x{i}" for i in range(n))
    monos = [m for m in _monomials(n, max_degree) if sum(m) > 0]
    comp = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            base = Fraction(-1 if (i == j == 0) else (1 if i == j else 0))
            terms = {(0,) * n: base}
            for m in monos:
                k = rng.randint(-4, 4)
                if k:
                    terms[m] = terms.get(m, Fraction(0)) + Fraction(k, 16)
            p = Polynomial(coords, terms)
            comp[i][j] = comp[j][i] = p
    return MetricSpec(family="custom", n=n, coords=coords,
                      components=tuple(tuple(row) for row in comp),
                      provenance={"kind": "perturbed_minkowski", "seed": seed})


def _monomials(nvars: int, max_degree: int):
    out = []

    def rec(prefix, remaining, budget):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for e in range(budget + 1):
            rec(prefix + [e], remaining - 1, budget - e)

    rec([], nvars, max_degree)
    return out


def conformal_rescale(spec: MetricSpec, factor_poly, kind: str = "square") -> MetricSpec:
    """Conformally rescale a metric spec.

    kind="square": multiply components by (1 + s)^2, exactly (any mode).
    kind="exp": attach sigma for the float-mode factor e^{2 sigma}, applied
    as a truncated exponential jet at each evaluation point.
    """
    p = _as_chart_poly(factor_poly, spec.coords)
    if kind == "square":
        w = (Polynomial.constant(spec.coords, 1) + p)
        w2 = w * w
        comp = tuple(tuple(c * w2 for c in row) for row in spec.components)
        return MetricSpec(family=spec.family, n=spec.n, coords=spec.coords,
                          components=comp,
                          provenance=dict(spec.provenance, conformal=f"(1+{p!r})^2"),
                          potential=spec.potential, expected_psi=None,
                          warnings=spec.warnings)
    if kind == "exp":
        return MetricSpec(family=spec.family, n=spec.n, coords=spec.coords,
                          components=spec.components,
                          provenance=dict(spec.provenance, conformal=f"exp(2*({p!r}))"),
                          potential=spec.potential, expected_psi=None,
                          conformal_sigma=p, warnings=spec.warnings)
    raise ValueError(f"unknown conformal factor kind {kind!r}")


# -- run configuration -------------------------------------------------------

DEFAULT_U_VALUES = ("1/2", "1", "3/2", "2", "5/2")
_TRANSVERSE = (Fraction(1, 3), Fraction(-1, 5), Fraction(2, 7), Fraction(-1, 11),
               Fraction(1, 13), Fraction(3, 17), Fraction(-2, 19), Fraction(1, 23))


@dataclass(frozen=True)
class PointPlan:
    strategy: str = "grid"          # "grid" | "random"
    seed: int = 0
    count: int = 5
    u_values: tuple = DEFAULT_U_VALUES


@dataclass(frozen=True)
class RunConfig:
    mode: str                      # "exact" | "float"
    jet_order: int = 4
    points: PointPlan = PointPlan()
    tolerance: float = 1e-9
    checks: tuple | None = None    # None means every registered check
    field_coeffs: tuple = (1, 1)


def sample_points(spec: MetricSpec, plan: PointPlan):
    """Deterministic chart points for a run; degenerate ones are replaced later."""
    n = spec.n
    pts = []
    if plan.strategy == "grid":
        has_null_chart = spec.coords and spec.coords[0] == "u"
        if has_null_chart:
            for k, ustr in enumerate(plan.u_values[: plan.count]):
                u = Fraction(ustr)
                pt = [u]
                for r in range(n - 2):
                    pt.append(_TRANSVERSE[(r + k) % len(_TRANSVERSE)])
                pt.append(Fraction(1, 7) + Fraction(k, 9))
                pts.append(tuple(pt))
        else:
            for k in range(plan.count):
                pts.append(tuple(
                    _TRANSVERSE[(i + k) % len(_TRANSVERSE)] * (1 + Fraction(k, 7))
                    for i in range(n)))
    elif plan.strategy == "random":
        rng = random.Random(plan.seed)
        for _ in range(plan.count):
            pt = []
            for i, name in enumerate(spec.coords):
                if name == "u":
                    pt.append(Fraction(rng.randint(1, 12), 4))
                else:
                    pt.append(Fraction(rng.randint(-4, 4), rng.randint(5, 11)))
            pts.append(tuple(pt))
    else:
        raise ConfigError(f"unknown point strategy {plan.strategy!r}")
    return pts


def perturb_point(point, attempt: int):
    """Deterministic nudge used when a sampled point is degenerate."""
    shift = Fraction(attempt, 17)
    return tuple(x + shift * Fraction(1, k + 3) for k, x in enumerate(point))


# -- configuration document ---------------------------------------------------

def parse_metric_config(text: str):
    """Parse a JSON configuration document into (MetricSpec, RunConfig)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    known = {"family", "d", "n", "params", "mode", "jet_order", "points",
             "tolerance", "checks", "field_equation_coeffs"}
    for key in doc:
        if key not in known:
            raise ConfigError(f"unknown configuration key {key!r}")
    family = doc.get("family")
    if family not in FAMILIES:
        raise ConfigError(f"field 'family' must be one of {FAMILIES}, got {family!r}")
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("field 'params' must be an object")
    try:
        spec = _build_from_config(family, doc, params)
    except (FamilyError, PolynomialError) as e:
        raise ConfigError(str(e)) from None

    mode = doc.get("mode")
    if mode is None:
        mode = "exact" if spec.n <= 5 else "float"
    if mode not in ("exact", "float"):
        raise ConfigError(f"field 'mode' must be 'exact' or 'float', got {mode!r}")
    jet_order = doc.get("jet_order", 4)
    if not isinstance(jet_order, int) or jet_order < 2:
        raise ConfigError("field 'jet_order' must be an integer >= 2")
    pts = doc.get("points", {})
    if not isinstance(pts, dict):
        raise ConfigError("field 'points' must be an object")
    plan = PointPlan(
        strategy=pts.get("strategy", "grid"),
        seed=int(pts.get("seed", 0)),
        count=int(pts.get("count", 5)),
        u_values=tuple(str(x) for x in pts.get("u_values", DEFAULT_U_VALUES)))
    if plan.strategy not in ("grid", "random"):
        raise ConfigError(f"points.strategy must be 'grid' or 'random', got {plan.strategy!r}")
    if plan.count < 1 or plan.count > 25:
        raise ConfigError("points.count must be between 1 and 25")
    checks = doc.get("checks")
    if checks is not None:
        if not isinstance(checks, list) or not all(isinstance(c, str) for c in checks):
            raise ConfigError("field 'checks' must be a list of check names")
        checks = tuple(checks)
    tol = float(doc.get("tolerance", 1e-9))
    coeffs = tuple(doc.get("field_equation_coeffs", (1, 1)))
    config = RunConfig(mode=mode, jet_order=jet_order, points=plan,
                       tolerance=tol, checks=checks, field_coeffs=coeffs)
    return spec, config


def _component_matrix(entries: dict, coords):
    """Expand {"i,j": polynomial} into a full symmetric matrix of strings."""
    pairs = {}
    top = -1
    for key, text in entries.items():
        try:
            i, j = (int(part) for part in str(key).split(","))
        except ValueError:
            raise ConfigError(
                f"components key {key!r} must look like 'i,j'") from None
        if i < 0 or j < 0:
            raise ConfigError(f"components key {key!r} has a negative index")
        pairs[(i, j)] = text
        top = max(top, i, j)
    n = len(coords) if coords else top + 1
    mat = [["0"] * n for _ in range(n)]
    for (i, j), text in pairs.items():
        if i >= n or j >= n:
            raise ConfigError(f"components index ({i},{j}) outside the chart")
        mat[i][j] = text
        mat[j][i] = text
    return mat


def _build_from_config(family, doc, params):
    if family == "custom":
        comp = params.get("components")
        if not comp:
            raise ConfigError("custom family needs params.components")
        if isinstance(comp, dict):
            comp = _component_matrix(comp, params.get("coords"))
        return build_custom(comp, coords=params.get("coords"))
    if family == "perturbed_minkowski":
        return build_perturbed_minkowski(
            seed=int(params.get("seed", 0)),
            n=int(doc.get("n", 4)),
            max_degree=int(params.get("degree", 2)))
    d = doc.get("d")
    if d is None and doc.get("n") is not None:
        d = int(doc["n"]) - 2
    if d is None:
        raise ConfigError("field 'd' (or 'n') is required for built-in families")
    d = int(d)
    if family in ("ppwave", "brinkmann"):
        H = params.get("H")
        if H is None:
            raise ConfigError(f"{family} family needs params.H")
        return build_ppwave(H, d, family="ppwave")
    if family == "galaev":
        lam = params.get("lambda")
        if lam is None:
            raise ConfigError("galaev family needs params.lambda")
        return build_galaev(d, [Fraction(str(x)) for x in lam],
                            params.get("a", "0"), params.get("F", "0"))
    if family == "two_symmetric":
        if "a_vec" not in params:
            raise ConfigError("two_symmetric family needs params.a_vec")
        a_vec = [Fraction(str(x)) for x in params["a_vec"]]
        b_mat = params.get("b_mat")
        if b_mat is not None:
            b_mat = [[Fraction(str(x)) for x in row] for row in b_mat]
        return build_two_symmetric(a_vec, b_mat)
    if family == "walker":
        if "H" not in params:
            raise ConfigError("walker family needs params.H")
        return build_walker(params["H"], params.get("a_rho"),
                            params.get("gstar"), d)
    raise ConfigError(f"unsupported family {family!r}")
