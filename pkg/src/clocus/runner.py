"""Scenario execution: turn a validated config into a report dictionary."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any

from . import __version__
from . import constructions as cons
from .config import Mode, ScenarioConfig, parse_form, parse_scalar
from .criticalloci import (
    CriticalSetup,
    center_containment,
    critical_ideal,
    explain_bounds,
    expected_dimension,
    random_setup,
    structure_constraints,
)
from .errors import (
    ClocusError,
    ConfigError,
    ConstructionFailedError,
    DegenerateSetupError,
    InconsistencyError,
    InvalidCameraError,
    InvalidLinesError,
    InvalidSetupError,
    NeedsHigherDegreeError,
    NonGenericError,
)
from .idealanalysis import (
    ENUMERATION_MAX_PRIME,
    ENUMERATION_MAX_VARS,
    HilbertProfile,
    dimension_and_degree,
    graded_piece_rank,
    line_slice_degree,
    measure_hilbert,
    restricted_gcd,
    singular_locus_dimension,
    smoothness_survey,
)
from .multiview import make_projection
from .polycore.matrix import PolyMatrix
from .rng import SplitMix64, derive_seed
from .verify import run_all

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG = 2
EXIT_INTERNAL = 3

SMOOTHNESS_NOTE = "no singular GF(p)-point is evidence of smoothness, not a proof over the complex numbers"


@dataclass
class Check:
    name: str
    tag: str
    passed: bool
    detail: str

    def to_json(self):
        return {"name": self.name, "tag": self.tag, "passed": self.passed, "detail": self.detail}


@dataclass
class ScenarioResult:
    report: dict[str, Any]
    exit_code: int
    figures: dict[str, Any] = dc_field(default_factory=dict)


def _header(cfg: ScenarioConfig) -> dict[str, Any]:
    return {
        "tool": "clocus",
        "version": __version__,
        "mode": cfg.mode.value,
        "seed": cfg.seed,
        "field": cfg.field.to_json(),
        "config": cfg.to_json(),
    }


def _finish(cfg: ScenarioConfig, body: dict[str, Any], checks: list[Check], figures: dict) -> ScenarioResult:
    report = _header(cfg)
    report.update(body)
    report["checks"] = [c.to_json() for c in checks]
    passed = all(c.passed for c in checks)
    report["verdict"] = "PASS" if passed else "FAIL"
    code = EXIT_OK if passed else EXIT_CHECKS_FAILED
    report["exit_code"] = code
    return ScenarioResult(report, code, figures)


def _failure(cfg: ScenarioConfig, stage: str, exc: Exception) -> ScenarioResult:
    report = _header(cfg)
    report["error"] = {"stage": stage, "type": type(exc).__name__, "message": str(exc)}
    report["checks"] = []
    report["verdict"] = "ERROR"
    report["exit_code"] = EXIT_INTERNAL
    return ScenarioResult(report, EXIT_INTERNAL)


def _rng(cfg: ScenarioConfig, label: str) -> SplitMix64:
    return SplitMix64(derive_seed(cfg.seed, *label.encode()))


# analyze --------------------------------------------------------------------

def build_setup(cfg: ScenarioConfig) -> CriticalSetup:
    f = cfg.field
    if cfg.random is not None:
        k, hs = cfg.random["k"], tuple(cfg.random["hs"])
        return random_setup(k, hs, f, _rng(cfg, "setup"), general_position=cfg.random.get("general_position", False))
    s = cfg.setup
    k, hs = s["k"], tuple(s["hs"])
    try:
        ps = tuple(make_projection(k, h, [[parse_scalar(f, x) for x in row] for row in m], f) for h, m in zip(hs, s["P"]))
        qs = tuple(make_projection(k, h, [[parse_scalar(f, x) for x in row] for row in m], f) for h, m in zip(hs, s["Q"]))
    except InvalidCameraError as exc:
        raise ConfigError(f"setup: {exc}") from None
    try:
        return CriticalSetup(k, hs, ps, qs)
    except InvalidSetupError as exc:
        raise ConfigError(f"setup: {exc}") from None


def _profile_json(profile: HilbertProfile) -> dict[str, Any]:
    return {
        "values": {str(d): v for d, v in sorted(profile.values.items())},
        "polynomial": [str(c) for c in profile.fitted],
        "stabilization_degree": profile.stabilization_degree,
    }


def _survey_allowed(cfg: ScenarioConfig, k: int, top_degree: int) -> str | None:
    f = cfg.field
    if not cfg.smoothness:
        return "disabled in config"
    if not f.is_prime or f.modulus > ENUMERATION_MAX_PRIME:
        return f"needs a prime field with p <= {ENUMERATION_MAX_PRIME}"
    if k + 1 > ENUMERATION_MAX_VARS:
        return f"needs k <= {ENUMERATION_MAX_VARS - 1}"
    if f.modulus <= top_degree:
        return "characteristic must exceed the generator degree"
    return None


def analyze(cfg: ScenarioConfig) -> ScenarioResult:
    setup = build_setup(cfg)
    n, k, hs = setup.n, setup.k, setup.hs
    bounds, reason = explain_bounds(n, k, hs)
    body: dict[str, Any] = {
        "setup": setup.to_json(),
        "bounds": {"class": bounds.value, "reason": reason},
    }
    if expected_dimension(k, hs) < 0:
        body["expected"] = None
        return _finish(cfg, body, [Check("expected dimension is non-negative", "expected-dimension", False, "profile is infeasible")], {})
    try:
        ideal = critical_ideal(setup)
    except DegenerateSetupError as exc:
        return _failure(cfg, "block reduction", exc)
    gens = list(ideal.generators)
    body["expected"] = {"dim": ideal.expected_dim, "deg": ideal.expected_deg}
    body["structure"] = {"N_shape": list(ideal.source_matrix.shape), "generators": len(gens), "generator_degree": n}
    checks: list[Check] = []
    figures: dict[str, Any] = {}

    if not gens:
        checks.append(Check("critical ideal is proper", "expected-dimension", False, "all maximal minors vanish"))
        return _finish(cfg, body, checks, figures)
    try:
        profile = measure_hilbert(gens, ideal.expected_dim)
        dim, deg = dimension_and_degree(profile, k)
        body["measured"] = {"dim": dim, "deg": deg, "hilbert": _profile_json(profile)}
        figures["hilbert"] = profile
        checks.append(Check("measured dimension equals expected", "expected-dimension", dim == ideal.expected_dim, f"measured {dim}, expected {ideal.expected_dim}"))
        checks.append(Check("measured degree equals expected", "expected-degree", deg == ideal.expected_deg, f"measured {deg}, expected {ideal.expected_deg}"))
    except (NeedsHigherDegreeError, InconsistencyError) as exc:
        body["measured"] = None
        checks.append(Check("Hilbert polynomial stabilizes", "expected-dimension", False, str(exc)))

    flags = center_containment(setup, ideal)
    body["center_containment"] = flags
    checks.append(Check("every Q-center lies on the locus", "center-containment", all(flags), f"{sum(flags)}/{len(flags)} centers contained"))

    if len(gens) == 1:
        try:
            slice_deg = line_slice_degree(gens, _rng(cfg, "slice"))
            checks.append(Check("line slice degree equals expected", "slice-degree", slice_deg == ideal.expected_deg, f"random line meets the hypersurface {slice_deg} times"))
        except NonGenericError as exc:
            checks.append(Check("line slice degree equals expected", "slice-degree", False, str(exc)))

    if n == 3 and ideal.source_matrix.cols == 3:
        rep = structure_constraints(ideal.source_matrix, setup)
        body["structure"]["three_view"] = {
            "columns_depend_on_own_view": rep.columns_depend_on_own_view,
            "zero_pattern": rep.zero_pattern,
            "third_column_zero": rep.third_column_zero,
            "distinguished_forms_rank": rep.pivot_forms_rank,
            "generic": rep.generic,
            "notes": rep.notes,
        }
        checks.append(Check("columns involve only their own view", "column-structure", rep.columns_depend_on_own_view, "; ".join(rep.notes) or "normal form reached"))

    skip = _survey_allowed(cfg, k, n)
    if skip is None:
        survey = smoothness_survey(gens, setup.codim)
        body["smoothness"] = survey.to_json()
        body["smoothness"]["note"] = SMOOTHNESS_NOTE
        figures["jacobian_ranks"] = survey.jacobian_ranks
    else:
        body["smoothness"] = {"skipped": skip, "note": SMOOTHNESS_NOTE}
    return _finish(cfg, body, checks, figures)


# constructions ----------------------------------------------------------------

def _round_trip(constructed, target, top: int) -> tuple[list[dict[str, int]], bool]:
    rows = []
    for d in range(1, top + 1):
        ra = graded_piece_rank(constructed, d)
        rb = graded_piece_rank(target, d)
        rab = graded_piece_rank(list(constructed) + list(target), d)
        rows.append({"degree": d, "constructed": ra, "target": rb, "union": rab})
    return rows, all(r["constructed"] == r["target"] == r["union"] for r in rows)


def _scroll_target(cfg: ScenarioConfig) -> cons.ScrollMatrix:
    t = cfg.target
    if "scroll_type" in t:
        return cons.rational_normal_curve_scroll(cfg.field, t["scroll_type"])
    nvars = t.get("nvars")
    entries = [[parse_form(cfg.field, nvars, e) for e in row] for row in t["matrix"]]
    try:
        return cons.ScrollMatrix(PolyMatrix(entries))
    except ValueError as exc:
        raise ConfigError(f"target: {exc}") from None


def _cubic_target(cfg: ScenarioConfig) -> cons.CayleySalmonForm:
    t = cfg.target
    try:
        if t.get("fermat"):
            return cons.fermat_cayley_salmon(cfg.field)
        nvars = t.get("nvars")
        L = tuple(parse_form(cfg.field, nvars, e) for e in t["L"])
        M = tuple(parse_form(cfg.field, nvars, e) for e in t["M"])
        return cons.CayleySalmonForm(L, M)
    except ValueError as exc:
        raise ConfigError(f"target: {exc}") from None


def _lines_target(cfg: ScenarioConfig) -> cons.FourLines:
    t = cfg.target
    f = cfg.field
    E = None
    if "E" in t:
        E = [[parse_scalar(f, x) for x in row] for row in t["E"]]
    try:
        if "lambda" in t:
            return cons.lambda_family_lines(f, parse_scalar(f, t["lambda"]), E, seed=cfg.seed)
        forms = tuple(tuple(parse_form(f, 4, e) for e in pair) for pair in t["lines"])
        if E is None:
            E = cons.random_mixing_matrix(f, _rng(cfg, "mixing"))
        return cons.FourLines(forms, tuple(tuple(r) for r in E))
    except InvalidLinesError:
        raise
    except ValueError as exc:
        raise ConfigError(f"target: {exc}") from None


def construct(cfg: ScenarioConfig) -> ScenarioResult:
    checks: list[Check] = []
    body: dict[str, Any] = {"target": cfg.target}
    try:
        if cfg.mode is Mode.CONSTRUCT_SCROLL:
            sc = _scroll_target(cfg)
            setup = cons.projections_from_minimal_degree(sc, cfg.seed)
            target_gens = sc.ideal()
        elif cfg.mode is Mode.CONSTRUCT_CUBIC:
            form = _cubic_target(cfg)
            setup = cons.projections_from_cubic(form, cfg.seed)
            target_gens = [form.cubic()]
        else:
            lines = _lines_target(cfg)
            setup = cons.projections_from_four_lines(lines, cfg.seed)
            target_gens = [cons.four_lines_matrix(lines).determinant()]
    except (ConstructionFailedError, NonGenericError, InvalidLinesError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        return _failure(cfg, "construction", exc)

    ideal = critical_ideal(setup)
    gens = list(ideal.generators)
    body["setup"] = setup.to_json()
    rows, same = _round_trip(gens, target_gens, setup.n + 2)
    body["graded_ranks"] = rows
    checks.append(Check("critical ideal equals the target degree-wise", "round-trip", same, f"graded pieces compared through degree {setup.n + 2}"))

    dim, deg = dimension_and_degree(measure_hilbert(gens, ideal.expected_dim), setup.k)
    body["measured"] = {"dim": dim, "deg": deg}
    exp = (ideal.expected_dim, ideal.expected_deg)
    checks.append(Check("measured invariants equal expected", "expected-degree", (dim, deg) == exp, f"measured {(dim, deg)}, expected {exp}"))

    if cfg.mode is Mode.CONSTRUCT_CUBIC:
        sdim = singular_locus_dimension(target_gens[0])
        body["singular_locus_dimension"] = sdim
        checks.append(Check("cubic has isolated singularities at worst", "reduced-cubic", sdim <= 0, f"singular locus has dimension {sdim}"))
    if cfg.mode is Mode.CONSTRUCT_FOUR_LINES:
        match = cons.centers_match_lines(setup, lines)
        body["centers_match"] = match
        checks.append(Check("Q-centers are the given lines", "center-recovery", all(match), f"{sum(match)}/4 centers recovered"))
        on = [restricted_gcd(target_gens, lines.line_parametrization(i)) is None for i in range(4)]
        checks.append(Check("quartic contains every line", "center-containment", all(on), f"{sum(on)}/4 lines contained"))
    return _finish(cfg, body, checks, {"graded_ranks": rows})


# verify ---------------------------------------------------------------------

def verify(cfg: ScenarioConfig) -> ScenarioResult:
    field = cfg.field if cfg.field.is_prime else None
    results = run_all(cfg.seed, field, list(cfg.only) if cfg.only else None)
    checks = [Check(f"criterion {r.number}: {r.name}", r.tag, r.passed, r.detail) for r in results]
    body = {"criteria": [r.to_json() for r in results]}
    return _finish(cfg, body, checks, {"criteria": results})


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    """Dispatch on the mode; config problems propagate as ``ConfigError``."""
    try:
        if cfg.mode is Mode.ANALYZE:
            return analyze(cfg)
        if cfg.mode is Mode.VERIFY:
            return verify(cfg)
        return construct(cfg)
    except ConfigError:
        raise
    except ClocusError as exc:
        return _failure(cfg, cfg.mode.value, exc)
