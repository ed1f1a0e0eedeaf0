"""The classification acceptance matrix, one function per check."""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable

from . import constructions as cons
from .criticalloci import (
    bounds_classifier,
    center_containment,
    critical_ideal,
    expected_degree,
    expected_dimension,
    random_setup,
    random_setup_meeting_centers,
    structure_constraints,
    reduce_to_n,
)
from .idealanalysis import (
    dimension_and_degree,
    hilbert_function,
    jacobian_at,
    measure_hilbert,
    plucker_relation,
    restricted_gcd,
    same_graded_pieces,
    singular_linear_space_L,
    smoothness_survey,
)
from .multiview import (
    grassmann_tensor_value,
    random_frame,
    random_projection,
    witness_frames,
)
from .oracles import bounds_oracle, naive_hilbert_function
from .polycore import linalg
from .polycore.field import FieldSpec, RATIONALS, prime_field
from .polycore.matrix import PolyMatrix, maximal_minors
from .polycore.poly import MultiPoly
from .rng import SplitMix64, derive_seed

DEFAULT_SEED = 20240601

# (n, k, hs, expected dim, expected deg)
FORMULA_CASES = (
    (2, 3, (2, 2), 2, 2),
    (2, 4, (3, 3), 2, 3),
    (2, 5, (4, 4), 2, 4),
    (3, 4, (2, 2, 2), 2, 6),
    (4, 3, (1, 1, 1, 1), 2, 4),
)

GRASSMANN_PROFILES = (
    (3, (2, 2), (2, 2)),
    (3, (2, 2, 2), (2, 1, 1)),
    (4, (2, 2, 2), (2, 2, 1)),
)


@dataclass
class CheckResult:
    number: int
    name: str
    tag: str
    passed: bool
    detail: str
    elapsed: float
    budget: float
    data: dict = dc_field(default_factory=dict)

    @property
    def within_budget(self) -> bool:
        return self.elapsed < self.budget

    def to_json(self):
        # timings are left out so reports stay byte-identical across runs
        return {
            "number": self.number,
            "name": self.name,
            "tag": self.tag,
            "passed": self.passed,
            "detail": self.detail,
            "budget_seconds": self.budget,
            "data": self.data,
        }


def _stream(seed: int, *labels: int) -> SplitMix64:
    return SplitMix64(derive_seed(seed, *labels))


def _result(number, name, tag, budget, fn: Callable[[], tuple[bool, str, dict]]) -> CheckResult:
    start = time.perf_counter()
    passed, detail, data = fn()
    return CheckResult(number, name, tag, passed, detail, time.perf_counter() - start, budget, data)


def _lead_field(field: FieldSpec | None) -> FieldSpec:
    return field or prime_field()


# 1 ---------------------------------------------------------------------------

def check_expected_formulas(seed: int = DEFAULT_SEED, field: FieldSpec | None = None) -> CheckResult:
    def run():
        rows = []
        ok = True
        for n, k, hs, dim, deg in FORMULA_CASES:
            t0 = time.perf_counter()
            got = (expected_dimension(k, hs), expected_degree(n, k, hs))
            dt = time.perf_counter() - t0
            good = got == (dim, deg) and dt < 1e-3
            ok &= good
            rows.append({"n": n, "k": k, "hs": list(hs), "expected": [dim, deg], "got": list(got), "ok": good})
        return ok, f"{sum(r['ok'] for r in rows)}/{len(rows)} formula cases exact", {"cases": rows}

    return _result(1, "expected-invariant formulas", "expected-invariants", 0.005 * len(FORMULA_CASES), run)


# 2 and 3 -----------------------------------------------------------------------

def acceptance_setups(seed: int, field: FieldSpec | None = None, seeds: int = 3):
    field = _lead_field(field)
    out = []
    for ci, (n, k, hs, _, _) in enumerate(FORMULA_CASES):
        for s in range(seeds):
            out.append(((n, k, hs), s, random_setup(k, hs, field, _stream(seed, 2, ci, s))))
    return out


def check_measured_invariants(seed: int = DEFAULT_SEED, field: FieldSpec | None = None) -> CheckResult:
    def run():
        rows = []
        for (n, k, hs), s, setup in acceptance_setups(seed, field):
            ideal = critical_ideal(setup)
            measured = dimension_and_degree(measure_hilbert(ideal.generators, ideal.expected_dim), k)
            expected = (ideal.expected_dim, ideal.expected_deg)
            rows.append({"n": n, "k": k, "hs": list(hs), "seed_index": s, "expected": list(expected), "measured": list(measured), "ok": measured == expected})
        good = sum(r["ok"] for r in rows)
        return good == len(rows), f"{good}/{len(rows)} setups match expected (dim, deg)", {"setups": rows}

    return _result(2, "measured invariants match expected", "hilbert-invariants", 30.0, run)


def check_center_containment(seed: int = DEFAULT_SEED, field: FieldSpec | None = None) -> CheckResult:
    setups = acceptance_setups(seed, field)
    ideals = [critical_ideal(s) for _, _, s in setups]

    def run():
        flags = [center_containment(s, ideal) for (_, _, s), ideal in zip(setups, ideals)]
        good = sum(all(f) for f in flags)
        return good == len(flags), f"{good}/{len(flags)} setups contain every Q-center", {}

    return _result(3, "center containment", "center-containment", 5.0, run)


# 4 -----------------------------------------------------------------------------

def check_grassmann_vanishing(seed: int = DEFAULT_SEED, field: FieldSpec | None = None, trials: int = 100) -> CheckResult:
    field = _lead_field(field)

    def run():
        zero_hits = 0
        nonzero_hits = 0
        for t in range(trials):
            k, hs, alphas = GRASSMANN_PROFILES[t % len(GRASSMANN_PROFILES)]
            rng = _stream(seed, 4, t)
            projs = [random_projection(k, h, field, rng) for h in hs]
            point = [field.random_element(rng) for _ in range(k + 1)]
            frames = witness_frames(projs, point, alphas, rng)
            if grassmann_tensor_value(projs, frames) == 0:
                zero_hits += 1
            free = [random_frame(field, h, a, rng) for h, a in zip(hs, alphas)]
            if grassmann_tensor_value(projs, free) != 0:
                nonzero_hits += 1
        ok = zero_hits == trials and nonzero_hits >= (99 * trials) // 100
        return ok, f"witness frames vanish {zero_hits}/{trials}; random frames nonzero {nonzero_hits}/{trials}", {"witness_zero": zero_hits, "random_nonzero": nonzero_hits, "trials": trials}

    return _result(4, "grassmann tensor vanishing", "grassmann-vanishing", 5.0, run)


# 5 ---------------------------------------------------------------------------

def classifier_sweep(max_n: int = 6, max_k: int = 8, max_h: int = 5):
    mismatches = []
    total = 0
    for k in range(1, max_k + 1):
        for n in range(1, max_n + 1):
            for hs in itertools.product(range(max_h + 1), repeat=n):
                if list(hs) != sorted(hs):
                    continue
                total += 1
                got = bounds_classifier(n, k, hs).value
                want = bounds_oracle(n, k, hs)
                if got != want:
                    mismatches.append({"n": n, "k": k, "hs": list(hs), "got": got, "oracle": want})
    return total, mismatches


def check_bounds_classifier(seed: int = DEFAULT_SEED, field: FieldSpec | None = None) -> CheckResult:
    def run():
        total, bad = classifier_sweep()
        small = prime_field(11)
        setup, point = random_setup_meeting_centers(3, (1, 1, 1, 1), small, _stream(seed, 5))
        survey = smoothness_survey(critical_ideal(setup).generators, 1)
        ok = not bad and len(survey.singular_points) >= 1
        detail = f"{total - len(bad)}/{total} profiles agree with the oracle; meeting centers give {len(survey.singular_points)} singular GF(11)-points"
        return ok, detail, {"profiles": total, "mismatches": bad[:20], "meeting_point": list(point), "singular_points": len(survey.singular_points)}

    return _result(5, "bounds classifier", "numerical-bounds", 60.0, run)


# 6 -----------------------------------------------------------------------------

def check_singular_space(seed: int = DEFAULT_SEED, field: FieldSpec | None = None, samples: int = 20) -> CheckResult:
    field = _lead_field(field)

    def run():
        k, hs, c = 6, (3, 3, 3), 3
        rng = _stream(seed, 6)
        setup = random_setup(k, hs, field, rng)
        report = structure_constraints(reduce_to_n(setup), setup)
        N = report.matrix
        gens = [g for g in maximal_minors(N, 3) if g]
        space = singular_linear_space_L(N, c)
        ranks = []
        for _ in range(samples):
            pt = space.sample(field, rng)
            ranks.append(jacobian_at(gens, pt)[1])
        ok = report.generic and len(ranks) >= 20 and all(r <= c - 1 for r in ranks)
        detail = f"L has dimension {space.projective_dimension}; {sum(r <= c - 1 for r in ranks)}/{len(ranks)} sampled points have Jacobian rank <= {c - 1}"
        return ok, detail, {"jacobian_ranks": ranks, "normal_form": report.generic}

    return _result(6, "singular linear space for three views", "singular-linear-space", 30.0, run)


# 7 -----------------------------------------------------------------------------

def check_plucker(seed: int = DEFAULT_SEED, field: FieldSpec | None = None, count: int = 1000) -> CheckResult:
    field = _lead_field(field)

    def run():
        failures = 0
        evaluated = 0
        for c in (3, 4, 5):
            rng = _stream(seed, 7, c)
            for _ in range(count):
                mat = linalg.random_matrix(field, c + 1, 2, rng)
                for j, h in itertools.combinations(range(2, c + 1), 2):
                    evaluated += 1
                    if plucker_relation(field, mat, 0, 1, j, h) != 0:
                        failures += 1
        return failures == 0, f"{evaluated - failures}/{evaluated} three-term relations vanish on {3 * count} matrices", {"evaluated": evaluated}

    return _result(7, "plucker three-term relation", "plucker-relation", 1.0, run)


# 8 ----------------------------------------------------------------------------

def check_round_trips(seed: int = DEFAULT_SEED, field: FieldSpec | None = None) -> CheckResult:
    field = _lead_field(field)

    def run():
        rows = []
        quadric = cons.rational_normal_curve_scroll(field, (1, 1))
        scroll = cons.rational_normal_curve_scroll(field, (1, 2))
        for name, sc in (("quadric in P^3", quadric), ("scroll in P^4", scroll)):
            setup = cons.projections_from_minimal_degree(sc, seed)
            gens = critical_ideal(setup).generators
            rows.append((name, same_graded_pieces(gens, sc.ideal(), range(1, setup.n + 3))))
        form = cons.fermat_cayley_salmon(prime_field(31))
        setup = cons.projections_from_cubic(form, seed)
        rows.append(("Fermat cubic over GF(31)", same_graded_pieces(critical_ideal(setup).generators, [form.cubic()], range(1, setup.n + 3))))
        lines = cons.lambda_family_lines(field, 2, seed=seed)
        setup = cons.projections_from_four_lines(lines, seed)
        det = cons.four_lines_matrix(lines).determinant()
        ok_lines = same_graded_pieces(critical_ideal(setup).generators, [det], range(1, setup.n + 3))
        rows.append(("four skew lines", ok_lines and all(cons.centers_match_lines(setup, lines))))
        good = sum(ok for _, ok in rows)
        return good == len(rows), f"{good}/{len(rows)} constructions round-trip", {"constructions": {n: ok for n, ok in rows}}

    return _result(8, "converse constructions round-trip", "converse-constructions", 60.0, run)


# 9 ----------------------------------------------------------------------------

def check_residual_cubic(seed: int = DEFAULT_SEED, field: FieldSpec | None = None, seeds: int = 3) -> CheckResult:
    field = _lead_field(field)

    def run():
        rows = []
        for s in range(seeds):
            setup = random_setup(3, (1, 1, 1, 1), field, _stream(seed, 9, s))
            res = cons.residual_twisted_cubic(setup)
            inv = dimension_and_degree(measure_hilbert(list(res.generators), 1), 3)
            meets = []
            for eqs in res.lines:
                g = restricted_gcd(list(res.generators), cons.line_parametrization(field, eqs))
                meets.append(None if g is None else len(g) - 1)
            rows.append({"invariants": list(inv), "meetings": meets, "ok": inv == (1, 3) and meets == [2, 2, 2]})
        good = sum(r["ok"] for r in rows)
        return good == len(rows), f"{good}/{len(rows)} setups give a twisted cubic meeting each line twice", {"setups": rows}

    return _result(9, "residual twisted cubic", "residual-cubic", 30.0, run)


# 10 ----------------------------------------------------------------------------

def cone_control(field: FieldSpec, rng):
    """``x0 x1 - x2^2`` after a random coordinate change, with its vertex."""
    t = linalg.random_invertible(field, 4, rng)
    y = [MultiPoly.linear_form(field, row) for row in t]
    cone = y[0] * y[1] - y[2] * y[2]
    vertex = linalg.nullspace(field, t[:3], 4)[0]
    lead = next(v for v in vertex if v)
    inv = field.inv(lead)
    return cone, tuple(field.reduce(v * inv) for v in vertex)


def check_smoothness_proxy(seed: int = DEFAULT_SEED, field: FieldSpec | None = None, runs: int = 10) -> CheckResult:
    small = prime_field(11)

    def run():
        smooth = 0
        counts = []
        for s in range(runs):
            setup = random_setup(3, (1, 1, 1, 1), small, _stream(seed, 10, 0, s), general_position=True)
            n_sing = len(smoothness_survey(critical_ideal(setup).generators, 1).singular_points)
            counts.append(n_sing)
            smooth += n_sing == 0
        cone_ok = 0
        meet_ok = 0
        for s in range(runs):
            cone, vertex = cone_control(small, _stream(seed, 10, 1, s))
            sv = smoothness_survey([cone], 1)
            cone_ok += sv.singular_points == [vertex]
            setup, _ = random_setup_meeting_centers(3, (1, 1, 1, 1), small, _stream(seed, 10, 2, s))
            meet_ok += not smoothness_survey(critical_ideal(setup).generators, 1).smooth
        need = (9 * runs + 9) // 10
        ok = smooth >= need and cone_ok == runs and meet_ok == runs
        detail = f"random setups smooth over GF(11) in {smooth}/{runs} seeds (need {need}); cone flagged {cone_ok}/{runs}; meeting centers flagged {meet_ok}/{runs}"
        return ok, detail, {"singular_counts": counts, "cone_flagged": cone_ok, "meeting_flagged": meet_ok}

    return _result(10, "smoothness proxy over GF(11)", "smoothness-proxy", 60.0, run)


# 11 ----------------------------------------------------------------------------

def oracle_ideals(field: FieldSpec) -> dict[str, list[MultiPoly]]:
    x = [MultiPoly.variable(field, 4, i) for i in range(4)]
    cubic = PolyMatrix([[x[0], x[1], x[2]], [x[1], x[2], x[3]]])
    return {
        "hyperplane": [x[0]],
        "pair of coordinates": [x[0], x[1]],
        "quadric": [x[0] * x[3] - x[1] * x[2]],
        "twisted cubic": maximal_minors(cubic, 2),
    }


def check_oracle_equivalence(seed: int = DEFAULT_SEED, field: FieldSpec | None = None, d_max: int = 6) -> CheckResult:
    fields = [RATIONALS, _lead_field(field)]

    def run():
        rows = {}
        for fld in fields:
            for name, gens in oracle_ideals(fld).items():
                fast = hilbert_function(gens, d_max).values
                slow = naive_hilbert_function(gens, d_max)
                rows[f"{name} over {fld}"] = fast == slow
        good = sum(rows.values())
        return good == len(rows), f"{good}/{len(rows)} ideals agree with the naive oracle for d <= {d_max}", {"ideals": rows}

    return _result(11, "oracle equivalence", "oracle-equivalence", 5.0, run)


CHECKS: tuple[Callable[..., CheckResult], ...] = (
    check_expected_formulas,
    check_measured_invariants,
    check_center_containment,
    check_grassmann_vanishing,
    check_bounds_classifier,
    check_singular_space,
    check_plucker,
    check_round_trips,
    check_residual_cubic,
    check_smoothness_proxy,
    check_oracle_equivalence,
)


def _run_one(args) -> CheckResult:
    index, seed, modulus = args
    field = prime_field(modulus) if modulus else None
    return CHECKS[index](seed, field)


def worker_count() -> int:
    raw = os.environ.get("CLOCUS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_all(seed: int = DEFAULT_SEED, field: FieldSpec | None = None, only: list[int] | None = None, workers: int | None = None) -> list[CheckResult]:
    """Run the acceptance matrix; results come back in check order whatever the worker count."""
    picks = [i for i in range(len(CHECKS)) if only is None or i + 1 in only]
    modulus = field.modulus if field is not None and field.is_prime else None
    jobs = [(i, seed, modulus) for i in picks]
    workers = workers or worker_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(j) for j in jobs]
