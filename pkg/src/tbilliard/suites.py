"""Named verification suites run by ``tbilliard verify``.

Each suite returns a :class:`SuiteResult` made of :class:`Check` records;
every check carries the exact values it compared, as strings, so a report
can be audited without re-running anything.  A suite passes iff every
check passes.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .admissibility import (
    Witness,
    admissible_grid,
    dyadic_hit_search,
    dyadic_line_witness,
    is_structurally_admissible,
    verify_periodic_sequence,
    witness_slope,
)
from .analysis import (
    build_nontrivial_path,
    build_sequence,
    classify,
    detect_eventually_constant,
    escape_distance,
    expected_escape_distance,
    overhang_top_hit,
    prefractal,
)
from .exact import QuadScalar, format_scalar
from .flow import Direction, PhasePoint, trace_exact, trace_orbit
from .geometry import Point, square_table, rectangle_table, words
from .unfolding import angle_label, rect_exit_oracle, square_exit_oracle, unfold, verify_collinear

DEFAULT_SEED = 0

__all__ = ["DEFAULT_SEED", "Check", "SuiteResult", "SuiteConfig", "SUITES", "run_suite", "suite_names"]


@dataclass
class Check:
    case: str
    ok: bool
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteResult:
    name: str
    description: str
    checks: list
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "description": self.description,
            "ok": self.ok,
            "n_checks": len(self.checks),
            "n_failed": len(self.failures),
            "seconds": round(self.seconds, 3),
            "checks": [{"case": c.case, "ok": c.ok, **{k: _s(v) for k, v in c.detail.items()}} for c in self.checks],
        }


@dataclass
class SuiteConfig:
    levels: int | None = None
    cap: int | None = None
    seed: int = DEFAULT_SEED


def _s(v):
    if isinstance(v, (Fraction, QuadScalar)):
        return format_scalar(v)
    if isinstance(v, Point):
        return [format_scalar(v.x), format_scalar(v.y)]
    if isinstance(v, Direction):
        return f"({v.sx:+d},{v.sy:+d}) slope {format_scalar(v.slope)}"
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, (list, tuple)):
        return [_s(x) for x in v]
    return v


def _lv(cfg: SuiteConfig, default: int) -> int:
    return default if cfg.levels is None else cfg.levels


def _cap(cfg: SuiteConfig, default: int) -> int:
    return default if cfg.cap is None else cfg.cap


# ---------------------------------------------------------------------------
# dyadic lines and admissibility
# ---------------------------------------------------------------------------


def constructed_witnesses(count: int = 20, per_x0: int = 4):
    """Deterministic (x0, witness) pairs whose dyadic point lies in the search box."""
    out = []
    for x0 in (Fraction(1, 3), Fraction(2, 5), Fraction(3, 7), Fraction(5, 9), Fraction(4, 11)):
        mine = 0
        for r, p, s, q in itertools.product(range(3), range(-2, 5), range(3), (1, 3, 5)):
            w = Witness(p, q, r, s)
            pt = w.point
            if mine == per_x0 or not (-1 <= pt.x <= 2 and 0 < pt.y <= 3) or witness_slope(x0, w) is None:
                continue
            if any(witness_slope(x0, v) == witness_slope(x0, w) for a, v in out if a == x0):
                continue
            out.append((x0, w))
            mine += 1
    return out[:count]


def suite_dyadic_lines(cfg: SuiteConfig) -> list[Check]:
    checks = []
    for i, (x0, w) in enumerate(constructed_witnesses(20)):
        m = witness_slope(x0, w)
        hit = dyadic_hit_search(x0, m)
        found = dyadic_line_witness(x0, m)
        on_line = hit is not None and hit.y == m * (hit.x - x0)
        checks.append(Check(f"witness-{i:02d}", on_line and found is not None,
                            {"x0": x0, "witness": [w.p, w.q, w.r, w.s], "slope": m, "dyadic_point": hit,
                             "search_witness": None if found is None else [found.p, found.q, found.r, found.s]}))
    return checks


def suite_admissibility(cfg: SuiteConfig) -> list[Check]:
    F = Fraction
    checks = []
    examples = [
        (F(1, 3), F(1, 3), True),
        (F(1, 3), F(2, 5), True),
        (F(1, 3), F(1, 6), False),
        (F(1, 2), F(1, 3), False),
        (F(1, 3), F(6), False),
    ]
    for x0, m, want in examples:
        got = is_structurally_admissible(x0, m)
        checks.append(Check(f"structural({x0},{m})", got == want, {"x0": x0, "slope": m, "expected": want, "got": got}))
    xs, ms = admissible_grid()
    bad, hits = [], []
    for x0 in xs:
        for m in ms:
            if not is_structurally_admissible(x0, m):
                bad.append((x0, m))
            h = dyadic_hit_search(x0, m)
            if h is not None:
                hits.append((x0, m, h))
    checks.append(Check("grid-structurally-admissible", not bad, {"grid": f"{len(xs)}x{len(ms)}", "rejected": bad[:10]}))
    checks.append(Check("grid-no-dyadic-point", not hits, {"grid": f"{len(xs)}x{len(ms)}", "hits": hits[:10]}))
    return checks


def suite_admissible_grid(cfg: SuiteConfig) -> list[Check]:
    N = _lv(cfg, 3)
    cap = _cap(cfg, 10**5)
    xs, ms = admissible_grid()
    checks = []
    for x0 in xs:
        for m in ms:
            rep = verify_periodic_sequence(x0, m, N, cap=cap, strict=False)
            checks.append(Check(f"({x0},{m})", rep.ok, {
                "terminations": rep.terminations,
                "periods": rep.periods,
                "vertex_hits": [[n, [_s(p) for p in pts[:3]]] for n, pts in rep.vertex_hits],
            }) if not rep.ok else Check(f"({x0},{m})", True, {"max_period": max(rep.periods)}))
    return checks


# ---------------------------------------------------------------------------
# eventually constant sequences
# ---------------------------------------------------------------------------


def suite_midpoint_constant(cfg: SuiteConfig) -> list[Check]:
    N = _lv(cfg, 4)
    checks = []
    sq = square_table(1)
    for k in (2, 3, 4):
        s = Fraction(1, 2**k)
        o = trace_exact(sq, PhasePoint(Point(Fraction(1, 2), Fraction(0)), Direction(1, 1, s)), 10**4)
        pts = unfold(o, 1)
        tops = [p for p in pts if p.y == 1]
        want = Point(2**k + Fraction(1, 2), Fraction(1))
        checks.append(Check(f"square-unfold(1/2, 2^-{k})", bool(tops) and tops[0] == want and verify_collinear(pts),
                            {"first_unfolded_top": tops[0] if tops else None, "expected": want}))
        seq = build_sequence(Fraction(1, 2), Direction(1, 1, s), N)
        c = detect_eventually_constant(seq)
        checks.append(Check(f"constant(1/2, 2^-{k})", c == 0 and all(t == math.inf for t in seq.taus),
                            {"constant_from": c, "taus": seq.taus, "periods": [r.orbit.period for r in seq.per_level]}))
    return checks


def suite_overhang_top(cfg: SuiteConfig) -> list[Check]:
    N = _lv(cfg, 3)
    checks = []
    for level in range(0, N + 1):
        for w in words(level):
            for n in (2, 3, 4):
                for right in (True, False):
                    for sx in (1, -1):
                        r = overhang_top_hit(level, w, n, right, sx)
                        checks.append(Check(
                            f"T{level}[{w or '-'}] n={n} {'R' if right else 'L'} sx={sx:+d}", r.ok,
                            {"start": r.start, "top_point": r.top_point, "inside": r.stays_in_rectangle,
                             "removed_midpoint": r.hits_removed_midpoint},
                        ))
    return checks


def suite_overhang_constant(cfg: SuiteConfig) -> list[Check]:
    N = _lv(cfg, 4)
    checks = []
    for k in (2, 3, 4):
        for x0 in (Fraction(5, 4), Fraction(-1, 4)):
            for sx in (1, -1):
                seq = build_sequence(x0, Direction(sx, 1, Fraction(1, 2**k)), N, y0=1)
                c = detect_eventually_constant(seq)
                checks.append(Check(f"constant(({x0},1), {sx:+d}, 2^-{k})", c == 1,
                                    {"constant_from": c, "periods": [r.orbit.period for r in seq.per_level]}))
    return checks


# ---------------------------------------------------------------------------
# exit oracles
# ---------------------------------------------------------------------------

SQUARE_X0 = (Fraction(1, 3), Fraction(2, 5), Fraction(5, 9), Fraction(3, 7), Fraction(5, 7))


def square_exit_simulated(x0, p: int, sign: int):
    init = PhasePoint(Point(x0, Fraction(0)), Direction(sign, 1, Fraction(1, p)))
    o = trace_exact(square_table(1), init, 4 * p + 8, stop=lambda k, st: st.point.y == 1)
    k = o.n_collisions
    return o.collisions[k].point.x, k, o.incoming(k)


def suite_square_exit(cfg: SuiteConfig) -> list[Check]:
    checks = []
    for x0 in SQUARE_X0:
        for p in range(1, 32, 2):
            for sign in (1, -1):
                ex, step, d = square_exit_oracle(x0, p, sign)
                sx, sstep, sd = square_exit_simulated(x0, p, sign)
                ok = (ex, step, d) == (sx, sstep, sd)
                checks.append(Check(f"({x0},p={p},{sign:+d})", ok,
                                    {} if ok else {"oracle": [ex, step, d], "simulated": [sx, sstep, sd]}))
    return checks


def rect_samples(seed: int, per_window: int = 4):
    rng = random.Random(seed)
    pool = sorted({Fraction(t, h) for h in (3, 5, 7, 9, 11, 13, 15) for t in range(1, h) if math.gcd(t, h) == 1})
    a = rng.sample(pool, per_window)
    b = rng.sample(pool, per_window)
    return sorted(1 + v for v in a) + sorted(2 + v for v in b)


def rect_exit_simulated(x0, p: int, sign: int):
    """First top-side hit in an end unit segment: (segment, angle, x)."""
    init = PhasePoint(Point(x0, Fraction(0)), Direction(sign, 1, Fraction(1, p)))

    def end_hit(k, st):
        return st.point.y == 1 and (0 < st.point.x < 1 or 3 < st.point.x < 4)

    o = trace_exact(rectangle_table(4, 1), init, 64 * p + 64, stop=end_hit)
    if o.termination != "stopped":
        return None
    k = o.n_collisions
    x = o.collisions[k].point.x
    return ("left" if x < 1 else "right"), angle_label(init.direction, o.incoming(k)), x


def suite_rectangle_exit(cfg: SuiteConfig) -> list[Check]:
    checks = []
    for x0 in rect_samples(cfg.seed):
        for p in range(1, 32, 2):
            for sign in (1, -1):
                seg, ang = rect_exit_oracle(x0, p, sign)
                sim = rect_exit_simulated(x0, p, sign)
                seg_ok = sim is not None and sim[0] == seg
                ang_ok = sim is not None and sim[1] == ang
                checks.append(Check(f"({x0},p={p},{sign:+d}) segment", seg_ok,
                                    {"table": seg, "simulated": None if sim is None else sim[0]}))
                checks.append(Check(f"({x0},p={p},{sign:+d}) angle", ang_ok,
                                    {"table": ang, "simulated": None if sim is None else sim[1],
                                     "exit_x": None if sim is None else sim[2]}))
    return checks


# ---------------------------------------------------------------------------
# escape distances, nontrivial paths, periodic certificates
# ---------------------------------------------------------------------------


def suite_escape_distance(cfg: SuiteConfig) -> list[Check]:
    N = _lv(cfg, 6)
    checks = []
    for x0 in (Fraction(1, 3), Fraction(2, 5), Fraction(5, 9)):
        for p in (1, 3, 5):
            for sign in (1, -1):
                seq = build_sequence(x0, Direction(sign, 1, Fraction(1, p)), N)
                for r in seq.per_level:
                    n = r.level
                    finite = r.tau != math.inf and r.upsilon != math.inf
                    order = finite and r.tau < r.upsilon
                    got = escape_distance(r) if r.tau != math.inf else None
                    want = expected_escape_distance(x0, sign, n)
                    checks.append(Check(f"({x0},p={p},{sign:+d}) n={n}", order and got == want,
                                        {"tau": r.tau, "upsilon": r.upsilon, "distance": got, "expected": want}))
    return checks


def _hd_values(steps):
    """Exact squared distances when all are exact, else 50-digit decimals."""
    if all(h.exact for h in steps):
        return [h.squared for h in steps]
    with mpmath.workdps(50):
        return [mpmath.mpf(h.decimal) for h in steps]


def suite_nontrivial_paths(cfg: SuiteConfig) -> list[Check]:
    N = _lv(cfg, 6)
    checks = []
    limits = []
    for sx in (1, -1):
        seq = build_sequence(Fraction(1, 3), Direction(sx, 1, Fraction(1, 3)), N)
        path = build_nontrivial_path(seq)
        limits.append(path.limit_point)
        checks.append(Check(f"sx={sx:+d} address", path.address is not None and path.limit_point is not None,
                            {"escape_words": path.escape_words, "address": None if path.address is None else str(path.address),
                             "limit": path.limit_point, "interval": list(path.limit_interval)}))
        steps = path.hausdorff_steps()
        vals = _hd_values(steps)
        dec = all(b < a for a, b in zip(vals, vals[1:]))
        checks.append(Check(f"sx={sx:+d} hausdorff decreasing", dec,
                            {"squared": [format_scalar(h.squared) if h.exact else f"~{h.decimal}" for h in steps]}))
        hts = path.terminal_heights
        checks.append(Check(f"sx={sx:+d} terminal heights", all(h == prefractal(n).height for n, h in zip(seq.levels, hts)),
                            {"heights": hts}))
    checks.append(Check("distinct limits", None not in limits and limits[0] != limits[1], {"limits": limits}))
    return checks


def suite_periodic_certificate(cfg: SuiteConfig) -> list[Check]:
    N = _lv(cfg, 6)
    checks = []
    for sx in (1, -1):
        seq = build_sequence(Fraction(1, 3), Direction(sx, 1, Fraction(1, 3)), N)
        cl = classify(seq)
        checks.append(Check(f"sx={sx:+d} verdict", cl.verdict == "periodic", {"verdict": cl.verdict, "reason": cl.evidence.get("reason")}))
        for r in seq.per_level:
            n = r.level
            if not r.orbit.return_indices:
                checks.append(Check(f"sx={sx:+d} n={n} first return", False, {"reason": "no return"}))
                continue
            x = r.orbit.collisions[r.upsilon].point.x
            gap = abs(x - Fraction(1, 3))
            checks.append(Check(f"sx={sx:+d} n={n} first return", gap < Fraction(2) ** (1 - n) and r.tau < r.upsilon,
                                {"tau": r.tau, "upsilon": r.upsilon, "return_x": x, "gap": gap, "bound": Fraction(2) ** (1 - n)}))
    return checks


# ---------------------------------------------------------------------------
# the Q(sqrt 2) example
# ---------------------------------------------------------------------------


def suite_sqrt2_singular(cfg: SuiteConfig) -> list[Check]:
    from . import irrational as ir
    from .geometry import height

    N = _lv(cfg, 5)
    cap = _cap(cfg, ir.DEFAULT_CAP)
    checks = []
    r0 = ir.descent(0, cap)
    want0 = QuadScalar(-36, Fraction(51, 2), 2)
    checks.append(Check("descent(0) base hit", r0.base_hit == want0, {"zeta": r0.zeta, "got": r0.base_hit, "expected": want0}))
    r1 = ir.descent(1, cap)
    want1 = r0.base_hit + ir.S0
    through = Point(-r0.base_hit / 2, height(0))
    checks.append(Check("descent(1) base hit", r1.base_hit == want1, {"zeta": r1.zeta, "got": r1.base_hit, "expected": want1}))
    checks.append(Check("descent(1) passes (-x/2, sigma_0)", ir.passes_through(r1.orbit, through), {"point": through}))
    ok, rows = ir.verify_descent_recurrence(N, cap)
    for n, z, got, pred in rows:
        checks.append(Check(f"recurrence n={n}", got == pred, {"zeta": z, "got": got, "expected": pred}))
    checks.append(Check("limit y0", ir.Y0 == QuadScalar(-1202, 850, 2), {"y0": ir.Y0}))
    rep = ir.singular_sequence(min(N, 4), cap)
    d = rep.as_dict()
    checks.append(Check("forward orbits singular", all(t == "singular" for t in rep.terminations),
                        {"terminations": rep.terminations, "singular_vertices": d["singular_vertices"]}))
    checks.append(Check("escape before corner", rep.escape_before_corner, {"taus": d["taus"], "singular_at": rep.singular_at}))
    checks.append(Check("level-1 escape position", bool(rep.level1_position_ok), {"escape_points": d["escape_points"][:2]}))
    checks.append(Check("level-1 escape direction", bool(rep.level1_direction_ok), {}))
    for n, s in rep.self_similar:
        checks.append(Check(f"self-similar n={n}", s, {}))
    checks.append(Check("terminal heights sigma_n", rep.terminal_heights_ok, {}))
    checks.append(Check("classification", rep.classification == "singular", {"verdict": rep.classification}))
    slope_ok = all(c.direction.slope == ir.SLOPE for r in rep.sequence.per_level for c in r.orbit.collisions)
    checks.append(Check("slope constant", slope_ok, {"slope": ir.SLOPE}))
    return checks


SUITES = {
    "dyadic-lines": ("dyadic lines: constructed witnesses are found by the brute-force search", suite_dyadic_lines),
    "admissibility": ("structural admissibility examples and grid", suite_admissibility),
    "admissible-grid": ("admissible grid: periodic, corner-free orbits on every level", suite_admissible_grid),
    "midpoint-constant": ("midpoint start with slope 2^-k: constant from level 0", suite_midpoint_constant),
    "overhang-top": ("overhang midpoint orbits reach the top at removed-segment midpoints", suite_overhang_top),
    "overhang-constant": ("overhang midpoint sequences constant from level 1", suite_overhang_constant),
    "square-exit": ("unit-square exit oracle vs simulation", suite_square_exit),
    "rectangle-exit": ("4x1 rectangle mod-8 exit table vs simulation", suite_rectangle_exit),
    "escape-distance": ("escape distance equals the binary-truncation error", suite_escape_distance),
    "nontrivial-paths": ("nontrivial paths from (1/3, slope 1/3): limits, addresses, Hausdorff steps", suite_nontrivial_paths),
    "periodic-certificate": ("periodic certificate from first-return gaps", suite_periodic_certificate),
    "sqrt2-singular": ("Q(sqrt 2) descents, recurrence, and the singular sequence", suite_sqrt2_singular),
}


# Short identifiers accepted on the command line, in the same order as SUITES.
ALIASES = dict(zip(
    ["prop31", "prop32", "thm33", "lemma35", "lemma36", "thm37",
     "lemma43", "lemma44", "prop46", "thm48", "thm49", "section5"],
    SUITES,
))


def canonical_name(name: str) -> str:
    return ALIASES.get(name, name)


def suite_names() -> list[str]:
    return list(SUITES) + list(ALIASES) + ["all"]


def run_suite(name: str, cfg: SuiteConfig | None = None) -> SuiteResult:
    cfg = cfg or SuiteConfig()
    name = canonical_name(name)
    if name not in SUITES:
        raise KeyError(name)
    desc, fn = SUITES[name]
    t = time.perf_counter()
    checks = fn(cfg)
    return SuiteResult(name, desc, checks, time.perf_counter() - t)
