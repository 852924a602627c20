"""End-to-end run: germ -> discriminant -> expansions -> carrousel -> decomposition graph."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .algebra import numberfield as nf
from .algebra.multipoly import MultiPoly
from .assembly import (
    SampleScales,
    TrackingFailure,
    TrunkStub,
    assemble_graph,
    compare_with_trunk,
    fill_solid_tori,
    riemann_hurwitz_from_ramification,
    riemann_hurwitz_total,
    sample_fibre,
    vertical_monodromy,
    zone_pieces,
)
from .carrousel import approximation_tori, build_zone_ladder, classify_zone_membership
from .errors import HypothesisViolation, InternalError
from .geometry import (
    SurfaceGerm,
    apply_shear,
    check_sheets,
    discriminant_surface,
    genericity_check,
    singular_locus,
    theta_reduce,
    transversal_invariants,
)
from .puiseux import EXACT_ROOT, TruncationTooShort, nested_expand, resubstitution_valuation

SCHEMA_VERSION = 1
MAX_RETRIES = 3
SAMPLE_ATTEMPTS = (SampleScales(), SampleScales(alpha=1 / 16, eta=1e-24), SampleScales(alpha=1 / 32, eta=1e-32, phase=0.7))


@dataclass
class RunConfig:
    polynomial: MultiPoly
    text: str = ""
    truncation: Fraction = Fraction(5)
    shear: tuple | None = None
    trunk: TrunkStub | None = None
    probe: bool = False
    probe_alpha: float = 0.5
    probe_eta: float = 1e-3
    denominator_bound: int = 12
    seed: int = 0

    def __post_init__(self):
        self.truncation = Fraction(self.truncation)
        if self.truncation <= 0:
            raise ValueError("the truncation order must be positive")
        if not 0 < self.probe_eta < self.probe_alpha < 1:
            raise ValueError("probe scales must satisfy 0 < eta < alpha < 1")


def _q(v) -> str:
    return str(Fraction(v))


def _num(c) -> list[float]:
    z = complex(c)
    return [round(z.real, 12), round(z.imag, 12)]


@dataclass
class BranchRun:
    """Everything computed for one branch of the singular locus."""

    sigma: Any
    germ: SurfaceGerm
    N: int
    invariants: Any
    disc: Any
    expansions: list
    valuations: list
    order: Fraction
    ladder: Any
    memberships: list
    tori: list
    monodromy: Any
    fillings: list
    pieces: list
    graph: Any
    verdict: Any
    rh_total: int
    rh_exact: int
    timings: dict = field(default_factory=dict)


def _expand(D, disc, order):
    return nested_expand(D, order, multiplicities=disc.multiplicity_map())


def _run_branch(f: MultiPoly, sigma, cfg: RunConfig) -> BranchRun:
    t0 = time.perf_counter()
    germ = theta_reduce(SurfaceGerm(f), sigma, cfg.truncation)
    N = check_sheets(germ)
    inv = transversal_invariants(germ)
    if inv.mu != inv.mu_teissier:
        raise InternalError(f"Milnor number {inv.mu} disagrees with Teissier's count {inv.mu_teissier}")
    disc = discriminant_surface(germ)
    order = cfg.truncation
    for attempt in range(MAX_RETRIES + 1):
        try:
            branches = _expand(disc.D, disc, order)
            break
        except TruncationTooShort:
            if attempt == MAX_RETRIES:
                raise
            order *= 2
    if not branches:
        raise HypothesisViolation("the discriminant has no branch through the circle y = t = 0")
    valuations = []
    for br in branches:
        v = resubstitution_valuation(disc.D, br, order)
        if v is not EXACT_ROOT and v < order:
            raise InternalError(f"branch {br} resubstitutes to valuation {v} < {order}")
        valuations.append(v)
    ladder = build_zone_ladder(branches)
    memberships = [classify_zone_membership(br, ladder) for br in branches]
    tori = approximation_tori(branches, ladder)
    t1 = time.perf_counter()
    last: Exception | None = None
    for scales in SAMPLE_ATTEMPTS:
        try:
            sample = sample_fibre(germ.f, disc.D, branches, ladder, N, scales)
            break
        except TrackingFailure as exc:
            last = exc
    else:
        raise InternalError(f"numeric sampling failed at every scale: {last}")
    mono = vertical_monodromy(germ, branches, sample=sample, fiber=inv, N=N, order=order)
    fillings = fill_solid_tori(tori, mono, N)
    pieces = zone_pieces(ladder, tori, mono, N, fillings)
    rh_total = riemann_hurwitz_total(pieces)
    rh_exact = riemann_hurwitz_from_ramification(mono)
    if rh_total != 1 - inv.mu or rh_exact != 1 - inv.mu:
        raise InternalError(f"Euler characteristic {rh_total} / {rh_exact} differs from 1 - mu = {1 - inv.mu}")
    graph = assemble_graph(pieces, mono, cfg.trunk)
    verdict = compare_with_trunk(graph, cfg.trunk, irreducible=mono.irreducible) if cfg.trunk else None
    t2 = time.perf_counter()
    return BranchRun(
        sigma, germ, N, inv, disc, branches, valuations, order, ladder, memberships, tori, mono,
        fillings, pieces, graph, verdict, rh_total, rh_exact, {"exact": t1 - t0, "sample": t2 - t1},
    )


@dataclass
class PipelineResult:
    config: RunConfig
    polynomial: MultiPoly  # after any shear
    shear: tuple | None
    genericity: Any
    runs: list[BranchRun]
    probe: dict | None = None

    def to_dict(self) -> dict:
        return report_dict(self)


def run_pipeline(cfg: RunConfig) -> PipelineResult:
    nf.reset_tower()
    f = cfg.polynomial
    shear = cfg.shear
    if shear is not None:
        f = apply_shear(f, *shear)
    report = genericity_check(f)
    if not report.passed:
        if shear is None and report.suggested_shear is not None:
            shear = report.suggested_shear
            f = apply_shear(f, *shear)
            report = genericity_check(f)
        if not report.passed:
            raise HypothesisViolation("genericity checks fail: " + "; ".join(report.notes or ["no passing shear"]))
    sigmas = singular_locus(SurfaceGerm(f), cfg.truncation)
    if not sigmas:
        raise HypothesisViolation("the singular locus has no branch through the origin outside x = 0")
    runs = [_run_branch(f, s, cfg) for s in sigmas]
    result = PipelineResult(cfg, f, shear, report, runs)
    if cfg.probe:
        from .probe import numeric_probe

        result.probe = {str(i): numeric_probe(cfg, r.disc.D, r.expansions) for i, r in enumerate(runs)}
    return result


# -- reports ------------------------------------------------------------------


def _branch_dict(br, v, member) -> dict:
    return {
        "pair": [_q(br.q_over_p), _q(br.e_over_dprime)],
        "b": br.b.to_text() if hasattr(br.b, "to_text") else _q(br.b),
        "b_numeric": _num(br.b),
        "series": str(br.as_series()),
        "d": br.d,
        "n": br.n,
        "p": br.p,
        "p_prime": br.p_prime,
        "n_prime": br.n_prime,
        "ramification": br.multiplicity,
        "zone": list(member[0]),
        "membership": str(member[1]),
        "resubstitution": "exact root" if v is EXACT_ROOT else _q(v),
    }


def _piece_dict(p) -> dict:
    return {
        "id": p.component_id,
        "zone": list(p.zone_index),
        "base_genus": p.base_genus,
        "boundary_count": p.boundary_count,
        "fibre_euler": p.fibre_euler,
        "orbifold_euler": _q(p.orbifold_euler),
        "generic_degree": p.generic_degree,
        "slope": list(p.fibration_slope),
        "exceptional_fibers": [
            {"kind": e.kind, "multiplicity": e.multiplicity, "points": e.points, "torus": e.torus}
            for e in p.exceptional_fibers
        ],
    }


def _run_dict(r: BranchRun) -> dict:
    g = r.graph
    mono = r.monodromy
    return {
        "sigma": str(r.sigma),
        "reduced_germ": str(r.germ.f),
        "covering_degree": r.N,
        "truncation": _q(r.order),
        "transversal": {
            "mu": r.invariants.mu,
            "mu_teissier": r.invariants.mu_teissier,
            "branch_count": r.invariants.branch_count,
            "euler": r.invariants.euler,
            "annulus": r.invariants.annulus_flag,
        },
        "discriminant": {
            "D": str(r.disc.D),
            "factors": [[str(c), m] for c, m in r.disc.factors],
            "split_off": [[str(c), m] for c, m in r.disc.split_off],
        },
        "branches": [_branch_dict(b, v, m) for b, v, m in zip(r.expansions, r.valuations, r.memberships)],
        "ladder": {
            "quotients": [_q(q) for q in r.ladder.quotients],
            "seconds": [[_q(e) for e in row] for row in r.ladder.seconds],
            "s": [_q(v) for v in r.ladder.s],
            "nu": [[_q(v) for v in row] for row in r.ladder.nu],
            "zones": [z.describe() for z in r.ladder.zones],
        },
        "tori": [
            {
                "pair": [_q(t.pair.q_over_p), _q(t.pair.e_over_dprime)],
                "b_numeric": _num(t.leading_b),
                "members": len(t.members),
                "suns": t.l,
                "rho": _q(t.rho),
                "zone": list(t.zone_index),
                "certificates": list(t.certificates),
            }
            for t in r.tori
        ],
        "monodromy": {
            "sun_cycle_type": list(mono.sun_permutation.cycle_type),
            "sheet_permutation": list(mono.sheet_permutation),
            "transversal_orbits": [list(o) for o in mono.transversal_branch_orbits],
            "x_denominator_lcm": mono.x_denominator_lcm(),
        },
        "fillings": [
            {"torus": fl.torus, "discs_per_sun": fl.disc_count_per_fiber, "solid_tori": fl.solid_torus_count}
            for fl in r.fillings
        ],
        "graph": {
            "pieces": [_piece_dict(p) for p in g.pieces],
            "edges": [[e.source, e.target, e.kind] for e in g.edges],
            "boundary_tori": g.boundary_tori,
            "g": g.invariants_g,
            "s": list(g.invariants_s),
            "cycle_rank": g.cycle_rank,
            "q_manifold": g.q_manifold_flag,
            "connected": g.connectivity_flag,
            "trunk_attached": g.trunk is not None,
        },
        "euler_check": {"zones_and_discs": r.rh_total, "ramification": r.rh_exact, "one_minus_mu": 1 - r.invariants.mu},
        "verdict": None
        if r.verdict is None
        else {"verdict": r.verdict.verdict, "fired": r.verdict.fired, "s_increment": r.verdict.s_increment, "details": r.verdict.details},
        "notes": [
            "exceptional multiplicities are n_P / k from covering data; not confirmed against a closed formula"
        ],
    }


def report_dict(res: PipelineResult) -> dict:
    gen = res.genericity
    return {
        "schema_version": SCHEMA_VERSION,
        "input": res.config.text or str(res.config.polynomial),
        "polynomial": str(res.polynomial),
        "shear": list(res.shear) if res.shear else None,
        "genericity": {
            "weierstrass": gen.weierstrass_ok,
            "claim": gen.claim_ok,
            "transversality": gen.transversality_ok,
            "polar_curve": list(gen.polar_curve_components),
            "notes": list(gen.notes),
        },
        "sigma_branches": [_run_dict(r) for r in res.runs],
        "probe": res.probe,
    }


def emit_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def parse_json(text: str) -> dict:
    data = json.loads(text)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema {data.get('schema_version')!r}")
    return data


def emit_dot(report: dict) -> str:
    lines = ["graph vanishing_zone {", "  node [shape=ellipse];"]
    for k, run in enumerate(report["sigma_branches"]):
        g = run["graph"]
        for p in g["pieces"]:
            ms = [e["multiplicity"] for e in p["exceptional_fibers"] if e["multiplicity"] > 1]
            label = f"Z{tuple(p['zone'])}\\nslope {tuple(p['slope'])}\\nchi {p['fibre_euler']}\\nbdry {p['boundary_count']}"
            if ms:
                label += f"\\nexc {ms}"
            lines.append(f'  s{k}p{p["id"]} [label="{label}"];')
            for i, e in enumerate(p["exceptional_fibers"]):
                if e["kind"] == "core":
                    node = f"s{k}p{p['id']}c{i}"
                    lines.append(f'  {node} [shape=square,label="m={e["multiplicity"]}"];')
                    lines.append(f"  s{k}p{p['id']} -- {node} [style=dashed];")
        for src, dst, kind in g["edges"]:
            if kind == "boundary":
                stub = f"s{k}{dst.replace(':', '_')}"
                lines.append(f'  {stub} [shape=point];')
                lines.append(f"  s{k}p{src} -- {stub} [dir=forward,arrowhead=normal];")
            else:
                lines.append(f"  s{k}p{src} -- s{k}p{dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"
