"""Run the criteria in order and assemble a verdict."""

from __future__ import annotations

from ..config import RunConfig
from ..polycore import PolyMap
from .algebraic import braun_check, cima_check, degree_check
from .properness import properness_check
from .results import CriterionResult, PropernessReport, Verdict
from .validate import validate

SUFFICIENT = ("degree-bound", "braun", "cima", "properness")


def decide(F: PolyMap, config: RunConfig | None = None) -> Verdict:
    """Validate, run degree/braun/cima/properness, optionally probe dynamics and the oracle.

    ``Injective`` needs an exact Jacobian certificate plus an exact ``holds``
    from one of the sufficient (or if-and-only-if) criteria; the first such
    criterion in run order is named in ``decided_by``.  ``NotInjective`` needs
    an oracle collision or, under a certified Jacobian, an exact
    non-properness witness.  Everything else is ``Unknown``.  By default the
    whole chain runs even after a decisive result so the report shows every
    criterion; ``short_circuit`` stops at the first decisive one.
    """
    cfg = config or RunConfig()
    v = validate(F, cfg)
    G = v.map
    chain: list[CriterionResult] = [v.result]
    jac_ok = v.result.exact_holds
    invalid = v.result.status == "fails"
    notes: list[str] = []
    decided_by = None
    properness: PropernessReport | None = None

    steps = []
    if G.n == 2:
        steps += [lambda: degree_check(G), lambda: braun_check(G)]
    else:
        notes.append("degree-bound and braun criteria apply to planar maps only")
    steps.append(lambda: cima_check(G, cfg.max_weight, cfg))

    def run_properness():
        nonlocal properness
        properness = properness_check(G, cfg)
        return properness.to_result()

    steps.append(run_properness)

    for step in steps:
        res = step()
        chain.append(res)
        if jac_ok and decided_by is None and res.name in SUFFICIENT and res.exact_holds:
            decided_by = res.name
            if cfg.short_circuit:
                break

    outcome = "Injective" if decided_by else "Unknown"
    prop = next((r for r in chain if r.name == "properness"), None)
    if outcome == "Unknown" and jac_ok and prop is not None and prop.status == "fails" \
            and prop.exactness == "exact":
        outcome, decided_by = "NotInjective", "properness"

    monodromy = None
    if cfg.run_monodromy and G.n == 2 and not invalid:
        from ..compactify import bendixson_hamiltonian
        from ..dynamics.monodromy import ProbeConfig, monodromy_probe

        pc = ProbeConfig(radii=cfg.probe_radii, angles=cfg.probe_angles, tol=cfg.probe_tol,
                         max_steps=cfg.probe_max_steps)
        rep = monodromy_probe(bendixson_hamiltonian(G), (0.0, 0.0), config=pc)
        monodromy = rep.to_dict()
        if outcome == "Injective" and rep.verdict != "Monodromic":
            notes.append(f"monodromy probe returned {rep.verdict} although a criterion certified injectivity")

    oracle = None
    if cfg.run_oracle and (outcome != "Injective" or not cfg.short_circuit):
        from ..oracle import search

        rep = search(G, cfg.oracle_box, cfg.oracle_resolution, cfg.oracle_bucket or None,
                     cfg.oracle_max_candidates, cfg.oracle_max_residual, cfg.oracle_min_separation,
                     cfg.oracle_max_points)
        oracle = rep.to_dict()
        if rep.witnesses:
            if outcome == "Injective":
                notes.append("oracle found a collision despite an injectivity certificate")
            outcome, decided_by = "NotInjective", "oracle"

    if invalid:
        notes.append("Jacobian hypothesis fails; injectivity criteria do not apply")
    return Verdict(outcome, chain, v.normalization, decided_by, invalid, monodromy, oracle, notes)
