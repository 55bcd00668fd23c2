"""Result records shared by the criteria and the verdict assembly."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

CRITERIA = ("jacobian", "degree-bound", "braun", "cima", "properness")
STATUSES = ("holds", "fails", "inconclusive")
EXACTNESS = ("exact", "numeric")
OUTCOMES = ("Injective", "NotInjective", "Unknown")


@dataclass(frozen=True)
class CriterionResult:
    name: str
    status: str
    exactness: str
    certificate: dict[str, Any] = field(default_factory=dict)
    one_sided: bool = False
    evidence: str = "computed"  # or "literature"

    def __post_init__(self):
        if self.name not in CRITERIA:
            raise ValueError(f"unknown criterion {self.name!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.exactness not in EXACTNESS:
            raise ValueError(f"unknown exactness {self.exactness!r}")

    @property
    def exact_holds(self) -> bool:
        return self.status == "holds" and self.exactness == "exact"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "exactness": self.exactness,
            "one_sided": self.one_sided,
            "evidence": self.evidence,
            "certificate": self.certificate,
        }


@dataclass
class PropernessReport:
    """Two-tier properness evidence for ``I = sum f_i^2``."""

    tier1: dict[str, Any]
    radii: list[float]
    minima: list[float]
    argmins: list[list[float]]
    tier2_verdict: str | None  # holds / fails / inconclusive / None (not run)
    witness_curve: dict[str, Any] | None
    status: str
    exactness: str
    thresholds: dict[str, float]

    def growth_verdict(self) -> str:
        """Re-derive the tier-2 verdict from the recorded minima."""
        return tier2_rule(self.minima, **self.thresholds)

    def to_result(self) -> CriterionResult:
        cert = {
            "tier1": self.tier1,
            "tier2": None if self.tier2_verdict is None else {
                "verdict": self.tier2_verdict,
                "radii": self.radii,
                "minima": self.minima,
                "argmins": self.argmins,
                "thresholds": self.thresholds,
            },
            "witness_curve": self.witness_curve,
        }
        return CriterionResult("properness", self.status, self.exactness, cert)


def tier2_rule(minima: list[float], threshold: float = 1e6, ratio: float = 1.2,
               plateau: float = 1e-6, window: int = 5) -> str:
    """Growth test on per-radius minima.

    ``holds`` when the last minimum exceeds ``threshold`` and each of the last
    ``window`` consecutive ratios is at least ``ratio``; ``fails`` when the
    last ``window`` minima stay within relative spread ``plateau`` or never
    increase while staying below ``threshold``; otherwise ``inconclusive``.
    """
    if len(minima) < window + 1:
        return "inconclusive"
    tail = minima[-(window + 1):]
    ratios = [b / a if a > 0 else float("inf") for a, b in zip(tail, tail[1:])]
    if tail[-1] > threshold and all(r >= ratio for r in ratios):
        return "holds"
    last = tail[1:]
    top = max(abs(v) for v in last)
    if top == 0 or (max(last) - min(last)) / top < plateau:
        return "fails"
    if all(b <= a for a, b in zip(tail, tail[1:])) and tail[-1] <= threshold:
        return "fails"
    return "inconclusive"


@dataclass
class Verdict:
    outcome: str
    chain: list[CriterionResult]
    normalization: dict[str, Any]
    decided_by: str | None = None
    invalid_hypothesis: bool = False
    monodromy: dict[str, Any] | None = None
    oracle: dict[str, Any] | None = None
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")
        if self.outcome == "Injective":
            jac = self.result("jacobian")
            dec = self.result(self.decided_by) if self.decided_by else None
            if jac is None or not jac.exact_holds or dec is None or not dec.exact_holds \
                    or self.decided_by == "jacobian":
                raise ValueError("Injective needs an exact Jacobian certificate and an exact deciding criterion")
        if self.outcome == "NotInjective" and self.decided_by not in ("oracle", "properness"):
            raise ValueError("NotInjective needs a collision witness or an exact non-properness certificate")

    def result(self, name: str) -> CriterionResult | None:
        return next((r for r in self.chain if r.name == name), None)

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "decided_by": self.decided_by,
            "invalid_hypothesis": self.invalid_hypothesis,
            "notes": self.notes,
        }
