"""Structured outcomes of theorem and lemma checks."""

from __future__ import annotations

from dataclasses import dataclass, field
import json

__all__ = ["VerificationReport"]

STATUS_VERIFIED = "verified"
STATUS_REFUTED = "refuted"
STATUS_HYPOTHESIS_FAILED = "hypothesis-failed"


@dataclass
class VerificationReport:
    """Outcome of one check: which hypotheses were verified, what was tested,
    and a counterexample when something failed."""

    theorem: str
    hypotheses: list = field(default_factory=list)
    degrees_checked: list = field(default_factory=list)
    status: str = STATUS_VERIFIED
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    def add_hypothesis(self, name: str, ok: bool, detail: str = ""):
        self.hypotheses.append({"name": name, "ok": bool(ok), "detail": detail})
        if not ok and self.status == STATUS_VERIFIED:
            self.status = STATUS_HYPOTHESIS_FAILED

    def refute(self, counterexample: dict):
        self.status = STATUS_REFUTED
        if self.counterexample is None:
            self.counterexample = counterexample

    @property
    def verified(self) -> bool:
        return self.status == STATUS_VERIFIED

    def to_json(self) -> dict:
        out = {
            "theorem": self.theorem,
            "hypotheses": self.hypotheses,
            "degrees_checked": self.degrees_checked,
            "status": self.status,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.details:
            out["details"] = self.details
        return out

    def __str__(self):
        return json.dumps(self.to_json(), indent=2, default=str)
