"""Machine-checkable verdicts shared by the substitution, invariant and growth checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, INAPPLICABLE = "pass", "fail", "inapplicable"


@dataclass
class Measurement:
    n: int
    quantity: str
    predicted: Any
    measured: Any
    ok: bool

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "quantity": self.quantity, "predicted": self.predicted,
                "measured": self.measured, "ok": self.ok}


@dataclass
class TheoremReport:
    """Outcome of one theorem check on one model over a range of depths.

    ``status`` is ``"pass"`` iff every measurement is ok, ``"inapplicable"`` when
    the theorem's hypothesis does not hold for the model (nothing is judged then).
    ``artifacts`` holds in-memory by-products (e.g. an isomorphism) and is not
    serialized.
    """

    theorem: str
    model: str
    depths: list[int]
    status: str = PASS
    measurements: list[Measurement] = field(default_factory=list)
    witnesses: list[Any] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    facts: dict[str, Any] = field(default_factory=dict)
    artifacts: dict[str, Any] = field(default_factory=dict, repr=False)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def applicable(self) -> bool:
        return self.status != INAPPLICABLE

    def measure(self, n: int, quantity: str, predicted: Any, measured: Any, ok: bool | None = None) -> bool:
        if ok is None:
            ok = predicted == measured
        self.measurements.append(Measurement(n, quantity, predicted, measured, bool(ok)))
        return bool(ok)

    def finish(self) -> "TheoremReport":
        """Settle ``status`` from the measurements unless the check was inapplicable."""
        if self.status != INAPPLICABLE:
            self.status = PASS if all(m.ok for m in self.measurements) else FAIL
        self.measurements.sort(key=lambda m: (m.n, m.quantity))
        return self

    def inapplicable(self, reason: str) -> "TheoremReport":
        self.status = INAPPLICABLE
        self.notes.append(reason)
        return self

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem,
            "model": self.model,
            "depths": list(self.depths),
            "status": self.status,
            "pass": self.passed,
            "measurements": [m.to_dict() for m in self.measurements],
            "witnesses": self.witnesses,
            "notes": self.notes,
            "facts": self.facts,
        }
