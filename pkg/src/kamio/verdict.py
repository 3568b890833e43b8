"""Three-valued answers for fuel-bounded, semi-decidable checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

__all__ = ["Verdict"]


@dataclass(frozen=True)
class Verdict:
    """Verified / Refuted(witness) / Unknown(reason).

    `sampled` marks a Verified verdict that only covered a sample of an
    infinite quantification (an under-approximation, never a proof).
    """

    status: str  # "verified" | "refuted" | "unknown"
    witness: Any = None
    reason: str | None = None
    sampled: bool = False

    @staticmethod
    def verified(sampled: bool = False) -> "Verdict":
        return Verdict("verified", sampled=sampled)

    @staticmethod
    def refuted(witness: Any) -> "Verdict":
        return Verdict("refuted", witness=witness)

    @staticmethod
    def unknown(reason: str = "fuel", witness: Any = None) -> "Verdict":
        return Verdict("unknown", witness=witness, reason=reason)

    @property
    def is_verified(self) -> bool:
        return self.status == "verified"

    @property
    def is_refuted(self) -> bool:
        return self.status == "refuted"

    @property
    def is_unknown(self) -> bool:
        return self.status == "unknown"
