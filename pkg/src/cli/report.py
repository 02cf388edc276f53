"""
Run reports shared by lc, verify and sweep
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from src.number_theory.fermat import is_wieferich
from src.sequences.generators import SequenceKind
from src.utils.errors import VerificationMismatch

NOT_APPLICABLE = "n/a"


def expected_linear_complexity(p: int, kind: SequenceKind) -> Optional[int]:
    """p^2 - p for p = 1 mod 4, else p^2 - 1; None outside threshold/legendre-fermat or for Wieferich p"""
    if kind not in (SequenceKind.THRESHOLD, SequenceKind.LEGENDRE_FERMAT) or is_wieferich(p):
        return None
    return p * p - p if p % 4 == 1 else p * p - 1


@dataclass
class RunReport:
    p: int
    g: int
    delta: int
    kind: str
    lam: int
    wieferich: bool
    L_bm: Optional[int] = None
    L_gcd: Optional[int] = None
    L_blahut: Optional[int] = None
    theorem_expected: Optional[int] = None
    trace_verified: Optional[bool] = None
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def measured(self) -> List[int]:
        return [L for L in (self.L_bm, self.L_gcd, self.L_blahut) if L is not None]

    @property
    def L(self) -> Optional[int]:
        values = self.measured
        return values[0] if values else None

    @property
    def agreement(self) -> bool:
        """All computed L values are equal"""
        return len(set(self.measured)) <= 1

    @property
    def matches(self) -> bool:
        """Methods agree, the theorem value (when known) holds, and the trace check (when run) passed"""
        if not self.agreement:
            return False
        if self.theorem_expected is not None and self.L != self.theorem_expected:
            return False
        return self.trace_verified is not False

    def require_match(self) -> None:
        """Raise VerificationMismatch naming the first failed comparison"""
        if not self.agreement:
            raise VerificationMismatch(
                f"p={self.p} {self.kind}: methods disagree (bm={self.L_bm}, gcd={self.L_gcd}, blahut={self.L_blahut})")
        if self.theorem_expected is not None and self.L != self.theorem_expected:
            raise VerificationMismatch(f"p={self.p} {self.kind}: L={self.L}, expected {self.theorem_expected}")
        if self.trace_verified is False:
            raise VerificationMismatch(f"p={self.p} {self.kind}: trace representation does not reproduce the sequence")

    def to_key_values(self) -> str:
        def show(value) -> str:
            if value is None:
                return NOT_APPLICABLE
            if isinstance(value, bool):
                return "true" if value else "false"
            return str(value)

        rows = [
            ("p", self.p), ("g", self.g), ("delta", self.delta), ("kind", self.kind),
            ("lambda", self.lam), ("wieferich", self.wieferich),
            ("L_bm", self.L_bm), ("L_gcd", self.L_gcd), ("L_blahut", self.L_blahut),
            ("theorem_expected", self.theorem_expected), ("trace_verified", self.trace_verified),
            ("agreement", self.agreement), ("match", self.matches),
        ]
        rows += [(f"seconds_{stage}", f"{secs:.3f}") for stage, secs in self.timings.items()]
        return "\n".join(f"{key}={show(value)}" for key, value in rows) + "\n"
