"""Pass/fail records shared by the verification routines."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .series import HalfQSeries


@dataclass
class Verdict:
    identity: str
    passed: bool
    k: int | None = None
    order: int | None = None
    first_discrepancy: int | None = None  # half-step index u
    seed: int | None = None
    detail: str = ""
    window: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        d = asdict(self)
        d["verdict"] = "pass" if self.passed else "fail"
        d["window"] = list(self.window) if self.window else None
        return d

    def line(self) -> str:
        bits = [f"[{'PASS' if self.passed else 'FAIL'}] {self.identity}"]
        if self.k is not None:
            bits.append(f"k={self.k}")
        if self.order is not None:
            bits.append(f"order={self.order}")
        if self.seed is not None:
            bits.append(f"seed={self.seed}")
        if self.first_discrepancy is not None:
            bits.append(f"first discrepancy at u={self.first_discrepancy}")
        if self.detail:
            bits.append(self.detail)
        return "  ".join(bits)


def compare(identity: str, lhs: HalfQSeries, rhs: HalfQSeries, **kw) -> Verdict:
    """Exact comparison of two series on their common window."""
    u = lhs.first_discrepancy(rhs)
    window = (min(lhs.base, rhs.base), min(lhs.order, rhs.order))
    return Verdict(identity, u is None, first_discrepancy=u, window=window, **kw)


def all_pass(identity: str, verdicts, **kw) -> Verdict:
    """Collapse a list of verdicts into one, reporting the first failure."""
    for v in verdicts:
        if not v.passed:
            return Verdict(identity, False, first_discrepancy=v.first_discrepancy,
                           detail=f"{v.identity}: {v.detail}".rstrip(": "), **kw)
    return Verdict(identity, True, **kw)
