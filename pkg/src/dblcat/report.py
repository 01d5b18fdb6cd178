"""Validation reports: violations are data, each with a law id and witness ids."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple
    detail: str = ""

    def to_dict(self):
        return {"law": self.law, "witness": [_plain(w) for w in self.witness], "detail": self.detail}


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations

    def add(self, law, *witness, detail=""):
        self.violations.append(Violation(law, tuple(witness), detail))

    def note(self, text):
        self.notes.append(text)

    def extend(self, other, prefix=""):
        for v in other.violations:
            self.violations.append(Violation(prefix + v.law, v.witness, v.detail))
        self.notes.extend(other.notes)
        for k, v in other.info.items():
            self.info[prefix + k] = v

    def laws(self):
        return sorted({v.law for v in self.violations})

    def first(self, law):
        for v in self.violations:
            if v.law == law:
                return v
        return None

    def to_dict(self, witnesses="all"):
        vs = self.violations
        if witnesses == "first":
            seen, keep = set(), []
            for v in vs:
                if v.law not in seen:
                    seen.add(v.law)
                    keep.append(v)
            vs = keep
        out = {"ok": self.ok, "violation_count": len(self.violations)}
        if witnesses != "none":
            out["violations"] = [v.to_dict() for v in vs]
        if self.notes:
            out["notes"] = list(self.notes)
        if self.info:
            out["info"] = {k: _plain(v) for k, v in sorted(self.info.items())}
        return out

    def __repr__(self):
        if self.ok:
            return "ValidationReport(ok)"
        return f"ValidationReport({len(self.violations)} violations: {', '.join(self.laws())})"


def _plain(x):
    """Render ids (ints, tuples, small dataclasses) as JSON-friendly values."""
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    if hasattr(x, "to_plain"):
        return x.to_plain()
    if isinstance(x, (tuple, list)):
        return [_plain(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return repr(x)


@dataclass
class Decision:
    """A yes/no answer with an optional witness and extra data."""

    value: bool
    witness: object = None
    info: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.value)

    def to_dict(self):
        out = {"value": bool(self.value)}
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        if self.info:
            out["info"] = {k: _plain(v) for k, v in sorted(self.info.items())}
        return out
