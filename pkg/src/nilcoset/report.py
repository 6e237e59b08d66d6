"""Verification reports: schema, JSON round-trip, and a plain-text table."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any

import numpy as np

SCHEMA_VERSION = "1"
STATUSES = ("pass", "fail", "sampled-pass", "info")


def _plain(x: Any) -> Any:
    """Recursively convert numpy scalars/arrays and tuples to JSON-native values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


@dataclass
class Check:
    name: str
    status: str
    witness: Any = None
    detail: Any = None
    acceptance: bool = True

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")


@dataclass
class VerificationReport:
    """One preset run.

    ``homology`` rows are ``{"degree", "betti", "reduced_betti", "torsion"}``
    for the main complex; ``coefficients`` holds H_i(-; Z/e) as lists of
    cyclic orders when a modulus was requested.  ``sections`` carries the
    same data for auxiliary complexes (join pieces, cross-check groups).
    """

    preset: str
    claim: str
    version: str = SCHEMA_VERSION
    group: dict = field(default_factory=dict)
    family: dict = field(default_factory=dict)
    poset: dict = field(default_factory=dict)
    chi: dict = field(default_factory=dict)
    homology: list = field(default_factory=list)
    coefficients: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    sections: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def add_check(self, name: str, ok, witness=None, detail=None, acceptance: bool = True) -> Check:
        if isinstance(ok, str):
            status = ok
        else:
            status = "pass" if ok else "fail"
        c = Check(name, status, _plain(witness), _plain(detail), acceptance)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        """No failures, and every acceptance check passed exhaustively."""
        for c in self.checks:
            if c.status == "fail":
                return False
            if c.acceptance and c.status != "pass" and c.status != "info":
                return False
        return True

    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return _plain(asdict(self))

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        known = {f.name for f in fields(cls)}
        kw = {k: v for k, v in d.items() if k in known}
        kw["checks"] = [Check(**c) for c in d.get("checks", [])]
        return cls(**kw)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def normalized(self) -> "VerificationReport":
        return VerificationReport.from_json(self.to_json())


def homology_rows(res) -> list[dict]:
    red = res.reduced_betti()
    return [
        {"degree": i, "betti": int(b), "reduced_betti": int(red[i]), "torsion": [int(t) for t in res.torsion[i]]}
        for i, b in enumerate(res.betti)
    ]


def render_witness(G, ids) -> list[dict]:
    """Element ids with labels, and matrices for U4 groups."""
    from .catalog import u4_matrix

    out = []
    for i in ids:
        i = int(i)
        row = {"id": i, "label": str(G.labels[i]) if G.labels is not None else str(i)}
        if getattr(G, "p", None) is not None and G.name.startswith("U4"):
            row["matrix"] = u4_matrix(G.labels[i], G.p).tolist()
        out.append(row)
    return out


def _fmt(v) -> str:
    if isinstance(v, list):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    return str(v)


def emit_table(r: VerificationReport) -> str:
    lines = [f"preset   {r.preset}", f"claim    {r.claim}", f"schema   v{r.version}"]
    for k, v in r.group.items():
        lines.append(f"group.{k:<14} {_fmt(v)}")
    for k, v in r.family.items():
        lines.append(f"family.{k:<13} {_fmt(v)}")
    for k, v in r.poset.items():
        lines.append(f"poset.{k:<14} {_fmt(v)}")
    for k, v in r.chi.items():
        lines.append(f"chi.{k:<16} {v}")
    if r.homology:
        lines.append("")
        lines.append(f"{'deg':>3}  {'betti':>7}  {'reduced':>7}  torsion")
        for row in r.homology:
            lines.append(f"{row['degree']:>3}  {row['betti']:>7}  {row['reduced_betti']:>7}  {_fmt(row['torsion']) if row['torsion'] else '-'}")
    if r.coefficients:
        e = r.coefficients.get("modulus")
        for i, cyc in enumerate(r.coefficients.get("groups", [])):
            lines.append(f"H_{i}(-;Z/{e})  rank {len(cyc)}")
    for name, sec in r.sections.items():
        lines.append("")
        lines.append(f"[{name}]")
        for k, v in sec.items():
            lines.append(f"  {k:<22} {_fmt(v) if not isinstance(v, dict) else json.dumps(v)}")
    lines.append("")
    width = max([len(c.name) for c in r.checks] + [5])
    lines.append(f"{'check':<{width}}  status")
    for c in r.checks:
        tail = ""
        if c.witness is not None:
            tail = f"  witness={json.dumps(c.witness)}"
        elif c.detail is not None:
            tail = f"  {json.dumps(c.detail)}"
        lines.append(f"{c.name:<{width}}  {c.status}{tail}")
    if r.notes:
        lines.append("")
        lines += [f"note: {n}" for n in r.notes]
    if r.timings:
        lines.append("")
        lines.append("timings: " + ", ".join(f"{k}={v:.2f}s" for k, v in r.timings.items()))
    lines.append(f"result: {'PASS' if r.ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def emit_report(report: VerificationReport, fmt: str = "json") -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    if fmt == "table":
        return emit_table(report)
    raise ValueError(f"unknown format {fmt!r}")
