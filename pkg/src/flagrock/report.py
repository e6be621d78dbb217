"""Report values, JSON (de)serialization and text rendering.

Text and JSON are both rendered from the same ``ReportSchema`` value.
"""

from __future__ import annotations

import json
import os
import platform
import tempfile
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources

import jsonschema
import numpy as np
import scipy

from . import __version__
from .field import is_exact
from .spectral import FLOAT_TOL, Verdict

SCHEMA_VERSION = 1


def _num(x) -> float:
    return round(float(complex(x).real), 12)


def scalar(x) -> dict:
    return {"exact": str(x) if is_exact(x) else None, "value": _num(x)}


def versions() -> dict[str, str]:
    return {"flagrock": __version__, "python": platform.python_version(),
            "numpy": np.__version__, "scipy": scipy.__version__}


@dataclass
class ReportSchema:
    parameters: dict
    dimensions: dict
    hormander: bool
    gamma: list
    form: dict
    hypothesis_H: bool | None
    case: str
    r_values: list
    m_spectra: list
    witnesses: list
    kernel_degrees: list
    degree0_bottom: float | None
    crosscheck: list
    verdict: dict
    note: str
    versions: dict
    timing: dict | None = None
    schema: int = SCHEMA_VERSION
    kind: str = "analysis"

    @classmethod
    def from_verdict(cls, v: Verdict, seconds: float | None = None) -> "ReportSchema":
        p, q, p1 = v.parameters
        return cls(
            parameters={"p": p, "q": q, "p1": p1},
            dimensions={"s": v.s, "t": v.t, "dimE": v.dim_e, "dimF": v.dim_f},
            hormander=v.hormander,
            gamma=[[g.i, g.j] for g in v.gamma],
            form={"weights": [scalar(w) for w in v.weights]},
            hypothesis_H=v.hypothesis_H,
            case=v.case,
            r_values=[{"root": [x.i, x.j], "r": scalar(r)}
                      for x, r in sorted(v.r_values.items())],
            m_spectra=[{"degree": k, "eigenvalues": [round(e, 10) + 0.0 for e in spec]}
                       for k, spec in sorted(v.m_spectra.items())],
            witnesses=[{
                "degree": w.degree,
                "eigenvalue": scalar(w.eigenvalue),
                "residual": w.residual,
                "provenance": "exact" if w.exact else "float",
                "tolerance": None if w.exact else FLOAT_TOL,
                "route": w.route,
                "support": w.labels,
            } for w in sorted(v.witnesses, key=lambda w: w.degree)],
            kernel_degrees=list(v.kernel_degrees),
            degree0_bottom=None if v.degree0_bottom is None else _num(v.degree0_bottom),
            crosscheck=[{
                "degree": c.degree,
                "max_total_degree": c.max_total,
                "basis_size": c.size,
                "agrees": c.agrees(),
                "has_zero": c.has_zero,
                "bottom": [_num(x) for x in c.dense[:10]],
            } for c in v.crosscheck],
            verdict={"rockland_fails": v.rockland_fails,
                     "maximal_hypoelliptic": v.maximal_hypoelliptic},
            note=v.note,
            versions=versions(),
            timing=None if seconds is None else {"seconds": round(seconds, 3)},
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["timing"] is None:
            del d["timing"]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ReportSchema":
        validate(d)
        return cls(**{k: d.get(k) for k in cls.__dataclass_fields__})

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def render_text(self) -> str:
        return render_text(self.to_dict())


@dataclass
class ScanReport:
    max_n: int
    rows: list = field(default_factory=list)
    versions: dict = field(default_factory=versions)
    timing: dict | None = None
    schema: int = SCHEMA_VERSION
    kind: str = "scan"

    @staticmethod
    def row(v: Verdict) -> dict:
        p, q, p1 = v.parameters
        return {"p": p, "q": q, "p1": p1, "s": v.s, "t": v.t,
                "hormander": v.hormander, "hypothesis_H": v.hypothesis_H,
                "case": v.case, "witness_degrees": v.witness_degrees,
                "kernel_degrees": list(v.kernel_degrees),
                "rockland_fails": v.rockland_fails}

    @property
    def summary(self) -> dict:
        rows = self.rows
        return {"instances": len(rows),
                "degenerate": sum(r["case"] == "degenerate" for r in rows),
                "hypothesis_H": sum(bool(r["hypothesis_H"]) for r in rows),
                "rockland_fails": sum(bool(r["rockland_fails"]) for r in rows),
                "hormander": sum(r["hormander"] for r in rows)}

    def to_dict(self) -> dict:
        d = {"schema": self.schema, "kind": self.kind, "max_n": self.max_n,
             "rows": self.rows, "summary": self.summary, "versions": self.versions}
        if self.timing is not None:
            d["timing"] = self.timing
        return d

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def render_text(self) -> str:
        return render_scan_text(self.to_dict())


@lru_cache(maxsize=1)
def load_schema() -> dict:
    return json.loads(resources.files("flagrock").joinpath("report.schema.json").read_text())


def validate(d: dict) -> None:
    jsonschema.validate(d, load_schema())


def dumps(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".flagrock-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _root(r) -> str:
    return f"({r[0]},{r[1]})"


def _sc(s: dict) -> str:
    return s["exact"] if s["exact"] is not None else f"{s['value']:.12g}"


def render_text(d: dict) -> str:
    pr, dm, vd = d["parameters"], d["dimensions"], d["verdict"]
    lines = [
        f"G = U({pr['p']},{pr['q']}), L = U({pr['p1']}) x U({pr['p'] - pr['p1']},{pr['q']})",
        f"  s = {dm['s']}, t = {dm['t']}, dim E = {dm['dimE']}, dim F = {dm['dimF']}",
        f"  Hormander (order 2): {'yes' if d['hormander'] else 'no'}",
        f"  case: {d['case']}",
    ]
    if d["gamma"]:
        lines.append("  strongly orthogonal roots: " + ", ".join(_root(g) for g in d["gamma"]))
        lines.append("  weights: " + ", ".join(_sc(w) for w in d["form"]["weights"]))
    if d["hypothesis_H"] is not None:
        lines.append(f"  hypothesis (H): {'holds' if d['hypothesis_H'] else 'fails'}")
    if d["r_values"]:
        lines.append("  oscillator frequencies: " + ", ".join(
            f"r{_root(x['root'])} = {_sc(x['r'])}" for x in d["r_values"]))
    for w in d["witnesses"]:
        res = "0 (exact)" if w["provenance"] == "exact" else f"{w['residual']:.3g} (float)"
        lines.append(f"  witness: degree {w['degree']}, sum M eigenvalue {_sc(w['eigenvalue'])}, "
                     f"residual {res}, via {w['route']}")
    if d["kernel_degrees"]:
        lines.append("  degrees with -sum r in spec(sum M): "
                     + ", ".join(map(str, d["kernel_degrees"])))
    if d["degree0_bottom"] is not None:
        lines.append(f"  bottom of the spectrum on functions: {d['degree0_bottom']:.12g}")
    for c in d["crosscheck"]:
        lines.append(f"  dense check, degree {c['degree']} (poly degree <= {c['max_total_degree']}, "
                     f"{c['basis_size']} basis vectors): {'agrees' if c['agrees'] else 'MISMATCH'}")
    if d["note"]:
        lines.append(f"  note: {d['note']}")
    rf = vd["rockland_fails"]
    if rf is None:
        lines.append("verdict: not applicable")
    else:
        lines.append(f"verdict: Rockland condition {'fails' if rf else 'not refuted'}; "
                     f"maximally hypoelliptic: {_yn(vd['maximal_hypoelliptic'])}")
    return "\n".join(lines) + "\n"


def _yn(x) -> str:
    return "n/a" if x is None else ("yes" if x else "no")


def render_scan_text(d: dict) -> str:
    head = f"{'p':>2} {'q':>2} {'p1':>2} {'s':>2} {'t':>2}  {'Horm':<4} {'(H)':<4} {'case':<10} {'witness degrees':<16} rockland_fails"
    lines = [head, "-" * len(head)]
    for r in d["rows"]:
        wd = ",".join(map(str, r["witness_degrees"])) or "-"
        lines.append(f"{r['p']:>2} {r['q']:>2} {r['p1']:>2} {r['s']:>2} {r['t']:>2}  "
                     f"{_yn(r['hormander']):<4} {_yn(r['hypothesis_H']):<4} {r['case']:<10} "
                     f"{wd:<16} {_yn(r['rockland_fails'])}")
    s = d["summary"]
    lines.append(f"{s['instances']} instances: {s['degenerate']} degenerate, "
                 f"{s['hypothesis_H']} with (H), {s['rockland_fails']} with Rockland failure")
    return "\n".join(lines) + "\n"
