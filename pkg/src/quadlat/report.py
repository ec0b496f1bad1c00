"""Serialization of reports. Exact values are always written as strings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .constructions import LatticeReport
from .exactnum import AdmissibleQ
from .fieldelem import FieldElement, embed_canonical
from .latanalysis import GramMatrix, IsometryWitness
from .zmodule import CenterDensity, ModuleBasis

SCHEMA_VERSION = "1"


def fmt(x) -> str:
    """Rational as ``"p/q"`` in lowest terms, integers as ``"p"``."""
    return str(Fraction(x))


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


def matrix_to_json(M) -> list[list[str]]:
    rows = M.entries if isinstance(M, GramMatrix) else M
    return [[fmt(v) for v in r] for r in rows]


def matrix_from_json(rows) -> GramMatrix:
    return GramMatrix.of([[Fraction(v) for v in r] for r in rows])


def basis_to_json(b: ModuleBasis) -> dict:
    return {
        "label": b.label,
        "degree": b.degree,
        "elements": [[fmt(c) for c in e.coords] for e in b],
    }


def basis_from_json(d: dict, q: int) -> ModuleBasis:
    els = tuple(FieldElement(q, tuple(Fraction(c) for c in e)) for e in d["elements"])
    return ModuleBasis(q, d["degree"], els, d["label"])


def admissible_to_json(aq: AdmissibleQ) -> dict:
    return {
        "q": aq.q,
        "j": aq.j,
        "factorization": [[p, e] for p, e in aq.factorization.factors],
    }


def density_to_json(d: CenterDensity) -> dict:
    return {"coef": fmt(d.coef), "radicand": fmt(d.radicand), "value": str(d)}


def report_to_json(r: LatticeReport, approx: bool = False) -> dict:
    out: dict[str, Any] = {
        "target": r.target,
        "q": r.q,
        "j": r.j,
        "k": r.k,
        "degree": r.degree,
        "verdict": r.verdict,
        "index": r.index,
        "disc": r.disc,
        "min_norm": fmt(r.min_norm),
        "center_density": density_to_json(r.center_density),
        "determinant": fmt(r.determinant),
        "kissing": r.kissing,
        "shortest_vectors": [list(v) for v in r.shortest],
        "gram": matrix_to_json(r.gram),
        "normalized_gram": matrix_to_json(r.normalized_gram) if r.normalized_gram else None,
        "witness": None if r.witness is None else {
            "U": [list(row) for row in r.witness.U],
            "scale": fmt(r.witness.scale),
        },
        "basis": basis_to_json(r.basis),
        "notes": list(r.notes),
    }
    if approx:
        out.update(approx_fields(r.basis, r.center_density))
    return out


def report_from_json(d: dict) -> LatticeReport:
    q = d["q"]
    w = d["witness"]
    return LatticeReport(
        target=d["target"], q=q, j=d["j"], k=d["k"], degree=d["degree"],
        basis=basis_from_json(d["basis"], q),
        gram=matrix_from_json(d["gram"]),
        index=d["index"], disc=d["disc"],
        min_norm=Fraction(d["min_norm"]),
        center_density=CenterDensity(Fraction(d["center_density"]["coef"]),
                                     Fraction(d["center_density"]["radicand"])),
        verdict=d["verdict"],
        shortest=tuple(tuple(v) for v in d["shortest_vectors"]),
        kissing=d["kissing"],
        determinant=Fraction(d["determinant"]),
        witness=None if w is None else IsometryWitness(tuple(tuple(r) for r in w["U"]),
                                                       Fraction(w["scale"])),
        normalized_gram=matrix_from_json(d["normalized_gram"]) if d["normalized_gram"] else None,
        notes=list(d["notes"]),
    )


def approx_fields(basis: ModuleBasis, density: CenterDensity | None = None) -> dict:
    """Floating-point extras, kept apart from the exact fields."""
    out: dict[str, Any] = {
        "approx_embedding": [embed_canonical(e, basis.degree) for e in basis],
    }
    if density is not None:
        out["approx_center_density"] = float(density)
    return out


@dataclass
class ReportDocument:
    command: str
    inputs: dict
    results: list = field(default_factory=list)
    error: dict | None = None
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        d = {
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
        }
        if self.error is not None:
            d["error"] = self.error
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ReportDocument:
        d = json.loads(text)
        return cls(command=d["command"], inputs=d["inputs"], results=d["results"],
                   error=d.get("error"), schema_version=d["schema_version"])


def _flatten(v) -> str:
    if v is None:
        return ""
    if isinstance(v, dict):
        if "coef" in v:
            return v["value"]
        return json.dumps(v, sort_keys=True)
    if isinstance(v, list):
        flat: list[str] = []

        def walk(x):
            if isinstance(x, list):
                for y in x:
                    walk(y)
            else:
                flat.append(str(x))
        walk(v)
        return " ".join(flat)
    return str(v)


def to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_flatten(r.get(c)) for c in columns])
    return buf.getvalue()
