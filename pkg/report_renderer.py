"""
Report Renderer

This module renders cohomology tables, comparison reports, E1 pages and the
selfcheck manifest as aligned text, JSON or CSV. JSON is emitted with a
fixed key order and indentation so repeated runs give identical bytes.
"""

import csv
import io
import json
from typing import Any, Callable, Dict, List

from cohomology_tables import CohomologyTable, ComparisonResult
from integer_linalg import format_invariants
from spectral_sequence import E1Page


def to_json(document: Any) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def _csv(header: List[str], rows: List[List[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _torsion_cell(torsion: List[int]) -> str:
    return ";".join(str(d) for d in torsion)


# --- Cohomology tables ---

def table_text(table: CohomologyTable) -> str:
    lines = [f"{table.theory} cohomology of {table.group} with coefficients in {table.module}"]
    width = len(str(len(table.degrees) - 1))
    for entry in table.degrees:
        lines.append(f"  H^{entry.n:<{width}} = {entry}")
    return "\n".join(lines) + "\n"


def table_csv(table: CohomologyTable) -> str:
    rows = [[table.theory, table.group, table.module, e.n, e.free_rank, _torsion_cell(e.torsion), str(e)]
            for e in table.degrees]
    return _csv(["theory", "group", "module", "n", "free_rank", "torsion", "invariants"], rows)


# --- Comparison maps ---

def comparison_text(result: ComparisonResult) -> str:
    names = list(result.tables)
    degrees = len(result.tables[names[0]].degrees)
    columns = [["n"] + [str(n) for n in range(degrees)]]
    for name in names:
        columns.append([name] + [str(e) for e in result.tables[name].degrees])
    widths = [max(len(cell) for cell in column) for column in columns]

    lines = [f"Comparison maps for {result.group} with coefficients in {result.module}", ""]
    for row in range(degrees + 1):
        lines.append("  ".join(column[row].ljust(width) for column, width in zip(columns, widths)).rstrip())
    lines.append("")
    for report in result.maps.values():
        for d in report.degrees:
            flag = "iso" if d.is_iso else ("mono" if d.is_mono else "-")
            lines.append(f"  {report.label}^{d.n}: kernel {format_invariants(*d.kernel)}, "
                         f"cokernel {format_invariants(*d.cokernel)} [{flag}]")
    factor = ", ".join(str(n) for n, ok in enumerate(result.beta_is_alpha_gamma) if not ok)
    lines.append("")
    lines.append("beta = alpha∘gamma in every degree" if not factor else f"beta differs from alpha∘gamma in degrees {factor}")
    return "\n".join(lines) + "\n"


def comparison_csv(result: ComparisonResult) -> str:
    rows = []
    for report in result.maps.values():
        for d in report.degrees:
            rows.append([report.label, d.n, format_invariants(*d.kernel), format_invariants(*d.cokernel),
                         str(d.is_mono).lower(), str(d.is_iso).lower()])
    return _csv(["map", "n", "kernel", "cokernel", "is_mono", "is_iso"], rows)


# --- E1 pages ---

def e1_text(page: E1Page) -> str:
    cells = {(p, q): str(page.entry(p, q)) for p in range(page.pmax + 1) for q in range(page.qmax + 1)}
    width = max([len(c) for c in cells.values()] + [3])
    lines = [f"E1 page for {page.group} with coefficients in {page.module}", ""]
    for q in range(page.qmax, -1, -1):
        row = "  ".join(cells[(p, q)].rjust(width) for p in range(page.pmax + 1))
        lines.append(f"q={q:<2} {row}")
    lines.append("     " + "  ".join(f"p={p}".rjust(width) for p in range(page.pmax + 1)))
    lines.append("")
    for p in range(page.pmax + 1):
        entry = page.entry(p, 0)
        stabilized = [o for o in entry.orbits if not o.is_free]
        if stabilized:
            described = ", ".join(f"|Stab|={o.stabilizer.order} ({o.character_label})" for o in stabilized)
            lines.append(f"  p={p}: {entry.free_orbits} free orbits; {described}")
        else:
            lines.append(f"  p={p}: {entry.free_orbits} free orbits")
    lines.append("")
    lines.append(f"row 0 equals the exterior complex: {'yes' if page.row0_is_exterior else 'no'}")
    return "\n".join(lines) + "\n"


def e1_csv(page: E1Page) -> str:
    rows = []
    for key in sorted(page.entries):
        entry = page.entries[key].to_dict()
        rows.append([entry["p"], entry["q"], entry["free_rank"], _torsion_cell(entry["torsion"]),
                     str(page.entries[key]), entry["free_orbits"], len(entry["orbits"])])
    return _csv(["p", "q", "free_rank", "torsion", "invariants", "free_orbits", "stabilized_orbits"], rows)


# --- Selfcheck manifest ---

def manifest_text(manifest: Dict[str, Any]) -> str:
    lines = []
    for claim in manifest["claims"]:
        mark = "✅" if claim["passed"] else "❌"
        lines.append(f"{mark} {claim['name']}: {claim['anchor']} ({claim['seconds']:.2f}s)")
        if not claim["passed"]:
            lines.append(f"   {claim['detail']}")
    lines.append("")
    lines.append(f"{manifest['passed']} passed, {manifest['failed']} failed in {manifest['total_seconds']:.2f}s")
    return "\n".join(lines) + "\n"


def manifest_csv(manifest: Dict[str, Any]) -> str:
    rows = [[c["name"], c["anchor"], str(c["passed"]).lower(), f"{c['seconds']:.3f}", c["detail"]]
            for c in manifest["claims"]]
    return _csv(["name", "anchor", "passed", "seconds", "detail"], rows)


_RENDERERS: Dict[str, Dict[str, Callable]] = {
    "table": {"text": table_text, "csv": table_csv, "json": lambda t: to_json(t.to_dict())},
    "comparison": {"text": comparison_text, "csv": comparison_csv, "json": lambda r: to_json(r.to_dict())},
    "e1": {"text": e1_text, "csv": e1_csv, "json": lambda p: to_json(p.to_dict())},
    "manifest": {"text": manifest_text, "csv": manifest_csv, "json": to_json},
}


def render(kind: str, report: Any, output_format: str) -> str:
    """
    Render a report

    Args:
        kind: table, comparison, e1 or manifest
        report: the report object (a plain dict for the manifest)
        output_format: text, json or csv

    Raises:
        ValueError: If the kind or format is unknown
    """
    if kind not in _RENDERERS:
        raise ValueError(f"Unknown report kind {kind!r}")
    renderers = _RENDERERS[kind]
    if output_format not in renderers:
        raise ValueError(f"Unknown format {output_format!r}")
    return renderers[output_format](report)
