"""The scenario catalog: JSON data files, validation, reports and tables.

One file per quotient case.  The file format (``schema: 1``) is documented in
docs/scenario_schema.md; numbers in the files are fixed-point and
intersection data on the base surface, while everything in a report is
computed from them.  The catalog annotations (minimality, Kodaira dimension)
are literature assertions and are rendered with a trailing ``*`` so they can
never be mistaken for computed values.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .cyclotomic_rep import CycMatrix
from .hj_resolution import CyclicSing
from .quotient_engine import (
    Fibration,
    InvariantReport,
    QuotientScenario,
    RamificationCurve,
    Stratum,
    albanese_fiber_genus,
    euler_quotient,
    full_report,
)

SCHEMA_VERSION = 1

TABLE1_COLUMNS = ("O", "Type", "c1^2", "c2", "q", "p_g", "chi", "g", "Singularities", "Min", "kappa")
TABLE2_COLUMNS = ("G", "c1^2", "c2", "q", "p_g", "chi", "g", "Singularities", "Min", "kappa")


class UnknownCase(KeyError):
    pass


class InvalidScenario(ValueError):
    def __init__(self, diagnostics: list[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics


# ---------------------------------------------------------------------------
# loading


def _parse_fraction(value, path: str, diags: list[str]) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        diags.append(f"{path}: not a rational number: {value!r}")
        return Fraction(0)


def _parse_generator(entry: dict, conductor: int, path: str, diags: list[str]) -> Optional[CycMatrix]:
    rows = entry.get("rows")
    if not isinstance(rows, list) or len(rows) != 5 or any(not isinstance(r, list) or len(r) != 5 for r in rows):
        diags.append(f"{path}.rows: must be a 5x5 array")
        return None
    try:
        return CycMatrix.from_rows(conductor, rows)
    except Exception as exc:  # malformed term lists
        diags.append(f"{path}.rows: {exc}")
        return None


def scenario_from_dict(data: dict, *, diagnostics: Optional[list[str]] = None) -> Optional[QuotientScenario]:
    """Parse and validate one scenario file; return None and fill diagnostics on failure."""
    diags: list[str] = [] if diagnostics is None else diagnostics
    if data.get("schema") != SCHEMA_VERSION:
        diags.append(f"schema: expected {SCHEMA_VERSION}, got {data.get('schema')!r}")
    label = data.get("label")
    if not isinstance(label, str) or not label:
        diags.append("label: missing or empty")
        label = "?"
    group = data.get("group") or {}
    conductor = group.get("conductor", 1)
    if not isinstance(conductor, int) or conductor < 1:
        diags.append("group.conductor: must be a positive integer")
        conductor = 1
    generators = []
    for i, gen in enumerate(group.get("generators", [])):
        matrix = _parse_generator(gen, conductor, f"group.generators[{i}]", diags)
        if matrix is not None:
            generators.append(matrix)

    strata = []
    for i, st in enumerate(data.get("strata", [])):
        order = st.get("stabilizer_order")
        euler = st.get("euler")
        if not isinstance(order, int) or order < 2:
            diags.append(f"strata[{i}].stabilizer_order: must be an integer >= 2")
            continue
        if not isinstance(euler, int):
            diags.append(f"strata[{i}].euler: must be an integer")
            continue
        strata.append(Stratum(order, euler, st.get("note", "")))

    ram = []
    ram_names = [r.get("name") for r in data.get("ramification", [])]
    for i, r in enumerate(data.get("ramification", [])):
        name = r.get("name")
        if not isinstance(name, str) or not name:
            diags.append(f"ramification[{i}].name: missing")
            continue
        index = r.get("index")
        if not isinstance(index, int) or index < 2:
            diags.append(f"ramification[{i}].index: must be an integer >= 2")
            continue
        meets = {}
        for other, value in (r.get("meets") or {}).items():
            if other not in ram_names:
                diags.append(f"ramification[{i}].meets.{other}: unknown curve name")
                continue
            meets[other] = _parse_fraction(value, f"ramification[{i}].meets.{other}", diags)
        ram.append(RamificationCurve(
            name, index,
            _parse_fraction(r.get("self_int"), f"ramification[{i}].self_int", diags),
            _parse_fraction(r.get("k_degree"), f"ramification[{i}].k_degree", diags),
            meets))
    for i, r in enumerate(ram):
        for s in ram[i + 1:]:
            a, b = r.meets.get(s.name), s.meets.get(r.name)
            if a is None and b is None:
                diags.append(f"ramification: no intersection value for pair ({r.name}, {s.name})")
            elif a is not None and b is not None and a != b:
                diags.append(f"ramification: asymmetric values for pair ({r.name}, {s.name}): {a} vs {b}")

    sings = []
    for i, s in enumerate(data.get("singularities", [])):
        n, q, count = s.get("n"), s.get("q"), s.get("count", 1)
        if not (isinstance(n, int) and isinstance(q, int) and isinstance(count, int) and count >= 1):
            diags.append(f"singularities[{i}]: need integer n, q and a positive count")
            continue
        try:
            sings.append((CyclicSing(n, q), count))
        except ValueError as exc:
            diags.append(f"singularities[{i}]: {exc}")

    fibration = None
    fib = data.get("fibration")
    if fib is not None:
        try:
            fibration = Fibration(int(fib["fiber_genus"]), int(fib["deck_order"]), int(fib["ramification"]))
        except (KeyError, TypeError, ValueError):
            diags.append("fibration: needs integer fiber_genus, deck_order, ramification")

    if diags:
        return None
    annotations = dict(data.get("annotations", {}))
    if data.get("table_position") is not None:
        annotations["table_position"] = data["table_position"]
    scenario = QuotientScenario(
        label=label,
        generators=tuple(generators),
        strata=tuple(strata),
        ramification=tuple(ram),
        singularities=tuple(sings),
        fibration=fibration,
        annotations=annotations,
        display=dict(data.get("display", {})),
        table=data.get("table"),
        source=data.get("source", ""),
    )
    return scenario


def validate_scenario(data: dict) -> list[str]:
    """Structural plus semantic validation; returns diagnostics (empty = ok)."""
    diags: list[str] = []
    scenario = scenario_from_dict(data, diagnostics=diags)
    if scenario is None:
        return diags
    # semantic checks that need the group
    try:
        order = scenario.group().order
    except Exception as exc:
        diags.append(f"group: closure failed: {exc}")
        return diags
    for i, st in enumerate(scenario.strata):
        if order % st.order != 0:
            diags.append(f"strata[{i}].stabilizer_order: {st.order} does not divide |G| = {order}")
    for i, r in enumerate(scenario.ramification):
        if order % r.index != 0:
            diags.append(f"ramification[{i}].index: {r.index} does not divide |G| = {order}")
    if not diags:
        try:
            euler_quotient(scenario)
        except ArithmeticError as exc:
            diags.append(f"strata: {exc}")
    if scenario.fibration is not None:
        fib = scenario.fibration
        try:
            albanese_fiber_genus(fib.fiber_genus, fib.deck_order, fib.ramification)
        except ArithmeticError as exc:
            diags.append(f"fibration: {exc}")
    return diags


def _data_files(catalog_dir: Optional[Path] = None) -> Iterable[tuple[str, dict]]:
    if catalog_dir is not None:
        for path in sorted(Path(catalog_dir).glob("*.json")):
            yield path.name, json.loads(path.read_text())
        return
    root = resources.files("fanoquotients").joinpath("data")
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            yield entry.name, json.loads(entry.read_text())


_CATALOG_CACHE: dict[Optional[str], dict[str, QuotientScenario]] = {}


def load_catalog(catalog_dir: Optional[Path] = None) -> dict[str, QuotientScenario]:
    """Load every scenario file, validating as we go; keyed by label."""
    cache_key = str(catalog_dir) if catalog_dir is not None else None
    if cache_key in _CATALOG_CACHE:
        return _CATALOG_CACHE[cache_key]
    catalog: dict[str, QuotientScenario] = {}
    for name, data in _data_files(catalog_dir):
        diags = validate_scenario(data)
        if diags:
            raise InvalidScenario([f"{name}: {d}" for d in diags])
        scenario = scenario_from_dict(data)
        assert scenario is not None
        if scenario.label in catalog:
            raise InvalidScenario([f"{name}: duplicate label {scenario.label}"])
        catalog[scenario.label] = scenario
    _CATALOG_CACHE[cache_key] = catalog
    return catalog


def find_case(label: str, catalog_dir: Optional[Path] = None) -> QuotientScenario:
    catalog = load_catalog(catalog_dir)
    if label in catalog:
        return catalog[label]
    lowered = {k.lower(): v for k, v in catalog.items()}
    if label.lower() in lowered:
        return lowered[label.lower()]
    raise UnknownCase(f"unknown case {label!r}; known: {', '.join(sorted(catalog))}")


def report_for(label: str, catalog_dir: Optional[Path] = None) -> InvariantReport:
    return full_report(find_case(label, catalog_dir))


# ---------------------------------------------------------------------------
# rendering


def _fmt_rat(x) -> str:
    return str(x)


def _kappa_text(report: InvariantReport, certified: bool) -> str:
    kappa = str(report.annotations.get("kodaira", "?"))
    text = f"{kappa}*"
    if certified:
        text += " certified"
    return text


def table_rows(report: InvariantReport, certified: bool) -> dict[str, str]:
    row = {
        "c1^2": _fmt_rat(report.c1_sq),
        "c2": str(report.c2),
        "q": str(report.q),
        "p_g": str(report.p_g),
        "chi": str(report.chi),
        "g": "" if report.fiber_genus is None else str(report.fiber_genus),
        "Singularities": report.singularities,
        "Min": f"{report.annotations.get('minimal', '?')}*",
        "kappa": _kappa_text(report, certified),
    }
    if report.table == 1:
        row["O"] = report.display.get("order", "")
        row["Type"] = report.display.get("type", "")
    else:
        row["G"] = report.display.get("group", "")
    return row


def run_case(label: str, catalog_dir: Optional[Path] = None) -> InvariantReport:
    return report_for(label, catalog_dir)


def _certified_cases(catalog: dict[str, QuotientScenario], verify: bool) -> set[str]:
    """Labels whose recorded rationality certificate actually exists."""
    if not verify:
        return set()
    from . import rationality_cases

    certified = set()
    for label, scenario in catalog.items():
        case = scenario.annotations.get("rationality_case")
        if case == "klein":
            rationality_cases.certify_rationality("klein-option-1", regularity=full_report(scenario).q)
            rationality_cases.certify_rationality("klein-option-2", regularity=full_report(scenario).q)
            certified.add(label)
        elif case == "xv":
            rationality_cases.certify_rationality("xv", regularity=full_report(scenario).q)
            certified.add(label)
    return certified


def run_tables(catalog_dir: Optional[Path] = None, verify_certificates: bool = True):
    """Both classification tables, in catalog order, as (columns, rows) pairs."""
    catalog = load_catalog(catalog_dir)
    certified = _certified_cases(catalog, verify_certificates)
    tables = []
    for table_number, columns in ((1, TABLE1_COLUMNS), (2, TABLE2_COLUMNS)):
        members = sorted(
            (s for s in catalog.values() if s.table == table_number),
            key=lambda s: s.annotations.get("table_position", 0))
        rows = []
        for scenario in members:
            report = full_report(scenario)
            rows.append(table_rows(report, scenario.label in certified))
        tables.append((columns, rows))
    return tables


def render_table(columns: tuple[str, ...], rows: list[dict[str, str]], fmt: str = "text") -> str:
    if fmt == "json":
        payload = [{c: row.get(c, "") for c in columns} for row in rows]
        return json.dumps(payload, indent=2, sort_keys=True)
    cells = [[row.get(c, "") for c in columns] for row in rows]
    widths = [max(len(columns[i]), *(len(r[i]) for r in cells)) if cells else len(columns[i])
              for i in range(len(columns))]
    if fmt == "markdown":
        head = "| " + " | ".join(columns) + " |"
        sep = "| " + " | ".join("-" * w for w in widths) + " |"
        body = ["| " + " | ".join(r[i] for i in range(len(columns))) + " |" for r in cells]
        return "\n".join([head, sep] + body)
    header = "  ".join(columns[i].ljust(widths[i]) for i in range(len(columns))).rstrip()
    lines = [header, "  ".join("-" * widths[i] for i in range(len(columns))).rstrip()]
    for r in cells:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(columns))).rstrip())
    return "\n".join(lines)


def report_to_json_dict(report: InvariantReport) -> dict:
    return {
        "label": report.label,
        "table": report.table,
        "display": report.display,
        "computed": {
            "c1_sq": report.c1_sq if isinstance(report.c1_sq, int) else str(report.c1_sq),
            "c2": report.c2,
            "q": report.q,
            "p_g": report.p_g,
            "chi": report.chi,
            "h11": report.h11,
            "fiber_genus": report.fiber_genus,
            "singularities": report.singularities,
            "noether_ok": report.noether_ok,
            "k2_quotient": _fmt_rat(report.k2_quotient),
            "k2_correction": _fmt_rat(report.k2_correction),
            "euler_quotient": report.euler_quotient,
            "exceptional_components": report.exceptional_components,
        },
        "annotations": report.annotations,
        "flags": list(report.flags),
        "source": report.source,
    }


def render_report(report: InvariantReport, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report_to_json_dict(report), indent=2, sort_keys=True)
    items = []
    if report.source:
        items.append(f"data source: {report.source}")
    items.append(f"c1^2 = {_fmt_rat(report.c1_sq)}   "
                 f"(K^2 of quotient {_fmt_rat(report.k2_quotient)}, "
                 f"resolution correction {_fmt_rat(report.k2_correction)})")
    items.append(f"c2   = {report.c2}   "
                 f"(quotient Euler number {report.euler_quotient} + "
                 f"{report.exceptional_components} exceptional components)")
    items.append(f"q = {report.q}, p_g = {report.p_g}, chi = {report.chi}, h^(1,1) = {report.h11}")
    if report.fiber_genus is not None:
        items.append(f"albanese fiber genus = {report.fiber_genus}")
    if report.singularities:
        items.append(f"singularities: {report.singularities}")
    items.append(f"noether check 12*chi = c1^2 + c2: {'ok' if report.noether_ok else 'FAILED'}")
    for flag in report.flags:
        items.append(f"flag: {flag}")
    annotated = {k: v for k, v in report.annotations.items() if k != "table_position"}
    if annotated:
        asserted = ", ".join(f"{k} = {v}*" for k, v in sorted(annotated.items()))
        items.append(f"annotations (asserted, not computed; marked *): {asserted}")
    if fmt == "markdown":
        return "\n".join([f"### case {report.label}"] + [f"- {item}" for item in items])
    return "\n".join([f"case {report.label}"] + [f"  {item}" for item in items])
