"""
Job Specification for cohomforge

This module turns command-line input into a JobSpec: it owns the argument
parser, the group and module spec mini-languages, and the JSON Schema
validation of explicit group tables and module files.

Group specs: C<n>, D<n> (order 2n), S<n>, products such as C2xC2 or C3xS3,
or @path/to/table.json.
Module specs: Z, Z/<k>, F2, Zsign, ZG, or @path/to/module.json.
"""

import argparse
import json
import logging
import re
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Any, Dict, List, Optional

import jsonschema

from cochain_complexes import THEORIES
from finite_groups import Group, GroupKind, make_group
from gmodules import GModule, ModuleKind, coefficient_module
from integer_linalg import IntMatrix, PresentedAb

logger = logging.getLogger(__name__)

SCHEMAS_DIR = Path(__file__).parent / "schemas"

COMMANDS = ("cohomology", "compare", "e1", "selfcheck", "papercheck")
SUITE_COMMANDS = ("selfcheck", "papercheck")
FORMATS = ("text", "json", "csv")
ROUTES = ("resolution", "cochain")

DEFAULT_MAX_DEGREE = 6
DEFAULT_PMAX = 5
DEFAULT_QMAX = 4

_FACTOR = re.compile(r"^([CDS])(\d+)$")
_CYCLIC_MODULE = re.compile(r"^Z/(\d+)$")
_FACTOR_KINDS = {"C": GroupKind.CYCLIC, "D": GroupKind.DIHEDRAL, "S": GroupKind.SYMMETRIC}


class SpecParseError(ValueError):
    """A group spec, module spec or input file that cannot be understood."""


def load_schema(name: str) -> Dict[str, Any]:
    """Load schemas/<name>.schema.json."""
    path = SCHEMAS_DIR / f"{name}.schema.json"
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def validate_document(document: Any, name: str) -> None:
    """
    Validate a document against one of the bundled schemas

    Raises:
        SpecParseError: If the document does not match
    """
    try:
        jsonschema.validate(instance=document, schema=load_schema(name))
    except jsonschema.ValidationError as e:
        location = "/".join(str(p) for p in e.absolute_path) or "top level"
        raise SpecParseError(f"{name} document invalid at {location}: {e.message}")


def _read_json_file(reference: str, schema: str) -> Dict[str, Any]:
    path = Path(reference[1:])
    if not path.is_file():
        raise SpecParseError(f"File not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except json.JSONDecodeError as e:
        raise SpecParseError(f"{path} is not valid JSON: {e}")
    validate_document(document, schema)
    return document


def _factor(text: str) -> Group:
    match = _FACTOR.match(text)
    if not match:
        raise SpecParseError(f"Unknown group factor {text!r}; expected C<n>, D<n> or S<n>")
    try:
        return make_group(_FACTOR_KINDS[match.group(1)], int(match.group(2)))
    except ValueError as e:
        raise SpecParseError(str(e))


def parse_group_spec(spec: str) -> Group:
    """
    Parse a group spec string

    Args:
        spec: C<n>, D<n>, S<n>, an x-separated product of these, or @file.json

    Returns:
        The group, labelled by its spec

    Raises:
        SpecParseError: If the spec is malformed or the table is not a group
    """
    spec = spec.strip()
    if not spec:
        raise SpecParseError("Empty group spec")
    if spec.startswith("@"):
        document = _read_json_file(spec, "group_table")
        table = document["table"]
        if len(table) != document["order"]:
            raise SpecParseError(f"Table has {len(table)} rows for order {document['order']}")
        try:
            return make_group(GroupKind.TABLE, table=table, names=document.get("names"),
                              label=document.get("label", Path(spec[1:]).stem))
        except ValueError as e:
            raise SpecParseError(f"{spec[1:]}: {e}")
    return reduce(lambda a, b: make_group(GroupKind.PRODUCT, factors=(a, b)),
                  [_factor(part) for part in spec.split("x")])


def parse_module_spec(spec: str, group: Group) -> GModule:
    """
    Parse a module spec string over a group

    Raises:
        SpecParseError: If the spec is malformed, Zsign is asked of a group
            without a sign character, or an explicit action is not a module
    """
    spec = spec.strip()
    try:
        if spec == "Z":
            return coefficient_module(group, ModuleKind.TRIVIAL, 0)
        if spec == "F2":
            return coefficient_module(group, ModuleKind.TRIVIAL, 2)
        match = _CYCLIC_MODULE.match(spec)
        if match:
            return coefficient_module(group, ModuleKind.TRIVIAL, int(match.group(1)))
        if spec == "Zsign":
            return coefficient_module(group, ModuleKind.SIGN)
        if spec == "ZG":
            return coefficient_module(group, ModuleKind.GROUP_RING)
        if spec.startswith("@"):
            return _explicit_module(spec, group)
    except SpecParseError:
        raise
    except ValueError as e:
        raise SpecParseError(f"Module {spec!r} over {group.label}: {e}")
    raise SpecParseError(f"Unknown module spec {spec!r}; expected Z, Z/<k>, F2, Zsign, ZG or @file.json")


def _explicit_module(spec: str, group: Group) -> GModule:
    document = _read_json_file(spec, "module_spec")
    gens = document["gens"]
    relations = document.get("relations", [])
    action = document["action"]
    if len(action) != group.order:
        raise SpecParseError(f"{spec[1:]} gives {len(action)} action matrices for a group of order {group.order}")
    carrier = PresentedAb(gens, IntMatrix.from_columns(relations, gens))
    matrices = []
    for g, rows in enumerate(action):
        if len(rows) != gens or any(len(row) != gens for row in rows):
            raise SpecParseError(f"{spec[1:]}: action matrix {g} is not {gens}x{gens}")
        matrices.append(IntMatrix.from_rows(rows, cols=gens))
    return coefficient_module(group, ModuleKind.EXPLICIT, carrier=carrier, matrices=matrices,
                              label=document.get("label", Path(spec[1:]).stem))


@dataclass
class JobSpec:
    """One CLI invocation, with defaults N=6, P=5, Q=4 and text output."""

    command: str
    group: str = "C2"
    module: str = "Z"
    theory: str = "classical"
    max_degree: int = DEFAULT_MAX_DEGREE
    pmax: int = DEFAULT_PMAX
    qmax: int = DEFAULT_QMAX
    output_format: str = "text"
    out: Optional[str] = None
    threads: Optional[int] = None
    max_basis: Optional[int] = None
    route: str = "resolution"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise SpecParseError(f"Unknown command {self.command!r}")
        if self.theory not in THEORIES:
            raise SpecParseError(f"Unknown theory {self.theory!r}")
        if self.output_format not in FORMATS:
            raise SpecParseError(f"Unknown format {self.output_format!r}")
        if self.route not in ROUTES:
            raise SpecParseError(f"Unknown route {self.route!r}")
        for name in ("max_degree", "pmax", "qmax"):
            if getattr(self, name) < 0:
                raise SpecParseError(f"{name} must be nonnegative")
        for name in ("threads", "max_basis"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise SpecParseError(f"{name} must be positive")

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "JobSpec":
        return cls(
            command=args.command,
            group=getattr(args, "group", "C2"),
            module=getattr(args, "module", "Z"),
            theory=getattr(args, "theory", "classical"),
            max_degree=getattr(args, "max_degree", DEFAULT_MAX_DEGREE),
            pmax=getattr(args, "pmax", DEFAULT_PMAX),
            qmax=getattr(args, "qmax", DEFAULT_QMAX),
            output_format=args.format,
            out=args.out,
            threads=args.threads,
            max_basis=args.max_basis,
            route=getattr(args, "route", "resolution"),
        )

    def to_argv(self) -> List[str]:
        """Arguments that parse back to this JobSpec."""
        argv = [self.command]
        if self.command not in SUITE_COMMANDS:
            argv += ["--group", self.group, "--module", self.module]
        if self.command == "cohomology":
            argv += ["--theory", self.theory, "--route", self.route]
        if self.command in ("cohomology", "compare"):
            argv += ["--max-degree", str(self.max_degree)]
        if self.command == "e1":
            argv += ["--pmax", str(self.pmax), "--qmax", str(self.qmax)]
        argv += ["--format", self.output_format]
        if self.out is not None:
            argv += ["--out", self.out]
        if self.threads is not None:
            argv += ["--threads", str(self.threads)]
        if self.max_basis is not None:
            argv += ["--max-basis", str(self.max_basis)]
        return argv


def build_parser() -> argparse.ArgumentParser:
    """The cohomforge argument parser, one subcommand per report."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text", help="Report format (default: text)")
    common.add_argument("--out", help="Write the report to this file instead of stdout")
    common.add_argument("--threads", type=int, help="Worker count (default: COHOMFORGE_THREADS or 1)")
    common.add_argument("--max-basis", type=int, dest="max_basis",
                        help="Largest based module allowed (default: COHOMFORGE_MAX_BASIS)")

    target = argparse.ArgumentParser(add_help=False)
    target.add_argument("--group", required=True, help="C<n>, D<n>, S<n>, products like C2xC2, or @table.json")
    target.add_argument("--module", required=True, help="Z, Z/<k>, F2, Zsign, ZG, or @module.json")

    parser = argparse.ArgumentParser(
        prog="cohomforge",
        description="Exact group cohomology: classical, symmetric, exterior and delta theories",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python cohomforge.py cohomology --group C2 --module F2 --theory symmetric --max-degree 9 --format json
  python cohomforge.py compare --group C3 --module Z --max-degree 2
  python cohomforge.py e1 --group S3 --module Z --pmax 5 --qmax 3
  python cohomforge.py selfcheck --out manifest.json --format json
  python cohomforge.py papercheck
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cohomology = sub.add_parser("cohomology", parents=[common, target], help="Cohomology table of one theory")
    cohomology.add_argument("--theory", choices=THEORIES, default="classical")
    cohomology.add_argument("--route", choices=ROUTES, default="resolution",
                            help="Hom over a resolution (default) or explicit cochains")
    cohomology.add_argument("--max-degree", type=int, dest="max_degree", default=DEFAULT_MAX_DEGREE)

    compare = sub.add_parser("compare", parents=[common, target], help="alpha, beta, gamma and the delta projection")
    compare.add_argument("--max-degree", type=int, dest="max_degree", default=DEFAULT_MAX_DEGREE)

    e1 = sub.add_parser("e1", parents=[common, target], help="E1 page of the exterior spectral sequence")
    e1.add_argument("--pmax", type=int, default=DEFAULT_PMAX)
    e1.add_argument("--qmax", type=int, default=DEFAULT_QMAX)

    sub.add_parser("selfcheck", parents=[common], help="Run the acceptance suite")
    sub.add_parser("papercheck", parents=[common], help="Same as selfcheck")
    return parser


def parse_job(argv: Optional[List[str]] = None) -> JobSpec:
    """
    Parse command-line arguments into a JobSpec

    Raises:
        SystemExit: With code 2 on usage errors (argparse)
        SpecParseError: If the values are out of range
    """
    args = build_parser().parse_args(argv)
    job = JobSpec.from_namespace(args)
    logger.debug(f"Parsed job: {job}")
    return job
