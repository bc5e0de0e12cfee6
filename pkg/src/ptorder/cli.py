import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from ptorder.cayham import char_poly
from ptorder.config import DEFAULT_CONFIG, EngineConfig
from ptorder.discriminant import discriminant_ideal
from ptorder.errors import ParseError, PtorderError, ResourceLimitError
from ptorder.models import SpecFile
from ptorder.poisson import poisson_bracket, specialization_derivation
from ptorder.qtorus import AlgebraSpec, coprime_check, ell_compatible, quantum_torus, strict
from ptorder.suites import SUITES, SuiteRunner
from ptorder.trace import CentralSubalgebra, regular_trace_form, tr_red, tr_reg
from ptorder.utils.logging import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

COMPUTE_KINDS = ("trace-reg", "trace-red", "bracket", "derivation", "charpoly", "discriminant")
PRESETS = ("qp2", "qp3", "qtorus3", "cluster-a2")


def load_spec_file(source: str) -> SpecFile:
    """Reads a spec file from a path, or a bundled preset by name."""
    path = Path(source)
    if path.exists():
        text = path.read_text()
    elif source in PRESETS:
        text = (resources.files("ptorder") / "presets" / f"{source}.json").read_text()
    else:
        raise FileNotFoundError(f"no spec file or preset named {source!r}; presets: {', '.join(PRESETS)}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    spec_file = SpecFile.model_validate(data)
    if spec_file.name is None:
        spec_file.name = path.stem if path.exists() else source
    return spec_file


def build_config(spec_file: SpecFile, args: argparse.Namespace) -> EngineConfig:
    config = DEFAULT_CONFIG
    if spec_file.caps is not None:
        config = config.merged(spec_file.caps.model_dump())
    config = config.merged({"seed": spec_file.seed})
    return config.merged({
        "max_basis": args.cap_basis,
        "max_det": args.cap_det,
        "max_det_size": args.cap_det_size,
        "max_gb_steps": args.cap_gb_steps,
        "max_center": args.cap_center,
        "seed": args.seed,
        "log_level": args.log_level,
        "progress": args.progress or None,
    })


def parse_matrix(text: Optional[str]) -> Optional[List[List[int]]]:
    if text is None:
        return None
    try:
        value = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"--sublattice: {e.msg}") from e
    if not isinstance(value, list) or not all(isinstance(row, list) and all(isinstance(v, int) for v in row) for row in value):
        raise ParseError("--sublattice expects a JSON list of integer rows, e.g. [[4,0],[0,2]]")
    return value


def emit(payload: Dict[str, Any], text: str, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def cmd_info(spec: AlgebraSpec, spec_file: SpecFile, config: EngineConfig, as_json: bool) -> int:
    ring = quantum_torus(spec)
    kernel = sorted(ring.center_lattice(config))
    n = ring.pi_degree(config)
    info: Dict[str, Any] = {
        "name": spec_file.name,
        "N": spec.n,
        "ell": spec.ell,
        "omega": [list(row) for row in spec.omega],
        "invertible": list(spec.invertible),
        "center_residues": [list(k) for k in kernel],
        "pi_degree": n,
        "rank": spec.rank,
    }
    lines = [
        f"spec: {spec_file.name}",
        f"N = {spec.n}, l = {spec.ell}",
        "Omega = " + "; ".join(" ".join(str(v) for v in row) for row in spec.omega),
        f"center residues K ({len(kernel)}): " + ("trivial" if len(kernel) == 1 else str([list(k) for k in kernel])),
        f"PI degree n = {n}",
        f"rank l^N = {spec.rank}",
    ]
    if spec.has_cluster:
        cluster = {
            "ell_compatible": ell_compatible(spec.btilde, spec.omega, spec.d, spec.ell, spec.ex0),
            "strict": strict(spec.btilde, spec.lam, spec.d, spec.ex0),
            "coprime": coprime_check(spec.ell, spec.d),
        }
        info["cluster"] = cluster
        lines.extend(f"{key.replace('_', '-')}: {'yes' if value else 'no'}" for key, value in cluster.items())
    emit(info, "\n".join(lines), as_json)
    return EXIT_OK


def cmd_compute(spec: AlgebraSpec, config: EngineConfig, args: argparse.Namespace) -> int:
    ring = quantum_torus(spec)
    kind = args.kind
    exprs = [ring.parse(e) for e in args.expressions]
    needed = {"trace-reg": 1, "trace-red": 1, "bracket": 2, "derivation": 1, "charpoly": 1, "discriminant": 0}[kind]
    if len(exprs) != needed:
        raise ParseError(f"{kind} takes {needed} expression(s), got {len(exprs)}")
    sublattice = parse_matrix(args.sublattice)
    C = (CentralSubalgebra.from_basis(ring, sublattice, name="C", config=config) if sublattice
         else CentralSubalgebra.c0(ring, config))

    payload: Dict[str, Any] = {"kind": kind}
    if kind in ("trace-reg", "trace-red", "bracket"):
        if kind == "trace-reg":
            result = tr_reg(exprs[0], C)
        elif kind == "trace-red":
            result = tr_red(exprs[0], config)
        else:
            result = poisson_bracket(exprs[0], exprs[1])
        payload.update(result=str(result), terms=result.to_json())
        text = str(result)
    elif kind == "derivation":
        delta = specialization_derivation(exprs[0])
        payload.update(images=delta.to_json(), text=str(delta))
        text = str(delta)
    elif kind == "charpoly":
        if args.trace == "red":
            tr, degree, variables = (lambda r: tr_red(r, config)), ring.pi_degree(config), None
        else:
            tr, degree, variables = regular_trace_form(C), C.index, C
        chi = char_poly(exprs[0], args.k or degree, tr, variables)
        payload.update(chi.to_dict())
        text = str(chi)
    else:
        tr = regular_trace_form(C)
        k = args.k or C.index
        ideal = discriminant_ideal(k, C, tr, modified=not args.plain, config=config)
        payload.update(ideal.to_dict(), k=k, modified=not args.plain)
        label = "D" if args.plain else "MD"
        text = "\n".join(
            [f"{label}_{k} over {', '.join(ideal.variables)}"]
            + [f"generator {g.format(ideal.order)}" for g in ideal.generators]
            + [f"groebner {g.format(ideal.order)}" for g in ideal.gb]
        )
    emit(payload, text, args.json)
    return EXIT_OK


def cmd_verify(spec: AlgebraSpec, spec_file: SpecFile, config: EngineConfig, args: argparse.Namespace) -> int:
    runner = SuiteRunner(spec, config, name=spec_file.name)
    report = runner.run(
        args.suite,
        k=args.k,
        trace=args.trace,
        sublattice=parse_matrix(args.sublattice),
        samples=args.samples,
        centrals=args.centrals,
    )
    print(json.dumps(report.model_dump(), sort_keys=True, indent=2))
    return EXIT_OK if report.passed else EXIT_FAILED


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("spec", help=f"Path to a spec JSON file or a preset name ({', '.join(PRESETS)})")
    parser.add_argument("--json", action="store_true", help="Emit JSON instead of text")
    parser.add_argument("--seed", type=int, help="Seed for sampled checks (default: spec file, then 1729)")
    parser.add_argument("--k", type=int, help="Level k for discriminants, degree d for charpoly")
    parser.add_argument("--trace", choices=["reg", "red"], default="reg", help="Trace used by charpoly / cayley-hamilton")
    parser.add_argument("--sublattice", help="JSON integer matrix whose rows generate a central sublattice")
    parser.add_argument("--cap-basis", type=int, help="Cap on the rank over a central subalgebra")
    parser.add_argument("--cap-det", type=int, help="Cap on determinants evaluated for an ideal")
    parser.add_argument("--cap-det-size", type=int, help="Cap on the size of a pairing determinant")
    parser.add_argument("--cap-gb-steps", type=int, help="Cap on Buchberger pair reductions")
    parser.add_argument("--cap-center", type=int, help="Cap on l^N for center enumeration")
    parser.add_argument("--progress", action="store_true", help="Show progress bars")
    parser.add_argument("--log-level", default=None, help="Logging level (default WARNING)")


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="ptorder: Poisson trace orders on root-of-unity quantum tori")
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    info_parser = subparsers.add_parser("info", help="Summarize an algebra: center, PI degree, cluster checks")
    add_common_arguments(info_parser)

    compute_parser = subparsers.add_parser("compute", help="Evaluate a trace, bracket, derivation, char. polynomial or discriminant")
    add_common_arguments(compute_parser)
    compute_parser.add_argument("kind", choices=COMPUTE_KINDS, help="What to compute")
    compute_parser.add_argument("expressions", nargs="*", help="Elements such as 'x1^2 + 3/2*e*x2'")
    compute_parser.add_argument("--plain", action="store_true", help="Discriminant ideal D_k instead of MD_k")

    verify_parser = subparsers.add_parser("verify", help="Run a verification suite and print its JSON report")
    add_common_arguments(verify_parser)
    verify_parser.add_argument("suite", choices=SUITES, help="Suite to run")
    verify_parser.add_argument("--samples", type=int, help="Override the number of sampled elements")
    verify_parser.add_argument("--centrals", type=int, help="Override the number of sampled central elements")

    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE

    setup_logging(args.log_level or "WARNING")

    try:
        spec_file = load_spec_file(args.spec)
        spec = AlgebraSpec(**spec_file.algebra_kwargs())
        config = build_config(spec_file, args)
        if args.command == "info":
            return cmd_info(spec, spec_file, config, args.json)
        if args.command == "compute":
            return cmd_compute(spec, config, args)
        return cmd_verify(spec, spec_file, config, args)
    except ResourceLimitError as e:
        logger.error(f"Resource cap exceeded: {e}")
        return EXIT_RESOURCE
    except (PtorderError, ValidationError, FileNotFoundError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
