"""Batch front-end: validate instances, run computations, emit reports.

Every command produces one report object; the human rendering and the
machine rendering (canonical JSON) are generated from the same data, so
the two always agree on every number.  Machine output contains no
timing, which makes reports byte-identical across runs with the same
inputs and seed.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 environment error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Optional

from .algebra import ext_module, frobenius
from .cartier import hom_cart_basis
from .complexes import CARTIER, MODULE, homology, truncate_geq, truncate_leq, forget_complex
from .derived_checks import verify_les
from .free_monad import ext_cart_dimensions
from .instancefile import InstanceError, ParsedInstance, load_instance
from .oracles import yoneda_admits, yoneda_ext1_dimension
from .perverse import (
    Perversity,
    block_decomposition,
    check_fstar_perverse_texact,
    in_perverse_part,
    perverse_truncate,
    perverse_truncate_cartier,
)
from .suite import SuiteConfig, available_scopes, run_suite

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2
EXIT_ENVIRONMENT = 3


class InputError(ValueError):
    pass


def _digest(path: str) -> str:
    with open(path, "rb") as handle:
        return hashlib.sha256(handle.read()).hexdigest()


def _load(path: str) -> tuple[ParsedInstance, str]:
    digest = _digest(path)
    return load_instance(path), digest


def _lookup_cartier(instance: ParsedInstance, name: str):
    if name not in instance.cartier:
        raise InputError(f"unknown Cartier structure {name!r}; available: {sorted(instance.cartier)}")
    return instance.cartier[name]


def _lookup_complex(instance: ParsedInstance, name: str):
    if name not in instance.complexes:
        raise InputError(f"unknown complex {name!r}; available: {sorted(instance.complexes)}")
    return instance.complexes[name]


def _lookup_perversity(instance: ParsedInstance, name: str) -> Perversity:
    if name not in instance.perversities:
        raise InputError(f"unknown perversity {name!r}; available: {sorted(instance.perversities)}")
    return instance.perversities[name]


# -- commands -------------------------------------------------------------------


def cmd_validate(args) -> tuple[dict, int]:
    instance, digest = _load(args.path)
    report = {
        "command": "validate",
        "instance_digest": digest,
        "algebra": {
            "name": instance.algebra.name,
            "p": instance.algebra.p,
            "dim": instance.algebra.dim,
            "frobenius_invertible": frobenius(instance.algebra).is_invertible(),
            "blocks": len(block_decomposition(instance.algebra).idempotents),
        },
        "counts": {
            "modules": len(instance.modules),
            "cartier": len(instance.cartier),
            "frobenius": len(instance.frobenius),
            "complexes": len(instance.complexes),
            "perversities": len(instance.perversities),
        },
        "verdicts": [{"id": "instance_valid", "passed": True}],
    }
    return report, EXIT_OK


def cmd_hom(args) -> tuple[dict, int]:
    instance, digest = _load(args.path)
    m = _lookup_cartier(instance, args.source)
    n = _lookup_cartier(instance, args.target)
    basis = hom_cart_basis(m, n)
    from .algebra import hom_module_basis

    underlying = len(hom_module_basis(m.module, n.module))
    report = {
        "command": "hom",
        "instance_digest": digest,
        "source": args.source,
        "target": args.target,
        "results": {
            "hom_cart_dimension": len(basis),
            "hom_underlying_dimension": underlying,
        },
        "verdicts": [{"id": "computed", "passed": True}],
    }
    return report, EXIT_OK


def cmd_ext(args) -> tuple[dict, int]:
    instance, digest = _load(args.path)
    m = _lookup_cartier(instance, args.source)
    n = _lookup_cartier(instance, args.target)
    dims = ext_cart_dimensions(m, n, args.max_degree)
    ext_underlying = [ext_module(m.module, n.module, i)[0] for i in range(args.max_degree + 1)]
    results = {
        "ext_cart_dimensions": dims,
        "ext_underlying_dimensions": ext_underlying,
    }
    verdicts = [{"id": "computed", "passed": True}]
    if yoneda_admits(m, n):
        oracle = yoneda_ext1_dimension(m, n)
        results["yoneda_ext1"] = oracle
        verdicts.append({"id": "yoneda_degree1_agrees", "passed": oracle == dims[1] if len(dims) > 1 else True})
    report = {
        "command": "ext",
        "instance_digest": digest,
        "source": args.source,
        "target": args.target,
        "max_degree": args.max_degree,
        "results": results,
        "verdicts": verdicts,
    }
    code = EXIT_OK if all(v["passed"] for v in verdicts) else EXIT_VERIFICATION
    return report, code


def cmd_les(args) -> tuple[dict, int]:
    instance, digest = _load(args.path)
    m = _lookup_cartier(instance, args.source)
    n = _lookup_cartier(instance, args.target)
    les = verify_les(m, n, max_degree=args.max_degree)
    nodes = [
        {
            "kind": node.kind,
            "degree": node.degree,
            "dimension": node.dimension,
            "rank_in": node.rank_in,
            "rank_out": node.rank_out,
            "exact": node.exact,
        }
        for node in les.nodes
    ]
    verdicts = [
        {"id": "all_nodes_exact", "passed": all(node.exact for node in les.nodes)},
        {"id": "degree0_matches_hom", "passed": les.degree0_matches_hom},
    ]
    if les.yoneda_checked:
        verdicts.append({"id": "degree1_matches_yoneda", "passed": bool(les.yoneda_matches)})
    report = {
        "command": "les",
        "instance_digest": digest,
        "source": args.source,
        "target": args.target,
        "max_degree": args.max_degree,
        "results": {"nodes": nodes, "dimensions": les.dimensions()},
        "verdicts": verdicts,
    }
    code = EXIT_OK if les.passed else EXIT_VERIFICATION
    return report, code


def _homology_table(c) -> dict:
    return {str(n): homology(c, n).dim for n in c.degrees()}


def cmd_truncate(args) -> tuple[dict, int]:
    instance, digest = _load(args.path)
    c = _lookup_complex(instance, args.complex)
    if args.side == "geq":
        truncated = truncate_geq(c, args.degree)
    else:
        truncated = truncate_leq(c, args.degree)
    results = {
        "context": c.context,
        "input_range": [c.lower, c.upper],
        "input_homology": _homology_table(c),
        "output_range": [truncated.lower, truncated.upper],
        "output_homology": _homology_table(truncated),
    }
    verdicts = [{"id": "computed", "passed": True}]
    if c.context == CARTIER:
        under = forget_complex(c)
        under_trunc = truncate_geq(under, args.degree) if args.side == "geq" else truncate_leq(under, args.degree)
        verdicts.append(
            {"id": "forget_commutes", "passed": forget_complex(truncated) == under_trunc}
        )
    report = {
        "command": "truncate",
        "instance_digest": digest,
        "complex": args.complex,
        "degree": args.degree,
        "side": args.side,
        "results": results,
        "verdicts": verdicts,
    }
    code = EXIT_OK if all(v["passed"] for v in verdicts) else EXIT_VERIFICATION
    return report, code


def cmd_perverse(args) -> tuple[dict, int]:
    instance, digest = _load(args.path)
    c = _lookup_complex(instance, args.complex)
    pv = _lookup_perversity(instance, args.perversity)
    texact = check_fstar_perverse_texact(c.algebra, pv, seed=args.seed)
    verdicts = [{"id": "fstar_perverse_texact", "passed": texact["passed"]}]
    results = {
        "perversity": list(pv.values),
        "blocks": len(block_decomposition(c.algebra).idempotents),
        "input_homology": _homology_table(c),
    }
    code = EXIT_OK
    if not texact["passed"]:
        code = EXIT_VERIFICATION
    else:
        if c.context == CARTIER:
            truncated = perverse_truncate_cartier(c, pv, args.side, args.level)
            under = perverse_truncate(forget_complex(c), pv, args.side, args.level)
            verdicts.append(
                {"id": "forget_commutes", "passed": forget_complex(truncated) == under}
            )
        else:
            truncated = perverse_truncate(c, pv, args.side, args.level)
        results["output_range"] = [truncated.lower, truncated.upper]
        results["output_homology"] = _homology_table(truncated)
        results["output_in_part"] = in_perverse_part(
            forget_complex(truncated) if truncated.context == CARTIER else truncated,
            pv,
            args.side,
            args.level,
        )
        verdicts.append({"id": "output_in_perverse_part", "passed": bool(results["output_in_part"])})
        if not all(v["passed"] for v in verdicts):
            code = EXIT_VERIFICATION
    report = {
        "command": "perverse",
        "instance_digest": digest,
        "complex": args.complex,
        "perversity_name": args.perversity,
        "side": args.side,
        "level": args.level,
        "seed": args.seed,
        "results": results,
        "verdicts": verdicts,
    }
    return report, code


def cmd_suite(args) -> tuple[dict, int]:
    config = SuiteConfig()
    if args.samples_scale != 1.0:
        config = config.scaled(args.samples_scale)
    config = SuiteConfig(
        **{
            **config.__dict__,
            "les_max_degree": args.max_degree,
            "kappa_cutoff": args.kappa_cutoff,
        }
    )
    scope = None if args.scope in (None, "all") else args.scope
    report_data = run_suite(seed=args.seed, scope=scope, config=config)
    verdicts = [
        {"id": check["id"], "passed": check["passed"]} for check in report_data["checks"]
    ]
    report = {
        "command": "suite",
        "seed": args.seed,
        "scope": report_data["scope"],
        "samples_scale": args.samples_scale,
        "max_degree": args.max_degree,
        "kappa_cutoff": args.kappa_cutoff,
        "results": {"checks": report_data["checks"]},
        "verdicts": verdicts,
    }
    return report, EXIT_OK if report_data["passed"] else EXIT_VERIFICATION


# -- rendering -------------------------------------------------------------------


def _render_human(report: dict, elapsed: float) -> str:
    lines = [f"cartmod {report['command']}"]
    for key, value in report.items():
        if key in ("command", "results", "verdicts"):
            continue
        lines.append(f"  {key}: {value}")
    results = report.get("results", {})
    if results:
        lines.append("  results:")
        lines.extend(_render_value(results, indent=4))
    lines.append("  verdicts:")
    for verdict in report.get("verdicts", []):
        status = "PASS" if verdict["passed"] else "FAIL"
        lines.append(f"    {status} {verdict['id']}")
    lines.append(f"  elapsed: {elapsed:.3f}s")
    return "\n".join(lines)


def _render_value(value, indent: int) -> list[str]:
    pad = " " * indent
    lines = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item and not _is_flat(item):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_value(item, indent + 2))
            else:
                lines.append(f"{pad}{key}: {item}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.extend(_render_value(item, indent))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{value}")
    return lines


def _is_flat(value) -> bool:
    if isinstance(value, list):
        return all(not isinstance(item, (dict, list)) for item in value)
    return False


def emit(report: dict, fmt: str, elapsed: float) -> None:
    if fmt == "machine":
        sys.stdout.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        sys.stdout.write(_render_human(report, elapsed) + "\n")


# -- argument parsing --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "machine"), default="human")

    parser = argparse.ArgumentParser(
        prog="cartmod",
        description="Exact homological algebra for Cartier modules over finite-dimensional algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser(
        "validate", parents=[common], help="parse an instance file and check every invariant"
    )
    p_validate.add_argument("path")

    p_hom = sub.add_parser("hom", parents=[common], help="dimension of Hom between two Cartier structures")
    p_hom.add_argument("path")
    p_hom.add_argument("source")
    p_hom.add_argument("target")

    p_ext = sub.add_parser("ext", parents=[common], help="Ext dimensions in the Cartier category")
    p_ext.add_argument("path")
    p_ext.add_argument("source")
    p_ext.add_argument("target")
    p_ext.add_argument("--max-degree", type=int, default=4)

    p_les = sub.add_parser("les", parents=[common], help="verify the long exact sequence for a pair")
    p_les.add_argument("path")
    p_les.add_argument("source")
    p_les.add_argument("target")
    p_les.add_argument("--max-degree", type=int, default=4)

    p_trunc = sub.add_parser("truncate", parents=[common], help="truncate a complex")
    p_trunc.add_argument("path")
    p_trunc.add_argument("complex")
    p_trunc.add_argument("--degree", type=int, default=0)
    p_trunc.add_argument("--side", choices=("geq", "leq"), default="geq")

    p_perv = sub.add_parser(
        "perverse", parents=[common], help="perverse truncation with the t-exactness gate"
    )
    p_perv.add_argument("path")
    p_perv.add_argument("complex")
    p_perv.add_argument("perversity")
    p_perv.add_argument("--side", choices=("leq", "geq"), default="leq")
    p_perv.add_argument("--level", type=int, default=0)
    p_perv.add_argument("--seed", type=int, default=0)

    p_suite = sub.add_parser("suite", parents=[common], help="run the verification suite")
    p_suite.add_argument("--seed", type=int, default=0)
    p_suite.add_argument("--scope", default="all", choices=["all"] + available_scopes())
    p_suite.add_argument("--max-degree", type=int, default=4)
    p_suite.add_argument("--kappa-cutoff", type=int, default=4)
    p_suite.add_argument("--samples-scale", type=float, default=1.0)

    return parser


_COMMANDS = {
    "validate": cmd_validate,
    "hom": cmd_hom,
    "ext": cmd_ext,
    "les": cmd_les,
    "truncate": cmd_truncate,
    "perverse": cmd_perverse,
    "suite": cmd_suite,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.monotonic()
    try:
        report, code = _COMMANDS[args.command](args)
    except (InstanceError, InputError) as exc:
        emit({"command": args.command, "error": str(exc), "verdicts": []}, args.format, time.monotonic() - start)
        return EXIT_INPUT
    except ValueError as exc:
        emit({"command": args.command, "error": str(exc), "verdicts": []}, args.format, time.monotonic() - start)
        return EXIT_INPUT
    except OSError as exc:
        emit({"command": args.command, "error": str(exc), "verdicts": []}, args.format, time.monotonic() - start)
        return EXIT_ENVIRONMENT
    emit(report, args.format, time.monotonic() - start)
    return code


if __name__ == "__main__":
    sys.exit(main())
