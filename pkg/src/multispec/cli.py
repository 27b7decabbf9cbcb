"""Command-line interface.

Subcommands: validate, rumin, spectral, oracle, star, report, catalog.
Input files are either algebra specs (dim/weights/brackets/poly_degree) or
multicomplex files; files emitted by `catalog` carry both (the multicomplex
plus a "carnot" block with the generating algebra), so every subcommand can
consume them.  Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import carnot
from .carnot import (
    algebra_from_dict,
    algebra_to_json,
    catalog as catalog_entry,
    polynomial_derham,
    validate_lie,
)
from .filtration import classical_pages, compare
from .multicomplex import (
    MulticomplexData,
    multicomplex_from_dict,
    multicomplex_to_json,
    total_cohomology,
    validate_multicomplex,
)
from .report import (
    Report,
    build_report,
    build_stack,
    emit_diagram,
    render_figure,
    report_to_text,
)
from .rumin import rumin_cohomology
from .star import build_star, check_star_duality


class CliError(Exception):
    pass


@dataclass
class LoadedInput:
    kind: str                      # "algebra" or "multicomplex"
    mc: MulticomplexData
    model: Optional[object]        # DeRhamModel when wedge structure is known
    algebra: Optional[object]
    raw: dict


def load_input(path: str) -> LoadedInput:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError(
            f"{path}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise CliError(f"{path}: expected a JSON object")
    if "brackets" in doc and "dim" in doc:
        spec = algebra_from_dict(doc)
        rep = validate_lie(spec)
        if not rep.valid:
            raise CliError(f"{path}: invalid algebra:\n{rep.summary()}")
        model = polynomial_derham(spec)
        return LoadedInput("algebra", model.mc, model, spec, doc)
    if "spaces" in doc:
        mc = multicomplex_from_dict(doc)
        model = None
        algebra = None
        if "carnot" in doc:
            algebra = algebra_from_dict(doc["carnot"])
            model = polynomial_derham(algebra)
            if model.mc.spaces != mc.spaces:
                raise CliError(f"{path}: embedded algebra disagrees with stored spaces")
        return LoadedInput("multicomplex", mc, model, algebra, doc)
    raise CliError(f"{path}: neither an algebra nor a multicomplex file")


def _cmd_validate(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as f:
            doc = json.loads(f.read())
    except OSError as e:
        print(f"cannot read {args.file}: {e}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as e:
        print(f"{args.file}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}",
              file=sys.stderr)
        return 1
    if isinstance(doc, dict) and "brackets" in doc and "dim" in doc:
        rep = validate_lie(algebra_from_dict(doc))
        print(rep.summary())
        return 0 if rep.valid else 1
    if isinstance(doc, dict) and "spaces" in doc:
        rep = validate_multicomplex(multicomplex_from_dict(doc))
        print(rep.summary())
        return 0 if rep.valid else 1
    print(f"{args.file}: neither an algebra nor a multicomplex file", file=sys.stderr)
    return 1


def _cmd_rumin(args) -> int:
    loaded = load_input(args.file)
    stack = build_stack(loaded.mc, loaded.model)
    tc = stack.rum.tc
    print("degree  dim_e0  H_rumin  H_total")
    for h in tc.degrees:
        print(f"{h:6d}  {stack.rum.e0_dim(h):6d}  {rumin_cohomology(stack.rum, h)[0]:7d}"
              f"  {total_cohomology(tc, h)[0]:7d}")
    return 0


def _cmd_spectral(args) -> int:
    loaded = load_input(args.file)
    stack = build_stack(loaded.mc, loaded.model)
    ws = stack.ws
    print("differential orders I_{p,k}:")
    for (p, k), orders in sorted(ws.index_sets().items(), key=lambda t: (t[0][1], t[0][0])):
        print(f"  degree {k} weight {p}: {','.join(map(str, orders)) or '-'}")
    chains, truncated = ws.enumerate_spectral_complexes(args.max_chains)
    print(f"spectral complexes: {len(chains)}" + (" (truncated)" if truncated else ""))
    for i, ch in enumerate(chains):
        path = " -> ".join(f"({st.degree},{st.weight})[{st.space.dim}]"
                           for st in ch.stations)
        print(f"  chain {i}: {path}  orders {','.join(map(str, ch.orders))}")
    if args.pages:
        rmax = min(args.pages, loaded.mc.Q + 2)
        print(f"page dimensions dim Z_r - dim B_r (r <= {rmax}):")
        for (a, b) in loaded.mc.bidegrees():
            k = a + b
            dims = [ws.z_direct(r, a, k).dim - ws.b_direct(r, a, k).dim
                    for r in range(1, rmax + 1)]
            if any(dims):
                print(f"  (p,k)=({a},{k}): {dims}")
    return 0


def _cmd_oracle(args) -> int:
    loaded = load_input(args.file)
    stack = build_stack(loaded.mc, loaded.model)
    page = classical_pages(stack.rum.tc, loaded.mc.Q + 2)
    rep = compare(page, stack.ws, loaded.mc.Q + 2)
    print(rep.summary())
    return 0 if rep.ok else 1


def _cmd_star(args) -> int:
    loaded = load_input(args.file)
    if loaded.model is None:
        print(f"{args.file}: star duality needs wedge structure "
              "(an algebra file or a catalog emission)", file=sys.stderr)
        return 1
    stack = build_stack(loaded.mc, loaded.model)
    kit = build_star(loaded.model)
    rep = check_star_duality(kit, stack.ws)
    print(rep.summary())
    return 0 if rep.ok else 1


def _cmd_report(args) -> int:
    loaded = load_input(args.file)
    stack = build_stack(loaded.mc, loaded.model)
    star_rep = None
    if loaded.model is not None:
        star_rep = check_star_duality(build_star(loaded.model), stack.ws)
    name = args.file.rsplit("/", 1)[-1]
    report = build_report(stack, name=name, max_chains=args.max_chains,
                          star_report=star_rep)
    if args.format == "text":
        body = report_to_text(report)
        ext = "txt"
    elif args.format == "json":
        body = report.to_json() + "\n"
        ext = "json"
    else:
        body = emit_diagram(report)
        ext = "dot"
    if args.out:
        with open(f"{args.out}.{ext}", "w", encoding="utf-8") as f:
            f.write(body)
        render_figure(report, f"{args.out}.png")
        print(f"wrote {args.out}.{ext} and {args.out}.png")
    else:
        sys.stdout.write(body)
        if args.figure:
            render_figure(report, args.figure)
    return 0


def _cmd_catalog(args) -> int:
    try:
        spec = catalog_entry(args.name, args.poly_degree)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return 1
    model = polynomial_derham(spec)
    mc = model.mc
    print(f"{args.name}: dim {spec.dim}, weights {list(spec.weights)}, "
          f"Q={mc.Q}, s={mc.s}, D={spec.poly_degree}")
    tc_dims = {}
    for (a, b), d in mc.spaces.items():
        tc_dims[a + b] = tc_dims.get(a + b, 0) + d
    print("total dims per degree:", {h: tc_dims[h] for h in sorted(tc_dims)})
    if args.emit:
        doc = json.loads(algebra_to_json(spec))
        text = multicomplex_to_json(mc, extra={"carnot": doc})
        with open(args.emit, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        print(f"wrote {args.emit}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multispec",
        description="Rumin complexes, spectral pages and spectral complexes "
                    "of truncated multicomplexes, in exact rational arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a multicomplex or algebra file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("rumin", help="harmonic spaces and Rumin cohomology")
    p.add_argument("file")
    p.set_defaults(func=_cmd_rumin)

    p = sub.add_parser("spectral", help="index sets, chains and page dimensions")
    p.add_argument("file")
    p.add_argument("--max-chains", type=int, default=64)
    p.add_argument("--pages", type=int, default=0,
                   help="print page dimensions up to this r")
    p.set_defaults(func=_cmd_spectral)

    p = sub.add_parser("oracle", help="cross-check pages against the classical filtration")
    p.add_argument("file")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("star", help="Hodge-star duality checks (needs wedge structure)")
    p.add_argument("file")
    p.set_defaults(func=_cmd_star)

    p = sub.add_parser("report", help="full report as text, JSON or DOT (plus figure)")
    p.add_argument("file")
    p.add_argument("--format", choices=["text", "json", "dot"], default="text")
    p.add_argument("--out", help="output prefix; writes PREFIX.<ext> and PREFIX.png")
    p.add_argument("--figure", help="write the figure here when no --out is given")
    p.add_argument("--max-chains", type=int, default=64)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("catalog", help="generate a standard Carnot example")
    p.add_argument("name", help="heisenberg1 | heisenberg2 | engel | abelian-n | step2-free-2")
    p.add_argument("--poly-degree", type=int, default=3)
    p.add_argument("--emit", help="write the multicomplex (with algebra block) here")
    p.set_defaults(func=_cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(str(e), file=sys.stderr)
        return 1
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
