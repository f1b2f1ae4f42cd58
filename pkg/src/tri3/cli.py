"""Command-line interface: ``tri3 <command> ...``.

Exit codes: 0 success, 1 validation failure (or a failed check in
``verify``), 2 precondition not applicable under ``--strict``, 3 I/O or
parse error. With several files the largest code wins.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from .derivations import basis_maps, center_dim, derivation_space, h1_dim, inner_derivation_space
from .errors import ParseError, ValidationError
from .hom import hom_space, zr_space
from .instances import PRESETS, dumps_instance, fixture_path, generate_instance, parse_instance, write_instance
from .linalg import format_rational
from .triangular import build_triangular
from .verify import NA, render_report, verify_theorems

EXIT_OK, EXIT_INVALID, EXIT_NOT_APPLICABLE, EXIT_IO = 0, 1, 2, 3


def _resolve(path: str) -> Path:
    """``path`` itself, or the bundled fixture of that name if no such file exists."""
    p = Path(path)
    if p.exists():
        return p
    try:
        bundled = fixture_path(p.name)
    except (FileNotFoundError, KeyError):
        return p
    return bundled if bundled.exists() else p


def _load(path: str):
    """Parse an instance, translating failures into ``(None, exit_code)``."""
    try:
        return parse_instance(_resolve(path)), EXIT_OK
    except OSError as exc:
        print(f"{path}: cannot read: {exc.strerror or exc}", file=sys.stderr)
        return None, EXIT_IO
    except ParseError as exc:
        print(f"{path}: parse error: {exc}", file=sys.stderr)
        return None, EXIT_IO
    except ValidationError as exc:
        print(f"{path}: invalid instance ({len(exc.violations)} violations)", file=sys.stderr)
        for v in exc.violations[:20]:
            print(f"  {v}", file=sys.stderr)
        if len(exc.violations) > 20:
            print(f"  ... {len(exc.violations) - 20} more", file=sys.stderr)
        return None, EXIT_INVALID


def _sparse_map(vec, dim: int) -> str:
    """Nonzero entries of a column-stacked map as ``(row,col)=q``."""
    cells = [f"({i % dim},{i // dim})={format_rational(x)}" for i, x in enumerate(vec) if x]
    return " ".join(cells) if cells else "0"


def cmd_validate(args) -> int:
    code = EXIT_OK
    for path in args.files:
        sys_, rc = _load(path)
        if sys_ is not None:
            print(f"{path}: valid")
        code = max(code, rc)
    return code


def cmd_info(args) -> int:
    sys_, rc = _load(args.file)
    if sys_ is None:
        return rc
    t = build_triangular(sys_)
    print(f"instance {sys_.name}")
    print("dims: " + " ".join(f"{b}={d}" for b, d in sys_.dims.items()) + f" (T = {t.dim})")
    print(f"unital corners: {'yes' if sys_.is_unital else 'no'}")
    for b in ("A", "B", "C"):
        alg = sys_.component(b)
        print(f"{b}: dim {alg.dim}, center {center_dim(alg)}, H1 {h1_dim(alg)}")
    print(f"pairing: {'zero' if sys_.mu.is_zero else 'nonzero'}")
    return EXIT_OK


def cmd_der(args) -> int:
    sys_, rc = _load(args.file)
    if sys_ is None:
        return rc
    alg = build_triangular(sys_).algebra if args.target == "T" else sys_.component(args.target)
    der = derivation_space(alg)
    inn = inner_derivation_space(alg)
    print(f"target {args.target} (dim {alg.dim})")
    print(f"dim Der = {der.dim}")
    print(f"dim Inn = {inn.dim}")
    print(f"H1 = {der.dim - inn.dim}")
    print("basis of Der:")
    for k, f in enumerate(basis_maps(der, alg.dim)):
        print(f"  D{k}: {_sparse_map(f.to_vector(), alg.dim)}")
    return EXIT_OK


def cmd_hom(args) -> int:
    sys_, rc = _load(args.file)
    if sys_ is None:
        return rc
    mod = sys_.component(args.module)
    hom = hom_space(mod)
    zr = zr_space(mod)
    print(f"module {args.module} (dim {mod.dim})")
    print(f"dim Hom = {hom.dim}")
    print(f"dim ZR = {zr.dim}")
    print("basis of Hom:")
    for k, vec in enumerate(hom.vectors()):
        print(f"  phi{k}: {_sparse_map(vec, mod.dim)}")
    return EXIT_OK


def _verify_one(path: str):
    """Worker for ``verify``: ``(report dict or None, rendered text, exit code)``."""
    sys_, rc = _load(path)
    if sys_ is None:
        return None, "", rc
    report = verify_theorems(sys_)
    code = EXIT_OK if report.ok else EXIT_INVALID
    return report.to_dict(), render_report(report), code


def cmd_verify(args) -> int:
    if args.jobs > 1 and len(args.files) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_one, args.files))
    else:
        results = [_verify_one(p) for p in args.files]
    code = EXIT_OK
    reports = []
    for path, (data, text, rc) in zip(args.files, results):
        code = max(code, rc)
        if data is None:
            continue
        reports.append(data)
        if args.strict and data["verdicts"]["quotient_corrected"]["status"] == NA:
            print(f"{path}: precondition not applicable", file=sys.stderr)
            code = max(code, EXIT_NOT_APPLICABLE)
        if rc == EXIT_INVALID:
            failed = [k for k, v in data["verdicts"].items() if v["status"] == "fail" and k != "quotient_naive"]
            print(f"{path}: failed checks: {', '.join(failed)}", file=sys.stderr)
        if not args.json:
            print(text)
    if args.json and reports:
        payload = reports[0] if len(args.files) == 1 else reports
        print(json.dumps(payload, indent=2, sort_keys=True))
    return code


def cmd_gen(args) -> int:
    params = {}
    if args.dim is not None:
        params["dim"] = args.dim
    if args.k is not None:
        params["k"] = args.k
    if args.kinds is not None:
        params["kinds"] = tuple(args.kinds.split(","))
    if args.mu is not None:
        params["mu"] = args.mu
    try:
        sys_ = generate_instance(args.seed, args.preset, **params)
    except (TypeError, ValueError) as exc:
        print(f"gen: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.output in (None, "-"):
        sys.stdout.write(dumps_instance(sys_))
        return EXIT_OK
    try:
        write_instance(sys_, args.output)
    except OSError as exc:
        print(f"{args.output}: cannot write: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {args.output} ({sys_.name})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tri3", description="Exact derivation computations for order-three triangular algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and check instance files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("info", help="dimensions and corner data of an instance")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("der", help="derivations of T or of a corner algebra")
    p.add_argument("file")
    p.add_argument("--target", choices=("T", "A", "B", "C"), default="T")
    p.set_defaults(func=cmd_der)

    p = sub.add_parser("hom", help="bimodule maps and central Rosenblum operators of a module")
    p.add_argument("file")
    p.add_argument("--module", choices=("M", "N", "P"), required=True)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("verify", help="run every check and compare H1 readings")
    p.add_argument("files", nargs="+")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--strict", action="store_true", help="exit 2 when the H1 precondition does not apply")
    p.add_argument("--jobs", type=int, default=1, help="verify files in parallel")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a seeded catalog instance")
    p.add_argument("--preset", choices=sorted(PRESETS), required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dim", type=int, help="module dimension (scalar-towers)")
    p.add_argument("--k", type=int, help="matrix size (matrix-corner)")
    p.add_argument("--kinds", help="corner kinds such as Q,Q2,M2 (upper-tri-blocks)")
    p.add_argument("--mu", help="pairing mode of the preset")
    p.add_argument("-o", "--output", help="output path; stdout when omitted")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
