"""Command line entry point.

Exit codes: 0 ok, 2 unreadable or invalid request, 3 example mismatch,
4 Weyl group larger than the configured cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .golden import EXAMPLES, run_example
from .representation import RepresentationError
from .request import RequestError, parse_request, run_request
from .root_datum import WeylCapExceeded

EXIT_OK, EXIT_PARSE, EXIT_MISMATCH, EXIT_CAP = 0, 2, 3, 4


def dumps(obj: Any) -> str:
    """Canonical report text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _parse_xi0(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--xi0 expects comma-separated integers, got {text!r}") from None


def _load(path: str, xi0: Optional[List[int]], analyses: Optional[Sequence[str]]):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise RequestError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        return parse_request(text)          # reports line and column
    if isinstance(doc, dict):
        opts = doc.setdefault("options", {})
        if xi0 is not None:
            opts.pop("xi0_ambient", None)
            opts["xi0"] = xi0
        if analyses is not None:
            opts["analyses"] = list(analyses)
    return parse_request(doc)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coulomb-weyl", description="Weyl-descent data for quaternionic representations")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, what in (("analyze", "run every analysis"), ("cocycles", "Weyl cocycles and their exactness"),
                       ("identities", "section identities over all Weyl pairs")):
        sp = sub.add_parser(name, help=what)
        sp.add_argument("file", help="request document (JSON)")
        sp.add_argument("--xi0", type=_parse_xi0, default=None,
                        help="regular coweight in lattice coordinates, e.g. 9,1 (default: lexicographic choice)")
    ex = sub.add_parser("example", help="run a stored example and compare with its expectations")
    ex.add_argument("name", choices=sorted(EXAMPLES))
    sub.add_parser("list-examples", help="list stored examples")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "list-examples":
            out.write(dumps({k: EXAMPLES[k].title for k in sorted(EXAMPLES)}))
            return EXIT_OK
        if args.command == "example":
            report, failures = run_example(args.name)
            out.write(dumps(report))
            for f in failures:
                print(f"mismatch in {args.name}: {f['check']}: expected {f['expected']!r}, got {f['actual']!r}",
                      file=sys.stderr)
            return EXIT_MISMATCH if failures else EXIT_OK
        analyses = None if args.command == "analyze" else [args.command]
        req = _load(args.file, args.xi0, analyses)
        report: Dict[str, Any] = run_request(req)
        if analyses:
            report = {k: v for k, v in report.items() if k in ("group", "representation", "xi0", args.command)}
        out.write(dumps(report))
        return EXIT_OK
    except (RequestError, RepresentationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WeylCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
