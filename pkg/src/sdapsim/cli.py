"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys

from . import __version__
from .codec import DC, SdapHeader, decode_sdap, encode_sdap
from .config import load_scenario
from .errors import ConfigError, QfiOutOfRange
from .sim import run_scenario
from .validation import format_checklist, run_checklist

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class ParseError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(args):
    config = load_scenario(args.scenario)
    return config.with_overrides(seed=args.seed, sdap_enabled=False if args.no_sdap else None)


def cmd_run(args):
    config = _load(args)
    report = run_scenario(config)
    report.write(args.out)
    print(report.summary(), end="")
    print(f"wrote {args.out}/events.log, {args.out}/stats.csv, {args.out}/summary.txt")
    return EXIT_OK


def cmd_validate(args):
    config = _load(args)
    _, results = run_checklist(config)
    print(format_checklist(results), end="")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


_HEX = re.compile(r"^(0x)?([0-9a-fA-F]{2})$")
_DC_NAMES = {"data": DC.DATA, "control": DC.CONTROL, "1": DC.DATA, "0": DC.CONTROL}
_BOOL_NAMES = {"true": True, "false": False, "1": True, "0": False}


def codec_convert(text):
    """``"0x85"`` -> ``"dc=Data rqi=false qfi=5"``; ``"Data,false,5"`` -> ``"0x85"``."""
    text = text.strip()
    m = _HEX.match(text)
    if m:
        h = decode_sdap(bytes.fromhex(m.group(2)))
        return f"dc={h.dc} rqi={str(h.rqi).lower()} qfi={h.qfi}"
    parts = [p.strip().lower() for p in text.split(",")]
    if len(parts) != 3:
        raise ParseError(f"expected a hex byte like 0x85 or a dc,rqi,qfi triple, got {text!r}")
    dc, rqi, qfi = parts
    if dc not in _DC_NAMES:
        raise ParseError(f"dc must be Data or Control, got {dc!r}")
    if rqi not in _BOOL_NAMES:
        raise ParseError(f"rqi must be true or false, got {rqi!r}")
    try:
        header = SdapHeader(dc=_DC_NAMES[dc], rqi=_BOOL_NAMES[rqi], qfi=int(qfi))
    except (ValueError, QfiOutOfRange) as exc:
        raise ParseError(f"qfi must be an integer in [0, 63], got {qfi!r}") from exc
    return f"0x{encode_sdap(header)[0]:02X}"


def cmd_codec(args):
    try:
        print(codec_convert(args.value))
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_version(args):
    print(f"sdapsim {__version__}")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="sdapsim", description="SDAP user-plane simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def scenario_args(p):
        p.add_argument("--scenario", required=True,
                       help="scenario .ini file, or the name of a bundled one (table1_scenario.ini, table2_compare.ini)")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--no-sdap", action="store_true", help="force sdap_enabled = false")

    p = sub.add_parser("run", help="run a scenario and write events.log, stats.csv and summary.txt")
    scenario_args(p)
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate", help="run the seven-point SDAP functional checklist")
    scenario_args(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("codec", help="decode a hex SDAP byte or encode a dc,rqi,qfi triple")
    p.add_argument("value")
    p.set_defaults(func=cmd_codec)

    p = sub.add_parser("version", help="print the version")
    p.set_defaults(func=cmd_version)
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
