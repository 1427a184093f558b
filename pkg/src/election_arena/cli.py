"""Command line front end.

The CLI is a thin client over the HTTP service. By default it mounts the
application in-process (no socket, no separate server), so `election-arena run`
works out of the box; pass --server to point the same commands at a remote
deployment instead.

Exit codes: 0 when the run settled and every live node agrees (and, for
verify/table, the counts match the formulas), 1 for unreadable input or
precondition failures, 2 when the simulation misbehaved or a count mismatched.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import sys
from typing import Any, Optional, Sequence

import httpx


class CliError(Exception):
    """A failure that should abort the command with a specific exit code."""

    def __init__(self, message: str, exit_code: int = 1):
        super().__init__(message)
        self.exit_code = exit_code


class ServiceClient:
    """Posts requests either to an in-process app or a remote server."""

    def __init__(self, server: Optional[str] = None):
        self.server = server

    def _make_client(self) -> httpx.AsyncClient:
        if self.server is None:
            from .service.app import create_app

            transport = httpx.ASGITransport(app=create_app())
            return httpx.AsyncClient(
                transport=transport,
                base_url="http://election-arena.internal",
                timeout=httpx.Timeout(300.0),
            )
        return httpx.AsyncClient(base_url=self.server, timeout=httpx.Timeout(300.0))

    def post(self, path: str, payload: dict) -> dict:
        async def _go() -> httpx.Response:
            async with self._make_client() as client:
                return await client.post(path, json=payload)

        try:
            response = asyncio.run(_go())
        except httpx.HTTPError as exc:
            raise CliError(f"request failed: {exc}") from exc
        if response.status_code in (400, 422):
            raise CliError(_detail_text(response))
        if response.status_code != 200:
            raise CliError(f"server returned HTTP {response.status_code}")
        return response.json()


def _detail_text(response: httpx.Response) -> str:
    try:
        detail = response.json().get("detail")
    except ValueError:
        return response.text
    if isinstance(detail, str):
        return detail
    return str(detail)


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _fmt(value: Any) -> str:
    return "none" if value is None else str(value)


def _bool_word(value: bool) -> str:
    return "true" if value else "false"


def _render_columns(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> list[str]:
    table = [list(map(str, header))] + [[_fmt(cell) for cell in row] for row in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = []
    for row in table:
        lines.append("  ".join(cell.rjust(widths[i]) for i, cell in enumerate(row)))
    return lines


def cmd_run(args: argparse.Namespace) -> int:
    text = _read_text(args.scenario)
    client = ServiceClient(args.server)
    data = client.post("/simulate", {"scenario": text, "include_trace": True})
    if args.trace is not None:
        try:
            with open(args.trace, "w", encoding="utf-8") as fh:
                for line in data["trace"]:
                    fh.write(line + "\n")
        except OSError as exc:
            raise CliError(f"cannot write {args.trace}: {exc.strerror or exc}") from exc
    stats = data["stats"]
    print(
        "coordinator={} messages={} crosscheck={} depth={} quiescence={}".format(
            _fmt(data["coordinator"]),
            stats["headline_total"],
            stats["crosscheck"],
            _fmt(stats["critical_path_depth"]),
            _fmt(data["quiescence_time"]),
        )
    )
    if data["agreement"]:
        print("ok: {}".format(data["agreement_reason"]))
        return 0
    print("FAIL: {}".format(data["agreement_reason"]))
    return 2


def _parse_sizes(raw: str) -> list[int]:
    sizes = []
    for chunk in raw.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            value = int(chunk)
        except ValueError:
            raise CliError(f"bad size {chunk!r}: expected an integer") from None
        if value < 1:
            raise CliError(f"bad size {value}: cluster sizes start at 1")
        sizes.append(value)
    if not sizes:
        raise CliError("no sizes given")
    return sizes


def cmd_table(args: argparse.Namespace) -> int:
    sizes = _parse_sizes(args.sizes)
    client = ServiceClient(args.server)
    data = client.post("/table", {"sizes": sizes})
    rows = data["rows"]

    body = [
        [
            r["n"],
            r["p"],
            r["algorithm"],
            r["simulated"],
            r["analytic"],
            r["crosscheck"],
            _bool_word(r["match"]),
            r["critical_path_depth"],
        ]
        for r in rows
    ]
    header = ["N", "P", "algorithm", "simulated", "analytic", "crosscheck", "match", "depth"]
    for line in _render_columns(header, body):
        print(line)

    print()
    print("worst case messages:")
    worst_rows = [
        [w["n"], w["classic"], w["modified_published"], w["modified_derived"]]
        for w in data["worst_case"]
    ]
    for line in _render_columns(["N", "classic", "modified(published)", "modified(derived)"], worst_rows):
        print(line)
    print("note: {}".format(data["worst_case_note"]))

    print()
    print("concurrent initiators:")
    conc_rows = [[c["n"], c["classic"], c["modified"]] for c in data["concurrent"]]
    for line in _render_columns(["N", "classic", "modified"], conc_rows):
        print(line)
    print("note: {}".format(data["concurrent_note"]))

    if args.csv is not None:
        try:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(
                    ["N", "P", "algorithm", "simulated", "analytic",
                     "crosscheck", "match", "critical_path_depth"]
                )
                for r in rows:
                    writer.writerow([
                        r["n"],
                        r["p"],
                        r["algorithm"],
                        r["simulated"],
                        r["analytic"],
                        r["crosscheck"],
                        _bool_word(r["match"]),
                        _fmt(r["critical_path_depth"]) if r["critical_path_depth"] is not None else "",
                    ])
        except OSError as exc:
            raise CliError(f"cannot write {args.csv}: {exc.strerror or exc}") from exc

    return 0 if all(r["match"] for r in rows) else 2


def cmd_verify(args: argparse.Namespace) -> int:
    text = _read_text(args.scenario)
    client = ServiceClient(args.server)
    data = client.post("/verify", {"scenario": text})
    print(
        "algorithm={} live={} detector={}".format(
            data["algorithm"], data["live_count"], data["detector_rank"]
        )
    )
    print(
        "simulated={} analytic={} crosscheck={} match={}".format(
            data["simulated"],
            data["analytic"],
            data["crosscheck"],
            _bool_word(data["match"]),
        )
    )
    for note in data["notes"]:
        print(f"note: {note}")
    return 0 if data["match"] else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="election-arena",
        description="Simulate leader elections and check message counts against formulas.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario file")
    p_run.add_argument("scenario", help="path to a scenario file")
    p_run.add_argument("--trace", help="write the event trace to this file")
    p_run.add_argument("--server", help="base URL of a running service (default: in-process)")
    p_run.set_defaults(func=cmd_run)

    p_table = sub.add_parser("table", help="compare simulated and analytic counts")
    p_table.add_argument("--sizes", required=True, help="comma separated cluster sizes, e.g. 5,10,15")
    p_table.add_argument("--csv", help="also write the comparison rows to this CSV file")
    p_table.add_argument("--server", help="base URL of a running service (default: in-process)")
    p_table.set_defaults(func=cmd_table)

    p_verify = sub.add_parser("verify", help="check one scenario against the closed-form count")
    p_verify.add_argument("scenario", help="path to a scenario file")
    p_verify.add_argument("--server", help="base URL of a running service (default: in-process)")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def entrypoint() -> None:
    sys.exit(main())
