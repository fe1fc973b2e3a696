"""Command line client for the representation service.

By default requests are served in process through an ASGI transport, so the
CLI works without a running server; ``--url`` points it at a remote instance
instead.  Output is canonical JSON (sorted keys, two-space indent) or the
markdown rendering of the same payload, with nothing time- or host-dependent,
so identical invocations produce identical bytes.

Exit codes: 0 success, 1 a check ran and failed, 2 invalid input, 3 search
budget exhausted.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import httpx

from .reports import render_markdown

GROUPS = {"b": "B", "vb": "VB", "mvb": "MkVB", "mwb": "MkWB", "mub": "MkUB"}

ANALYZE_CHECKS = ("irreducible", "invariant", "witness", "forbidden")
LKB_CHECKS = ("matrices", "relations", "t1", "irreducible", "witness")
LKB_VARIANTS = ("full", "welded", "m2wb3")


class UsageError(Exception):
    pass


def parse_params(text: Optional[str]) -> dict[str, str]:
    """Split "b=2,c=1" into {"b": "2", "c": "1"}; values stay strings."""
    out: dict[str, str] = {}
    if not text:
        return out
    for piece in text.split(","):
        name, sep, value = piece.partition("=")
        name = name.strip()
        if not sep or not name or not value.strip():
            raise UsageError(f"bad parameter {piece!r}; expected name=value")
        out[name] = value.strip()
    return out


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation sends: endpoint path plus request body."""

    command: str
    body: dict = field(default_factory=dict)
    fmt: str = "json"
    url: Optional[str] = None
    timeout: float = 600.0

    @property
    def path(self) -> str:
        return f"/{self.command}"


def _group(selector: str) -> str:
    try:
        return GROUPS[selector]
    except KeyError:
        raise UsageError(
            f"unknown group {selector!r}; pick one of {', '.join(GROUPS)}"
        ) from None


def config_from_args(args: argparse.Namespace) -> RunConfig:
    body: dict = {}
    if args.command == "present":
        body = {
            "group": _group(args.group),
            "n": args.n,
            "k": args.k,
            "show_forbidden": args.show_forbidden,
        }
    elif args.command == "classify":
        group = _group(args.group)
        if group not in ("MkVB", "MkWB"):
            raise UsageError("classification covers the mvb and mwb groups")
        body = {"group": group, "k": args.k, "cap": args.cap}
    elif args.command == "verify":
        body = {
            "family": args.family,
            "n": args.n,
            "params": parse_params(args.params),
        }
        if args.k is not None:
            body["k"] = args.k
        if args.threads is not None:
            body["threads"] = args.threads
    elif args.command == "analyze":
        body = {
            "family": args.family,
            "n": args.n,
            "params": parse_params(args.params),
            "check": args.check,
            "samples": args.samples,
            "seed": args.seed,
            "length": args.length,
            "budget": args.budget,
        }
        if args.k is not None:
            body["k"] = args.k
        if args.conjugate is not None:
            body["conjugate"] = args.conjugate
        if args.threads is not None:
            body["threads"] = args.threads
    elif args.command == "lkb":
        body = {
            "variant": args.variant,
            "n": args.n,
            "check": args.check,
            "params": parse_params(args.params),
            "length": args.length,
            "budget": args.budget,
        }
        if args.threads is not None:
            body["threads"] = args.threads
    else:
        raise UsageError(f"unknown command {args.command!r}")
    return RunConfig(
        command=args.command,
        body=body,
        fmt=args.format,
        url=args.url,
        timeout=args.timeout,
    )


async def _post(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.url:
        async with httpx.AsyncClient(
            base_url=cfg.url, timeout=cfg.timeout
        ) as client:
            response = await client.post(cfg.path, json=cfg.body)
            return response.status_code, response.json()
    from .service.app import create_app

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(
        transport=transport,
        base_url="http://braidrep.internal",
        timeout=cfg.timeout,
    ) as client:
        response = await client.post(cfg.path, json=cfg.body)
        return response.status_code, response.json()


def call_service(cfg: RunConfig) -> tuple[int, dict]:
    return asyncio.run(_post(cfg))


def _success_exit_code(payload: dict) -> int:
    command = payload.get("command")
    if command == "classify":
        return 0 if payload["bijective"] else 1
    if command == "verify":
        return 0 if payload["ok"] else 1
    if command == "lkb":
        check = payload.get("check")
        if check == "relations":
            return 0 if payload["ok"] else 1
        if check == "t1":
            return 0 if payload["equal"] else 1
    return 0


def _canonical(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _render(payload: dict, fmt: str) -> str:
    if fmt == "markdown":
        return render_markdown(payload)
    return _canonical(payload) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="braidrep",
        description="Local representations of multi-virtual and multi-welded "
        "braid groups: presentations, classification, verification, analysis.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "markdown"), default="json",
        help="output rendering (default json)",
    )
    common.add_argument(
        "--url", default=None,
        help="base URL of a running service; default runs in process",
    )
    common.add_argument(
        "--timeout", type=float, default=600.0,
        help="request timeout in seconds",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "present", parents=[common],
        help="list generators and defining relations",
    )
    p.add_argument("--group", required=True, help="b, vb, mvb, mwb, or mub")
    p.add_argument("-n", type=int, required=True, help="strand count")
    p.add_argument("-k", type=int, default=1, help="number of rho families")
    p.add_argument(
        "--show-forbidden", action="store_true",
        help="also list the moves the group does not impose",
    )

    p = sub.add_parser(
        "classify", parents=[common],
        help="solve the n=3 block system and match branches to the catalog",
    )
    p.add_argument("--group", required=True, help="mvb or mwb")
    p.add_argument("-k", type=int, required=True, help="number of rho families")
    p.add_argument("--cap", type=int, default=10000,
                   help="solver node budget")

    p = sub.add_parser(
        "verify", parents=[common],
        help="check a catalog family against its group's relations",
    )
    p.add_argument("--family", required=True, help="catalog name, e.g. beta7")
    p.add_argument("-n", type=int, required=True, help="strand count")
    p.add_argument("-k", type=int, default=None, help="expected rho families")
    p.add_argument("--params", default=None,
                   help="comma-separated substitutions, e.g. b=2,c=1")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default BRAIDREP_THREADS or 1)")

    p = sub.add_parser(
        "analyze", parents=[common],
        help="irreducibility, invariant vectors, kernel witnesses, audits",
    )
    p.add_argument("--family", required=True)
    p.add_argument("-n", type=int, default=3)
    p.add_argument("-k", type=int, default=None)
    p.add_argument("--params", default=None)
    p.add_argument("--check", choices=ANALYZE_CHECKS, default="irreducible")
    p.add_argument("--conjugate", default=None, metavar="VALUE",
                   help="conjugate by the geometric diagonal of VALUE first")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--length", type=int, default=6,
                   help="maximum witness word length")
    p.add_argument("--budget", type=int, default=20000,
                   help="witness search node budget")
    p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser(
        "lkb", parents=[common],
        help="Lawrence-Krammer-Bigelow matrices and their welded extension",
    )
    p.add_argument("--variant", choices=LKB_VARIANTS, default="full")
    p.add_argument("-n", type=int, default=3)
    p.add_argument("--check", choices=LKB_CHECKS, default="relations")
    p.add_argument("--params", default=None,
                   help="numeric sample overrides for --check irreducible")
    p.add_argument("--length", type=int, default=6)
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        uvicorn.run("braidrep.service.app:app", host=args.host, port=args.port)
        return 0

    try:
        cfg = config_from_args(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        status, payload = call_service(cfg)
    except httpx.HTTPError as exc:
        print(f"error: request failed: {exc}", file=sys.stderr)
        return 2

    if status != 200:
        print(_canonical(payload), file=sys.stderr)
        error = payload.get("error") if isinstance(payload, dict) else None
        if isinstance(error, dict):
            return int(error.get("exit_code", 2))
        return 2

    sys.stdout.write(_render(payload, cfg.fmt))
    return _success_exit_code(payload)


if __name__ == "__main__":
    sys.exit(main())
