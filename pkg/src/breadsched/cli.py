"""Command-line client for the benchmark service.

Every subcommand goes over HTTP. Without --server the FastAPI app is mounted
in-process through httpx's ASGI transport, so local runs and a remote
`--server http://host:8000` behave identically. Errors come back as one JSON
line on stderr and a nonzero exit code.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

ENDPOINTS = {
    "generate": "/generate",
    "tune": "/tune",
    "train": "/train",
    "predict": "/predict",
    "crossval": "/crossval",
    "learning-curve": "/learning-curve",
    "compare": "/compare",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="breadsched",
        description="Breadmaker scheduling simulator and preference-learning benchmarks.",
    )
    parser.add_argument("--config", help="INI file overriding built-in defaults")
    parser.add_argument("--seed", type=int, default=0, help="master seed (fans out per stage)")
    parser.add_argument(
        "--grid-stride", type=int, default=None,
        help="stride over the height axes of the hypothesis grid (default from config)",
    )
    parser.add_argument(
        "--full-grid", action="store_true",
        help="use the full hypothesis grid (stride 1; 40M hypotheses)",
    )
    parser.add_argument("--out", default="out", help="output directory for artifacts")
    parser.add_argument(
        "--server", default=None,
        help="base URL of a running service; default runs the service in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="simulate a household and write the dataset CSV")
    p.add_argument("--volatility", default="medium", choices=["low", "medium", "high"])
    p.add_argument("--days", type=int, default=400)

    p = sub.add_parser("tune", help="sweep (beta, gamma) by sequential prediction")
    p.add_argument("--data", required=True, help="dataset CSV")

    p = sub.add_parser("train", help="train the learner and save a table snapshot")
    p.add_argument("--data", required=True)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--all", action="store_true", dest="use_all",
                   help="train on every run instead of the training share")

    p = sub.add_parser("predict", help="predict finish times from a saved snapshot")
    p.add_argument("--data", required=True)
    p.add_argument("--snapshot", required=True)
    p.add_argument("--split", default="holdout", choices=["holdout", "train", "all"])

    p = sub.add_parser("crossval", help="tune on folds, score every method on the hold-out")
    p.add_argument("--data", required=True)

    p = sub.add_parser("learning-curve", help="hold-out MAE over random training subsets")
    p.add_argument("--data", required=True)
    p.add_argument("--sizes", default=None,
                   help="comma-separated subset sizes, e.g. 10,25,50,100")
    p.add_argument("--repeats", type=int, default=None)

    p = sub.add_parser("compare", help="train on medium, score all three volatilities")
    p.add_argument("--low", required=True)
    p.add_argument("--medium", required=True)
    p.add_argument("--high", required=True)
    p.add_argument("--extra-results", action="append", default=[],
                   help="results CSV to merge (repeatable)")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _grid_stride(args: argparse.Namespace) -> int | None:
    return 1 if args.full_grid else args.grid_stride


def _payload(args: argparse.Namespace) -> dict:
    payload = {
        "config": args.config,
        "out": args.out,
        "seed": args.seed,
        "grid_stride": _grid_stride(args),
    }
    if args.command == "generate":
        payload.update(volatility=args.volatility, days=args.days)
    elif args.command in ("tune", "crossval"):
        payload.update(data=args.data)
    elif args.command == "train":
        payload.update(data=args.data, beta=args.beta, gamma=args.gamma,
                       use_all=args.use_all)
    elif args.command == "predict":
        payload.update(data=args.data, snapshot=args.snapshot, split=args.split)
    elif args.command == "learning-curve":
        sizes = None
        if args.sizes:
            try:
                sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
            except ValueError:
                raise SystemExit(_fail({"error": f"bad --sizes value: {args.sizes!r}"}))
        payload.update(data=args.data, sizes=sizes, repeats=args.repeats)
    elif args.command == "compare":
        payload.update(low=args.low, medium=args.medium, high=args.high,
                       extra_results=args.extra_results)
    return payload


async def _post(server: str | None, endpoint: str, payload: dict) -> httpx.Response:
    if server:
        async with httpx.AsyncClient(base_url=server, timeout=None) as client:
            return await client.post(endpoint, json=payload)
    from .service import create_app

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(
        transport=transport, base_url="http://breadsched", timeout=None
    ) as client:
        return await client.post(endpoint, json=payload)


def _fail(detail: dict) -> int:
    print(json.dumps(detail), file=sys.stderr)
    return 1


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0
    try:
        response = asyncio.run(_post(args.server, ENDPOINTS[args.command], _payload(args)))
    except httpx.HTTPError as exc:
        return _fail({"error": f"{type(exc).__name__}: {exc}"})
    if response.status_code != 200:
        try:
            detail = response.json()
        except ValueError:
            detail = {"error": response.text}
        return _fail(detail if isinstance(detail, dict) else {"error": detail})
    print(json.dumps(response.json(), indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
