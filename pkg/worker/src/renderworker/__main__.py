"""Run the worker under uvicorn: python3 -m renderworker --port 9090"""

from __future__ import annotations

import argparse

import uvicorn

from .config import WorkerConfig
from .service import create_app


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(prog="renderworker")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=9090)
    parser.add_argument("--model", default="stub")
    parser.add_argument("--model-path", default=None)
    parser.add_argument("--lora-path", default=None)
    parser.add_argument("--lora-weight", type=float, default=0.8)
    parser.add_argument("--wire-dir", default=None)
    args = parser.parse_args(argv)

    config = WorkerConfig(
        model=args.model,
        model_path=args.model_path,
        lora_path=args.lora_path,
        lora_weight=args.lora_weight,
    )
    uvicorn.run(create_app(config, wire_dir=args.wire_dir), host=args.host, port=args.port)


if __name__ == "__main__":
    main()
