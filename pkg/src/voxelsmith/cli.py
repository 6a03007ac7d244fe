"""Command line: serve the API, replay transcripts, manage the house corpus.

Subcommands:
    serve          run the HTTP/websocket service
    replay         re-execute session transcripts and export metric CSVs
    filter-houses  keep houses whose voxel dimensions fall in a range
    gen-fixtures   write a procedural house corpus + catalog
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .config import Config, load_config
from .errors import VoxelsmithError
from .fixtures import filter_houses, read_catalog, write_fixture_corpus
from .generation import OffsetFrequencyModel, ProceduralModel, load_offset_params
from .metrics import (
    expressiveness_csv,
    expressiveness_curve,
    naturalization_csv,
    naturalization_curve,
)
from .naturalize import DefinitionStore, HashedEmbedder, seed_store
from .session import (
    SessionLog,
    classify_exchange,
    create_session,
    handle_utterance,
    load_log,
    provide_hint,
)
from .world import load_house

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT_ERROR = 2


def _parse_dims(text: str) -> tuple[int, int, int]:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected X,Y,Z")
    return (parts[0], parts[1], parts[2])


def _parse_sessions(text: str) -> frozenset[int]:
    return frozenset(int(p) for p in text.split(",") if p.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="voxelsmith", description=__doc__)
    parser.add_argument("--config", default=None, help="config JSON path "
                        "(or set VOXELSMITH_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flag(p: argparse.ArgumentParser) -> None:
        # accepted on the subcommand too; SUPPRESS keeps the top-level value
        p.add_argument("--config", default=argparse.SUPPRESS,
                       help="config JSON path (or set VOXELSMITH_CONFIG)")

    serve = sub.add_parser("serve", help="run the HTTP service")
    add_config_flag(serve)
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--host", default="127.0.0.1")

    replay = sub.add_parser("replay", help="re-execute transcripts, export CSVs")
    add_config_flag(replay)
    replay.add_argument("--logs", required=True, help="glob for session log files")
    replay.add_argument("--houses", required=True, help="directory of schematic houses")
    replay.add_argument("--out", required=True, help="output directory for CSVs")
    replay.add_argument("--sessions", type=_parse_sessions, default=frozenset({2, 3}))
    replay.add_argument("--full-expansion", action="store_true",
                        help="score expressiveness against executed leaves")
    replay.add_argument("--plot", action="store_true", help="also write curves.png")

    filt = sub.add_parser("filter-houses", help="filter the catalog by voxel dimensions")
    add_config_flag(filt)
    filt.add_argument("--houses", required=True)
    filt.add_argument("--min", type=_parse_dims, required=True, dest="min_dims", metavar="X,Y,Z")
    filt.add_argument("--max", type=_parse_dims, required=True, dest="max_dims", metavar="X,Y,Z")

    gen = sub.add_parser("gen-fixtures", help="write procedural houses + catalog")
    add_config_flag(gen)
    gen.add_argument("--out", required=True)
    gen.add_argument("--count", type=int, default=10)
    gen.add_argument("--seed", type=int, default=0)

    return parser


def cmd_serve(args, config: Config) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return EXIT_OK


def _build_model(config: Config):
    if config.default_model == "statistical" and config.offset_params_path:
        table = load_offset_params(Path(config.offset_params_path).read_text(encoding="utf-8"))
        return OffsetFrequencyModel(table)
    return ProceduralModel()


def replay_logs(
    log_paths: Sequence[Path],
    houses_dir: Path,
    config: Optional[Config] = None,
) -> tuple[list[SessionLog], list[str]]:
    """Re-execute transcripts against fresh sessions over one shared store.

    Returns the replayed logs (timestamps copied from the source so metric
    ordering is reproducible) and a list of classification mismatches.
    """
    config = config or Config()
    stored_logs = [load_log(p) for p in log_paths]
    stored_logs.sort(
        key=lambda lg: (min((e.started_at for e in lg.exchanges), default=0.0), lg.session_id)
    )
    store = seed_store(DefinitionStore(
        embedder=HashedEmbedder(dim=config.embed_dim),
        threshold=config.similarity_threshold,
    ))
    model = _build_model(config)

    replayed: list[SessionLog] = []
    mismatches: list[str] = []
    for stored in stored_logs:
        house_path = houses_dir / f"{stored.house_id}.json"
        if not house_path.exists():
            raise FileNotFoundError(f"house {stored.house_id!r} not found in {houses_dir}")
        grid = load_house(house_path.read_text(encoding="utf-8"))
        state = create_session(
            grid, store,
            house_id=stored.house_id,
            session_index=stored.session_index,
            model=model,
            config=config,
            session_id=stored.session_id,
        )
        for i, e in enumerate(stored.exchanges):
            _, state = handle_utterance(state, e.raw, e.cursor)
            for hint in e.hints:
                _, state = provide_hint(state, hint.cursor, hint.prompt)
            new = state.log.exchanges[-1]
            new = dataclasses.replace(new, started_at=e.started_at, finished_at=e.finished_at)
            state = dataclasses.replace(state, log=state.log.update(len(state.log.exchanges) - 1, new))
            if new.resolution != e.resolution or classify_exchange(new) != classify_exchange(e):
                mismatches.append(
                    f"{stored.session_id}[{i}] {e.raw!r}: stored "
                    f"{e.resolution.value}/{[c.value for c in classify_exchange(e)]}, replayed "
                    f"{new.resolution.value}/{[c.value for c in classify_exchange(new)]}"
                )
        replayed.append(state.log)
    return replayed, mismatches


def cmd_replay(args, config: Config) -> int:
    import glob as globlib

    log_paths = sorted(Path(p) for p in globlib.glob(args.logs))
    if not log_paths:
        print(f"no logs match {args.logs!r}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        replayed, mismatches = replay_logs(log_paths, Path(args.houses), config)
    except (FileNotFoundError, ValueError, VoxelsmithError) as e:
        print(f"replay failed: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    nat = naturalization_curve(replayed, args.sessions)
    expr = expressiveness_curve(replayed, args.sessions, full_expansion=args.full_expansion)
    (out_dir / "naturalization.csv").write_text(naturalization_csv(nat), encoding="utf-8")
    (out_dir / "expressiveness.csv").write_text(expressiveness_csv(expr), encoding="utf-8")
    if args.plot:
        _write_plot(out_dir / "curves.png", nat, expr)

    for m in mismatches:
        print(f"MISMATCH {m}", file=sys.stderr)
    final_induced = nat[-1].frac_induced if nat else 0.0
    print(f"replayed {len(replayed)} session(s); "
          f"{len(nat)} classified exchange(s); final induced fraction {final_induced:.4f}")
    return EXIT_MISMATCH if mismatches else EXIT_OK


def _write_plot(path: Path, nat, expr) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    if expr:
        ax1.plot([i for i, _ in expr], [m for _, m in expr], color="tab:blue")
    ax1.set_title("Expressiveness (running mean)")
    ax1.set_xlabel("exchange")
    if nat:
        xs = [p.exchange_index for p in nat]
        ax2.plot(xs, [p.frac_core for p in nat], label="core")
        ax2.plot(xs, [p.frac_induced for p in nat], label="induced")
        ax2.plot(xs, [p.frac_unparsable for p in nat], label="unparsable")
        ax2.legend()
    ax2.set_title("Cumulative utterance fractions")
    ax2.set_xlabel("exchange")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_filter_houses(args, _config: Config) -> int:
    try:
        catalog = read_catalog(Path(args.houses))
        kept = filter_houses(catalog, args.min_dims, args.max_dims)
    except (ValueError, FileNotFoundError) as e:
        print(f"filter-houses failed: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    for entry in kept:
        print(json.dumps({"house_id": entry.house_id, "path": entry.path,
                          "dims": list(entry.dims)}))
    print(f"{len(kept)} of {len(catalog)} house(s) within range", file=sys.stderr)
    return EXIT_OK


def cmd_gen_fixtures(args, _config: Config) -> int:
    entries = write_fixture_corpus(Path(args.out), count=args.count, seed=args.seed)
    print(f"wrote {len(entries)} house(s) to {args.out}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = load_config(args.config)
    command = {
        "serve": cmd_serve,
        "replay": cmd_replay,
        "filter-houses": cmd_filter_houses,
        "gen-fixtures": cmd_gen_fixtures,
    }[args.command]
    return command(args, config)


if __name__ == "__main__":
    sys.exit(main())
