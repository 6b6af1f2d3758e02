"""Command-line entry point: ``gauntlet <command> ...``.

Results go to stdout as tab-separated rows; ``--run-dir`` also stores
them so ``gauntlet report`` can render tables and figures later.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import bitstream
from .codecs import CodecId, CompressedBlob, compress, compression_ratio, decompress
from .diehard import PIECE_BYTES
from .errors import DecodeError, InvalidParameterError, StageError
from .pipeline import (SCHEMA_VERSION, CorpusManifest, ExternalInput, RunConfig, build,
                       load_config, run_diehard_file, run_experiment, run_nist_file,
                       summarize_diehard, summarize_nist, write_json)
from .report import diehard_objects, fmt, nist_objects, write_report


def _rows(rows, out=None) -> None:
    out = out or sys.stdout
    for row in rows:
        print("\t".join(fmt(c) for c in row), file=out)


def cmd_compress(args) -> int:
    data = Path(args.input).read_bytes()
    blob = compress(args.codec, data)
    Path(args.output).write_bytes(blob.to_bytes())
    ratio = compression_ratio(blob) if data else None
    _rows([["codec", "input_bytes", "payload_bytes", "ratio"],
           [blob.codec.value, len(data), len(blob.payload), ratio]])
    return 0


def cmd_decompress(args) -> int:
    blob = CompressedBlob.from_bytes(Path(args.input).read_bytes())
    Path(args.output).write_bytes(decompress(blob))
    _rows([["codec", "output_bytes"], [blob.codec.value, blob.original_len]])
    return 0


def cmd_build(args) -> int:
    config = RunConfig(skip_bytes=args.skip, seq_len_bits=args.seq_bits,
                       piece_bytes=args.piece_bytes)
    if args.external:
        source = ExternalInput(args.label or Path(args.external).name, args.external)
        manifest = source.manifest()
    else:
        if not args.corpus or not args.codec:
            raise InvalidParameterError("build needs --corpus and --codec, or --external")
        manifest = CorpusManifest.from_directory(args.corpus)
        source = CodecId.parse(args.codec)
    built = build(manifest, source, config)
    Path(args.output).write_bytes(built.data)
    s = built.summary(config)
    _rows([["file", "input_bytes", "encoded_bytes", "kept_bytes", "proportion_difference"]]
          + [[f["path"], f["input_bytes"], f["encoded_bytes"], f["kept_bytes"],
              f["proportion_difference"]] for f in s["files"]])
    _rows([["label", "test_bytes", "sequences", "pieces", "compression_ratio"],
           [built.label, s["test_bytes"], s["sequences"], s["pieces"], s["compression_ratio"]]])
    return 0


def _store_section(run_dir, label: str, section: str, value: dict) -> None:
    path = Path(run_dir) / "files" / f"{label}.json"
    if path.exists():
        record = json.loads(path.read_text(encoding="utf-8"))
    else:
        record = {"schema": SCHEMA_VERSION, "label": label, "status": "ok", "error": None,
                  "source": {"kind": "file"}, "build": None, "nist": None, "diehard": None}
    record[section] = value
    write_json(path, record)


def _print_objects(objs: list[dict], extra: tuple[str, ...] = ()) -> None:
    cols = ["test", "proportion", "min_pass_rate", "uniformity_chi2", "uniformity_p",
            "verdict", *extra]
    _rows([cols] + [[o[c] for c in cols] for o in objs])


def cmd_nist(args) -> int:
    config = RunConfig(codecs=(), seq_len_bits=args.seq_bits, alpha=args.alpha,
                       workers=args.workers, nist_tests=args.tests)
    data = Path(args.file).read_bytes()
    if bitstream.sequence_count(len(data), config.seq_len_bits) == 0:
        raise InvalidParameterError(f"{args.file} is shorter than one {args.seq_bits}-bit sequence")
    section = summarize_nist(run_nist_file(data, config), config)
    label = args.label or Path(args.file).stem
    _print_objects(nist_objects({"nist": section}))
    if args.run_dir:
        _store_section(args.run_dir, label, "nist", section)
    return 0


def cmd_diehard(args) -> int:
    config = RunConfig(codecs=(), piece_bytes=args.piece_bytes, workers=args.workers,
                       diehard_tests=args.tests)
    data = Path(args.file).read_bytes()
    if bitstream.piece_count(len(data), config.piece_bytes) == 0:
        raise InvalidParameterError(f"{args.file} is shorter than one {args.piece_bytes}-byte piece")
    section = summarize_diehard(run_diehard_file(data, config), config)
    label = args.label or Path(args.file).stem
    _print_objects(diehard_objects({"diehard": section}), ("worst_case", "score", "max_score"))
    if args.run_dir:
        _store_section(args.run_dir, label, "diehard", section)
    return 0


def cmd_report(args) -> int:
    report = write_report(args.run_dir)
    rows = [["label", "kind", "test", "verdict", "proportion", "uniformity_p"]]
    for label, entry in report["files"].items():
        if entry["status"] != "ok":
            rows.append([label, "aborted", entry["error"]["stage"], entry["error"]["message"],
                         None, None])
            continue
        for kind in ("nist", "diehard"):
            for o in entry[kind]:
                rows.append([label, kind, o["test"], o["verdict"], o["proportion"],
                             o["uniformity_p"]])
    _rows(rows)
    return 0


def cmd_run(args) -> int:
    config = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    if args.corpus:
        overrides["corpus"] = args.corpus
    if args.codec:
        overrides["codecs"] = tuple(args.codec)
    if args.external:
        overrides["externals"] = tuple(args.external)
    if args.workers:
        overrides["workers"] = args.workers
    if overrides:
        config = replace(config, **overrides)
    if config.corpus is None and not args.codec:
        config = replace(config, codecs=())
    run_experiment(config, args.run_dir)
    return cmd_report(argparse.Namespace(run_dir=args.run_dir))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gauntlet",
                                description="Randomness testing of compressor output.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compress", help="compress one file into the container format")
    c.add_argument("codec", choices=[x.value for x in CodecId])
    c.add_argument("input")
    c.add_argument("output")
    c.set_defaults(func=cmd_compress)

    c = sub.add_parser("decompress", help="decode a container file")
    c.add_argument("input")
    c.add_argument("output")
    c.set_defaults(func=cmd_decompress)

    c = sub.add_parser("build", help="assemble a test file from a corpus")
    c.add_argument("--corpus")
    c.add_argument("--codec", choices=[x.value for x in CodecId])
    c.add_argument("--external", help="pre-compressed file or directory instead of a codec")
    c.add_argument("--label")
    c.add_argument("--skip", type=int, default=bitstream.DEFAULT_SKIP_BYTES)
    c.add_argument("--seq-bits", type=int, default=2 ** 20)
    c.add_argument("--piece-bytes", type=int, default=PIECE_BYTES)
    c.add_argument("-o", "--output", required=True)
    c.set_defaults(func=cmd_build)

    c = sub.add_parser("nist", help="run the NIST battery on a test file")
    c.add_argument("file")
    c.add_argument("--seq-bits", type=int, default=2 ** 20)
    c.add_argument("--alpha", type=float, default=0.01)
    c.add_argument("--tests", nargs="+")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--label")
    c.add_argument("--run-dir")
    c.set_defaults(func=cmd_nist)

    c = sub.add_parser("diehard", help="run the Diehard battery on a test file")
    c.add_argument("file")
    c.add_argument("--piece-bytes", type=int, default=PIECE_BYTES)
    c.add_argument("--tests", nargs="+")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--label")
    c.add_argument("--run-dir")
    c.set_defaults(func=cmd_diehard)

    c = sub.add_parser("report", help="render tables and figures for a run directory")
    c.add_argument("run_dir")
    c.set_defaults(func=cmd_report)

    c = sub.add_parser("run", help="build and test every configured test file")
    c.add_argument("--config", help="key = value file mirroring the run settings")
    c.add_argument("--corpus")
    c.add_argument("--codec", nargs="+", choices=[x.value for x in CodecId])
    c.add_argument("--external", nargs="+", help="label:path entries")
    c.add_argument("--workers", type=int)
    c.add_argument("--run-dir", required=True)
    c.set_defaults(func=cmd_run)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidParameterError, StageError, DecodeError, OSError, ValueError) as exc:
        print(f"gauntlet: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
