"""Corpus to test file to battery results.

A *test file* is what the batteries see: every corpus file is compressed
on its own (or taken as-is from an external pre-compressed input), its
first ``skip_bytes`` are dropped, and the remainders are concatenated in
lexicographic path order.  The test file is then cut into NIST sequences
and Diehard pieces.

Each test file's results are a plain JSON-ready dict so that reports can
be regenerated from a run directory without re-running anything.
"""

from __future__ import annotations

import json
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import bitstream
from .bitstream import BitSequence, DEFAULT_SKIP_BYTES
from .codecs import CodecId, compress
from .diehard import DiehardTestId, IMPLEMENTED_TESTS, PIECE_BYTES, run_diehard, worst_case
from .errors import InvalidParameterError, StageError, UndefinedRatioError
from .evaluation import DEFAULT_SCORE_RULE, max_score, meysenburg_score, nist_verdict, uniformity
from .nist import ALL_TESTS as NIST_TESTS
from .nist import NistParams, NistTestId, run_test
from .outcome import TestOutcome

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CorpusManifest:
    name: str
    files: tuple[tuple[str, int], ...]
    notes: str = ""

    @property
    def paths(self) -> list[str]:
        return [p for p, _ in self.files]

    @classmethod
    def from_paths(cls, paths: Iterable, name: str = "corpus", notes: str = "") -> "CorpusManifest":
        entries = []
        for p in sorted(os.fspath(p) for p in paths):
            try:
                entries.append((p, os.path.getsize(p)))
            except OSError as exc:
                raise StageError("manifest", p, exc.strerror or exc) from exc
        return cls(name, tuple(entries), notes)

    @classmethod
    def from_directory(cls, root, name: str | None = None) -> "CorpusManifest":
        """All regular files under ``root``, recursively, in lexicographic order."""
        root = Path(root)
        if not root.is_dir():
            raise StageError("manifest", root, "not a directory")
        found = [p for p in root.rglob("*") if p.is_file()]
        found.sort(key=lambda p: p.relative_to(root).as_posix())
        entries = tuple((str(p), p.stat().st_size) for p in found)
        return cls(name or root.name, entries)


@dataclass(frozen=True)
class ExternalInput:
    """Pre-compressed data from some other tool; a file or a directory of files."""

    label: str
    path: str

    @classmethod
    def parse(cls, text: str) -> "ExternalInput":
        label, sep, path = text.partition(":")
        if not sep or not label or not path:
            raise InvalidParameterError(f"external input must be label:path, got {text!r}")
        return cls(label, path)

    def manifest(self) -> CorpusManifest:
        if os.path.isdir(self.path):
            return CorpusManifest.from_directory(self.path, self.label)
        return CorpusManifest.from_paths([self.path], self.label)


@dataclass(frozen=True)
class RunConfig:
    corpus: str | None = None
    codecs: tuple[CodecId, ...] = tuple(CodecId)
    externals: tuple[ExternalInput, ...] = ()
    skip_bytes: int = DEFAULT_SKIP_BYTES
    seq_len_bits: int = 2 ** 20
    alpha: float = 0.01
    piece_bytes: int = PIECE_BYTES
    workers: int = 1
    nist_tests: tuple[str, ...] | None = None
    diehard_tests: tuple[str, ...] | None = None
    run_nist: bool = True
    run_diehard: bool = True

    def __post_init__(self):
        object.__setattr__(self, "codecs", tuple(CodecId.parse(c) for c in self.codecs))
        object.__setattr__(self, "externals", tuple(
            e if isinstance(e, ExternalInput) else ExternalInput.parse(e) for e in self.externals))
        if self.skip_bytes < 0:
            raise InvalidParameterError("skip_bytes must be >= 0")
        if self.seq_len_bits <= 0 or self.seq_len_bits % 8:
            raise InvalidParameterError("seq_len_bits must be a positive multiple of 8")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParameterError("alpha must lie in (0, 1)")
        if self.piece_bytes <= 0 or self.piece_bytes % 4:
            raise InvalidParameterError("piece_bytes must be a positive multiple of 4")
        if self.workers < 1:
            raise InvalidParameterError("workers must be >= 1")
        if self.nist_tests is not None:
            object.__setattr__(self, "nist_tests",
                               tuple(NistTestId.parse(t).value for t in self.nist_tests))
        if self.diehard_tests is not None:
            chosen = tuple(DiehardTestId.parse(t) for t in self.diehard_tests)
            for t in chosen:
                if not t.implemented:
                    raise InvalidParameterError(f"Diehard test {t.value} is not implemented")
            object.__setattr__(self, "diehard_tests", tuple(t.value for t in chosen))
        labels = [c.value for c in self.codecs] + [e.label for e in self.externals]
        if len(set(labels)) != len(labels):
            raise InvalidParameterError("test file labels must be unique")

    @property
    def nist_params(self) -> NistParams:
        return NistParams(n=self.seq_len_bits, alpha=self.alpha)

    def as_dict(self) -> dict:
        return {
            "corpus": self.corpus,
            "codecs": [c.value for c in self.codecs],
            "externals": [f"{e.label}:{e.path}" for e in self.externals],
            "skip_bytes": self.skip_bytes,
            "seq_len_bits": self.seq_len_bits,
            "alpha": self.alpha,
            "piece_bytes": self.piece_bytes,
            "workers": self.workers,
            "nist_tests": list(self.nist_tests) if self.nist_tests is not None else None,
            "diehard_tests": list(self.diehard_tests) if self.diehard_tests is not None else None,
            "run_nist": self.run_nist,
            "run_diehard": self.run_diehard,
        }


_LIST_KEYS = {"codecs", "nist_tests", "diehard_tests"}
_INT_KEYS = {"skip_bytes", "seq_len_bits", "piece_bytes", "workers"}
_BOOL_KEYS = {"run_nist", "run_diehard"}


def _parse_bool(key: str, value: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise InvalidParameterError(f"{key}: expected a boolean, got {value!r}")


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Read ``key = value`` lines; ``#`` starts a comment.

    ``external`` may repeat; list keys take comma-separated values and the
    value ``all`` resets them to every available choice.
    """
    values: dict = {}
    externals: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep:
            raise InvalidParameterError(f"line {lineno}: expected key = value")
        if key == "external":
            externals.append(value)
        elif key in _LIST_KEYS:
            items = [v.strip() for v in value.split(",") if v.strip()]
            values[key] = None if items == ["all"] else tuple(items)
        elif key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise InvalidParameterError(f"line {lineno}: {key} must be an integer") from None
        elif key == "alpha":
            values[key] = float(value)
        elif key in _BOOL_KEYS:
            values[key] = _parse_bool(key, value)
        elif key == "corpus":
            values[key] = value or None
        else:
            raise InvalidParameterError(f"line {lineno}: unknown key {key!r}")
    if values.get("codecs", ()) is None:
        values["codecs"] = tuple(CodecId)
    if externals:
        values["externals"] = tuple(externals)
    return replace(base or RunConfig(), **values)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def stddev_proportion_diff(diffs: Sequence[float]) -> float:
    """Sample standard deviation of per-file proportion differences."""
    if len(diffs) < 2:
        raise InvalidParameterError("need at least two proportion differences")
    return statistics.stdev(float(d) for d in diffs)


# --- building test files ---------------------------------------------------

@dataclass
class BuildResult:
    label: str
    source: dict
    data: bytes
    original_bytes: int
    compressed_bytes: int
    files: list[dict] = field(default_factory=list)

    @property
    def compression_ratio(self) -> float | None:
        if self.source["kind"] != "codec" or self.compressed_bytes == 0:
            return None
        return self.original_bytes / self.compressed_bytes

    def summary(self, config: RunConfig) -> dict:
        diffs = [f["proportion_difference"] for f in self.files
                 if f["proportion_difference"] is not None]
        return {
            "original_bytes": self.original_bytes,
            "compressed_bytes": self.compressed_bytes,
            "compression_ratio": self.compression_ratio,
            "skip_bytes": config.skip_bytes,
            "test_bytes": len(self.data),
            "sequences": bitstream.sequence_count(len(self.data), config.seq_len_bits),
            "pieces": bitstream.piece_count(len(self.data), config.piece_bytes),
            "files": self.files,
            "proportion_difference_stddev":
                stddev_proportion_diff(diffs) if len(diffs) >= 2 else None,
        }


def _read_file(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise StageError("read", path, exc.strerror or exc) from exc


def _diff_or_none(chunk: bytes) -> float | None:
    if not chunk:
        return None
    try:
        return bitstream.proportion_difference(BitSequence.from_packed(chunk))
    except UndefinedRatioError:
        return None


def build(manifest: CorpusManifest, source, config: RunConfig) -> BuildResult:
    """Compress (or read) each manifest file, skip its prefix, concatenate."""
    if not manifest.files:
        raise StageError("build", manifest.name, "manifest has no files")
    external = isinstance(source, ExternalInput)
    codec = None if external else CodecId.parse(source)
    label = source.label if external else codec.value
    desc = ({"kind": "external", "path": source.path} if external
            else {"kind": "codec", "codec": codec.value, "corpus": manifest.name})
    parts, records = [], []
    original = compressed = 0
    for path, _ in manifest.files:
        raw = _read_file(path)
        if external:
            encoded = raw
        else:
            try:
                blob = compress(codec, raw)
            except Exception as exc:
                raise StageError(f"compress ({codec.value})", path, exc) from exc
            encoded = blob.to_bytes()
            original += len(raw)
            compressed += len(blob.payload)
        kept = encoded[config.skip_bytes:]
        parts.append(kept)
        records.append({
            "path": path,
            "input_bytes": len(raw),
            "encoded_bytes": len(encoded),
            "kept_bytes": len(kept),
            "proportion_difference": _diff_or_none(kept),
        })
    if external:
        original = compressed = sum(r["input_bytes"] for r in records)
    return BuildResult(label, desc, b"".join(parts), original, compressed, records)


def build_test_file(manifest: CorpusManifest, source, config: RunConfig) -> bytes:
    return build(manifest, source, config).data


# --- running the batteries -------------------------------------------------

def _nist_chunk(args) -> list[list[TestOutcome]]:
    data, seq_len_bits, params, tests = args
    out = []
    for seq in bitstream.split_sequences(data, seq_len_bits):
        out.append([run_test(t, seq, params) for t in tests])
    return out


def _diehard_one(args) -> TestOutcome:
    test, piece, piece_bytes = args
    return run_diehard(test, piece, piece_bytes)


def _map(fn, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def run_nist_file(data: bytes, config: RunConfig) -> dict[str, list[TestOutcome]]:
    """Outcomes per test, one entry per sequence, in sequence order."""
    params = config.nist_params
    tests = [NistTestId.parse(t) for t in (config.nist_tests or [t.value for t in NIST_TESTS])]
    step = config.seq_len_bits // 8
    count = bitstream.sequence_count(len(data), config.seq_len_bits)
    per_job = max(1, -(-count // (4 * config.workers)))
    jobs = [(data[i * step:min(i + per_job, count) * step], config.seq_len_bits, params, tests)
            for i in range(0, count, per_job)]
    rows = [row for chunk in _map(_nist_chunk, jobs, config.workers) for row in chunk]
    return {t.value: [row[k] for row in rows] for k, t in enumerate(tests)}


def run_diehard_file(data: bytes, config: RunConfig) -> dict[str, list[TestOutcome]]:
    """Outcomes per test, one entry per piece, in piece order."""
    tests = [DiehardTestId.parse(t) for t in (config.diehard_tests or
                                               [t.value for t in IMPLEMENTED_TESTS])]
    pieces = bitstream.split_pieces(data, config.piece_bytes)
    jobs = [(t, piece, config.piece_bytes) for piece in pieces for t in tests]
    outcomes = _map(_diehard_one, jobs, config.workers)
    result = {t.value: [] for t in tests}
    for (t, _, _), o in zip(jobs, outcomes):
        result[t.value].append(o)
    return result


def summarize_nist(outcomes: dict[str, list[TestOutcome]], config: RunConfig) -> dict:
    tests = {}
    for name, per_seq in outcomes.items():
        tests[name] = {
            "verdict": nist_verdict(per_seq, config.alpha, name).as_dict(),
            "pvalues": [list(o.pvalues) if o.applicable else None for o in per_seq],
        }
    return {"params": config.nist_params.as_dict(), "sequences":
            len(next(iter(outcomes.values()))) if outcomes else 0, "tests": tests}


def summarize_diehard(outcomes: dict[str, list[TestOutcome]], config: RunConfig) -> dict:
    tests = {}
    pooled = []
    for name, per_piece in outcomes.items():
        test = DiehardTestId.parse(name)
        pieces = [list(o.pvalues) for o in per_piece]
        pooled.extend(p for ps in pieces for p in ps)
        scores = [meysenburg_score(ps) for ps in pieces]
        worst = max(range(len(pieces)), key=lambda i: scores[i]) if pieces else None
        all_p = [p for ps in pieces for p in ps]
        tests[name] = {
            "pieces": pieces,
            "worst_case": worst_case(all_p) if all_p else None,
            "score": scores[worst] if pieces else None,
            "score_piece": worst,
            "max_score": max_score(test.expected_pvalue_count, DEFAULT_SCORE_RULE),
            "intel_failures": sum(not ok for o in per_piece for ok in o.passes),
            "pvalue_count": len(all_p),
        }
    summary = {"piece_bytes": config.piece_bytes,
               "pieces": len(next(iter(outcomes.values()))) if outcomes else 0,
               "tests": tests, "histogram": None, "uniformity_chi2": None,
               "uniformity_p": None}
    if pooled:
        u = uniformity(pooled)
        summary.update(histogram=list(u.counts), uniformity_chi2=u.chi2,
                       uniformity_p=u.pvalue)
    return summary


def process_test_file(manifest: CorpusManifest, source, config: RunConfig) -> dict:
    """Build one test file and run the batteries; failures are recorded, not raised."""
    external = isinstance(source, ExternalInput)
    label = source.label if external else CodecId.parse(source).value
    desc = ({"kind": "external", "path": source.path} if external
            else {"kind": "codec", "codec": label, "corpus": manifest.name})
    record = {"schema": SCHEMA_VERSION, "label": label, "source": desc, "status": "ok",
              "error": None, "build": None, "nist": None, "diehard": None}
    stage = "build"
    try:
        built = build(manifest, source, config)
        record["build"] = built.summary(config)
        if config.run_nist:
            stage = "nist"
            record["nist"] = summarize_nist(run_nist_file(built.data, config), config)
        if config.run_diehard:
            stage = "diehard"
            record["diehard"] = summarize_diehard(run_diehard_file(built.data, config), config)
    except Exception as exc:  # isolate: one bad test file must not end the run
        record["status"] = "aborted"
        record["error"] = {"stage": getattr(exc, "stage", stage),
                           "path": getattr(exc, "path", None), "message": str(exc)}
    return record


def _sources(config: RunConfig) -> list[tuple[CorpusManifest | None, object]]:
    jobs = []
    if config.codecs:
        if not config.corpus:
            raise InvalidParameterError("codecs selected but no corpus given")
        manifest = CorpusManifest.from_directory(config.corpus)
        jobs.extend((manifest, c) for c in config.codecs)
    for ext in config.externals:
        jobs.append((None, ext))
    if not jobs:
        raise InvalidParameterError("nothing to run: no codecs with a corpus and no externals")
    return jobs


def write_json(path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def run_experiment(config: RunConfig, run_dir=None) -> dict[str, dict]:
    """Process every test file; with ``run_dir``, also write results and the report."""
    results = {}
    for manifest, source in _sources(config):
        if manifest is None:
            try:
                manifest = source.manifest()
            except StageError as exc:
                results[source.label] = {
                    "schema": SCHEMA_VERSION, "label": source.label, "status": "aborted",
                    "error": {"stage": exc.stage, "path": exc.path, "message": str(exc)},
                    "source": {"kind": "external", "path": source.path},
                    "build": None, "nist": None, "diehard": None}
                continue
        record = process_test_file(manifest, source, config)
        results[record["label"]] = record
    if run_dir is not None:
        run_dir = Path(run_dir)
        write_json(run_dir / "config.json", config.as_dict())
        for label, record in results.items():
            write_json(run_dir / "files" / f"{label}.json", record)
        from .report import write_report
        write_report(run_dir)
    return results


def load_run(run_dir) -> dict[str, dict]:
    files = sorted((Path(run_dir) / "files").glob("*.json"))
    if not files:
        raise InvalidParameterError(f"no results under {run_dir}/files")
    out = {}
    for f in files:
        with open(f, encoding="utf-8") as fh:
            rec = json.load(fh)
        out[rec["label"]] = rec
    return out


def random_bytes(nbytes: int, seed: int) -> bytes:
    """Deterministic high-quality bytes for positive controls."""
    return np.random.default_rng(seed).bytes(nbytes)
