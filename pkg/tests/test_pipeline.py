import json
import math

import numpy as np
import pytest

from gauntlet import bitstream, pipeline
from gauntlet.codecs import CodecId
from gauntlet.errors import InvalidParameterError, StageError
from gauntlet.pipeline import (CorpusManifest, ExternalInput, RunConfig, build, build_test_file,
                               parse_config, run_experiment, stddev_proportion_diff)

from corpus import write_english_corpus


def _write(path, data):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    return path


def test_default_config_values():
    cfg = RunConfig()
    assert cfg.skip_bytes == 1024
    assert cfg.seq_len_bits == 2 ** 20
    assert cfg.alpha == 0.01
    assert cfg.piece_bytes == 11_468_800
    assert cfg.codecs == tuple(CodecId)


def test_config_validation():
    with pytest.raises(InvalidParameterError):
        RunConfig(alpha=1.5)
    with pytest.raises(InvalidParameterError):
        RunConfig(seq_len_bits=1001)
    with pytest.raises(InvalidParameterError):
        RunConfig(diehard_tests=("OPSO",))
    with pytest.raises(InvalidParameterError):
        RunConfig(codecs=("lzw",), externals=("lzw:/tmp/x",))


def test_parse_config():
    cfg = parse_config("""
        # desk-scale run
        corpus = /data/text
        codecs = huffman, arithmetic
        external = zip:/data/zip
        external = rar:/data/rar.bin
        skip_bytes = 512
        seq-len-bits = 65536
        alpha = 0.05
        workers = 2
        nist_tests = Frequency, runs
        run_diehard = no
    """)
    assert cfg.corpus == "/data/text"
    assert cfg.codecs == (CodecId.HUFFMAN, CodecId.ARITHMETIC)
    assert [e.label for e in cfg.externals] == ["zip", "rar"]
    assert cfg.skip_bytes == 512 and cfg.seq_len_bits == 65536
    assert cfg.alpha == 0.05 and cfg.workers == 2
    assert cfg.nist_tests == ("Frequency", "Runs")
    assert cfg.run_diehard is False
    assert parse_config("codecs = all").codecs == tuple(CodecId)
    with pytest.raises(InvalidParameterError, match="unknown key"):
        parse_config("colour = blue")
    with pytest.raises(InvalidParameterError, match="line 1"):
        parse_config("skip_bytes")


def test_external_parse():
    assert ExternalInput.parse("zip:/a/b:c") == ExternalInput("zip", "/a/b:c")
    with pytest.raises(InvalidParameterError):
        ExternalInput.parse("nolabel")


def test_manifest_is_lexicographic(tmp_path):
    for name in ["b.txt", "a/z.txt", "a/b.txt", "c.bin"]:
        _write(tmp_path / name, b"x")
    m = CorpusManifest.from_directory(tmp_path)
    rel = [p[len(str(tmp_path)) + 1:] for p in m.paths]
    assert rel == ["a/b.txt", "a/z.txt", "b.txt", "c.bin"]
    with pytest.raises(StageError):
        CorpusManifest.from_directory(tmp_path / "missing")


def test_build_three_external_files(tmp_path):
    for i in range(3):
        _write(tmp_path / "ext" / f"f{i}.bin", bytes([i]) * 2048)
    ext = ExternalInput("ext", str(tmp_path / "ext"))
    data = build_test_file(ext.manifest(), ext, RunConfig(codecs=()))
    assert len(data) == 3072
    assert data == b"\x00" * 1024 + b"\x01" * 1024 + b"\x02" * 1024


def test_skipped_prefix_never_reaches_test_file(tmp_path):
    files = [_write(tmp_path / f"f{i}", b"\xaa" * 1024 + b"\x55" * (500 + i)) for i in range(4)]
    ext = ExternalInput("m", str(tmp_path))
    data = build_test_file(CorpusManifest.from_paths(files), ext, RunConfig(codecs=()))
    assert b"\xaa" not in data and len(data) == 4 * 500 + 6


def test_build_with_codec(tmp_path):
    write_english_corpus(tmp_path / "c", 300_000, 5, seed=2)
    m = CorpusManifest.from_directory(tmp_path / "c")
    cfg = RunConfig(seq_len_bits=2 ** 14)
    built = build(m, "huffman", cfg)
    assert built.compression_ratio > 1.5
    assert len(built.data) == sum(f["kept_bytes"] for f in built.files)
    assert all(f["encoded_bytes"] - f["kept_bytes"] == 1024 for f in built.files)
    summary = built.summary(cfg)
    assert summary["sequences"] == bitstream.sequence_count(len(built.data), 2 ** 14)
    assert summary["proportion_difference_stddev"] is not None


def test_empty_manifest():
    with pytest.raises(StageError):
        build(CorpusManifest("empty", ()), "lzw", RunConfig())


def test_stddev_proportion_diff():
    assert stddev_proportion_diff([0.3, 0.3, 0.3]) == 0.0
    assert stddev_proportion_diff([0.0, 2.0]) == pytest.approx(math.sqrt(2))
    with pytest.raises(InvalidParameterError):
        stddev_proportion_diff([1.0])


def test_huffman_spread_exceeds_arithmetic(tmp_path):
    write_english_corpus(tmp_path / "c", 1_500_000, 12, seed=6)
    m = CorpusManifest.from_directory(tmp_path / "c")
    cfg = RunConfig()
    spread = {c: build(m, c, cfg).summary(cfg)["proportion_difference_stddev"]
              for c in ("huffman", "arithmetic")}
    assert spread["huffman"] > spread["arithmetic"]


def _small_run(tmp_path, **kw):
    write_english_corpus(tmp_path / "corpus", 400_000, 6, seed=9)
    _write(tmp_path / "rng.bin", np.random.default_rng(5).bytes(40_000))
    cfg = RunConfig(corpus=str(tmp_path / "corpus"), codecs=("huffman", "arithmetic"),
                    externals=(f"rng:{tmp_path / 'rng.bin'}", f"gone:{tmp_path / 'none'}"),
                    seq_len_bits=2 ** 14, run_diehard=False, **kw)
    return cfg


def test_failure_isolation(tmp_path, monkeypatch):
    cfg = _small_run(tmp_path)
    real = pipeline.compress

    def flaky(codec, data):
        if CodecId.parse(codec) is CodecId.ARITHMETIC:
            raise MemoryError("simulated")
        return real(codec, data)

    monkeypatch.setattr(pipeline, "compress", flaky)
    results = run_experiment(cfg, tmp_path / "run")
    assert results["huffman"]["status"] == "ok"
    assert results["rng"]["status"] == "ok"
    assert results["arithmetic"]["status"] == "aborted"
    assert "compress (arithmetic)" in results["arithmetic"]["error"]["stage"]
    assert results["gone"]["status"] == "aborted"
    report = json.loads((tmp_path / "run" / "report.json").read_text())
    assert report["files"]["arithmetic"]["status"] == "aborted"


def test_run_outputs_and_determinism(tmp_path):
    cfg = _small_run(tmp_path)
    run_experiment(cfg, tmp_path / "a")
    run_experiment(cfg, tmp_path / "b")
    names = ["report.json", "table2.csv", "table3.csv", "table4.csv", "table6.csv",
             "table7.csv", "table8.csv", "table9.csv"]
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    for fig in ["fig1_proportion_difference.png", "fig2_stddev.png",
                "fig_pvalue_histogram.png"]:
        assert (tmp_path / "a" / fig).stat().st_size > 1000
    report = json.loads((tmp_path / "a" / "report.json").read_text())
    freq = {o["test"]: o for o in report["files"]["huffman"]["nist"]}["Frequency"]
    assert set(freq) == {"test", "pvalues_summary", "proportion", "min_pass_rate",
                         "uniformity_chi2", "uniformity_p", "verdict"}
    assert freq["verdict"] == "Fail"
    rng = {o["test"]: o for o in report["files"]["rng"]["nist"]}
    assert rng["Frequency"]["proportion"] > 0.9
    header = (tmp_path / "a" / "table3.csv").read_text().splitlines()[0]
    assert header.startswith("File,C1,C2")


def test_parallel_matches_serial(tmp_path):
    _write(tmp_path / "rng.bin", np.random.default_rng(6).bytes(16_384))
    base = RunConfig(codecs=(), seq_len_bits=2 ** 13, nist_tests=("Frequency", "Runs", "Serial"))
    data = (tmp_path / "rng.bin").read_bytes()
    serial = pipeline.run_nist_file(data, base)
    par = pipeline.run_nist_file(data, RunConfig(**{**base.__dict__, "workers": 2}))
    assert serial == par


def test_diehard_section(tmp_path):
    data = np.random.default_rng(7).bytes(11_468_800)
    cfg = RunConfig(codecs=(), diehard_tests=("CRAPS", "RUNS", "BDAY"))
    section = pipeline.summarize_diehard(pipeline.run_diehard_file(data, cfg), cfg)
    assert section["pieces"] == 1
    assert section["tests"]["BDAY"]["max_score"] == 40
    assert sum(section["histogram"]) == 16
    assert section["tests"]["RUNS"]["pvalue_count"] == 4
