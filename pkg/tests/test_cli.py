import json

import numpy as np
import pytest

from gauntlet.cli import main

from corpus import english_text, write_english_corpus


def test_compress_decompress(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_bytes(english_text(50_000, 1))
    assert main(["compress", "lzss", str(src), str(tmp_path / "c.bin")]) == 0
    assert main(["decompress", str(tmp_path / "c.bin"), str(tmp_path / "out.txt")]) == 0
    assert (tmp_path / "out.txt").read_bytes() == src.read_bytes()
    out = capsys.readouterr().out.splitlines()
    assert out[0].split("\t") == ["codec", "input_bytes", "payload_bytes", "ratio"]


def test_build_and_nist(tmp_path, capsys):
    write_english_corpus(tmp_path / "corpus", 200_000, 4, seed=3)
    test_file = tmp_path / "huff.bin"
    assert main(["build", "--corpus", str(tmp_path / "corpus"), "--codec", "huffman",
                 "-o", str(test_file)]) == 0
    capsys.readouterr()
    assert main(["nist", str(test_file), "--seq-bits", "16384", "--tests", "Frequency", "Runs",
                 "--run-dir", str(tmp_path / "run")]) == 0
    rows = [r.split("\t") for r in capsys.readouterr().out.splitlines()]
    assert rows[0][0] == "test"
    assert rows[1][0] == "Frequency" and rows[1][5] == "Fail"
    assert main(["report", str(tmp_path / "run")]) == 0
    assert (tmp_path / "run" / "table4.csv").exists()


def test_diehard_command(tmp_path, capsys):
    f = tmp_path / "rng.bin"
    f.write_bytes(np.random.default_rng(3).bytes(11_468_800))
    assert main(["diehard", str(f), "--tests", "CRAPS", "SQUEEZE",
                 "--run-dir", str(tmp_path / "run")]) == 0
    rows = [r.split("\t") for r in capsys.readouterr().out.splitlines()]
    assert [r[0] for r in rows[1:]] == ["CRAPS", "SQUEEZE"]
    rec = json.loads((tmp_path / "run" / "files" / "rng.json").read_text())
    assert rec["diehard"]["tests"]["CRAPS"]["pvalue_count"] == 2


def test_run_with_config(tmp_path, capsys):
    write_english_corpus(tmp_path / "corpus", 150_000, 3, seed=4)
    conf = tmp_path / "run.conf"
    conf.write_text(f"corpus = {tmp_path / 'corpus'}\ncodecs = lzw\nseq_len_bits = 8192\n"
                    "run_diehard = false\nnist_tests = Frequency\n")
    assert main(["run", "--config", str(conf), "--run-dir", str(tmp_path / "run")]) == 0
    out = capsys.readouterr().out
    assert "lzw\tnist\tFrequency\tFail" in out


def test_errors_exit_nonzero(tmp_path, capsys):
    assert main(["nist", str(tmp_path / "missing.bin")]) == 2
    assert "error" in capsys.readouterr().err
    small = tmp_path / "small.bin"
    small.write_bytes(b"abc")
    assert main(["diehard", str(small)]) == 2
    with pytest.raises(SystemExit):
        main(["compress", "zstd", "a", "b"])
