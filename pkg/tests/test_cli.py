import json

import pytest

from lpbounds import serialize
from lpbounds.cli import main


def write(path, text):
    path.write_text(text)
    return str(path)


@pytest.fixture()
def workspace(tmp_path):
    files = {}
    assert main(["gen", "and", "2", "--side", "cc", "--out", str(tmp_path / "and2.cc")]) == 0
    assert main(["gen", "xor", "2", "--side", "qc", "--out", str(tmp_path / "xor2.qc")]) == 0
    files["and2"] = str(tmp_path / "and2.cc")
    files["xor2"] = str(tmp_path / "xor2.qc")
    files["dist"] = write(
        tmp_path / "u.dist", "rows: 1/4 1/4 1/4 1/4\ncols: 1/4 1/4 1/4 1/4\n"
    )
    files["bits"] = write(tmp_path / "u.bits", "p: 1/2 1/2\n")
    files["dir"] = tmp_path
    return files


def records_of(path):
    with open(path, "r", encoding="utf-8") as fh:
        return serialize.load_records(fh.read())


def test_gen_known_table(workspace):
    with open(workspace["and2"]) as fh:
        text = fh.read()
    # two-party AND of all bits: a single 1 at (3,3)
    assert text == "cc 4 4\n0000\n0000\n0000\n0001\n"


def test_bounds_chain_and_verify(workspace, capsys):
    out = str(workspace["dir"] / "chain.jsonl")
    code = main(
        ["bounds", workspace["and2"], "--which", "chain", "--eps", "1/3", "--out", out]
    )
    assert code == 0
    recs = records_of(out)
    kinds = [r["record"] for r in recs]
    assert kinds == ["run", "chain", "summary"]
    assert recs[2]["pass"] is True
    assert main(["verify", out]) == 0
    captured = capsys.readouterr()
    assert "verify: PASS" in captured.out


def test_bounds_decimal_eps_is_a_parse_error(workspace, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bounds", workspace["and2"], "--which", "prt", "--eps", "0.125"])
    assert exc.value.code == 2
    assert "num/den" in capsys.readouterr().err


def test_bounds_qprt(workspace):
    out = str(workspace["dir"] / "qprt.jsonl")
    assert main(["bounds", workspace["xor2"], "--which", "qprt", "--eps", "1/8", "--out", out]) == 0
    recs = records_of(out)
    assert recs[1]["kind"] == "qprt" and recs[1]["value"] == "49/4"


def test_bounds_srec_distributional(workspace):
    out = str(workspace["dir"] / "srec.jsonl")
    code = main(
        [
            "bounds",
            workspace["and2"],
            "--which",
            "srec",
            "--eps",
            "1/8",
            "--dist",
            workspace["dist"],
            "--z",
            "1",
            "--out",
            out,
        ]
    )
    assert code == 0
    recs = records_of(out)
    assert recs[1]["kind"] == "srec-dist" and recs[1]["params"]["z"] == 1


def test_synth_cc_part1_and_verify(workspace):
    out = str(workspace["dir"] / "scc.jsonl")
    tree_out = str(workspace["dir"] / "scc.ptree")
    code = main(
        [
            "synth-cc", workspace["and2"], workspace["dist"],
            "--part", "1", "--out", out, "--tree-out", tree_out,
        ]
    )
    assert code == 0
    recs = records_of(out)
    assert recs[1]["record"] == "cc-synthesis" and recs[1]["hypothesis_ok"]
    serialize.parse_protocol_tree(open(tree_out).read())
    assert main(["verify", out]) == 0


def test_synth_cc_part2_requires_k20(workspace, capsys):
    code = main(
        ["synth-cc", workspace["and2"], workspace["dist"], "--part", "2", "--k", "19"]
    )
    assert code == 1
    assert "k >= 20" in capsys.readouterr().err


def test_synth_qc_and_oracle_sandwich(workspace):
    out = str(workspace["dir"] / "sqc.jsonl")
    tree_out = str(workspace["dir"] / "xor2.dtree")
    code = main(
        ["synth-qc", workspace["xor2"], workspace["bits"], "--out", out, "--tree-out", tree_out]
    )
    assert code == 0
    oracle_out = str(workspace["dir"] / "oracle.jsonl")
    code = main(
        [
            "oracle", workspace["xor2"], workspace["bits"],
            "--depth", "2", "--artifact", tree_out, "--out", oracle_out,
        ]
    )
    assert code == 0
    recs = records_of(oracle_out)
    sandwich = [r for r in recs if r["record"] == "sandwich"]
    assert sandwich and sandwich[0]["oracle_error"] == "0"
    assert main(["verify", oracle_out]) == 0


def test_report_determinism(workspace):
    out1 = str(workspace["dir"] / "d1.jsonl")
    out2 = str(workspace["dir"] / "d2.jsonl")
    args = ["bounds", workspace["xor2"], "--which", "qprt", "--eps", "1/8"]
    assert main(args + ["--out", out1]) == 0
    assert main(args + ["--out", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_verify_detects_tampering(workspace, capsys):
    out = str(workspace["dir"] / "t.jsonl")
    assert main(["bounds", workspace["xor2"], "--which", "qprt", "--eps", "1/8", "--out", out]) == 0
    recs = records_of(out)
    recs[1]["value"] = "1/1"
    with open(out, "w") as fh:
        fh.write(serialize.dump_records(recs))
    assert main(["verify", out]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_cache_round_trip(workspace, tmp_path, monkeypatch):
    cache = tmp_path / "cache"
    monkeypatch.setenv("LPBOUNDS_CACHE", str(cache))
    out1 = str(workspace["dir"] / "c1.jsonl")
    out2 = str(workspace["dir"] / "c2.jsonl")
    args = ["bounds", workspace["xor2"], "--which", "qprt", "--eps", "1/8"]
    assert main(args + ["--out", out1]) == 0
    assert any(cache.iterdir())
    assert main(args + ["--out", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()
    monkeypatch.delenv("LPBOUNDS_CACHE")
    from lpbounds import lp as lpmod

    lpmod.set_cache_dir(None)
