import json

import pytest

from braidcluster.cli import main, parse_job
from braidcluster.braid import NotAdmissible, ParseError
from braidcluster.quiver import from_dot, seed_quiver

EXAMPLE = ["u=s2", "beta=-2 1 2 1 -1", "n=3"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_seed_document(capsys):
    code, out, _ = run(capsys, "seed", *EXAMPLE)
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1
    assert doc["J"] == [1, 2, 4, 5] and doc["frozen"] == [1, 2] and doc["mutable"] == [4, 5]
    assert doc["cluster_variables"] == {"1": "t1*t4 + 1", "2": "t2*t4*t5 - 1", "4": "t4", "5": "t5"}
    assert sorted(map(tuple, doc["quiver"]["arrows"])) == [(1, 4, 1), (4, 2, 1), (5, 2, 1)]


def test_seed_output_is_deterministic(capsys):
    assert run(capsys, "seed", *EXAMPLE)[1] == run(capsys, "seed", *EXAMPLE)[1]


def test_parse_error_reports_offset(capsys):
    code, _, err = run(capsys, "seed", "u=id", "beta=1 x")
    assert code == 2 and "offset" in err


def test_not_admissible_exit_code(capsys):
    # the rank comes from u, so letter 2 is out of range
    assert run(capsys, "seed", "u=2,1", "beta=-1 -1 2")[0] == 2
    assert run(capsys, "seed", "u=3,2,1", "beta=1 2")[0] == 3


def test_unknown_subcommand_is_a_parse_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_dot_render_round_trips(capsys, tmp_path):
    path = tmp_path / "q.dot"
    assert run(capsys, "render", *EXAMPLE, "--format", "dot", "--out", str(path))[0] == 0
    job = parse_job(EXAMPLE)
    assert from_dot(path.read_text()) == seed_quiver(job.u, job.beta)


def test_svg_render_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    run(capsys, "render", *EXAMPLE, "--out", str(a), "--cycle", "4")
    run(capsys, "render", *EXAMPLE, "--out", str(b), "--cycle", "4")
    assert a.read_bytes() == b.read_bytes() and a.stat().st_size > 0


def test_moves_list_apply_and_verify(capsys):
    code, out, _ = run(capsys, "moves", *EXAMPLE)
    listing = json.loads(out)["moves"]
    assert [m["index"] for m in listing] == list(range(1, len(listing) + 1))
    code, out, _ = run(capsys, "moves", *EXAMPLE, "--apply", "2")
    assert code == 0 and json.loads(out)["move"]["kind"] == "B3"
    assert run(capsys, "moves", *EXAMPLE, "--apply", "99")[0] == 2
    code, out, _ = run(capsys, "moves", *EXAMPLE, "--verify-all")
    assert code == 0 and json.loads(out)["passed"]


def test_count_walk_and_brute(capsys):
    code, out, _ = run(capsys, "count", "u=2,1", "beta=1 1 1", "--q", "5")
    walk = json.loads(out)
    code2, out2, _ = run(capsys, "count", "u=2,1", "beta=1 1 1", "--method", "brute", "--q", "5")
    assert code == code2 == 0
    assert walk["value"] == json.loads(out2)["value"] == 21
    assert run(capsys, "count", "u=2,1", "beta=1 1 1", "--method", "brute", "--q", "4")[0] == 2
    assert run(capsys, "count", "u=3,2,1", "beta=1 2 1 2 1", "--method", "brute", "--q", "5",
               "--budget", "10")[0] == 5


def test_homfly_and_verify_pc(capsys):
    code, out, _ = run(capsys, "homfly", "u=1,2", "beta=1 1")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1 and doc["top_a_degree"] == -1
    assert run(capsys, "verify-pc", "u=2,1", "beta=1 1")[0] == 0


def test_verify_families_and_report(capsys, tmp_path):
    for fam in ("halfarrow", "moves", "rank", "identities", "count", "pc"):
        assert run(capsys, "verify", "--family", fam, "--max", "2")[0] == 0, fam
    code, out, _ = run(capsys, "verify", "--family", "plane", "--fuzz", "5", "--report", str(tmp_path))
    assert code == 0
    assert (tmp_path / "results.csv").exists() and (tmp_path / "summary.png").exists()
    assert json.loads(out)["schema"] == 1


def test_verify_budget_stop(capsys):
    assert run(capsys, "verify", "--family", "sinkrec", "u=1,2,3", "beta=1 2 1 2 1 2",
               "--budget", "1")[0] == 5


def test_parse_job_forms():
    assert parse_job(["le=++/++", "n=4"]).beta.letters == (2, 3, 1, 2)
    with pytest.raises(ParseError):
        parse_job(["beta=1 2", "x=3"])
    with pytest.raises(NotAdmissible):
        parse_job(["u=2,1", "beta="])
    with pytest.raises(NotAdmissible):
        parse_job(["le=++/+.", "n=4"])
