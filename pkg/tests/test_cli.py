import pytest

from ksetrecon.cli import AMBIGUOUS, BUDGET, INCONSISTENT, OK, USAGE, main
from ksetrecon.core import parse_graph, parse_ksets


@pytest.fixture
def run(capsys):
    def call(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err

    return call


@pytest.fixture
def write(tmp_path):
    def put(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p

    return put


def test_extract_path(run, write):
    code, out, _ = run("extract", write("p.g", "a b\nb c\nc d\nd e\n"), "--k", 3)
    assert code == OK
    assert out == "k 3\nvertices: a b c d e\na b c\nb c d\nc d e\n"


def test_extract_bad_k(run, write):
    assert run("extract", write("p.g", "a b\n"), "--k", 5)[0] == USAGE


def test_reconstruct_triples(run, write):
    code, out, err = run("reconstruct", write("t.k", "k 3\nvertices: a b c d e\na b c\nc d e\n"))
    assert code == INCONSISTENT and "inconsistent" in out + err
    code, out, _ = run("reconstruct", write("p.k", "k 3\nvertices: a b c d e\na b c\nb c d\nc d e\n"))
    assert code == OK
    assert parse_graph(out).edge_count() == 4


def test_path_four_is_ambiguous_for_trees(run, write):
    code, out, _ = run("reconstruct", write("p.k", "k 3\nvertices: a b c d\na b c\nb c d\n"), "--class", "tree")
    assert code == AMBIGUOUS
    assert out.count("# witness") == 2


def test_reconstruct_classes_round_trip(run, write):
    for family, extra, cls in [
        (["--family", "tree", "--n", 50], 3, "tree"),
        (["--family", "petersen"], 4, "girth-gt-k"),
        (["--family", "apollonian", "--n", 12], 3, "max-planar"),
        (["--family", "cycle-chords", "--n", 10, "--chords", 3], 3, "outerplanar2c"),
        (["--family", "bipartite", "--n", 14], 3, "triangle-free"),
    ]:
        code, graph, _ = run("gen", *family, "--seed", 5)
        assert code == OK
        g = write("g.txt", graph)
        code, out, err = run("verify", g, "--k", extra, "--class", cls)
        assert (code, out) == (OK, "identical\n"), (family, err)


def test_triples_only_classes_reject_other_k(run, write):
    g = write("g.txt", "a b\nb c\nc d\nd e\ne f\n")
    assert run("verify", g, "--k", 4, "--class", "tree")[0] == USAGE


def test_tree_ksets_above_threshold(run, write):
    _, graph, _ = run("gen", "--family", "path", "--n", 7)
    code, out, _ = run("verify", write("p.g", graph), "--k", 5, "--class", "tree-ksets")
    assert code == AMBIGUOUS


def test_check_unique(run, write):
    code, out, _ = run("check-unique", write("p.k", "k 3\nvertices: a b c d e\na b c\nb c d\nc d e\n"))
    assert code == OK and out.startswith("unique\n# witness 1\n")
    _, graph, _ = run("gen", "--family", "star-plus-matching", "--leaves", 6, "--pairs", 2)
    _, ks, _ = run("extract", write("s.g", graph), "--k", 3)
    code, out, _ = run("check-unique", write("s.k", ks), "--connected-only")
    assert code == AMBIGUOUS and out.startswith("not unique")
    assert "connected: not unique" in out


def test_enumerate(run, write):
    code, out, _ = run("enumerate", write("t.k", "k 3\nvertices: a b c\na b c\n"))
    assert code == OK and out.splitlines()[0] == "count 4"
    code, out, _ = run("enumerate", write("t.k", "k 3\nvertices: a b c\na b c\n"), "--filter", "tree")
    assert out.splitlines()[:2] == ["count 3", "# tree 3"]
    assert run("enumerate", write("t.k", "k 3\nvertices: a b c\n"), "--filter", "nope")[0] == USAGE


def test_enumerate_budget(run, write):
    _, graph, _ = run("gen", "--family", "gnp", "--n", 8, "--seed", 1)
    _, ks, _ = run("extract", write("g.g", graph), "--k", 3)
    code, out, err = run("enumerate", write("g.k", ks), "--budget", 10)
    assert code == BUDGET and "partial" in out and "budget" in err


def test_gen_is_deterministic_and_seeded(run):
    a = run("gen", "--family", "gnp", "--n", 12, "--seed", 7)[1]
    b = run("--seed", 7, "gen", "--family", "gnp", "--n", 12)[1]
    c = run("gen", "--family", "gnp", "--n", 12, "--seed", 8)[1]
    assert a == b != c


def test_gen_errors(run):
    assert run("gen", "--family", "path")[0] == USAGE
    assert run("gen", "--family", "infmany", "--k", 2, "--n", 4)[0] == USAGE


def test_gen_dot(run):
    code, out, _ = run("gen", "--family", "path", "--n", 3, "--dot")
    assert out.startswith("graph G {") and '"0" -- "1";' in out


def test_usage_errors_exit_three(run, write):
    with pytest.raises(SystemExit) as exc:
        main(["reconstruct"])
    assert exc.value.code == USAGE
    assert run("reconstruct", "/nonexistent/file")[0] == USAGE
    assert run("reconstruct", write("bad.k", "k 3\nvertices: a b\na b\n"))[0] == USAGE


def test_verify_reports_differences(run, write):
    # a triangle-free promise on a graph with triangles either fails or differs
    _, graph, _ = run("gen", "--family", "fan", "--n", 7)
    code, out, _ = run("verify", write("f.g", graph), "--k", 3, "--class", "triangle-free")
    assert code in (INCONSISTENT, AMBIGUOUS)
    assert out.startswith(("differs", "inconsistent", "ambiguous"))


def test_random_like_verify(run, write):
    _, graph, _ = run("gen", "--family", "gnp", "--n", 24, "--seed", 2)
    code, out, _ = run("verify", write("r.g", graph), "--k", 4, "--class", "random-like")
    assert code in (OK, INCONSISTENT)
    if code == INCONSISTENT:
        assert not out.startswith("differs")


def test_extract_then_reconstruct_tree(run, write):
    _, graph, _ = run("gen", "--family", "tree", "--n", 9, "--seed", 3)
    _, ks, _ = run("extract", write("t.g", graph), "--k", 3)
    assert parse_ksets(ks).k == 3
    code, out, _ = run("reconstruct", write("t.k", ks), "--class", "tree", "--verify")
    assert code == OK and parse_graph(out).edge_set() == parse_graph(graph).edge_set()
