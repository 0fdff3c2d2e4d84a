import os
import pathlib

import pytest

import hyperpm

FIXTURES = pathlib.Path(
    os.environ.get("HYPERPM_FIXTURE_DIR", pathlib.Path(__file__).resolve().parents[1] / "fixtures")
)


@pytest.fixture()
def sample():
    labels = hyperpm.LabelTable()
    data = hyperpm.load(str(FIXTURES / "sample_data.txt"), labels)
    query = hyperpm.load(str(FIXTURES / "sample_query.txt"), labels)
    return labels, query, data


def test_fixture_match(sample):
    _, query, data = sample
    embeddings, stats = hyperpm.match(query, data)
    assert embeddings == [(0, 2, 6, 4)]
    assert stats["status"] == "done"
    assert stats["candidates_before"] == 13
    assert stats["candidates_after"] == 9


def test_modes_and_oracles_agree():
    for seed in range(15):
        data = hyperpm.gen_random_hypergraph(seed, 40, 80, labels=2, min_arity=2, max_arity=5)
        query, source = hyperpm.gen_query(seed, data, 3)
        oracle = hyperpm.oracle_subsets(query, data)
        assert oracle == hyperpm.oracle_vertexiso(query, data)
        assert tuple(source) in oracle
        index = hyperpm.SignatureIndex(data)
        for mode in ("none", "conn", "isec", "both"):
            found, _ = hyperpm.match(query, data, index=index, mode=mode)
            assert set(found) == oracle


def test_parse_roundtrip_and_errors():
    labels = hyperpm.LabelTable()
    h = hyperpm.parse("t 2 2\nv 0 A\nv 1 B\ne 1 0 0\ne 0 1\n", labels)
    assert h.num_edges == 1
    assert h.edge(0) == [0, 1]
    with pytest.raises(hyperpm.NormalizationError):
        hyperpm.parse("t 3 1\nv 0 A\nv 1 B\nv 2 A\ne 0 1\n", labels)
    with pytest.raises(hyperpm.ParseError):
        hyperpm.parse("t 1 1\nv 0 A\n", labels)
    names = hyperpm.numbered_labels(2)
    g = hyperpm.gen_random_hypergraph(1, 10, 12, labels=2, min_arity=2, max_arity=3)
    assert hyperpm.parse(hyperpm.serialize(g, names), names) == g


def test_validation(sample):
    labels, _, _ = sample
    disjoint = hyperpm.parse("t 4 2\nv 0 A\nv 1 A\nv 2 A\nv 3 A\ne 0 1\ne 2 3\n", labels)
    with pytest.raises(hyperpm.ValidationError):
        hyperpm.validate_query(disjoint)
    with pytest.raises(ValueError):
        hyperpm.match(disjoint, disjoint, limit=0)


def test_cli_in_process():
    code, out, _ = hyperpm.run_cli(
        ["match", str(FIXTURES / "sample_data.txt"), str(FIXTURES / "sample_query.txt"), "--count-only"]
    )
    assert code == 0
    assert out == "1\n"
    code, _, _ = hyperpm.run_cli(["match", str(FIXTURES / "sample_data.txt"), "nope.txt"])
    assert code == 1
