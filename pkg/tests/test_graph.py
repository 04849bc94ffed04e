import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import complete_edges, graph_from_edges, random_edges, star_edges
from polarnet.errors import AnnotationError, DataError, GraphFormatError
from polarnet.graph import Opinion, load_edge_list, save_edge_list, subgraph_by_opinion


def write_files(tmp_path, edge_lines, attr_lines):
    edges = tmp_path / "edges.csv"
    attrs = tmp_path / "attrs.csv"
    edges.write_text("\n".join(edge_lines) + "\n")
    attrs.write_text("\n".join(attr_lines) + "\n")
    return edges, attrs


def test_load_dedupes_and_drops_self_loops(tmp_path, caplog):
    edges, attrs = write_files(tmp_path, ["0,1", "1,0", "1,1"], ["0,pro", "1,anti"])
    with caplog.at_level(logging.WARNING):
        g = load_edge_list(edges, attrs)
    assert g.n == 2
    assert g.edge_count == 1
    assert "1 self-loop" in caplog.text
    assert g.opinions.tolist() == [int(Opinion.PRO), int(Opinion.ANTI)]


def test_load_detects_header_and_case_insensitive_opinions(tmp_path):
    edges, attrs = write_files(
        tmp_path, ["src,dst", "10,20"], ["node,opinion", "10,PRO", "20,Anti"]
    )
    g = load_edge_list(edges, attrs)
    assert g.n == 2 and g.edge_count == 1
    assert g.labels.tolist() == [10, 20]


def test_load_malformed_line_reports_line_number(tmp_path):
    edges, attrs = write_files(tmp_path, ["0,1", "2;3"], ["0,pro", "1,anti"])
    with pytest.raises(GraphFormatError) as err:
        load_edge_list(edges, attrs)
    assert err.value.line == 2


def test_load_bad_opinion_reports_line_number(tmp_path):
    edges, attrs = write_files(tmp_path, ["0,1"], ["0,pro", "1,maybe"])
    with pytest.raises(GraphFormatError) as err:
        load_edge_list(edges, attrs)
    assert err.value.line == 2


def test_load_non_integer_destination_rejected(tmp_path):
    edges, attrs = write_files(tmp_path, ["0,1", "1,abc"], ["0,pro", "1,anti"])
    with pytest.raises(GraphFormatError) as err:
        load_edge_list(edges, attrs)
    assert err.value.line == 2


def test_load_missing_opinion_lists_offenders(tmp_path):
    edges, attrs = write_files(tmp_path, ["0,1", "1,2", "2,3"], ["0,pro", "2,anti"])
    with pytest.raises(AnnotationError) as err:
        load_edge_list(edges, attrs)
    assert err.value.offenders == [1, 3]


def test_load_conflicting_opinion_rejected(tmp_path):
    edges, attrs = write_files(tmp_path, ["0,1"], ["0,pro", "1,anti", "0,anti"])
    with pytest.raises(AnnotationError):
        load_edge_list(edges, attrs)


def test_attr_only_nodes_kept_as_isolated(tmp_path):
    edges, attrs = write_files(tmp_path, ["0,1"], ["0,pro", "1,anti", "7,anti"])
    g = load_edge_list(edges, attrs)
    assert g.n == 3
    assert g.degree(2) == 0  # label 7 densified last
    assert g.labels.tolist() == [0, 1, 7]


def test_save_load_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    g = graph_from_edges(10, random_edges(rng, 10, 0.4), (rng.random(10) < 0.5))
    save_edge_list(g, tmp_path / "e.csv", tmp_path / "a.csv")
    g2 = load_edge_list(tmp_path / "e.csv", tmp_path / "a.csv")
    assert g.structurally_equal(g2)
    assert np.array_equal(g.labels, g2.labels)


def test_load_is_idempotent(tmp_path):
    edges, attrs = write_files(
        tmp_path,
        ["5,9", "9,12", "5,12", "3,5"],
        ["3,pro", "5,anti", "9,pro", "12,anti"],
    )
    g1 = load_edge_list(edges, attrs)
    save_edge_list(g1, tmp_path / "e2.csv", tmp_path / "a2.csv")
    g2 = load_edge_list(tmp_path / "e2.csv", tmp_path / "a2.csv")
    assert g1.structurally_equal(g2)
    assert np.array_equal(g1.labels, g2.labels)


def test_degree_star_and_isolated():
    g = graph_from_edges(6, star_edges(4))  # node 5 isolated
    assert g.degree(0) == 4
    assert all(g.degree(i) == 1 for i in range(1, 5))
    assert g.degree(5) == 0


def test_degree_out_of_range():
    g = graph_from_edges(3, complete_edges(3))
    with pytest.raises(IndexError):
        g.degree(3)
    with pytest.raises(IndexError):
        g.neighbors(-1)


def test_self_loop_rejected_by_builder():
    with pytest.raises(DataError):
        graph_from_edges(3, [(0, 0)])


def test_duplicate_edges_collapse_in_builder():
    g = graph_from_edges(3, [(0, 1), (1, 0), (0, 1), (1, 2)])
    assert g.edge_count == 2


def test_subgraph_two_triangles():
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    opinions = [1, 1, 1, 0, 0, 0]
    g = graph_from_edges(6, edges, opinions)
    pro = subgraph_by_opinion(g, Opinion.PRO)
    assert pro.n == 3 and pro.edge_count == 3
    assert pro.opinions.tolist() == [1, 1, 1]
    anti = subgraph_by_opinion(g, Opinion.ANTI)
    assert anti.n == 3 and anti.edge_count == 3


def test_subgraph_excludes_cross_edges():
    # complete bipartite K_{2,2}, all edges cross-opinion
    g = graph_from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)], [1, 1, 0, 0])
    anti = subgraph_by_opinion(g, Opinion.ANTI)
    assert anti.n == 2 and anti.edge_count == 0


def test_subgraph_matches_brute_force_filter():
    rng = np.random.default_rng(17)
    n = 50
    edges = random_edges(rng, n, 0.12)
    opinions = (rng.random(n) < 0.5).astype(np.uint8)
    g = graph_from_edges(n, edges, opinions)
    for op in (Opinion.PRO, Opinion.ANTI):
        sub = subgraph_by_opinion(g, op)
        keep = [i for i in range(n) if opinions[i] == int(op)]
        kept_edges = [
            (u, v) for u, v in edges if opinions[u] == int(op) and opinions[v] == int(op)
        ]
        assert sub.n == len(keep)
        assert sub.edge_count == len(kept_edges)
        # label traceability: subgraph labels are the original node ids
        assert sub.labels.tolist() == keep


@settings(max_examples=40)
@given(st.data())
def test_handshake_and_symmetry(data):
    n = data.draw(st.integers(min_value=2, max_value=25))
    pairs = st.tuples(
        st.integers(min_value=0, max_value=n - 1),
        st.integers(min_value=0, max_value=n - 1),
    )
    edges = [e for e in data.draw(st.lists(pairs, max_size=60)) if e[0] != e[1]]
    g = graph_from_edges(n, edges if edges else np.empty((0, 2), dtype=np.int64))
    assert int(g.degrees.sum()) == 2 * g.edge_count
    g.validate()  # symmetry + simplicity full scan
    for i in range(n):
        for j in g.neighbors(i):
            assert i in g.neighbors(int(j))


def test_neighbors_sorted():
    g = graph_from_edges(5, [(4, 0), (2, 0), (3, 0)])
    assert g.neighbors(0).tolist() == [2, 3, 4]
