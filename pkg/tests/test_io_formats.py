import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FOUR_NODE_E_P, make_four_node_graph
from etlink.errors import ConfigError, DatasetError
from etlink.io_formats import (
    EdgeRecord,
    format_score,
    parse_edge_list,
    read_ranked_predictions,
    validate_schema,
    write_ranked_predictions,
    write_report,
)


def parse_text(text, schema):
    return parse_edge_list(io.StringIO(text), schema)


class TestParse:
    def test_two_plain_records(self):
        records = parse_text("1 2\n2 3\n", ("src", "dst"))
        assert records == [
            EdgeRecord("1", "2"),
            EdgeRecord("2", "3"),
        ]

    def test_weight_and_timestamp(self):
        records = parse_text("1 2 0.5 100\n", ("src", "dst", "weight", "timestamp"))
        assert records == [EdgeRecord("1", "2", weight=0.5, timestamp=100)]

    def test_comments_skipped(self):
        records = parse_text("# comment\n% other\n1 2\n", ("src", "dst"))
        assert len(records) == 1

    def test_comma_delimited(self):
        records = parse_text("a,b\nb,c\n", ("src", "dst"))
        assert records[0].src_label == "a"

    def test_bad_weight_reports_line(self):
        with pytest.raises(DatasetError, match="line 2"):
            parse_text("1 2 0.5\n1 3 oops\n", ("src", "dst", "weight"))

    def test_bad_timestamp_reports_line(self):
        with pytest.raises(DatasetError, match="line 1"):
            parse_text("1 2 x\n", ("src", "dst", "timestamp"))

    def test_integral_float_timestamp_accepted(self):
        records = parse_text("1 2 100.0\n", ("src", "dst", "timestamp"))
        assert records[0].timestamp == 100

    def test_too_few_fields(self):
        with pytest.raises(DatasetError, match="line 1"):
            parse_text("1\n", ("src", "dst"))

    def test_empty_file_rejected(self):
        with pytest.raises(DatasetError):
            parse_text("# nothing here\n", ("src", "dst"))

    def test_byte_stream(self):
        records = parse_edge_list(io.BytesIO(b"1 2\n"), ("src", "dst"))
        assert records[0].dst_label == "2"

    def test_order_preserving_and_idempotent(self):
        text = "3 4\n1 2\n2 3\n"
        first = parse_text(text, ("src", "dst"))
        second = parse_text(text, ("src", "dst"))
        assert first == second
        assert [r.src_label for r in first] == ["3", "1", "2"]

    def test_schema_validation(self):
        with pytest.raises(ConfigError):
            validate_schema(("src", "src", "dst"))
        with pytest.raises(ConfigError):
            validate_schema(("src", "other"))
        with pytest.raises(ConfigError):
            validate_schema(("weight", "timestamp"))


class TestWritePredictions:
    def test_single_row(self):
        sink = io.StringIO()
        write_ranked_predictions([("a", "b", 0.5, True)], sink)
        lines = sink.getvalue().splitlines()
        assert lines == ["rank,src,dst,score,in_test_set", "1,a,b,0.5,true"]

    def test_empty_table_header_only(self):
        sink = io.StringIO()
        write_ranked_predictions([], sink)
        assert sink.getvalue() == "rank,src,dst,score,in_test_set\n"

    def test_four_node_ranking_row_order(self):
        # the worked example's non-edge ranking, with the tied tail broken
        # lexicographically
        from etlink.effective import effective_transition_exact, et_score
        from etlink.graph import normalized_matrix
        from etlink.harness import candidate_pairs, top_k_predict

        g = make_four_node_graph()
        table = et_score(effective_transition_exact(normalized_matrix(g)))
        cands = candidate_pairs(g)
        top = top_k_predict(table, cands, 5)
        sink = io.StringIO()
        write_ranked_predictions(
            [(g.labels[i], g.labels[j], s, False) for i, j, s in top.pairs], sink
        )
        rows = sink.getvalue().splitlines()[1:]
        ordered = [tuple(r.split(",")[1:3]) for r in rows]
        assert ordered == [
            ("2", "4"),
            ("4", "3"),
            ("3", "2"),
            ("2", "1"),
            ("3", "1"),
        ]

    def test_round_trip_four_node_scores(self):
        g = make_four_node_graph()
        rows = []
        for i in range(4):
            for j in range(4):
                if i != j:
                    rows.append(
                        (str(g.labels[i]), str(g.labels[j]), FOUR_NODE_E_P[i, j], i < j)
                    )
        sink = io.StringIO()
        write_ranked_predictions(rows, sink)
        back = read_ranked_predictions(io.StringIO(sink.getvalue()))
        assert [r.rank for r in back] == list(range(1, len(rows) + 1))
        for row, (src, dst, score, in_test) in zip(back, rows):
            assert (row.src, row.dst) == (src, dst)
            assert row.in_test_set == in_test
            assert abs(row.score - score) <= 1e-11 * max(1.0, abs(score))


# labels come from whitespace- or comma-delimited files, so they can never
# contain whitespace, commas, or control characters
label_text = st.text(
    alphabet=st.characters(
        blacklist_categories=("Cs", "Cc", "Zs", "Zl", "Zp"),
        blacklist_characters=",",
    ),
    min_size=1,
    max_size=8,
)


@settings(max_examples=120, deadline=None)
@given(
    rows=st.lists(
        st.tuples(
            label_text,
            label_text,
            st.floats(
                allow_nan=False, allow_infinity=False, min_value=-1e12, max_value=1e12
            ),
            st.booleans(),
        ),
        max_size=20,
    )
)
def test_predictions_round_trip_property(rows):
    sink = io.StringIO()
    write_ranked_predictions(rows, sink)
    back = read_ranked_predictions(io.StringIO(sink.getvalue()))
    assert len(back) == len(rows)
    for got, (src, dst, score, in_test) in zip(back, rows):
        assert got.src == src
        assert got.dst == dst
        assert got.in_test_set == in_test
        # 12 significant digits survive the text round trip
        assert got.score == pytest.approx(score, rel=1e-11, abs=1e-300)


class TestReport:
    def test_report_rows_and_metadata(self):
        sink = io.StringIO()
        write_report(
            [
                {
                    "predictor": "katz",
                    "params": "beta=0.1",
                    "kappa": 5,
                    "hits": 2,
                    "accuracy": 0.4,
                    "wall_time_ms": 12,
                    "status": "ok",
                }
            ],
            sink,
            metadata={"records": 10, "directed": True},
        )
        text = sink.getvalue().splitlines()
        assert text[0] == "# records=10"
        assert text[1] == "# directed=True"
        assert text[2].startswith("predictor,params,kappa,hits,accuracy")
        assert text[3] == "katz,beta=0.1,5,2,0.4,12,ok"


class TestScoreFormatting:
    def test_twelve_significant_digits(self):
        assert format_score(2 / 3) == "0.666666666667"
        assert format_score(1.0) == "1"
