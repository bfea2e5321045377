import json
import logging

import pytest

from hibicone.conic import enumerate_conic
from hibicone.errors import HibiError, NotAdmissibleError, PosetParseError
from hibicone.geometry import signature_table
from hibicone.io import (
    conic_csv,
    conic_document,
    graph_to_dot,
    graph_to_json,
    mutation_document,
    read_poset,
    report_error,
    signature_csv,
    signature_document,
    to_json,
    write_output,
)
from hibicone.mutation import (
    ExchangeEdge,
    ExchangeGraph,
    NCCRSet,
    find_admissible_lambda,
    right_mutation,
)
from hibicone.segre import SegreSpec

from tests.support import segre

LINE = NCCRSet.of([(0,), (1,)])
FLIPPED = NCCRSet.of([(-1,), (0,)])
SMALL_GRAPH = ExchangeGraph(
    (LINE, FLIPPED), (ExchangeEdge(LINE, FLIPPED, (1,), (-1,), (1,), "right"),)
)


class TestPosetFiles:
    def test_read(self, tmp_path, figure_one):
        path = tmp_path / "figure.json"
        path.write_text(json.dumps(figure_one.base.to_dict()), encoding="utf-8")
        assert read_poset(path) == figure_one.base

    def test_missing(self, tmp_path):
        with pytest.raises(PosetParseError, match="Cannot read"):
            read_poset(tmp_path / "absent.json")

    def test_invalid(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"elements": ["a", "a"], "covers": []}', encoding="utf-8")
        with pytest.raises(PosetParseError):
            read_poset(path)


class TestDocuments:
    def test_json_keeps_hats(self):
        text = to_json({"tree": ["0̂-p1"]})
        assert text.endswith("}\n")
        assert "0̂" in text

    def test_conic_without_cells(self, figure_tree):
        classes = enumerate_conic(figure_tree)
        document = conic_document(classes, cells=False)
        assert document[0] == {"class": [-3, -1]}
        assert len(document) == 15

    def test_conic_with_verdicts(self):
        _, tree = segre(1, 1)
        classes = enumerate_conic(tree)
        verdicts = {cls.coords: True for cls in classes}
        document = conic_document(classes, verdicts=verdicts)
        assert [entry["oracle"] for entry in document] == [True, True, True]
        assert all(len(entry["cell"]) == 8 for entry in document)

    def test_conic_csv(self):
        _, tree = segre(1, 1)
        lines = conic_csv(enumerate_conic(tree)).splitlines()
        assert lines[0] == "class,strict,weak,cell"
        assert [line.split(",")[0] for line in lines[1:]] == ["-1", "0", "1"]
        # tree edges e2, e3, e4; the fundamental cycle of e1 climbs e3 and descends e4, e2
        assert lines[1] == (
            "-1,4,4,y2 > -1; y2 <= 0; y3 > -1; y3 <= 0; y4 > -1; y4 <= 0; "
            "y2 - y3 + y4 > -2; y2 - y3 + y4 <= -1"
        )

    def test_conic_csv_with_verdicts(self, figure_tree):
        classes = enumerate_conic(figure_tree)
        text = conic_csv(classes, {cls.coords: True for cls in classes})
        lines = text.splitlines()
        assert lines[0] == "class,strict,weak,cell,oracle"
        assert len(lines) == 16
        assert lines[1].startswith("-3 -1,9,9,")
        assert all(line.endswith(",True") for line in lines[1:])

    def test_signature_csv(self):
        _, tree = segre(1, 1)
        assert signature_csv(signature_table(tree)) == (
            "class,volume,approx\n-1,1/6,0.166667\n0,2/3,0.666667\n1,1/6,0.166667\n"
        )

    def test_signature_document(self):
        _, tree = segre(1, 1, 1)
        document = signature_document(signature_table(tree))
        assert document["method"] == "alcove"
        assert document["total"] == "1"
        assert {"class": "0 0", "volume": "1/2", "approx": 0.5} in document["signatures"]
        json.loads(to_json(document))

    def test_mutation(self):
        spec = SegreSpec.nccr(2, 3)
        square = NCCRSet.of([(0, 0), (1, 0), (0, 1), (1, 1)])
        admissible = find_admissible_lambda(square, (1, 0), spec)
        result = right_mutation(square, (1, 0), admissible.subgroup, spec)
        document = mutation_document(square, (1, 0), admissible, result, left=False)
        assert document["direction"] == "right"
        assert document["positive_weights"] == [2]
        assert document["nu"] == [1, 2]
        assert document["result"] == [[0, 0], [0, 1], [1, 1], [1, 2]]


class TestGraphDocuments:
    def test_dot(self):
        assert graph_to_dot(SMALL_GRAPH) == (
            "graph exchange {\n"
            '  n0 [label="{(0) (1)}"];\n'
            '  n1 [label="{(-1) (0)}"];\n'
            '  n0 -- n1 [label="(1)→(-1)"];\n'
            "}\n"
        )

    def test_json(self):
        document = graph_to_json(SMALL_GRAPH)
        assert document["vertices"] == [[[0], [1]], [[-1], [0]]]
        assert document["edges"] == [
            {
                "source": 0,
                "target": 1,
                "removed": [1],
                "added": [-1],
                "positive_weights": [2],
                "direction": "right",
            }
        ]
        assert document["translation_classes"] == [{"canonical": [[0], [1]], "members": [0, 1]}]
        assert document["truncated"] is False


class TestOutput:
    def test_stdout(self, capsys):
        write_output("hello\n")
        assert capsys.readouterr().out == "hello\n"

    def test_file(self, tmp_path, capsys):
        path = tmp_path / "out.json"
        write_output("{}\n", path)
        assert path.read_text(encoding="utf-8") == "{}\n"
        assert capsys.readouterr().out == ""

    @pytest.mark.parametrize(
        ("error", "level"),
        [
            (HibiError.partial("stopped early", "exchange graph"), logging.WARNING),
            (HibiError.remark("note"), logging.INFO),
            (HibiError("broken"), logging.ERROR),
        ],
    )
    def test_report_error(self, caplog, error, level):
        with caplog.at_level(logging.DEBUG, logger="hibicone"):
            report_error(error)
        assert [(r.levelno, r.getMessage()) for r in caplog.records] == [(level, str(error))]

    def test_error_names_its_subject(self, caplog):
        with caplog.at_level(logging.DEBUG, logger="hibicone"):
            report_error(NotAdmissibleError("No admissible λ for a right mutation", (1, 0)))
        assert caplog.records[0].getMessage() == "(1, 0): No admissible λ for a right mutation"

    def test_missing_file_names_the_path(self, tmp_path):
        path = tmp_path / "absent.json"
        with pytest.raises(PosetParseError) as info:
            read_poset(path)
        assert info.value.subject == path
        assert str(info.value).startswith(f"{path}: Cannot read poset file")
