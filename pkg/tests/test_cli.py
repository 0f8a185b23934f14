import io
import json
from fractions import Fraction

import pytest

from pentalimit import collineation, geom
from pentalimit.cli import main
from pentalimit.collineation import Collineation
from pentalimit.documents import InputError, PolygonDocument, parse_coordinate
from pentalimit.geom import Mat3

HEPTAGON = [[2, 0], [3, 1], [3, 2], [2, 3], [1, 3], [0, 2], [0, 1]]
HEXAGON_CSV = "# axis-aligned sample\n0,0\n0,2\n3,2\n3,3\n5,3\n5,0\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, content):
        path = tmp_path / name
        path.write_text(content if isinstance(content, str) else json.dumps(content))
        return str(path)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith("{") else out), err


class TestDocuments:
    def test_coordinates(self):
        assert parse_coordinate(3) == Fraction(3)
        assert parse_coordinate("-7/4") == Fraction(-7, 4)
        assert parse_coordinate(0.5) == 0.5 and isinstance(parse_coordinate("0.5"), float)
        for bad in ("1/0", "abc", True, None, float("nan")):
            with pytest.raises(InputError):
                parse_coordinate(bad)

    def test_json_roundtrip(self):
        doc = PolygonDocument.from_dict({"name": "h", "vertices": [[0, 0], ["1/2", 0], [0, 1]]})
        again = PolygonDocument.from_json(doc.to_json())
        assert again == doc
        assert again.to_dict()["vertices"][1] == ["1/2", 0]
        assert doc.digest() == again.digest()

    def test_bare_list_and_csv(self):
        a = PolygonDocument.parse(json.dumps(HEPTAGON))
        b = PolygonDocument.parse("\n".join(f"{x} {y}" for x, y in HEPTAGON))
        assert a.vertices == b.vertices and a.resolved_mode == geom.EXACT

    def test_float_mode(self):
        doc = PolygonDocument.parse("[[0.0, 0], [1, 0], [0, 1]]")
        assert doc.resolved_mode == geom.FLOAT
        assert doc.to_polygon().mode == geom.FLOAT

    def test_bad_documents(self):
        for text in ('{"verts": []}', "[[0, 0], [1]]", "{nope", "1 2 3\n"):
            with pytest.raises(InputError):
                PolygonDocument.parse(text)
        with pytest.raises(InputError):
            PolygonDocument.parse("[[0, 0], [1, 0]]")


class TestCommands:
    def test_la_exact(self, capsys, write):
        code, rep, _ = run(capsys, "la", write("h.json", {"name": "heptagon", "vertices": HEPTAGON}))
        assert code == 0
        assert rep["command"] == "la"
        assert rep["input"]["n"] == 7 and rep["input"]["name"] == "heptagon"
        assert rep["results"]["matrix"] == [["-6", "-4", "49"], ["-1", "-7", "51"], ["-1", "-3", "27"]]
        assert rep["results"]["trace"] == "14"
        assert "timing" not in rep

    def test_la_float_flag(self, capsys, write):
        code, rep, _ = run(capsys, "la", write("h.json", HEPTAGON), "--float")
        assert code == 0 and rep["results"]["matrix"][0] == [-6.0, -4.0, 49.0]

    def test_limit_both(self, capsys, write):
        code, rep, _ = run(capsys, "limit", write("h.json", HEPTAGON))
        assert code == 0
        x, y = rep["results"]["limit"]
        assert abs(x - 1.609477032) < 1e-9 and abs(y - 1.837600901) < 1e-9
        assert rep["checks"][0]["status"] == "pass"
        assert rep["results"]["rational_form"]["denominator"] == ["1", "13", "38"]

    def test_limit_iterate_only(self, capsys, write):
        code, rep, _ = run(capsys, "limit", write("h.json", HEPTAGON), "--method", "iterate")
        assert code == 0 and abs(rep["results"]["limit"][0] - 1.609477032) < 1e-8

    def test_iterate(self, capsys, write):
        code, rep, _ = run(capsys, "iterate", write("h.json", HEPTAGON), "-k", "1")
        assert code == 0
        assert rep["results"]["vertices"][0] == ["5/2", "1"]
        code, rep, _ = run(capsys, "iterate", write("h.json", HEPTAGON), "-k", "3", "--exact-steps", "1")
        assert rep["results"]["mode"] == "float"

    def test_collapse_csv(self, capsys, write):
        code, rep, _ = run(capsys, "collapse", write("hex.csv", HEXAGON_CSV), "--verify")
        assert code == 0
        assert rep["results"]["collapse_point"] == ["8/3", "5/3"]
        assert rep["checks"][0]["status"] == "pass"

    def test_verify_all(self, capsys, write):
        code, rep, _ = run(capsys, "verify", write("h.json", HEPTAGON))
        assert code == 0
        status = {c["name"]: c["status"] for c in rep["checks"]}
        assert status == {
            "trace": "pass", "conservation": "pass", "invariance": "pass", "hull": "pass",
            "smalln": "skipped", "duality": "pass", "incidence": "skipped",
        }

    def test_verify_subset(self, capsys, write):
        code, rep, _ = run(capsys, "verify", write("hex.csv", HEXAGON_CSV), "--checks", "trace,incidence")
        assert code == 0 and [c["name"] for c in rep["checks"]] == ["trace", "incidence"]

    def test_render(self, capsys, write, tmp_path):
        out = tmp_path / "fig.svg"
        code, _, _ = run(capsys, "render", write("h.json", HEPTAGON), "-k", "3", "--mark-limit", "-o", str(out))
        svg = out.read_text()
        assert code == 0
        assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")
        assert svg.count("<polygon") == 4 and 'id="limit"' in svg

    def test_render_stdout(self, capsys, write):
        code, out, _ = run(capsys, "render", write("h.json", HEPTAGON), "-k", "1")
        assert code == 0 and out.count("<polygon") == 2

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(HEPTAGON)))
        code, rep, _ = run(capsys, "la", "-")
        assert code == 0 and rep["input"]["n"] == 7

    def test_deterministic(self, capsys, write):
        path = write("h.json", HEPTAGON)
        first = run(capsys, "verify", path, "--seed", "3")[1]
        second = run(capsys, "verify", path, "--seed", "3")[1]
        assert first == second

    def test_timing_opt_in(self, capsys, write):
        code, rep, _ = run(capsys, "la", write("h.json", HEPTAGON), "--timing")
        assert code == 0 and rep["timing"]["seconds"] >= 0


class TestExitCodes:
    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "la", str(tmp_path / "nope.json"))
        assert code == 2 and err.startswith("error:")

    def test_collinear_input(self, capsys, write):
        code, _, err = run(capsys, "la", write("c.json", [[0, 0], [1, 0], [2, 0], [1, 1]]))
        assert code == 2 and "collinear" in err

    def test_nonconvex_limit(self, capsys, write):
        code, _, err = run(capsys, "limit", write("n.json", [[0, 0], [2, 0], [1, 1], [2, 2], [0, 2]]))
        assert code == 2 and "NotConvex" in err

    def test_not_axis_aligned(self, capsys, write):
        code, _, _ = run(capsys, "collapse", write("h.json", HEPTAGON))
        assert code == 2

    def test_bad_epsilon(self, capsys, write):
        with pytest.raises(SystemExit) as info:
            main(["la", write("h.json", HEPTAGON), "--epsilon", "0"])
        assert info.value.code == 2

    def test_square_iteration(self, capsys, write):
        code, _, err = run(capsys, "iterate", write("s.json", [[0, 0], [0, 1], [1, 1], [1, 0]]))
        assert code == 4 and "DegenerateOutput at step 1" in err

    def test_selection_failure(self, capsys, write, monkeypatch):
        monkeypatch.setattr(geom, "in_hull", lambda A, p: False)
        code, _, err = run(capsys, "limit", write("h.json", HEPTAGON), "--method", "eigen")
        assert code == 3 and "NoCandidateInHull" in err

    def test_corrupted_collineation_fails_verification(self, capsys, write, monkeypatch):
        real = collineation.build_LA

        def corrupted(A):
            # perturb by an amount that depends on the polygon, so conservation breaks
            L = real(A)
            vs = A.lifts() if hasattr(A, "lifts") else tuple(A)
            rows = [list(r) for r in L.matrix.rows]
            rows[0][2] += vs[0].a / vs[0].c
            return Collineation(Mat3(tuple(tuple(r) for r in rows)), L.n)

        monkeypatch.setattr(collineation, "build_LA", corrupted)
        code, rep, _ = run(capsys, "verify", write("h.json", HEPTAGON), "--checks", "conservation,trace")
        assert code == 1
        status = {c["name"]: c["status"] for c in rep["checks"]}
        assert status == {"conservation": "fail", "trace": "pass"}
