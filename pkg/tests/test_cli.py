import json

import jsonschema
import pytest

from conftest import PD, S3_A, diagram
from knotfactor.cli import detect_format, main
from knotfactor.schema import REPORT_SCHEMA
from knotfactor.triangulation import to_text


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestDetect:
    @pytest.mark.parametrize("text, fmt", [
        ("X[1,5,2,4]", "pd"),
        ("PD[X[1,5,2,4]]", "pd"),
        ("4 6 2", "dt"),
        ("[4, 6, 2]", "dt"),
        ("-4 6 2", "dt"),
        ("", "dt"),
        ("tri 1\n", "tri"),
        ('{"tets": []}', "json"),
    ])
    def test_formats(self, text, fmt):
        assert detect_format(text) == fmt

    def test_unknown(self):
        with pytest.raises(Exception, match="format"):
            detect_format("hello")


class TestFactor:
    def test_trefoil_pd(self, capsys):
        code, out, _ = run(capsys, "factor", PD["3_1"])
        assert code == 0
        assert out.startswith("1 prime summand\n")

    def test_dt(self, capsys):
        code, out, _ = run(capsys, "factor", "4 6 2")
        assert code == 0 and out.startswith("1 prime summand\n")

    def test_unknot(self, capsys):
        code, out, _ = run(capsys, "factor", "X[1,4,2,1] X[2,4,3,3]")
        assert code == 0 and out.startswith("0 prime summands")

    def test_granny_json(self, capsys, tmp_path):
        cert = tmp_path / "c.json"
        code, out, _ = run(capsys, "factor", diagram("granny").pd_text(), "--json", "--emit-cert", str(cert))
        doc = json.loads(out)
        jsonschema.validate(doc, REPORT_SCHEMA)
        assert code == 0 and doc["summandCount"] == 2
        assert doc["certificate"] == str(cert) and cert.exists()

    def test_parallel(self, capsys):
        code, out, _ = run(capsys, "factor", diagram("granny").pd_text(), "--parallel")
        assert code == 0 and out.startswith("2 prime summands")

    def test_link_is_an_input_error(self, capsys):
        code, _, err = run(capsys, "factor", "X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]")
        assert code == 1 and "links unsupported" in err

    def test_malformed(self, capsys):
        code, _, err = run(capsys, "factor", "X[1,2,3]")
        assert code == 1 and err.startswith("error:")

    def test_bare_triangulation_is_refused(self, capsys, tmp_path):
        f = tmp_path / "t.tri"
        f.write_text(to_text(S3_A))
        code, _, err = run(capsys, "factor", str(f))
        assert code == 1 and "loop" in err

    def test_stdin(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO(PD["3_1"]))
        code, out, _ = run(capsys, "factor", "-")
        assert code == 0 and out.startswith("1 prime summand")


class TestVerify:
    def test_round_trip(self, capsys, tmp_path):
        cert = tmp_path / "c.json"
        assert run(capsys, "factor", PD["4_1"], "--emit-cert", str(cert))[0] == 0
        code, out, _ = run(capsys, "verify", str(cert), PD["4_1"])
        assert code == 0 and out.strip() == "certificate verified"

    def test_wrong_knot(self, capsys, tmp_path):
        cert = tmp_path / "c.json"
        run(capsys, "factor", PD["4_1"], "--emit-cert", str(cert))
        code, out, _ = run(capsys, "verify", str(cert), PD["3_1"])
        assert code == 1 and out.startswith("certificate rejected at input")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify", str(tmp_path / "nope.json"), PD["3_1"])
        assert code == 1 and "cannot read certificate" in err


class TestInfoAndBuild:
    def test_info_triangulation(self, capsys):
        code, out, _ = run(capsys, "info", to_text(S3_A))
        assert code == 0
        assert out.splitlines()[0] == "1 tet, valid, H1 trivial"

    def test_info_diagram(self, capsys):
        code, out, _ = run(capsys, "info", PD["3_1"])
        lines = out.splitlines()
        assert code == 0 and lines[0] == "27 tets, valid, H1 trivial"
        assert "loop length 6" in lines

    def test_build_round_trips_through_info(self, capsys, tmp_path):
        code, out, _ = run(capsys, "build", "4 6 2", "--simplify")
        assert code == 0
        f = tmp_path / "t.tri"
        f.write_text(out)
        code, out, _ = run(capsys, "info", str(f))
        assert code == 0 and "loop length 1" in out.splitlines()

    def test_build_needs_a_diagram(self, capsys):
        code, _, err = run(capsys, "build", to_text(S3_A))
        assert code == 1 and "PD or DT" in err

    def test_empty_code(self, capsys):
        code, out, _ = run(capsys, "build", "")
        assert code == 0 and out.startswith("tri 1")
