import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from csrickart import cli
from csrickart.core import zn
from csrickart.properties import clear_caches
from csrickart.specfile import SpecSyntaxError, format_module_spec, parse_module_spec, read_module

T2_RING = """\
# upper triangular 2x2 matrices over F_2: e1 = E11, e2 = E12, e3 = E22
orders: 2 2 2
unit: 1 0 1
mul e1 e1 = 1 0 0
mul e1 e2 = 0 1 0
mul e2 e3 = 0 1 0
mul e3 e3 = 0 0 1
"""

T2_MODULE = """\
name: T2
ring: custom:t2.ring
orders: 2 2 2
act e1 g1 = 1 0 0
act e2 g1 = 0 1 0
act e3 g2 = 0 1 0
act e3 g3 = 0 0 1
"""


@pytest.fixture
def files(tmp_path):
    texts = {
        "z4.mod": "ring: zn:4\norders: 4\n",
        "m.mod": "name: M\nring: Z\norders: 2 16\n",
        "z2.mod": "ring: Z\norders: 2\n",
        "z16.mod": "ring: Z\norders: 16\n",
        "bad.mod": "ring: Z\norders: 0 3\n",
        "t2.ring": T2_RING,
        "t2.mod": T2_MODULE,
    }
    for name, text in texts.items():
        (tmp_path / name).write_text(text)
    return {name: str(tmp_path / name) for name in texts}


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParsing:
    def test_examples(self):
        M = parse_module_spec("ring: Z\norders: 2 16")
        assert M.orders == (2, 16) and M.ring.is_integers
        R = parse_module_spec("ring: zn:4\norders: 4")
        assert R.ring == zn(4) and R.size == 4

    def test_rejects_zero_order(self):
        with pytest.raises(SpecSyntaxError, match=":2:"):
            parse_module_spec("ring: Z\norders: 0 3")

    @pytest.mark.parametrize(
        "text,line",
        [
            ("ring: Q\norders: 2", 1),
            ("ring: Z\norders: 2 x", 2),
            ("ring: Z\n\norders: 2\nact e1 g1 = 1", 4),
            ("ring: zn:0\norders: 1", 1),
            ("ring: Z\norders: 2\nbogus line", 3),
        ],
    )
    def test_line_numbers(self, text, line):
        with pytest.raises(SpecSyntaxError) as err:
            parse_module_spec(text, source="x.mod")
        assert err.value.line == line
        assert str(err.value).startswith(f"x.mod:{line}:")

    def test_missing_lines(self):
        with pytest.raises(SpecSyntaxError):
            parse_module_spec("orders: 2")
        with pytest.raises(SpecSyntaxError):
            parse_module_spec("ring: Z")

    def test_validation_error(self):
        from csrickart.core import AxiomError

        with pytest.raises(AxiomError):
            parse_module_spec("ring: zn:4\norders: 3")

    def test_custom_ring_file(self, files):
        M = read_module(files["t2.mod"])
        assert M.size == 8 and M.name == "T2"

    def test_custom_round_trip(self, files):
        M = read_module(files["t2.mod"])
        again = parse_module_spec(format_module_spec(M))
        assert again.key == M.key

    @given(
        st.sampled_from(["Z", "zn:4", "zn:12", "zn:8"]),
        st.lists(st.sampled_from([1, 2, 4]), min_size=1, max_size=3),
        st.one_of(st.none(), st.sampled_from(["M", "N2"])),
    )
    @settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    def test_round_trip(self, ring, orders, name):
        text = f"ring: {ring}\norders: {' '.join(map(str, orders))}\n"
        if name:
            text = f"name: {name}\n" + text
        M = parse_module_spec(text)
        again = parse_module_spec(format_module_spec(M))
        assert again.key == M.key and again.name == M.name
        assert format_module_spec(again) == format_module_spec(M)


class TestCommands:
    def test_check_z4(self, capsys, files):
        code, out, _ = run(capsys, "check", "cs-rickart", "--module", files["z4.mod"])
        assert code == 0 and out.splitlines()[0] == "true"

    def test_check_failure_prints_witness(self, capsys, files):
        code, out, _ = run(capsys, "check", "cs-rickart", "--module", files["m.mod"])
        assert code == 1 and out.startswith("false")
        assert "g1 -> 0 8" in out and "g2 -> 0 2" in out

    def test_check_relative(self, capsys, files):
        # Z16 is Z2-CS-Rickart
        code, out, _ = run(capsys, "check", "cs-rickart", "--module", files["z2.mod"], "--relative", files["z16.mod"])
        assert code == 0 and out.strip() == "true"

    def test_check_json(self, capsys, files):
        code, out, _ = run(capsys, "check", "sip", "--module", files["m.mod"], "--json")
        d = json.loads(out)
        assert code == 1 and d["properties"] == {"sip": False}
        assert d["module"]["canonical_form"] == [2, 16]
        assert "submodule" in d["witnesses"]["sip"]

    def test_parse_error_exit_2(self, capsys, files):
        code, _, err = run(capsys, "check", "cs-rickart", "--module", files["bad.mod"])
        assert code == 2 and "bad.mod:2" in err

    def test_usage_error_exit_2(self, capsys, files):
        code, _, _ = run(capsys, "check", "noetherian", "--module", files["z4.mod"])
        assert code == 2
        code, _, _ = run(capsys, "frobnicate")
        assert code == 2

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "report", str(tmp_path / "nope.mod"))
        assert code == 2 and err.startswith("error:")

    def test_report(self, capsys, files):
        code, out, _ = run(capsys, "report", files["z4.mod"], "--json")
        p = json.loads(out)["properties"]
        assert code == 0
        assert (p["cs-rickart"], p["dual-cs-rickart"], p["rickart"], p["dual-rickart"]) == (True, True, False, False)

    def test_report_custom(self, capsys, files):
        code, out, _ = run(capsys, "report", files["t2.mod"])
        assert code == 0 and "rickart" in out

    def test_summands_and_submodules(self, capsys, files):
        code, out, _ = run(capsys, "summands", files["m.mod"])
        assert code == 0 and out.startswith("6 direct summands")
        code, out, _ = run(capsys, "submodules", files["m.mod"], "--json")
        assert len(json.loads(out)["submodules"]) == 14

    def test_homs(self, capsys, files):
        code, out, _ = run(capsys, "homs", files["z2.mod"], files["z16.mod"])
        assert code == 0 and out.startswith("2 homomorphisms")

    def test_verify(self, capsys):
        code, out, _ = run(capsys, "verify", "--theorem", "C-serial", "--max-order", "36", "--ring", "zn:6")
        assert code == 0 and "pass" in out
        code, out, _ = run(capsys, "verify", "--theorem", "T-sum", "--max-order", "8", "--json")
        assert code == 0 and json.loads(out)["passed"]

    def test_search(self, capsys):
        code, out, _ = run(capsys, "search", "--hypothesis", "sip-extending", "--conclusion", "cs-rickart", "--max-order", "32")
        assert code == 0 and out.startswith("counterexample: Z2+Z8")
        assert "g1 -> 0 4" in out
        code, out, _ = run(capsys, "search", "--hypothesis", "extending", "--conclusion", "cs-rickart", "--max-order", "16")
        assert "no counterexample" in out

    def test_search_bad_expression(self, capsys):
        code, _, err = run(capsys, "search", "--hypothesis", "sip(", "--conclusion", "sip", "--max-order", "4")
        assert code == 2 and err.startswith("error:")

    def test_json_byte_stable(self, capsys, files):
        outs = []
        for _ in range(2):
            clear_caches()
            outs.append(run(capsys, "report", files["m.mod"], "--json")[1])
            outs.append(run(capsys, "search", "--hypothesis", "sip-extending", "--conclusion", "cs-rickart",
                            "--max-order", "32", "--json")[1])
        assert outs[0] == outs[2] and outs[1] == outs[3]

    def test_module_entry_point(self):
        import subprocess
        import sys

        r = subprocess.run([sys.executable, "-m", "csrickart", "--help"], capture_output=True, text=True)
        assert r.returncode == 0 and "check" in r.stdout
