"""Spec documents, exports, and the command-line pipeline."""

import json

import numpy as np
import pytest

import decaygraph as dg
from decaygraph import cli, io

RING_DOC = (
    '{"lattice":{"kind":"ring","t":1.5,'
    '"segments":[{"type":"A","len":29},{"type":"B","len":1}]}}'
)
CIRC_DOC = '{"lattice":{"kind":"circulant","t":1.5,"n":6,"a":[1,0,1,0,1]}}'
OBC_DOC = '{"lattice":{"kind":"obc_chain","t":1.5,"n":12}}'
PRODUCT_DOC = json.dumps(
    {
        "lattice": {
            "kind": "product",
            "axes": [
                {"kind": "ring", "t": 1.5, "segments": [{"type": "A", "len": 30}]},
                {
                    "kind": "ring",
                    "t": 2.0,
                    "segments": [{"type": "A", "len": 5}, {"type": "B", "len": 3}],
                },
            ],
        }
    }
)
RAW_DOC = json.dumps(
    {"lattice": {"kind": "raw", "dim": 2, "t": 2.0, "entries": [[1, 2, 2.0, 0.0], [2, 1, 1.0, 0.0]]}}
)


class TestParse:
    def test_ring_round_trip_of_29_1(self):
        doc = io.parse_spec(RING_DOC)
        assert doc.spec == dg.SegmentedRing((("A", 29), ("B", 1)))
        assert doc.t == 1.5

    def test_symmetry_violation_surfaces(self):
        bad = '{"lattice":{"kind":"circulant","n":4,"a":[1,0,0],"t":2}}'
        with pytest.raises(dg.ValidationError) as err:
            io.parse_spec(bad)
        assert isinstance(err.value.__cause__, dg.SymmetryViolation)
        assert err.value.__cause__.offset == 1

    def test_product_fig2e_document(self):
        doc = io.parse_spec(PRODUCT_DOC)
        assert doc.kind == "product"
        h = doc.build()
        assert h.dim == 240

    def test_malformed_json_has_position(self):
        with pytest.raises(dg.ParseError) as err:
            io.parse_spec('{"lattice": {"kind": "ring",}}')
        assert err.value.line is not None

    def test_missing_field_named(self):
        with pytest.raises(dg.ValidationError, match="segments"):
            io.parse_spec('{"lattice":{"kind":"ring","t":1.5}}')

    def test_unknown_kind(self):
        with pytest.raises(dg.ValidationError, match="kind"):
            io.parse_spec('{"lattice":{"kind":"mobius","t":1.5}}')

    def test_raw_document(self):
        doc = io.parse_spec(RAW_DOC)
        h = doc.build()
        assert np.array_equal(h.matrix, [[0.0, 2.0], [1.0, 0.0]])
        assert len(h.edges) == 1

    @pytest.mark.parametrize("text", [RING_DOC, CIRC_DOC, OBC_DOC, PRODUCT_DOC, RAW_DOC])
    def test_round_trip(self, text):
        doc = io.parse_spec(text)
        assert io.parse_spec(io.serialize_spec(doc)) == doc


class TestExports:
    def test_hamiltonian_csv(self):
        h = dg.build_circulant_hamiltonian(dg.validate_circulant(2, [1]), 2.0)
        assert io.hamiltonian_csv(h) == "row,col,real,imag\n1,2,2.0,0.0\n2,1,1.0,0.0\n"

    def test_spectrum_csv_header(self):
        sys = dg.eigendecompose(dg.build(dg.ObcChain(2), 4.0))
        text = io.spectrum_csv(sys.values)
        lines = text.strip().split("\n")
        assert lines[0] == "n,re_E,im_E"
        assert float(lines[1].split(",")[1]) == pytest.approx(-2.0, abs=1e-12)

    def test_charges_csv_one_based(self):
        cm = dg.charge_map(dg.SegmentedRing((("A", 6), ("B", 8), ("A", 7), ("B", 4))), 1.5)
        lines = io.charges_csv(cm).strip().split("\n")
        assert lines[0] == "node,Q_amplitude,Q_combinatorial"
        assert len(lines) == 26
        row7 = lines[7].split(",")
        assert row7[0] == "7" and float(row7[1]) == pytest.approx(1.0, abs=1e-9)

    def test_profiles_csv_shape(self):
        sys = dg.eigendecompose(dg.build(dg.ObcChain(3), 2.0))
        lines = io.profiles_csv(sys).strip().split("\n")
        assert lines[0] == "n,site,re_psi,im_psi,abs_psi"
        assert len(lines) == 1 + 9

    def test_sweep_csv(self):
        h = dg.build(dg.ObcChain(2), 4.0)
        sys = dg.eigendecompose(h)
        cfg = dg.DriveConfig(0, 1.0, np.array([0.0, 1.0]))
        sweep = dg.frequency_sweep(h, cfg, sys)
        lines = io.sweep_csv(sweep).strip().split("\n")
        assert lines[0] == "omega,node,abs_x,re_x,im_x"
        assert len(lines) == 1 + 2 * 2


def run_cli(tmp_path, *argv):
    return cli.main([str(a) for a in argv])


@pytest.fixture
def ring_spec(tmp_path):
    path = tmp_path / "ring.json"
    path.write_text(RING_DOC)
    return path


class TestCli:
    def test_build_writes_hamiltonian(self, tmp_path, ring_spec):
        out = tmp_path / "out"
        assert run_cli(tmp_path, "build", "--spec", ring_spec, "--out", out) == 0
        text = (out / "hamiltonian.csv").read_text()
        assert text.startswith("row,col,real,imag\n")
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["outputs"] == ["hamiltonian.csv"]
        assert manifest["command"] == "build"

    def test_spectrum_both_routes(self, tmp_path, ring_spec, capsys):
        out = tmp_path / "out"
        rc = run_cli(tmp_path, "spectrum", "--spec", ring_spec, "--analytic", "--numeric", "--out", out)
        assert rc == 0
        assert (out / "spectrum_numeric.csv").exists()
        assert (out / "spectrum_analytic.csv").exists()
        assert "max eigenvalue mismatch" in capsys.readouterr().out

    def test_decay_pass_and_fail_exit_codes(self, tmp_path, ring_spec):
        obc = tmp_path / "obc.json"
        obc.write_text(OBC_DOC)
        assert run_cli(tmp_path, "decay", "--spec", ring_spec, "--out", tmp_path / "a") == 0
        assert run_cli(tmp_path, "decay", "--spec", obc, "--out", tmp_path / "b") == 1
        report = json.loads((tmp_path / "b" / "decay_report.json").read_text())
        assert report["pure_decay_pass"] is False

    def test_charges_command(self, tmp_path):
        spec = tmp_path / "fig3a.json"
        spec.write_text(json.dumps({"lattice": {"kind": "ring", "t": 1.5, "segments": [
            {"type": "A", "len": 6}, {"type": "B", "len": 8},
            {"type": "A", "len": 7}, {"type": "B", "len": 4}]}}))
        out = tmp_path / "out"
        assert run_cli(tmp_path, "charges", "--spec", spec, "--out", out) == 0
        lines = (out / "charges.csv").read_text().strip().split("\n")
        by_node = {int(l.split(",")[0]): float(l.split(",")[1]) for l in lines[1:]}
        assert by_node[7] == pytest.approx(1.0, abs=1e-9)
        assert by_node[22] == pytest.approx(1.0, abs=1e-9)
        assert by_node[1] == pytest.approx(-1.0, abs=1e-9)
        assert by_node[15] == pytest.approx(-1.0, abs=1e-9)

    def test_drive_outputs(self, tmp_path, ring_spec):
        out = tmp_path / "out"
        rc = run_cli(
            tmp_path, "drive", "--spec", ring_spec, "--source", 1,
            "--omega-min", -3, "--omega-max", 3, "--omega-steps", 41, "--out", out,
        )
        assert rc == 0
        selection = json.loads((out / "selection.json").read_text())
        assert set(selection) == {
            "selected_mode", "least_damped_mode", "overlap", "matches_least_damped", "omega_at_peak",
        }
        assert (out / "sweep.csv").exists()

    def test_validation_error_exit_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"lattice":{"kind":"circulant","n":4,"a":[1,0,0],"t":2}}')
        assert run_cli(tmp_path, "charges", "--spec", bad, "--out", tmp_path / "o") == 2

    def test_raw_ineligible_for_decay_claims(self, tmp_path):
        raw = tmp_path / "raw.json"
        raw.write_text(RAW_DOC)
        assert run_cli(tmp_path, "decay", "--spec", raw, "--out", tmp_path / "o") == 2
        assert run_cli(tmp_path, "charges", "--spec", raw, "--out", tmp_path / "o") == 2

    def test_raw_allowed_for_spectrum_and_drive(self, tmp_path):
        raw = tmp_path / "raw.json"
        raw.write_text(RAW_DOC)
        assert run_cli(tmp_path, "spectrum", "--spec", raw, "--out", tmp_path / "o") == 0
        assert run_cli(
            tmp_path, "drive", "--spec", raw, "--gamma", "0.5", "--out", tmp_path / "o2"
        ) == 0

    def test_t_override(self, tmp_path, ring_spec, capsys):
        out = tmp_path / "out"
        assert run_cli(tmp_path, "decay", "--spec", ring_spec, "--t", 2.5, "--out", out) == 0
        report = json.loads((out / "decay_report.json").read_text())
        ratios = {c["chain_id"]: c["ratio"] for c in report["per_chain"]}
        assert ratios["A1"] == pytest.approx(2.5 ** (-1 / 30), rel=1e-9)

    def test_size_cap_env(self, tmp_path, ring_spec, monkeypatch):
        monkeypatch.setenv("DECAYGRAPH_SIZE_CAP", "8")
        assert run_cli(tmp_path, "build", "--spec", ring_spec, "--out", tmp_path / "o") == 2

    def test_byte_identical_reruns(self, tmp_path, ring_spec):
        for cmd in (
            ["build"],
            ["spectrum", "--analytic", "--numeric", "--profiles"],
            ["decay"],
            ["charges"],
            ["drive", "--source", "1", "--omega-min", "-3", "--omega-max", "3", "--omega-steps", "21"],
        ):
            out1, out2 = tmp_path / f"{cmd[0]}_1", tmp_path / f"{cmd[0]}_2"
            assert run_cli(tmp_path, *cmd, "--spec", ring_spec, "--out", out1) == 0
            assert run_cli(tmp_path, *cmd, "--spec", ring_spec, "--out", out2) == 0
            files1 = sorted(p.name for p in out1.iterdir() if p.name != "manifest.json")
            files2 = sorted(p.name for p in out2.iterdir() if p.name != "manifest.json")
            assert files1 == files2 and files1
            for name in files1:
                assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_reproduce_single_figure(self, tmp_path, capsys):
        out = tmp_path / "rep"
        assert run_cli(tmp_path, "reproduce", "fig2a", "--out", out) == 0
        stdout = capsys.readouterr().out
        assert "[fig2a] PASS" in stdout
        checks = json.loads((out / "checks.json").read_text())
        assert checks["fig2a"]["passed"]

    def test_reproduce_expected_fail_control(self, tmp_path, capsys):
        out = tmp_path / "rep"
        assert run_cli(tmp_path, "reproduce", "fig1d", "--out", out) == 0
        checks = json.loads((out / "checks.json").read_text())
        assert checks["fig1d"]["expected_fail_control"]
        assert checks["fig1d"]["passed"]
