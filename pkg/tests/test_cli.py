import subprocess
import sys

import numpy as np
import pytest

from tunnelpuf.cli import main
from tunnelpuf.formats import parse_bitstream


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


@pytest.fixture
def gen20(tmp_path):
    out = tmp_path / "g.txt"
    assert main(["gen", "--arrays", "20", "--bits", "4096", "--seed", "7", "--out", str(out)]) == 0
    return out


def test_gen_contract_and_determinism(gen20, tmp_path):
    m = parse_bitstream(gen20.read_text())
    assert m.shape == (20, 4096)
    again = tmp_path / "again.txt"
    main(["gen", "--arrays", "20", "--bits", "4096", "--seed", "7", "--out", str(again)])
    assert again.read_bytes() == gen20.read_bytes()
    assert (tmp_path / "again.txt.manifest").read_bytes() == \
        (tmp_path / "g.txt.manifest").read_bytes()


def test_manifest_roundtrip_reproduces(gen20, tmp_path):
    out = tmp_path / "from_manifest.txt"
    assert main(["gen", "--config", str(gen20) + ".manifest", "--out", str(out),
                 "--manifest", str(tmp_path / "m2")]) == 0
    assert out.read_bytes() == gen20.read_bytes()
    assert (tmp_path / "m2").read_bytes() == (tmp_path / "g.txt.manifest").read_bytes()


def test_gen_zero_arrays_usage_error(tmp_path):
    out = tmp_path / "x.txt"
    with pytest.raises(SystemExit) as e:
        main(["gen", "--arrays", "0", "--out", str(out)])
    assert e.value.code == 2 and not out.exists()


def test_gen_unwritable(tmp_path, capsys):
    with pytest.raises(SystemExit) as e:
        main(["gen", "--arrays", "1", "--out", str(tmp_path / "missing" / "x.txt")])
    assert e.value.code == 2


def test_gen_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("readout.gain_db = loud\n")
    assert main(["gen", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 3
    assert "bad.cfg:1" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_metrics_on_twenty(gen20, tmp_path):
    out = tmp_path / "m.csv"
    assert main(["metrics", "--input", str(gen20), "--out", str(out)]) == 0
    header, rows = read_csv(out)
    vals = dict(rows)
    assert header == ["metric", "value"]
    assert 0.495 <= float(vals["fhd_mean"]) <= 0.505
    assert vals["fhd_pairs"] == "190"


def test_metrics_single_line(tmp_path):
    f = tmp_path / "one.txt"
    f.write_text("0110\n")
    out = tmp_path / "m.csv"
    assert main(["metrics", "--input", str(f), "--out", str(out)]) == 0
    vals = dict(read_csv(out)[1])
    assert vals["fhd_mean"] == "insufficient arrays"
    assert float(vals["uniformity"]) == 0.5 and float(vals["entropy"]) == 1.0


def test_metrics_bad_char(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("0110\n01a0\n")
    assert main(["metrics", "--input", str(f)]) == 3
    assert "bad.txt:2" in capsys.readouterr().err


def test_ber_sweep_default_grid_and_no_noise(tmp_path):
    out = tmp_path / "ber.csv"
    assert main(["ber-sweep", "--trials", "2", "--arrays", "1", "--no-noise",
                 "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["vdd", "temp_c", "trials", "ber"] and len(rows) == 55
    ref = [r for r in rows if float(r[0]) == 1.2]
    assert all(float(r[3]) == 0.0 for r in ref)


def test_ber_sweep_voltage_worst_case(tmp_path):
    out = tmp_path / "ber.csv"
    main(["ber-sweep", "--temps", "35", "--trials", "20", "--arrays", "2", "--out", str(out)])
    rows = read_csv(out)[1]
    assert max(rows, key=lambda r: float(r[3]))[0] == "0.9"


def test_ber_sweep_empty_grid():
    with pytest.raises(SystemExit) as e:
        main(["ber-sweep", "--vdd", ","])
    assert e.value.code == 2


def test_nist_cli(gen20, tmp_path):
    out, long_out = tmp_path / "n.csv", tmp_path / "long.csv"
    assert main(["nist", "--input", str(gen20), "--out", str(out),
                 "--long-out", str(long_out)]) == 0
    header, rows = read_csv(out)
    assert header == ["test", "sequences", "mean_p", "pass_rate"] and len(rows) == 8
    assert len(read_csv(long_out)[1]) == 160


def test_nist_all_zero(tmp_path):
    f = tmp_path / "z.txt"
    f.write_text(("0" * 4096 + "\n") * 3)
    out = tmp_path / "n.csv"
    assert main(["nist", "--input", str(f), "--out", str(out)]) == 0
    assert all(float(r[3]) == 0.0 for r in read_csv(out)[1])


@pytest.mark.parametrize("alpha", ["0", "0.5", "-1"])
def test_nist_alpha_usage(gen20, alpha):
    with pytest.raises(SystemExit) as e:
        main(["nist", "--input", str(gen20), "--alpha", alpha])
    assert e.value.code == 2


def test_nist_mixed_lengths(tmp_path):
    f = tmp_path / "mixed.txt"
    f.write_text("0101\n011\n")
    assert main(["nist", "--input", str(f)]) == 3


def test_speckle(tmp_path):
    a, b = tmp_path / "a.pbm", tmp_path / "b.pbm"
    assert main(["speckle", "--seed", "1", "--out", str(a)]) == 0
    main(["speckle", "--seed", "2", "--out", str(b)])
    assert a.read_text().startswith("P1\n64 64\n")
    pa = np.array(a.read_text().split()[3:], int)
    pb = np.array(b.read_text().split()[3:], int)
    assert pa.size == 4096 and 0.45 <= np.mean(pa != pb) <= 0.55


def test_speckle_degenerate(tmp_path):
    cfg = tmp_path / "flat.cfg"
    cfg.write_text("model.sigma_tox = 0\nmodel.sigma_k = 0\n")
    out = tmp_path / "flat.pbm"
    assert main(["speckle", "--seed", "1", "--config", str(cfg), "--out", str(out)]) == 0
    assert set(out.read_text().split()[3:]) == {"0"}


def test_module_entry_point(tmp_path):
    out = tmp_path / "g.txt"
    r = subprocess.run([sys.executable, "-m", "tunnelpuf", "gen", "--arrays", "2", "--bits", "16",
                        "--out", str(out)], capture_output=True, text=True)
    assert r.returncode == 0 and len(out.read_text().splitlines()) == 4
