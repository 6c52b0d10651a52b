import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from thermeit import cf64
from thermeit.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_VERIFY, main
from thermeit.config import ConfigError, load_config, parse_config
from thermeit.fields import ComplexField2D, gaussian_field
from thermeit.presets import fig5_filter, k_typ
from thermeit.susceptibility import Spectrum, fwhm

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


MEDIUM_BEAMS = """
[medium]
v_th = 170.0
gamma = 1.6e5
Gamma_d = 1e8
Gamma_21 = 1e3

[beams]
q1 = 7903377.744879982
Omega_2 = [63245.553203367585, 0.0]
"""


class TestCF64:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        f = ComplexField2D(rng.normal(size=(32, 64)) + 1j * rng.normal(size=(32, 64)), 1e-5, 2e-5)
        path = tmp_path / "f.cf64"
        cf64.write(path, f, "V/m", {"a": 1})
        g, header = cf64.read(path)
        np.testing.assert_array_equal(g.values, f.values)
        assert (g.dx, g.dy) == (f.dx, f.dy)
        assert header["unit"] == "V/m" and header["meta"] == {"a": 1}

    def test_encoding_is_canonical(self):
        f = gaussian_field(32, 1e-5, 5e-5)
        assert cf64.encode(f) == cf64.encode(f.with_values(f.values.copy()))
        data = cf64.encode(f)
        assert data[:4] == b"CF64"
        n = int.from_bytes(data[4:8], "little")
        assert json.loads(data[8:8 + n]) == {"dx": 1e-5, "dy": 1e-5, "nx": 32, "ny": 32, "unit": "1"}
        assert len(data) == 8 + n + 16 * 32 * 32

    @pytest.mark.parametrize("mutate", [
        lambda d: b"XF64" + d[4:],
        lambda d: d[:-16],
        lambda d: d[:6],
        lambda d: d[:8] + b"[" + d[9:],
    ])
    def test_malformed(self, mutate):
        data = cf64.encode(gaussian_field(32, 1e-5, 5e-5))
        with pytest.raises(cf64.FormatError):
            cf64.decode(mutate(data))

    def test_pgm(self, tmp_path):
        f = gaussian_field(32, 1e-5, 5e-5)
        cf64.write_pgm(tmp_path / "p.pgm", f)
        data = (tmp_path / "p.pgm").read_bytes()
        assert data.startswith(b"P5\n32 32\n255\n")
        assert max(data[len(b"P5\n32 32\n255\n"):]) == 255


class TestConfig:
    def test_shipped_configs_load(self):
        for path in sorted(CONFIGS.glob("*.toml")):
            load_config(path)

    def test_unknown_key_path(self):
        with pytest.raises(ConfigError, match=r"^medium\.gama: unknown key"):
            parse_config({"medium": {"v_th": 1.0, "gama": 1.0, "Gamma_d": 1.0, "Gamma_21": 1.0}})

    def test_nested_type_error(self):
        data = {"spectrum": {"engine": "general", "grid": {"start": 0, "stop": "x", "num": 3}}}
        with pytest.raises(ConfigError, match=r"^spectrum\.grid\.stop: expected a number"):
            parse_config(data)

    def test_missing_seed(self):
        data = {"mc": {"n_atoms": 10, "dt": 0.1, "t_total": 1.0, "deltas": [0.0]}}
        with pytest.raises(ConfigError, match=r"^mc\.seed: required key missing"):
            parse_config(data)

    def test_value_checks(self):
        with pytest.raises(ConfigError, match="medium"):
            parse_config({"medium": {"v_th": -1.0, "gamma": 1.0, "Gamma_d": 1.0, "Gamma_21": 1.0}})
        with pytest.raises(ConfigError, match="fwhm_scan.gammas"):
            parse_config({"fwhm_scan": {"gammas": [], "k": {"start": 1, "stop": 2, "num": 2}}})
        with pytest.raises(ConfigError, match="spectrum.engine"):
            parse_config({"spectrum": {"engine": "magic", "grid": {"start": 0, "stop": 1, "num": 2}}})
        with pytest.raises(ConfigError, match="log spacing"):
            parse_config({"fwhm_scan": {"gammas": [1.0],
                                        "k": {"start": 0, "stop": 2, "num": 2, "spacing": "log"}}})

    def test_bad_toml(self, tmp_path):
        with pytest.raises(ConfigError, match="invalid TOML"):
            load_config(write(tmp_path, "bad.toml", "[medium\n"))


class TestSpectrumCommand:
    def test_ramsey_csv(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["spectrum", str(CONFIGS / "fig7_sheet.toml"), "-o", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "# thermeit spectrum"
        assert "# ramsey.a = 0.0001" in lines
        header = [ln for ln in lines if not ln.startswith("#")][0]
        assert header == "delta,P,re_S_D,im_S_D,transmission_normalized"
        data = np.loadtxt(out, delimiter=",", comments="#", skiprows=1 + sum(ln.startswith("#") for ln in lines))

        w = fwhm(Spectrum(data[:, 0], data[:, 4], "unit-peak")).width
        assert 200 < w < 4200

    def test_byte_identical(self, tmp_path):
        cfg = write(tmp_path, "c.toml", MEDIUM_BEAMS + """
[spectrum]
engine = "general"
k_perp = [2000.0, 0.0]
grid = { start = -2e5, stop = 2e5, num = 41 }
""")
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["spectrum", cfg, "-o", str(a)]) == EXIT_OK
        assert main(["spectrum", cfg, "-o", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_dicke_engine(self, tmp_path):
        cfg = write(tmp_path, "c.toml", MEDIUM_BEAMS.replace("1.6e5", "1e8") + """
[spectrum]
engine = "dicke"
grid = { start = -2e4, stop = 2e4, num = 21 }
""")
        out = tmp_path / "d.csv"
        assert main(["spectrum", cfg, "-o", str(out)]) == EXIT_OK

    def test_grid_too_narrow_is_config_error(self, tmp_path):
        cfg = write(tmp_path, "c.toml", MEDIUM_BEAMS + """
[spectrum]
engine = "general"
k_perp = [2000.0, 0.0]
grid = { start = 0.0, stop = 2e5, num = 11 }
""")
        assert main(["spectrum", cfg, "-o", str(tmp_path / "x.csv")]) == EXIT_CONFIG

    def test_missing_section(self, tmp_path, capsys):
        cfg = write(tmp_path, "c.toml", MEDIUM_BEAMS)
        assert main(["spectrum", cfg, "-o", str(tmp_path / "x.csv")]) == EXIT_CONFIG
        assert "spectrum: section is required" in capsys.readouterr().err

    def test_convergence_exit(self, tmp_path):
        cfg = write(tmp_path, "c.toml", MEDIUM_BEAMS + """
[spectrum]
engine = "general"
k_perp = [2000.0, 0.0]
rtol = 1e-30
grid = { start = -2e5, stop = 2e5, num = 11 }
""")
        assert main(["spectrum", cfg, "-o", str(tmp_path / "x.csv")]) == EXIT_NUMERIC


class TestFwhmScan:
    def test_small_scan(self, tmp_path):
        cfg = write(tmp_path, "c.toml", MEDIUM_BEAMS + """
[fwhm_scan]
gammas = [1.6e6]
k = { start = 1e3, stop = 1e4, num = 3, spacing = "log" }
""")
        out = tmp_path / "f.csv"
        assert main(["fwhm-scan", cfg, "-o", str(out)]) == EXIT_OK
        data = np.loadtxt(out, delimiter=",", comments="#", skiprows=1 + 12)
        assert data.shape == (3, 6)
        np.testing.assert_allclose(data[:, 5], data[:, 2] - data[:, 4])
        np.testing.assert_allclose(data[:, 5], data[:, 3], rtol=0.1)
        assert not (tmp_path / "f.csv.warnings.txt").exists()


class TestFieldCommands:
    def test_filter_zero_field(self, tmp_path):
        src, out = tmp_path / "z.cf64", tmp_path / "o.cf64"
        cf64.write(src, ComplexField2D(np.zeros((32, 32)), 1e-4, 1e-4))
        assert main(["filter-image", str(CONFIGS / "fig5_filter.toml"), str(src), "-o", str(out)]) == 0
        f, header = cf64.read(out)
        assert np.all(f.values == 0)
        assert header["meta"]["command"] == "filter-image"

    def test_filter_pi_lines(self, tmp_path):
        p = fig5_filter()
        kt = k_typ(p.medium, p.beams)
        src, out, pgm = tmp_path / "l.cf64", tmp_path / "o.cf64", tmp_path / "o.pgm"
        assert main(["make-field", "two-lines", "-n", "256", "--dx", repr(0.15 / kt),
                     "--sigma", repr(1 / kt), "--separation", repr(5 / kt), "-o", str(src)]) == 0
        assert main(["filter-image", str(CONFIGS / "fig5_filter.toml"), str(src), "-o", str(out),
                     "--preview", str(pgm)]) == 0
        inten = np.abs(cf64.read(out)[0].values[0]) ** 2
        assert inten[128] < 0.01 * inten.max()
        assert pgm.read_bytes().startswith(b"P5\n256 256\n255\n")

    def test_bad_input_file(self, tmp_path, capsys):
        src = tmp_path / "bad.cf64"
        src.write_bytes(b"nope")
        rc = main(["filter-image", str(CONFIGS / "fig5_filter.toml"), str(src), "-o", str(tmp_path / "o")])
        assert rc == EXIT_CONFIG
        assert "bad magic" in capsys.readouterr().err

    @pytest.mark.parametrize("mode", ["store", "slowlight"])
    def test_evolve_semigroup(self, tmp_path, mode):
        cfg = str(CONFIGS / f"evolve_{mode}.toml")
        src = tmp_path / "g.cf64"
        assert main(["make-field", "gaussian", "-n", "64", "--dx", "2e-5", "--sigma", "1e-4",
                     "-o", str(src)]) == 0
        a, b, c = (tmp_path / f"{x}.cf64" for x in "abc")
        assert main(["evolve", cfg, str(src), "-o", str(a), "--t", "2e-4"]) == 0
        assert main(["evolve", cfg, str(a), "-o", str(b), "--t", "3e-4"]) == 0
        assert main(["evolve", cfg, str(src), "-o", str(c), "--t", "5e-4"]) == 0
        fb, hb = cf64.read(b)
        fc, hc = cf64.read(c)
        assert hb["meta"]["t"] == pytest.approx(5e-4)
        scale = np.abs(fc.values).max()
        assert np.abs(fb.values - fc.values).max() < 1e-12 * scale
        if mode == "slowlight":
            assert complex(*hb["meta"]["carrier"]) == pytest.approx(complex(*hc["meta"]["carrier"]))

    def test_evolve_needs_time(self, tmp_path):
        cfg = write(tmp_path, "c.toml", MEDIUM_BEAMS)
        src = tmp_path / "g.cf64"
        main(["make-field", "uniform", "-n", "32", "-o", str(src)])
        assert main(["evolve", cfg, str(src), "-o", str(tmp_path / "o.cf64")]) == EXIT_CONFIG
        assert main(["evolve", cfg, str(src), "-o", str(tmp_path / "o.cf64"), "--t", "1e-4",
                     "--mode", "store"]) == EXIT_OK

    def test_make_field_annular(self, tmp_path):
        out = tmp_path / "a.cf64"
        assert main(["make-field", "annular", "-n", "64", "--ring", "4", "-o", str(out)]) == 0
        f, header = cf64.read(out)
        assert header["meta"]["kind"] == "annular" and f.nx == 64

    def test_make_field_bad_size(self, tmp_path):
        assert main(["make-field", "gaussian", "-n", "48", "-o", str(tmp_path / "x")]) == EXIT_CONFIG


class TestVerify:
    def test_list(self, capsys):
        assert main(["verify", "--list"]) == EXIT_OK
        names = [ln.split("\t")[0] for ln in capsys.readouterr().out.splitlines()]
        assert names == ["general-dicke", "ramsey-fd", "mc-general"]

    def test_ramsey_suite_report(self, tmp_path):
        out = tmp_path / "r.json"
        assert main(["verify", "--suite", "ramsey-fd", "-o", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["passed"] and report["suites"][0]["measured"] < 1e-4

    def test_unknown_suite(self):
        assert main(["verify", "--suite", "nope"]) == EXIT_CONFIG

    def _mc_config(self, tmp_path, sigmas):
        return write(tmp_path, "v.toml", f"""
[verify]
suites = ["mc-general"]
mc_sigmas = {sigmas}

[medium]
v_th = 1.0
gamma = 0.625
Gamma_d = 2.0
Gamma_21 = 0.1

[beams]
q1 = 2.0
Omega_2 = [1.0, 0.0]

[mc]
n_atoms = 2000
chunk_size = 500
dt = 0.035
t_total = 60.0
seed = 1
deltas = [0.0, 1.0]
k_perp = [1.0, 0.0]
""")

    def test_mc_passes(self, tmp_path):
        out = tmp_path / "r.json"
        assert main(["verify", self._mc_config(tmp_path, 3.0), "-o", str(out)]) == EXIT_OK
        details = json.loads(out.read_text())["suites"][0]["details"]
        assert details["n_atoms"] == 2000

    def test_corrupted_tolerance_fails(self, tmp_path):
        assert main(["verify", self._mc_config(tmp_path, 1e-9), "-o", str(tmp_path / "r.json")]) == EXIT_VERIFY


def test_console_script(tmp_path):
    rc = subprocess.run([sys.executable, "-m", "thermeit.cli", "verify", "--list"],
                        capture_output=True, text=True)
    assert rc.returncode == 0 and "ramsey-fd" in rc.stdout
    bad = subprocess.run([sys.executable, "-m", "thermeit.cli", "spectrum",
                          str(tmp_path / "missing.toml"), "-o", str(tmp_path / "x")],
                         capture_output=True, text=True)
    assert bad.returncode == EXIT_CONFIG and "cannot read" in bad.stderr
