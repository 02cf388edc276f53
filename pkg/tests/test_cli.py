import pandas as pd
import pytest

from src.cli import commands
from src.cli.app import main
from src.cli.commands import SWEEP_COLUMNS, cmd_cache, cmd_lc, cmd_sweep, parse_methods
from src.cli.report import RunReport, expected_linear_complexity
from src.sequences.generators import SequenceKind
from src.utils import config
from src.utils.errors import EXIT_CAPACITY, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, ParameterError, VerificationMismatch


def key_values(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line and " " not in line)


def read_csv(path):
    return pd.read_csv(path, dtype=str, keep_default_na=False)


class TestReport:

    @pytest.mark.parametrize("p, kind, expected", [
        (3, SequenceKind.THRESHOLD, 8),
        (13, SequenceKind.LEGENDRE_FERMAT, 156),
        (5, SequenceKind.BALANCED_THRESHOLD, None),
        (5, SequenceKind.CHARACTERISTIC, None),
        (1093, SequenceKind.THRESHOLD, None),
    ])
    def test_expected_values(self, p, kind, expected):
        assert expected_linear_complexity(p, kind) == expected

    def test_disagreement_is_a_mismatch(self):
        report = RunReport(p=3, g=2, delta=1, kind="threshold", lam=2, wieferich=False,
                           L_bm=8, L_gcd=7, theorem_expected=8)
        assert not report.agreement
        assert not report.matches
        assert "match=false" in report.to_key_values()

    @pytest.mark.parametrize("changes", [
        {"L_gcd": 7},
        {"L_bm": 9, "L_gcd": 9},
        {"trace_verified": False},
    ])
    def test_require_match_raises(self, changes):
        values = dict(p=3, g=2, delta=1, kind="threshold", lam=2, wieferich=False,
                      L_bm=8, L_gcd=8, theorem_expected=8, trace_verified=True)
        values.update(changes)
        with pytest.raises(VerificationMismatch):
            RunReport(**values).require_match()

    def test_require_match_passes(self):
        report = RunReport(p=3, g=2, delta=1, kind="threshold", lam=2, wieferich=False,
                           L_bm=8, L_gcd=8, theorem_expected=8, trace_verified=True)
        report.require_match()

    def test_mismatch_exit_code(self, monkeypatch, capsys):
        bad = RunReport(p=3, g=2, delta=1, kind="threshold", lam=2, wieferich=False,
                        L_bm=8, L_gcd=7, theorem_expected=8)
        monkeypatch.setattr(commands, "cmd_lc", lambda *args, **kwargs: bad)
        assert main(["lc", "--p", "3", "--kind", "threshold"]) == EXIT_MISMATCH
        out = capsys.readouterr()
        assert key_values(out.out)["match"] == "false"
        assert "methods disagree" in out.err

    def test_missing_values_print_as_na(self):
        report = RunReport(p=3, g=2, delta=1, kind="balanced-threshold", lam=2, wieferich=False, L_bm=7)
        values = key_values(report.to_key_values())
        assert values["theorem_expected"] == "n/a"
        assert values["L_gcd"] == "n/a"
        assert values["match"] == "true"


class TestGen:

    def test_stdout(self, capsys):
        assert main(["gen", "--p", "3", "--kind", "legendre-fermat"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.splitlines()[1] == "000011000"

    def test_file(self, tmp_path):
        path = tmp_path / "seq.txt"
        assert main(["gen", "--p", "7", "--kind", "threshold", "--out", str(path)]) == EXIT_OK
        assert len(path.read_text(encoding="ascii").splitlines()[1]) == 49

    def test_not_prime(self):
        assert main(["gen", "--p", "4"]) == EXIT_USAGE

    def test_unknown_kind(self):
        assert main(["gen", "--p", "5", "--kind", "spiral"]) == EXIT_USAGE

    def test_prime_cap(self, monkeypatch):
        monkeypatch.setenv("FERMATSEQ_MAX_PRIME", "7")
        config.reset_settings()
        assert main(["gen", "--p", "11"]) == EXIT_CAPACITY


class TestLc:

    def test_p11_threshold(self, capsys):
        assert main(["lc", "--p", "11", "--kind", "threshold", "--methods", "bm,gcd"]) == EXIT_OK
        values = key_values(capsys.readouterr().out)
        assert values["L_bm"] == values["L_gcd"] == values["theorem_expected"] == "120"
        assert values["L_blahut"] == "n/a"

    def test_p13_legendre(self, capsys):
        assert main(["lc", "--p", "13", "--kind", "legendre-fermat", "--methods", "bm"]) == EXIT_OK
        assert key_values(capsys.readouterr().out)["L_bm"] == "156"

    def test_three_methods_agree(self):
        report = cmd_lc(3, "characteristic", "bm,gcd,blahut", l=0)
        assert report.L_bm == report.L_gcd == report.L_blahut
        assert report.agreement
        assert report.theorem_expected is None

    def test_method_parsing(self):
        assert parse_methods("bm, gcd,bm") == ["bm", "gcd"]
        with pytest.raises(ParameterError):
            parse_methods("bm,fft")

    def test_bad_method_exit_code(self):
        assert main(["lc", "--p", "5", "--methods", "fft"]) == EXIT_USAGE

    def test_blahut_over_degree_cap(self, monkeypatch):
        monkeypatch.setenv("FERMATSEQ_MAX_FIELD_DEGREE", "100")
        config.reset_settings()
        assert main(["lc", "--p", "11", "--methods", "blahut"]) == EXIT_CAPACITY


class TestVerify:

    def test_p7_threshold(self, capsys, tmp_path):
        trace_path = tmp_path / "trace.txt"
        spectrum_path = tmp_path / "spectrum.txt"
        code = main(["verify", "--p", "7", "--kind", "threshold",
                     "--out", str(trace_path), "--spectrum-out", str(spectrum_path)])
        assert code == EXIT_OK
        values = key_values(capsys.readouterr().out)
        assert values["trace_verified"] == "true"
        assert values["L_bm"] == values["L_gcd"] == values["L_blahut"] == "48"
        assert trace_path.read_text(encoding="ascii").splitlines()[-1] == "verified=true period=49"
        assert spectrum_path.read_text(encoding="ascii").splitlines()[0] == "T=49 nonzero=48"

    def test_p5_legendre(self, capsys):
        assert main(["verify", "--p", "5", "--kind", "legendre-fermat"]) == EXIT_OK
        values = key_values(capsys.readouterr().out)
        assert values["trace_verified"] == "true"
        assert values["L_bm"] == "20"

    def test_wieferich_refused(self, capsys):
        assert main(["verify", "--p", "1093", "--kind", "threshold"]) == EXIT_CAPACITY
        assert "Wieferich" in capsys.readouterr().err

    def test_warm_and_cold_cache_agree(self, tmp_path):
        cold, warm = tmp_path / "cold.txt", tmp_path / "warm.txt"
        assert main(["verify", "--p", "5", "--kind", "balanced-threshold", "--out", str(cold)]) == EXIT_OK
        assert main(["verify", "--p", "5", "--kind", "balanced-threshold", "--out", str(warm)]) == EXIT_OK
        assert cold.read_bytes() == warm.read_bytes()


class TestSweep:

    def test_acceptance_sweep(self, tmp_path):
        path = tmp_path / "sweep.csv"
        code = main(["sweep", "--p-max", "13", "--kinds", "threshold,legendre-fermat", "--out", str(path)])
        assert code == EXIT_OK
        df = read_csv(path)
        assert list(df.columns) == SWEEP_COLUMNS
        assert len(df) == 10
        assert (df["match"] == "true").all()
        assert (df["trace_verified"] == "true").all()
        assert df["p"].tolist() == ["3", "3", "5", "5", "7", "7", "11", "11", "13", "13"]
        assert df["L"].tolist() == df["expected"].tolist()

    def test_single_prime(self):
        df = cmd_sweep(3)
        assert len(df) == 2

    def test_balanced_kinds_have_no_expected_value(self):
        df = cmd_sweep(5, "balanced-threshold,balanced-legendre")
        assert (df["expected"] == "n/a").all()
        assert df["L"].tolist() == [7, 7, 25, 25]
        assert (df["match"] == "true").all()

    def test_characteristic_expands_over_cosets(self):
        df = cmd_sweep(5, "characteristic")
        assert df["kind"].tolist() == [f"characteristic-{l}" for l in range(3)] + \
            [f"characteristic-{l}" for l in range(5)]

    def test_worker_pool_keeps_order(self):
        serial = cmd_sweep(7, "threshold,legendre-fermat", workers=1)
        pooled = cmd_sweep(7, "threshold,legendre-fermat", workers=2)
        columns = ["p", "kind", "L", "expected", "match", "trace_verified"]
        assert serial[columns].equals(pooled[columns])

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("FERMATSEQ_MAX_PRIME", "11")
        config.reset_settings()
        assert main(["sweep", "--p-max", "13"]) == EXIT_CAPACITY


class TestLemmasAndCache:

    def test_lemmas(self, capsys):
        assert main(["lemmas", "--p-max", "5"]) == EXIT_OK

    def test_cache_show_and_clear(self, capsys):
        assert main(["lc", "--p", "3", "--methods", "blahut"]) == EXIT_OK
        assert main(["cache", "show"]) == EXIT_OK
        capsys.readouterr()
        assert [row["p"] for row in cmd_cache("show")] == ["3"]
        assert main(["cache", "clear"]) == EXIT_OK
        assert "Removed 1" in capsys.readouterr().out

    def test_unknown_action(self):
        assert main(["cache", "purge"]) == EXIT_USAGE
