"""
Tests for CLI commands
"""

import json
from fractions import Fraction
from pathlib import Path
from unittest.mock import patch

import pytest

from infoloss.checks import OverlapPairCheck
from infoloss.cli.main import main, parse_seed
from infoloss.core.ensembles import random_network
from infoloss.core.errors import ContractViolation
from infoloss.core.network import LayeredNetwork, PrecisionVector, load, save
from infoloss.core.verifier import VerificationSuite

OVERLAP = LayeredNetwork.from_matrices([[1, 1, 0], [0, 1, 1]])
TRIANGLE = LayeredNetwork.from_matrices([[1, 1, 0], [1, 0, 1], [0, 1, 1]])


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    """Isolated working directory, home and environment"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("HOME", str(tmp_path / "home"))
    for var in ("INFOLOSS_SEED", "INFOLOSS_THREADS", "INFOLOSS_TRIALS", "INFOLOSS_LOG_LEVEL"):
        monkeypatch.delenv(var, raising=False)
    return tmp_path


def write_network(path: Path, net: LayeredNetwork) -> str:
    save(net, PrecisionVector.ones(net.layer_sizes[0]), path)
    return str(path)


class TestCLI:
    """Test global flags"""

    def test_version(self, capsys):
        """Test --version flag"""
        with pytest.raises(SystemExit) as exc_info:
            main(["--version"])
        assert exc_info.value.code == 0
        assert "infoloss" in capsys.readouterr().out

    def test_help(self, capsys):
        """Test --help lists the commands"""
        with pytest.raises(SystemExit) as exc_info:
            main(["--help"])
        assert exc_info.value.code == 0
        out = capsys.readouterr().out
        for command in ("analyze", "reduce", "generate", "sweep", "simulate", "verify", "init"):
            assert command in out

    def test_no_command(self, workdir, capsys):
        """Test running without a command prints help and fails"""
        assert main([]) == 2
        assert "usage" in capsys.readouterr().out

    def test_parse_seed(self):
        """Test integer, random and invalid seeds"""
        assert parse_seed("42") == 42
        assert 0 <= parse_seed("random") < 2**63
        with pytest.raises(ContractViolation):
            parse_seed("-1")
        with pytest.raises(ContractViolation):
            parse_seed("abc")

    def test_bad_threads(self, workdir):
        """Test a negative thread count"""
        path = write_network(workdir / "t.json", TRIANGLE)
        assert main(["--threads", "-1", "analyze", path]) == 2


class TestAnalyze:
    """Test the analyze command"""

    def test_ideal_exit_code(self, workdir):
        """Test an ideal network exits 0"""
        assert main(["analyze", write_network(workdir / "t.json", TRIANGLE)]) == 0

    def test_non_ideal_exit_code(self, workdir):
        """Test a non-ideal network exits 1"""
        assert main(["analyze", write_network(workdir / "o.json", OVERLAP)]) == 1

    def test_json_report(self, workdir, capsys):
        """Test the JSON report of the overlapping pair"""
        path = write_network(workdir / "o.json", OVERLAP)
        assert main(["--format", "json", "analyze", path]) == 1
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "non-ideal"
        assert report["estimate"]["alpha"] == ["1/4", "1/2", "1/4"]
        assert report["estimate"]["variance"] == "3/8"
        assert report["estimate"]["ideal_variance"] == "1/3"
        assert report["w_motif_witness"]["sources"] == [1, 2, 3]
        assert report["validity"] == [[True, True, True], [True, True]]
        assert report["equal_outdegree_components"] is False
        assert report["naive_variance"] == "3/8"

    def test_json_certificate(self, workdir, capsys):
        """Test an ideal verdict carries its certificate"""
        path = write_network(workdir / "t.json", TRIANGLE)
        main(["--format", "json", "analyze", path])
        report = json.loads(capsys.readouterr().out)
        assert report["ideality"] == {"ideal": True, "certificate": ["1", "1", "1"]}
        assert report["estimate"]["efficiency"] == "1"

    def test_no_information(self, workdir, capsys):
        """Test a network whose aggregator hears nothing"""
        net = LayeredNetwork.from_matrices([[0, 0]])
        path = write_network(workdir / "empty.json", net)
        assert main(["--format", "json", "analyze", path]) == 1
        report = json.loads(capsys.readouterr().out)
        assert report["estimate"] is None
        assert report["validation"]["ok"] is False

    def test_validity_propagates(self, workdir, capsys):
        """Test agents that only hear silent agents are reported invalid"""
        net = LayeredNetwork.from_matrices([[1, 1], [0, 0]], [[0, 1], [1, 1]])
        path = write_network(workdir / "deep.json", net)
        main(["--format", "json", "analyze", path])
        report = json.loads(capsys.readouterr().out)
        assert report["validity"] == [[True, True], [True, False], [False, True]]

    def test_missing_file(self, workdir):
        """Test an unreadable file exits 2"""
        assert main(["analyze", str(workdir / "absent.json")]) == 2

    def test_malformed_file(self, workdir, caplog):
        """Test a syntax error exits 2 and names the line"""
        path = workdir / "bad.json"
        path.write_text('{\n  "layers": [2,\n}')
        assert main(["analyze", str(path)]) == 2
        assert "line 3" in caplog.text

    def test_csv_not_supported(self, workdir):
        """Test analyze refuses csv output"""
        path = write_network(workdir / "t.json", TRIANGLE)
        assert main(["--format", "csv", "analyze", path]) == 2


class TestReduceAndGenerate:
    """Test the reduce and generate commands"""

    def test_reduce(self, workdir):
        """Test a containment is removed and precisions kept"""
        source = workdir / "n.json"
        save(LayeredNetwork.from_matrices([[1, 1, 0], [1, 1, 1]]), PrecisionVector.ones(3), source)
        target = workdir / "r.json"
        assert main(["reduce", str(source), "-o", str(target)]) == 0
        net, precisions = load(target)
        assert net.matrix(1) == ((1, 1, 0), (0, 0, 1))
        assert precisions == PrecisionVector.ones(3)

    def test_reduce_wrong_depth(self, workdir):
        """Test reduce refuses deeper networks"""
        path = write_network(workdir / "d.json", LayeredNetwork.from_matrices([[1]], [[1]]))
        assert main(["reduce", path, "-o", str(workdir / "r.json")]) == 2

    def test_generate_ring_then_analyze(self, workdir, capsys):
        """Test the ring of four has variance 5/16"""
        path = workdir / "ring.json"
        assert main(["generate", "ring", "--n", "4", "-o", str(path)]) == 0
        capsys.readouterr()
        assert main(["--format", "json", "analyze", str(path)]) == 1
        report = json.loads(capsys.readouterr().out)
        assert report["estimate"]["variance"] == "5/16"

    def test_generate_random_seeded(self, workdir):
        """Test the master seed fixes the random network"""
        a, b = workdir / "a.json", workdir / "b.json"
        assert main(["--seed", "5", "generate", "random", "--layers", "4", "5", "--p", "0.5", "-o", str(a)]) == 0
        assert main(["--seed", "5", "generate", "random", "--layers", "4", "5", "--p", "0.5", "-o", str(b)]) == 0
        assert a.read_text() == b.read_text()

    def test_generate_complete_is_ideal(self, workdir):
        """Test p=1 gives an ideal network"""
        path = workdir / "full.json"
        assert main(["generate", "random", "--layers", "4", "3", "2", "--p", "1.0", "-o", str(path)]) == 0
        assert main(["analyze", str(path)]) == 0

    def test_generate_random_seed_zero(self, workdir):
        """Test --seed 0 is not replaced by the default seed"""
        path = workdir / "zero.json"
        assert main(["--seed", "0", "generate", "random", "--layers", "6", "6", "--p", "0.5", "-o", str(path)]) == 0
        net, _ = load(path)
        assert net == random_network((6, 6), 0.5, 0)

    def test_generate_static_new_precisions(self, workdir):
        """Test re-saving a network file with new precisions"""
        source = write_network(workdir / "o.json", OVERLAP)
        target = workdir / "weighted.json"
        argv = ["generate", "static", "--from", source, "--precisions", "2", "1", "1/2", "-o", str(target)]
        assert main(argv) == 0
        net, precisions = load(target)
        assert net == OVERLAP
        assert precisions == PrecisionVector((Fraction(2), Fraction(1), Fraction(1, 2)))

    def test_generate_static_variances(self, workdir):
        """Test re-saving with variances converts them to precisions"""
        source = write_network(workdir / "o.json", OVERLAP)
        target = workdir / "v.json"
        assert main(["generate", "static", "--from", source, "--variances", "4", "1", "1", "-o", str(target)]) == 0
        assert load(target)[1].values[0] == Fraction(1, 4)

    def test_generate_static_needs_source(self, workdir):
        """Test static without --from"""
        assert main(["generate", "static", "-o", str(workdir / "s.json")]) == 2

    def test_generate_static_wrong_length(self, workdir):
        """Test precisions must match the first layer"""
        source = write_network(workdir / "o.json", OVERLAP)
        assert main(["generate", "static", "--from", source, "--precisions", "1", "-o", str(workdir / "s.json")]) == 2

    def test_generate_precisions_and_variances(self, workdir):
        """Test the two weightings are exclusive"""
        argv = ["generate", "ring", "--n", "2", "--precisions", "1", "1", "1",
                "--variances", "1", "1", "1", "-o", str(workdir / "r.json")]
        assert main(argv) == 2

    def test_generate_ring_needs_n(self, workdir):
        """Test a ring without --n"""
        assert main(["generate", "ring", "-o", str(workdir / "r.json")]) == 2


class TestSweep:
    """Test the sweep command"""

    def test_csv_to_stdout(self, workdir, capsys):
        """Test p=1 cells are always ideal"""
        assert main(["sweep", "--l1", "4", "--offsets", "-1", "0", "2", "--p", "1.0", "--trials", "5"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("n_layers,L1,L2,p")
        assert len(lines) == 4
        assert all(line.split(",")[6] == "1.000000" for line in lines[1:])

    def test_deterministic(self, workdir, capsys):
        """Test one seed gives one CSV"""
        argv = ["--seed", "3", "sweep", "--l1", "5", "--offsets", "0", "1", "--p", "0.5", "--trials", "20"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first

    def test_output_file(self, workdir):
        """Test writing the CSV to a file"""
        target = workdir / "out" / "sweep.csv"
        assert main(["-q", "sweep", "--l1", "3", "--p", "1.0", "--trials", "2", "-o", str(target)]) == 0
        assert target.read_text().startswith("n_layers,L1,L2,p")

    def test_json_records(self, workdir, capsys):
        """Test JSON output of the sweep"""
        assert main(["--format", "json", "sweep", "--l1", "2", "--p", "1.0", "--trials", "3"]) == 0
        records = json.loads(capsys.readouterr().out)
        assert records[0]["ideal_count"] == 3

    def test_spec_file(self, workdir, capsys):
        """Test a YAML spec with a --trials override"""
        spec = workdir / "sweep.yaml"
        spec.write_text("layer_size_grid: [[2, 2], [2, 2, 3]]\nprobabilities: [1.0]\ntrials: 50\n")
        assert main(["sweep", "--spec", str(spec), "--trials", "4"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("n_layers,L1,L2,L3,p")
        assert lines[1].split(",")[5] == "4"

    @pytest.mark.parametrize("body", [
        "layer_size_grid: [100]\nprobabilities: [0.5]\n",
        "layer_size_grid: [[3, 3]]\nprobabilities: 0.5\n",
        "layer_size_grid: [[3, 3]]\nprobabilities: [0.5]\ntrials: null\n",
    ])
    def test_malformed_spec_file(self, workdir, body):
        """Test a wrongly shaped spec file exits 2"""
        spec = workdir / "bad.yaml"
        spec.write_text(body)
        assert main(["sweep", "--spec", str(spec)]) == 2

    def test_zero_trials(self, workdir):
        """Test trials must be positive"""
        assert main(["sweep", "--l1", "3", "--p", "0.5", "--trials", "0"]) == 2

    def test_needs_sizes(self, workdir):
        """Test a sweep without sizes"""
        assert main(["sweep", "--p", "0.5"]) == 2

    def test_trials_from_settings(self, workdir, capsys):
        """Test the settings file supplies the trial count"""
        Path("config").mkdir()
        Path("config/infoloss.yaml").write_text("trials: 6\n")
        assert main(["sweep", "--l1", "2", "--p", "1.0"]) == 0
        assert capsys.readouterr().out.splitlines()[1].split(",")[4] == "6"


class TestSimulate:
    """Test the simulate command"""

    def test_json(self, workdir, capsys):
        """Test the simulated variance next to the exact one"""
        path = write_network(workdir / "o.json", OVERLAP)
        assert main(["--format", "json", "simulate", path, "--trials", "50000"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["analytic_variance"] == "3/8"
        assert abs(report["variance"] - 0.375) < 0.02
        assert report["trials"] == 50000

    def test_biases(self, workdir, capsys):
        """Test biases shift the mean"""
        path = write_network(workdir / "o.json", OVERLAP)
        argv = ["--format", "json", "simulate", path, "--trials", "50000", "--biases", "0", "1", "0"]
        assert main(argv) == 0
        assert abs(json.loads(capsys.readouterr().out)["mean"] - 0.5) < 0.02

    def test_text(self, workdir):
        """Test the rich table output"""
        path = write_network(workdir / "t.json", TRIANGLE)
        assert main(["simulate", path, "--trials", "1000"]) == 0


class TestVerify:
    """Test the verify command"""

    @staticmethod
    def small_level(suite, level):
        suite.level = level
        suite.add_check(OverlapPairCheck())

    def test_report_file(self, workdir, capsys):
        """Test a passing run writes its report"""
        target = workdir / "report.json"
        with patch.object(VerificationSuite, "load_level", self.small_level):
            assert main(["--format", "json", "verify", "-o", str(target)]) == 0
        report = json.loads(target.read_text())
        assert report["passed"] is True
        assert report["level"] == "quick"
        assert json.loads(capsys.readouterr().out) == report

    def test_failure_exit_code(self, workdir):
        """Test a failing check exits 1"""
        def failing_level(suite, level):
            suite.level = level
            suite.add_check(TestVerify.Broken())

        with patch.object(VerificationSuite, "load_level", failing_level):
            assert main(["verify"]) == 1

    class Broken(OverlapPairCheck):
        @property
        def name(self) -> str:
            return "broken"

        def evaluate(self):
            result = super().evaluate()
            result.expect(False, "forced failure")
            return result


class TestInit:
    """Test the init command"""

    def test_init_project(self, workdir):
        """Test writing ./config/infoloss.yaml"""
        assert main(["init"]) == 0
        assert Path("config/infoloss.yaml").exists()

    def test_init_existing(self, workdir):
        """Test an existing file needs --force"""
        assert main(["init"]) == 0
        assert main(["init"]) == 1
        assert main(["init", "--force"]) == 0

    def test_init_user(self, workdir):
        """Test writing the user settings file"""
        assert main(["init", "--user"]) == 0
        assert (Path.home() / ".config" / "infoloss" / "infoloss.yaml").exists()
