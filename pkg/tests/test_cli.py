import io
import json
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest.mock import patch

from ptorder.cli import EXIT_FAILED, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, load_spec_file, main
from ptorder.errors import ParseError
from ptorder.models import Report


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue()


class TestCli(unittest.TestCase):
    """
    Drives the command-line entry point in-process and checks rendered
    output and exit codes.
    """

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write_spec(self, name, data):
        path = Path(self.tmp.name) / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)

    def test_info_preset(self):
        code, out = run("info", "qp2", "--json")
        self.assertEqual(code, EXIT_OK)
        info = json.loads(out)
        self.assertEqual(info["pi_degree"], 2)
        self.assertEqual(info["rank"], 4)
        self.assertEqual(info["center_residues"], [[0, 0]])

        code, out = run("info", "qp2")
        self.assertIn("PI degree n = 2", out)
        self.assertIn("center residues K (1): trivial", out)

    def test_info_cluster(self):
        code, out = run("info", "cluster-a2", "--json")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["cluster"], {"ell_compatible": True, "strict": True, "coprime": True})

    def test_info_commutative_file(self):
        path = self.write_spec("flat.json", {"n": 2, "ell": 3, "lambda": [[0, 0], [0, 0]], "invertible": [True, False]})
        code, out = run("info", path, "--json")
        self.assertEqual(code, EXIT_OK)
        info = json.loads(out)
        self.assertEqual(info["pi_degree"], 1)
        self.assertEqual(len(info["center_residues"]), 9)
        self.assertEqual(info["name"], "flat")

    def test_validation_errors(self):
        path = self.write_spec("bad.json", {"n": 2, "ell": 2, "lambda": [[0, 1], [1, 0]], "invertible": [False, False]})
        self.assertEqual(run("info", path)[0], EXIT_USAGE)
        path = self.write_spec("broken.json", '{"n": 2,\n "ell": }')
        self.assertEqual(run("info", path)[0], EXIT_USAGE)
        with self.assertRaises(ParseError) as ctx:
            load_spec_file(path)
        self.assertIn("line 2", str(ctx.exception))
        self.assertEqual(run("info", str(Path(self.tmp.name) / "missing.json"))[0], EXIT_USAGE)

    def test_compute(self):
        code, out = run("compute", "qp2", "trace-reg", "x1^2")
        self.assertEqual((code, out.strip()), (EXIT_OK, "4 * x1^2"))
        code, out = run("compute", "qp2", "bracket", "x1^2", "x2^2")
        self.assertEqual(out.strip(), "-4 * x1^2 x2^2")
        code, out = run("compute", "qp2", "trace-red", "x1^2 + x1")
        self.assertEqual(out.strip(), "2 * x1^2")
        code, out = run("compute", "qp2", "derivation", "x1^2")
        self.assertEqual(out.strip().splitlines(), ["d(x1) = 0", "d(x2) = -2 * x1^2 x2"])

    def test_compute_discriminant(self):
        code, out = run("compute", "qp2", "discriminant", "--k", "4")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("generator u^2 v^2", out.splitlines())
        code, out = run("compute", "qp2", "discriminant", "--k", "4", "--plain", "--json")
        data = json.loads(out)
        self.assertEqual(data["generators"], ["u^2 v^2"])
        self.assertFalse(data["modified"])

    def test_compute_charpoly(self):
        code, out = run("compute", "qp2", "charpoly", "x1")
        self.assertEqual(out.strip(), "t^4 - 2 * u * t^2 + u^2")
        code, out = run("compute", "qp2", "charpoly", "x1", "--trace", "red", "--json")
        self.assertEqual(json.loads(out)["degree"], 2)

    def test_compute_errors(self):
        self.assertEqual(run("compute", "qp2", "trace-reg", "x3")[0], EXIT_USAGE)
        self.assertEqual(run("compute", "qp2", "bracket", "x1^2")[0], EXIT_USAGE)
        self.assertEqual(run("compute", "qp2", "derivation", "x1")[0], EXIT_USAGE)
        self.assertEqual(run("compute", "qp2", "trace-reg", "x1", "--sublattice", "[[1,0],[0,2]]")[0], EXIT_USAGE)

    def test_resource_caps(self):
        self.assertEqual(run("compute", "qp2", "discriminant", "--k", "2", "--cap-det", "5")[0], EXIT_RESOURCE)
        self.assertEqual(run("info", "qtorus3", "--cap-center", "10")[0], EXIT_RESOURCE)

    def test_verify(self):
        code, out = run("verify", "qp2", "pto-reg", "--samples", "5", "--centrals", "5")
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertTrue(report["passed"])
        self.assertEqual(report["details"]["seed"], 1729)
        self.assertEqual(report["details"]["spec"], "qp2")

    def test_verify_cayley_hamilton_reports_degree(self):
        code, out = run("verify", "qp2", "cayley-hamilton", "--trace", "red", "--samples", "5")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["details"]["d"], 2)

    def test_verify_poisson_ideal(self):
        code, out = run("verify", "qp2", "poisson-ideal", "--k", "4")
        self.assertEqual(code, EXIT_OK)

    def test_base_change_over_non_free_sublattice(self):
        code, _ = run("verify", "qp2", "base-change", "--sublattice", "[[2,2],[0,4]]")
        self.assertEqual(code, EXIT_USAGE)

    def test_verify_is_deterministic(self):
        first = run("verify", "qp3", "axioms", "--samples", "5", "--centrals", "3")
        second = run("verify", "qp3", "axioms", "--samples", "5", "--centrals", "3")
        self.assertEqual(first, second)
        third = run("verify", "qp3", "axioms", "--samples", "5", "--centrals", "3", "--seed", "7")
        self.assertEqual(json.loads(third[1])["details"]["seed"], 7)

    @patch("ptorder.cli.SuiteRunner")
    def test_failed_verification_exit_code(self, MockRunner):
        MockRunner.return_value.run.return_value = Report(check="pto-reg", passed=False, witnesses=[{"r": "x1"}])
        code, out = run("verify", "qp2", "pto-reg")
        self.assertEqual(code, EXIT_FAILED)
        self.assertEqual(json.loads(out)["witnesses"], [{"r": "x1"}])
        MockRunner.return_value.run.assert_called_once()

    def test_unknown_suite(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(["verify", "qp2", "nonsense"])
        self.assertEqual(ctx.exception.code, 2)

    def test_no_command(self):
        with redirect_stdout(io.StringIO()):
            self.assertEqual(main([]), EXIT_USAGE)


if __name__ == "__main__":
    unittest.main()
