"""Command-line behaviour: exit codes, reports, fuzz logs, examples."""

import json

import pytest

from defectsum import cli
from defectsum import io as dio


@pytest.fixture()
def octa_files(tmp_path):
    out = tmp_path / "octa"
    assert cli.main(["examples", "octahedron-equator", "--out", str(out)]) == 0
    return out


def flags(d, *names):
    out = []
    for n in names:
        out += [f"--{n}", str(d / f"{n if n != 'complex' else 'complex'}.json")]
    return out


class TestValidateCommands:
    def test_valid_fixture_set(self, octa_files, capsys):
        assert cli.main(["validate-complex", "--complex", str(octa_files / "complex.json")]) == 0
        assert (
            cli.main(
                ["validate-twisting"]
                + flags(octa_files, "group", "hgroup", "biset", "twisting")
            )
            == 0
        )

    def test_flipped_exponent_fails_with_witness(self, octa_files, capsys):
        doc = json.loads((octa_files / "twisting.json").read_text())
        doc["beta"][0][1] = (doc["beta"][0][1] + 1) % doc["N"]
        bad = octa_files / "bad_twisting.json"
        bad.write_text(json.dumps(doc))
        code = cli.main(
            ["validate-twisting"]
            + flags(octa_files, "group", "hgroup", "biset")
            + ["--twisting", str(bad)]
        )
        out = capsys.readouterr().out
        assert code == 1
        assert "condition" in out

    def test_non_flag_like_complex_fails(self, tmp_path, capsys):
        doc = {
            "vertices": 6,
            "on_curve": [True, True, True, True, False, False],
            "triangles": [
                [0, 1, 2], [0, 2, 4], [2, 3, 4], [3, 0, 4],
                [1, 0, 5], [2, 1, 5], [3, 2, 5], [0, 3, 5],
            ],
            "curve_edges": [[0, 1], [1, 2], [2, 3], [3, 0]],
        }
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(doc))
        assert cli.main(["validate-complex", "--complex", str(p)]) == 1

    def test_parse_error_exit_2(self, tmp_path):
        p = tmp_path / "garbage.json"
        p.write_text("{not json")
        assert cli.main(["validate-complex", "--complex", str(p)]) == 2

    def test_missing_file_exit_2(self, tmp_path):
        assert cli.main(["validate-complex", "--complex", str(tmp_path / "nope.json")]) == 2


class TestCompute:
    def test_tetrahedron_z2(self, tmp_path, capsys):
        out = tmp_path / "tet"
        cli.main(["examples", "tetrahedron", "--out", str(out)])
        code = cli.main(
            [
                "compute",
                "--complex", str(out / "complex.json"),
                "--group", str(out / "group.json"),
                "--out", str(tmp_path / "report.json"),
            ]
        )
        assert code == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["kappa"] == 8
        assert report["z_exact"] == {"rational": "1/2"}
        assert report["twisted"] is False

    def test_untwisted_path_taken_without_flag(self, octa_files, capsys):
        code = cli.main(
            ["compute"]
            + ["--complex", str(octa_files / "complex.json")]
            + flags(octa_files, "group", "hgroup", "biset")
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "untwisted" in out

    def test_trivial_twisting_equals_untwisted(self, octa_files, tmp_path, capsys):
        doc = json.loads((octa_files / "twisting.json").read_text())
        doc["beta"] = [[0, 0], [0, 0]]
        doc["gamma"] = [[0, 0], [0, 0]]
        trivial = tmp_path / "trivial.json"
        trivial.write_text(json.dumps(doc))
        cli.main(
            ["compute", "--complex", str(octa_files / "complex.json")]
            + flags(octa_files, "group", "hgroup", "biset")
            + ["--twisting", str(trivial), "--out", str(tmp_path / "r.json")]
        )
        report = json.loads((tmp_path / "r.json").read_text())
        assert report["z_decimal"] == "0.5"

    def test_digest_reproducible(self, octa_files, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            cli.main(
                ["compute", "--complex", str(octa_files / "complex.json")]
                + flags(octa_files, "group", "hgroup", "biset", "twisting")
                + ["--out", str(tmp_path / name)]
            )
            outs.append(json.loads((tmp_path / name).read_text()))
        assert outs[0]["inputs_digest"] == outs[1]["inputs_digest"]
        assert outs[0]["z_exact"] == outs[1]["z_exact"]


class TestFuzz:
    def test_short_fuzz_passes(self, octa_files, capsys):
        code = cli.main(
            ["fuzz", "--complex", str(octa_files / "complex.json")]
            + flags(octa_files, "group", "hgroup", "biset", "twisting")
            + ["--steps", "10", "--trials", "2", "--seed", "3", "--max-growth", "2"]
        )
        assert code == 0
        assert "all trials passed" in capsys.readouterr().out

    def test_untwisted_fuzz(self, octa_files, capsys):
        code = cli.main(
            ["fuzz", "--complex", str(octa_files / "complex.json")]
            + flags(octa_files, "group", "hgroup", "biset")
            + ["--steps", "10", "--trials", "1", "--seed", "5"]
        )
        assert code == 0


class TestExamples:
    @pytest.mark.parametrize(
        "name", ["tetrahedron", "torus7", "octahedron-equator", "torus-grid33", "example1-klein"]
    )
    def test_all_examples_validate(self, tmp_path, name):
        out = tmp_path / name
        assert cli.main(["examples", name, "--out", str(out)]) == 0
        assert cli.main(["validate-complex", "--complex", str(out / "complex.json")]) == 0
        group = dio.load_group(out / "group.json")
        hgroup = dio.load_group(out / "hgroup.json")
        biset = dio.load_biset(out / "biset.json", group, hgroup)
        if (out / "twisting.json").exists():
            assert (
                cli.main(
                    ["validate-twisting"]
                    + flags(out, "group", "hgroup", "biset", "twisting")
                )
                == 0
            )

    def test_unknown_example(self, tmp_path):
        assert cli.main(["examples", "nonsense", "--out", str(tmp_path)]) == 2


class TestRoundTrips:
    def test_group_and_biset_roundtrip(self, tmp_path):
        from defectsum import algebra as alg

        s3 = alg.symmetric_group(3)
        dio.save_group(s3, tmp_path / "g.json")
        back = dio.load_group(tmp_path / "g.json")
        assert back == s3
        x = alg.regular_biset(s3, range(6), [0, 2], range(6))
        dio.save_biset(x, tmp_path / "x.json")
        assert dio.load_biset(tmp_path / "x.json", x.group_right, x.group_left) == x

    def test_complex_roundtrip(self, tmp_path):
        from defectsum import surfaces as sf

        c = sf.torus_grid(3, 4, 1)
        dio.save_complex(c, tmp_path / "c.json")
        assert dio.load_complex(tmp_path / "c.json") == c

    def test_identity_not_first_rejected(self, tmp_path):
        # shift Z2 so the identity sits at index 1
        doc = {"name": "shifted", "order": 2, "mul": [[1, 0], [0, 1]]}
        p = tmp_path / "g.json"
        p.write_text(json.dumps(doc))
        with pytest.raises(dio.FormatError):
            dio.load_group(p)
