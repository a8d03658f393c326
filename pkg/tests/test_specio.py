"""Problem-spec parsing: fixture files, format variants, located errors."""

import json
from fractions import Fraction

import pytest

from nilgraph import fixtures as fx
from nilgraph.errors import IdentityInGenerators, InvolutionInGenerators, SpecError
from nilgraph.specio import parse_spec

MINIMAL = """
version = 1
degree = 3

[[c_pos]]
label = "z"
perm = "(1 2 3)"

[[subgroups]]
name = "trivial"
generators = []
"""


class TestFixtureFiles:
    def test_s4_s3(self):
        spec = parse_spec(fx.spec_text("s4_s3"))
        assert spec.degree == 4
        assert spec.system.labels == ("(1 2 3)", "(1 2 3 4)")
        assert len(spec.subgroups) == 1
        sub = spec.subgroups[0]
        assert sub.name == "S3"
        assert len(sub.generators) == 2
        assert sub.vertex_names["e"] == "He"
        assert spec.group().order == 24

    def test_sl32_pair(self):
        spec = parse_spec(fx.spec_text("sl32_pair"))
        assert spec.degree == 7
        assert [s.name for s in spec.subgroups] == ["H1", "H2"]
        # generators match the pinned image arrays
        assert tuple(p.images for p in spec.system.perms) == tuple(
            tuple(images) for _, images in fx.SL32_C_POS_IMAGES
        )
        h1, h2 = spec.subgroups
        assert tuple(p.images for p in h1.generators) == fx.SL32_H1_IMAGES
        assert tuple(p.images for p in h2.generators) == fx.SL32_H2_IMAGES
        assert h1.t_assignment.vectors["z_r"] == (
            (Fraction(0),),
            (Fraction(1),),
        )
        assert h2.t_assignment.vectors["z_r"] == (
            (Fraction(0),),
            (Fraction(-1),),
        )
        assert spec.search.seed == fx.SEARCH_SEED
        assert spec.search.restarts == 200

    def test_c5(self):
        spec = parse_spec(fx.spec_text("c5"))
        assert spec.degree == 5
        assert spec.subgroups[0].generators == ()


class TestFormats:
    def test_json_input(self):
        data = {
            "version": 1,
            "degree": 3,
            "c_pos": [{"label": "z", "perm": [2, 3, 1]}],
            "subgroups": [{"name": "t", "generators": []}],
        }
        spec = parse_spec(json.dumps(data))
        assert spec.degree == 3
        assert spec.system.perms[0].cycle_string() == "(1 2 3)"

    def test_format_hint(self):
        with pytest.raises(SpecError):
            parse_spec(MINIMAL, format_hint="json")
        spec = parse_spec(MINIMAL, format_hint="toml")
        assert spec.degree == 3

    def test_image_array_and_cycle_string_agree(self):
        as_cycles = parse_spec(MINIMAL)
        data = {
            "version": 1,
            "degree": 3,
            "c_pos": [{"label": "z", "perm": [2, 3, 1]}],
            "subgroups": [{"name": "trivial", "generators": []}],
        }
        as_arrays = parse_spec(json.dumps(data))
        assert as_cycles.system.perms == as_arrays.system.perms


class TestValidation:
    def test_missing_version(self):
        with pytest.raises(SpecError, match="version"):
            parse_spec(MINIMAL.replace("version = 1", "").strip())

    def test_wrong_version(self):
        with pytest.raises(SpecError, match="version"):
            parse_spec(MINIMAL.replace("version = 1", "version = 2"))

    def test_unknown_top_level_field(self):
        with pytest.raises(SpecError, match="wat"):
            parse_spec(MINIMAL + "\nwat = 3\n")

    def test_unknown_subgroup_field(self):
        with pytest.raises(SpecError, match="subgroups"):
            parse_spec(MINIMAL + "\n[[subgroups]]\nname = \"x\"\nbogus = 1\n")

    def test_involution_in_c_pos_has_location(self):
        bad = MINIMAL.replace('perm = "(1 2 3)"', 'perm = "(1 2)"')
        with pytest.raises(InvolutionInGenerators, match=r"c_pos\[0\]"):
            parse_spec(bad)

    def test_identity_in_c_pos(self):
        bad = MINIMAL.replace('perm = "(1 2 3)"', 'perm = "e"')
        with pytest.raises(IdentityInGenerators) as info:
            parse_spec(bad)
        assert "c_pos[0]" in str(info.value)

    def test_bad_perm_has_location(self):
        bad = MINIMAL.replace('perm = "(1 2 3)"', 'perm = "(1 9)"')
        with pytest.raises(SpecError, match=r"c_pos\[0\]"):
            parse_spec(bad)

    def test_duplicate_labels(self):
        dup = MINIMAL + '\n[[c_pos]]\nlabel = "z"\nperm = "(1 3 2)"\n'
        with pytest.raises(SpecError, match="duplicate"):
            parse_spec(dup)

    def test_three_subgroups_rejected(self):
        extra = MINIMAL + "".join(
            f'\n[[subgroups]]\nname = "x{i}"\ngenerators = []\n' for i in range(2)
        )
        with pytest.raises(SpecError, match="subgroups"):
            parse_spec(extra)

    def test_duplicate_subgroup_names(self):
        dup = MINIMAL + '\n[[subgroups]]\nname = "trivial"\ngenerators = []\n'
        with pytest.raises(SpecError, match="distinct"):
            parse_spec(dup)

    def test_bad_t_assignment_rational(self):
        text = """
version = 1
degree = 3

[[c_pos]]
label = "z"
perm = "(1 2 3)"

[[subgroups]]
name = "trivial"
generators = []
[subgroups.t_assignment]
t_dim = 1
[subgroups.t_assignment.labels.z]
t1 = ["x"]
t2 = ["0"]
"""
        with pytest.raises(SpecError, match="t_assignment"):
            parse_spec(text)

    def test_toml_syntax_error(self):
        with pytest.raises(SpecError, match="TOML"):
            parse_spec("version = = 1")

    def test_subgroup_selector(self):
        spec = parse_spec(fx.spec_text("sl32_pair"))
        assert spec.subgroup(None).name == "H1"
        assert spec.subgroup("H2").name == "H2"
        assert spec.subgroup("1").name == "H2"
        with pytest.raises(SpecError):
            spec.subgroup("H9")
