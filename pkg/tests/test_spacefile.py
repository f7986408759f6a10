import pytest

from ihsig import spaces
from ihsig.covers import DeckLabeling, FiniteGroup, cyclic_labelings
from ihsig.spacefile import SpaceFileError, format_space, parse_text

SUSPENDED_CIRCLE = """\
# suspension of a 3-cycle, poles singular
dim 2
simplex 0 1 3
simplex 1 2 3
simplex 0 2 3
simplex 0 1 4
simplex 1 2 4
simplex 0 2 4
skeleton 0: 3
skeleton 0: 4
"""


def test_parse_basic():
    sf = parse_text(SUSPENDED_CIRCLE)
    assert sf.validation.passed
    assert sf.space.n == 2 and len(sf.space.singular_strata()) == 2
    assert len(sf.digest) == 64 and sf.group is None


@pytest.mark.parametrize("name", ["T2", "sus-T2", "pinched-T2", "cone-T2", "CP2"])
def test_round_trip(name):
    s = spaces.named(name)
    again = parse_text(format_space(s)).space
    assert again.complex.facets == s.complex.facets
    assert dict(again._level.items()) == dict(s._level.items())
    assert again.boundary_faces == s.boundary_faces
    assert again.orientation.signs == s.orientation.signs


def test_round_trip_with_cover():
    t = spaces.torus_space()
    g = FiniteGroup.cyclic(3)
    lab = DeckLabeling(g, cyclic_labelings(t.complex, 3)[1])
    sf = parse_text(format_space(t, g, lab, comment="torus with Z/3"))
    assert sf.group.table == g.table
    assert sf.labeling.labels == lab.labels


def test_digest_is_content_hash():
    assert parse_text(SUSPENDED_CIRCLE).digest == parse_text(SUSPENDED_CIRCLE).digest
    assert parse_text(SUSPENDED_CIRCLE).digest != parse_text(SUSPENDED_CIRCLE + "\n").digest


@pytest.mark.parametrize("text,line,fragment", [
    ("simplex 0 1 2\n", 1, "before dim"),
    ("dim 2\nsimplex 0 1\n", 2, "distinct vertices"),
    ("dim 2\nsimplex 0 1 x\n", 2, "integer"),
    ("dim 2\nsimplex 0 1 2\nfrobnicate\n", 3, "unknown directive"),
    ("dim 2\nsimplex 0 1 2\nskeleton 0: 7\n", 3, "not a simplex"),
    ("dim 2\nsimplex 0 1 2\nskeleton 0: 0 1\n", 3, "cannot lie"),
    ("dim 2\nsimplex 0 1 2\nskeleton 5: 0\n", 3, "level"),
    ("dim 2\ndim 2\n", 2, "duplicate dim"),
    ("dim 2\nsimplex 0 1 2\nedge 0 1 1\n", 3, "without a group"),
])
def test_syntax_and_semantic_errors(text, line, fragment):
    with pytest.raises(SpaceFileError) as err:
        parse_text(text, "bad.space")
    assert err.value.line == line
    assert fragment in str(err.value)
    assert str(err.value).startswith(f"bad.space:{line}:")


def test_group_errors():
    base = SUSPENDED_CIRCLE
    with pytest.raises(SpaceFileError, match="group"):
        parse_text(base + "group order=2 row 0: 1 0\ngroup order=2 row 1: 1 0\n")
    with pytest.raises(SpaceFileError, match="rows 0..1"):
        parse_text(base + "group order=2 row 0: 0 1\n")
    with pytest.raises(SpaceFileError, match="cocycle"):
        parse_text(base + "group order=2 row 0: 0 1\ngroup order=2 row 1: 1 0\nedge 0 1 1\n")


def test_missing_file():
    from ihsig.spacefile import parse_space
    with pytest.raises(SpaceFileError, match="cannot read"):
        parse_space("/nonexistent/x.space")


def test_nonorientable_prescription_rejected():
    rp2 = spaces.rp2()
    text = "dim 2\n" + "".join("simplex " + " ".join(map(str, f)) + "\n" for f in rp2.facets) + "orient 0 +1\n"
    with pytest.raises(SpaceFileError, match="orientation"):
        parse_text(text)
