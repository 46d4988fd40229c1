import hashlib

import pytest

from toposub.subfile import ParseError, builtin, builtin_text, dump, load, parse
from toposub.topo import InvalidSubstitution

CHECKSUMS = {
    "tribonacci": "29f62e297a28564aa8a5a51eb9bf978fa52fea974b5e0ae1d2d7eda3cb2ffa6b",
    "tau": "c0a8d07279dc415d16e1e0906f5c37714915bbe169b9e0192d970f2428fc8b61",
}


@pytest.mark.parametrize("name", sorted(CHECKSUMS))
def test_bundled_checksums(name):
    assert hashlib.sha256(builtin_text(name).encode()).hexdigest() == CHECKSUMS[name]


@pytest.mark.parametrize("name", sorted(CHECKSUMS))
def test_round_trip(name):
    presub = builtin(name)
    text = dump(presub)
    again = parse(text, name)
    assert again == presub
    assert dump(again) == text


def test_load_from_disk(tmp_path, trib):
    path = tmp_path / "mine.sub"
    path.write_text(dump(trib))
    got = load(path)
    assert got.name == "mine"
    assert got.images == trib.images


def test_unknown_prototile_line_number():
    text = dump(builtin("tribonacci")).replace("C A B C", "C A B D")
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.lineno == 9
    assert "line 9" in str(exc.value)


def test_bad_edge_token():
    text = dump(builtin("tribonacci")).replace("C 0:2-3 1:0-5", "C 0:2-3 1:05")
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert "bad edge token" in str(exc.value)


def test_data_before_section():
    with pytest.raises(ParseError) as exc:
        parse("A 6\n")
    assert exc.value.lineno == 1


def test_missing_edge_image():
    text = dump(builtin("tribonacci")).replace("A 5-0 0:1-2\n", "")
    with pytest.raises(ParseError, match="edge images of A incomplete"):
        parse(text)


def test_inconsistent_images_rejected():
    # edge image ending at the wrong vertex
    text = dump(builtin("tribonacci")).replace("A 0-1 0:2-3", "A 0-1 0:3-4")
    with pytest.raises(InvalidSubstitution):
        parse(text)


def test_comments_and_blank_lines_ignored(trib):
    text = "# header\n\n" + dump(trib).replace("\nIMAGES", "\n# images follow\nIMAGES")
    assert parse(text, trib.name) == trib
