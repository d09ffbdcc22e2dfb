"""Query grammar: shapes, precedence, and error positions."""

import pytest

from dicomcurator.metadata_index import (
    And,
    FieldMatch,
    MatchAll,
    Not,
    Or,
    ParseError,
    Phrase,
    Range,
    Term,
    parse_query,
    print_query,
)


def test_empty_and_star_match_all():
    assert parse_query("") == MatchAll()
    assert parse_query("   ") == MatchAll()
    assert parse_query("*") == MatchAll()


def test_bare_term():
    assert parse_query("chest") == Term("chest")


def test_phrase():
    assert parse_query('"low dose chest"') == Phrase("low dose chest")


def test_field_match():
    assert parse_query("Modality:CT") == FieldMatch("Modality", "CT")


def test_field_quoted_is_literal():
    node = parse_query('Manufacturer:"Scanner Works"')
    assert node == FieldMatch("Manufacturer", "Scanner Works", quoted=True)


def test_field_wildcards():
    assert parse_query("ConvolutionKernel:B*") == FieldMatch("ConvolutionKernel", "B*")
    assert parse_query("PatientName:Do?") == FieldMatch("PatientName", "Do?")


def test_inclusive_range():
    node = parse_query("SliceThickness:[0.5 TO 2]")
    assert node == Range("SliceThickness", "0.5", "2", True, True)


def test_exclusive_range():
    node = parse_query("InstanceNumber:{1 TO 10}")
    assert node == Range("InstanceNumber", "1", "10", False, False)


def test_open_range_bounds():
    assert parse_query("x:[* TO 5]").lo == "*"
    assert parse_query("x:[5 TO *]").hi == "*"


def test_juxtaposition_is_and():
    assert parse_query("a b") == And((Term("a"), Term("b")))
    assert parse_query("a AND b") == And((Term("a"), Term("b")))


def test_or_binds_looser_than_and():
    assert parse_query("a OR b c") == Or((Term("a"), And((Term("b"), Term("c")))))
    assert parse_query("a b OR c") == Or((And((Term("a"), Term("b"))), Term("c")))


def test_not_binds_tightest():
    assert parse_query("NOT a b") == And((Not(Term("a")), Term("b")))
    assert parse_query("NOT NOT a") == Not(Not(Term("a")))


def test_parens_group():
    assert parse_query("(a OR b) c") == And((Or((Term("a"), Term("b"))), Term("c")))


def test_nary_flattening():
    assert parse_query("a OR b OR c") == Or((Term("a"), Term("b"), Term("c")))
    assert parse_query("a b c") == And((Term("a"), Term("b"), Term("c")))


def test_mixed_field_and_terms():
    node = parse_query("Modality:CT liver NOT tags:exclude")
    assert node == And(
        (FieldMatch("Modality", "CT"), Term("liver"), Not(FieldMatch("tags", "exclude")))
    )


@pytest.mark.parametrize(
    "query,position",
    [
        ("(a OR", 5),
        ("a AND", 5),
        ("(a", 2),
        ("a)", 1),
        ("NOT", 3),
        ("field:", 6),
        ("field:[1 TO", 11),
        ('"unterminated', 13),
        ("AND b", 0),
        ("x:[1 2]", 5),
    ],
)
def test_error_positions(query, position):
    with pytest.raises(ParseError) as exc:
        parse_query(query)
    assert exc.value.position == position
    assert f"position {position}" in str(exc.value)
    assert exc.value.expected  # non-empty expectation set


def test_error_expected_set_for_primary():
    with pytest.raises(ParseError) as exc:
        parse_query("(a OR")
    assert set(exc.value.expected) == {"term", '"phrase"', "(", "NOT"}


@pytest.mark.parametrize(
    "query",
    [
        "",
        "*",
        "chest",
        '"soft tissue"',
        "Modality:CT",
        'Manufacturer:"Scanner Works"',
        "SliceThickness:[0.5 TO 2]",
        "x:{* TO 3}",
        "a OR b c",
        "NOT a b OR (c d)",
        "tags:qc* AND NOT body_part:chest",
    ],
)
def test_printer_fixed_point(query):
    ast = parse_query(query)
    printed = print_query(ast)
    assert parse_query(printed) == ast
