import pytest

from loopdmd import LexError, TokenKind, tokenize


def kinds_and_texts(source):
    return [(t.kind, t.text) for t in tokenize(source)]


def test_for_header_tokens():
    assert kinds_and_texts("for i in 0 .. N") == [
        (TokenKind.KEYWORD, "for"),
        (TokenKind.IDENTIFIER, "i"),
        (TokenKind.KEYWORD, "in"),
        (TokenKind.INTEGER, "0"),
        (TokenKind.OPERATOR, ".."),
        (TokenKind.IDENTIFIER, "N"),
    ]


def test_access_tokens():
    assert kinds_and_texts("read A[i];") == [
        (TokenKind.KEYWORD, "read"),
        (TokenKind.IDENTIFIER, "A"),
        (TokenKind.DELIMITER, "["),
        (TokenKind.IDENTIFIER, "i"),
        (TokenKind.DELIMITER, "]"),
        (TokenKind.DELIMITER, ";"),
    ]


def test_lexical_error_at_offset_zero():
    with pytest.raises(LexError) as exc:
        tokenize("@")
    diag = exc.value.diagnostics[0]
    assert diag.category == "lexical"
    assert (diag.start, diag.end) == (0, 1)


def test_comments_and_whitespace_discarded():
    toks = tokenize("read A[0]; // trailing note\n// full line\nwrite A[1];")
    assert [t.text for t in toks] == ["read", "A", "[", "0", "]", ";", "write", "A", "[", "1", "]", ";"]


def test_spans_index_into_source():
    source = "  for ij in 10 .. N { }"
    for tok in tokenize(source):
        assert source[tok.start : tok.end] == tok.text


def test_all_keywords_recognized():
    source = "params array for in step if else read write update"
    assert all(t.kind is TokenKind.KEYWORD for t in tokenize(source))


def test_keyword_prefix_is_identifier():
    toks = tokenize("forx stepper reads")
    assert all(t.kind is TokenKind.IDENTIFIER for t in toks)


def test_two_char_operators():
    assert [t.text for t in tokenize("<= >= == && ..")] == ["<=", ">=", "==", "&&", ".."]


def test_single_ampersand_is_error():
    with pytest.raises(LexError):
        tokenize("a & b")


def test_single_dot_is_error():
    with pytest.raises(LexError):
        tokenize("0 . 1")


def test_64bit_overflow_is_lexical_error():
    tokenize(str(2**63 - 1))  # fits
    with pytest.raises(LexError):
        tokenize(str(2**63))


def test_empty_source():
    assert tokenize("") == []
    assert tokenize("   \n\t // only a comment") == []
