import pytest
from hypothesis import given, strategies as st

from recta.corpus import CorpusSource, condense_text, extract_key_text, normalize_text
from recta.errors import InvalidInputError, RangeError


class TestNormalize:
    def test_basic(self):
        assert normalize_text("Attack at dawn!") == "ATTACKATDAWN"

    def test_oliver_opening(self):
        raw = "Among other public buildings in a certain"
        assert normalize_text(raw) == "AMONGOTHERPUBLICBUILDINGSINACERTAIN"

    def test_empty(self):
        assert normalize_text("") == ""

    def test_accents_fold(self):
        assert normalize_text("émigré ÜBER naïve") == "EMIGREUBERNAIVE"

    def test_digits_and_symbols_dropped(self):
        assert normalize_text("a1b2-c3 +*") == "ABC"

    def test_sharp_s_uppercases_to_ss(self):
        assert normalize_text("straße") == "STRASSE"

    @given(st.text(max_size=200))
    def test_idempotent(self, raw):
        once = normalize_text(raw)
        assert normalize_text(once) == once

    @given(st.text(max_size=200))
    def test_output_is_upper_az(self, raw):
        assert all("A" <= c <= "Z" for c in normalize_text(raw))


class TestExtract:
    def test_oliver_golden_rows(self, oliver):
        assert extract_key_text(oliver, 0, 36) == "AMONGOTHERPUBLICBUILDINGSINACERTAINT"

    def test_zero_length(self, oliver):
        assert extract_key_text(oliver, 10, 0) == ""

    def test_offset_addresses_normalized_stream(self, oliver):
        assert extract_key_text(oliver, 5, 5) == oliver.content[5:10]

    def test_end_boundary(self, oliver):
        assert extract_key_text(oliver, len(oliver) - 1, 1) == oliver.content[-1]
        with pytest.raises(RangeError):
            extract_key_text(oliver, len(oliver), 1)

    def test_error_names_corpus_length(self, oliver):
        with pytest.raises(RangeError, match=str(len(oliver))):
            extract_key_text(oliver, 0, len(oliver) + 1)

    def test_negative_rejected(self, oliver):
        with pytest.raises(RangeError):
            extract_key_text(oliver, -1, 5)


class TestCondense:
    def test_two_parts(self):
        assert condense_text("AAAABBBB", 2) == "BBBB"

    def test_three_parts_with_truncation(self):
        # Rows AB / CD / EF; columns A+C+E=G, B+D+F=J.
        assert condense_text("ABCDEF", 3) == "GJ"
        # 7th letter is dropped: same rows as above.
        assert condense_text("ABCDEFG", 3) == "GJ"

    def test_81_letters_condense_to_27(self, english):
        out = condense_text(english.content[:81], 3)
        assert len(out) == 27

    def test_parts_must_be_at_least_two(self):
        with pytest.raises(InvalidInputError):
            condense_text("ABCDEF", 1)

    @given(st.text(alphabet="ABCDEFGHIJKLMNOPQRSTUVWXYZ", max_size=120),
           st.integers(min_value=2, max_value=5))
    def test_output_length(self, text, parts):
        assert len(condense_text(text, parts)) == len(text) // parts


class TestSources:
    def test_bundled_normalized_once(self, oliver):
        assert oliver.content == normalize_text(oliver.content)

    def test_bundled_unknown_name(self):
        with pytest.raises(InvalidInputError):
            CorpusSource.bundled("nope")

    def test_resolve_bundled_spec(self):
        assert CorpusSource.resolve("bundled:oliver").identifier == "bundled:oliver"

    def test_from_file(self, tmp_path):
        p = tmp_path / "c.txt"
        p.write_text("Hello, World! 123")
        src = CorpusSource.from_file(p)
        assert src.content == "HELLOWORLD"

    def test_english_corpus_is_big_enough_for_sampling(self, english):
        assert len(english) > 40_000
