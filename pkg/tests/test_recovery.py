import pytest

from recta.ciphers import PolyKeys, fibonarng_encrypt, polycrypt_encrypt
from recta.errors import DigestMismatchError, InvalidInputError
from recta.recovery import (
    Correction,
    apply_correction,
    auto_suggest,
    decrypt_with_corrections,
    inject_errors,
    key_digest,
    load_session,
    locate_error,
    remove_correction,
    save_session,
    start_session,
    suggest_corrections,
)

from conftest import random_alphabet, random_fibona_keys, random_letters

PLAINTEXT = (
    "THEHARBOURWEARSITSWINTERCOLOURSNOWWHICHISTOSAYALMOSTNOCOLOURATALL"
    "THEWATERISTHEGREYOFOLDPEWTERTHESKYASHADELIGHTER"
)


@pytest.fixture
def fib_keys(rng):
    return random_fibona_keys(rng, seed_len=6)


class TestInjectAndDecrypt:
    def test_clean_injection_is_plain_encryption(self, fib_keys):
        assert (
            inject_errors(PLAINTEXT, fib_keys, []).ciphertext
            == fibonarng_encrypt(PLAINTEXT, fib_keys).ciphertext
        )

    def test_keystream_slip_garbles_tail_only(self, fib_keys):
        msg = inject_errors(PLAINTEXT, fib_keys, [Correction(40, "keystream", 7)])
        derived = decrypt_with_corrections(msg, fib_keys, ())
        assert derived[:40] == PLAINTEXT[:40]
        assert derived[40:] != PLAINTEXT[40:]

    def test_combine_slip_garbles_one_column(self, fib_keys):
        msg = inject_errors(PLAINTEXT, fib_keys, [Correction(40, "combine", 7)])
        derived = decrypt_with_corrections(msg, fib_keys, ())
        diffs = [i for i, (a, b) in enumerate(zip(derived, PLAINTEXT)) if a != b]
        assert diffs == [40]

    def test_true_corrections_restore_exactly(self, rng):
        for k in range(1, 6):
            keys = random_fibona_keys(rng, seed_len=int(rng.integers(4, 10)))
            positions = rng.choice(len(PLAINTEXT), size=k, replace=False)
            errors = [
                Correction(
                    position=int(p),
                    kind=("keystream", "combine")[int(rng.integers(0, 2))],
                    delta=int(rng.integers(1, 26)),
                )
                for p in positions
            ]
            msg = inject_errors(PLAINTEXT, keys, errors)
            derived = decrypt_with_corrections(msg, keys, tuple(sorted(errors)))
            assert derived == PLAINTEXT

    def test_polycrypt_injection_round_trip(self, rng):
        keys = PolyKeys(
            top=random_alphabet(rng),
            side=random_alphabet(rng),
            bottom=random_alphabet(rng),
            mask="TERRIFIC",
            window=3,
        )
        seed = random_letters(rng, 8)
        errors = [Correction(10, "keystream", 5), Correction(30, "combine", 12)]
        msg = inject_errors(PLAINTEXT, keys, errors, seed=seed)
        assert msg.masked_seed_len == 8
        assert decrypt_with_corrections(msg, keys, tuple(sorted(errors))) == PLAINTEXT
        # Clean polycrypt injection equals plain encryption.
        assert (
            inject_errors(PLAINTEXT, keys, [], seed=seed).ciphertext
            == polycrypt_encrypt(PLAINTEXT, keys, seed).ciphertext
        )

    def test_position_bounds_checked(self, fib_keys):
        with pytest.raises(InvalidInputError):
            inject_errors("SHORT", fib_keys, [Correction(10, "combine", 1)])

    def test_correction_validation(self):
        with pytest.raises(InvalidInputError):
            Correction(0, "bogus", 1)
        with pytest.raises(InvalidInputError):
            Correction(0, "combine", 0)
        with pytest.raises(InvalidInputError):
            Correction(-1, "combine", 1)


class TestSession:
    def test_error_free_session(self, fib_keys):
        msg = inject_errors(PLAINTEXT, fib_keys, [])
        s = start_session(msg, fib_keys)
        assert s.derived == PLAINTEXT
        assert locate_error(s) is None

    def test_fitness_degrades_after_error(self, fib_keys):
        err = Correction(60, "keystream", 9)
        s = start_session(inject_errors(PLAINTEXT, fib_keys, [err]), fib_keys)
        clean = start_session(inject_errors(PLAINTEXT, fib_keys, []), fib_keys)
        before = sum(s.fitness[:55]) / 55
        after = sum(s.fitness[80:]) / len(s.fitness[80:])
        clean_after = sum(clean.fitness[80:]) / len(clean.fitness[80:])
        assert before == pytest.approx(sum(clean.fitness[:55]) / 55, abs=1e-9)
        assert after < clean_after - 1.0

    def test_two_errors_two_dropoffs(self, fib_keys):
        # The changepoint lands where garbling gets dense, a lag or two
        # past each slip; the auto-suggest horizon is sized to cover it.
        errors = [Correction(30, "keystream", 5), Correction(80, "keystream", 11)]
        s = start_session(inject_errors(PLAINTEXT, fib_keys, errors), fib_keys)
        first = locate_error(s)
        assert first is not None and 30 <= first <= 30 + 24
        fixed = apply_correction(s, errors[0])
        second = locate_error(fixed)
        assert second is not None and 80 <= second <= 80 + 24
        done = apply_correction(fixed, errors[1])
        assert done.derived == PLAINTEXT

    def test_apply_true_correction_degarbles(self, fib_keys):
        err = Correction(50, "keystream", 3)
        s = start_session(inject_errors(PLAINTEXT, fib_keys, [err]), fib_keys)
        s2 = apply_correction(s, err)
        assert s2.derived == PLAINTEXT
        assert locate_error(s2) is None

    def test_apply_then_remove_is_identity(self, fib_keys):
        err = Correction(50, "keystream", 3)
        s = start_session(inject_errors(PLAINTEXT, fib_keys, [err]), fib_keys)
        s2 = remove_correction(apply_correction(s, err), 50)
        assert s2 == s

    def test_wrong_delta_keeps_session_consistent(self, fib_keys):
        err = Correction(50, "keystream", 3)
        s = start_session(inject_errors(PLAINTEXT, fib_keys, [err]), fib_keys)
        s2 = apply_correction(s, Correction(50, "keystream", 4))
        assert s2.derived != PLAINTEXT
        assert decrypt_with_corrections(s2.message, fib_keys, s2.corrections) == s2.derived

    def test_duplicate_position_rejected(self, fib_keys):
        err = Correction(50, "keystream", 3)
        s = start_session(inject_errors(PLAINTEXT, fib_keys, [err]), fib_keys)
        s2 = apply_correction(s, err)
        with pytest.raises(InvalidInputError):
            apply_correction(s2, Correction(50, "combine", 1))

    def test_derived_is_pure_function(self, fib_keys):
        err = Correction(20, "combine", 9)
        msg = inject_errors(PLAINTEXT, fib_keys, [err])
        a = start_session(msg, fib_keys)
        b = start_session(msg, fib_keys)
        assert a == b

    def test_monotone_repair_before_next_error(self, fib_keys):
        # Fixing the true earliest slip never hurts fitness anywhere
        # before the next remaining one.
        errors = [Correction(30, "keystream", 5), Correction(85, "keystream", 11)]
        s = start_session(inject_errors(PLAINTEXT, fib_keys, errors), fib_keys)
        fixed = apply_correction(s, errors[0])
        for i in range(85):
            assert fixed.fitness[i] >= s.fitness[i] - 1e-9


class TestSuggest:
    def test_true_keystream_correction_ranks_first(self, fib_keys):
        err = Correction(45, "keystream", 13)
        s = start_session(inject_errors(PLAINTEXT, fib_keys, [err]), fib_keys)
        result = suggest_corrections(s, 45)
        top = result["candidates"][0]
        assert (top["kind"], top["delta"]) == ("keystream", 13)

    def test_error_free_candidates_below_baseline(self, fib_keys):
        # A real repair clears the baseline by a wide margin; on clean
        # text every keystream candidate garbles the tail and scores
        # below it, while a lucky single-letter swap may nose just above.
        s = start_session(inject_errors(PLAINTEXT, fib_keys, []), fib_keys)
        for pos in (20, 40, 60):
            result = suggest_corrections(s, pos)
            keystream_scores = [
                c["score"] for c in result["candidates"] if c["kind"] == "keystream"
            ]
            assert all(v < result["baseline"] for v in keystream_scores)
            assert result["candidates"][0]["score"] < result["baseline"] + 0.6

    def test_combine_error_best_candidate_repairs_one_letter(self, fib_keys):
        err = Correction(45, "combine", 8)
        msg = inject_errors(PLAINTEXT, fib_keys, [err])
        s = start_session(msg, fib_keys)
        top = suggest_corrections(s, 45)["candidates"][0]
        repaired = decrypt_with_corrections(
            msg, fib_keys, (Correction(45, top["kind"], top["delta"]),)
        )
        diffs = [i for i, (a, b) in enumerate(zip(repaired, s.derived)) if a != b]
        assert diffs == [45]

    def test_suggest_at_corrected_position_rejected(self, fib_keys):
        err = Correction(45, "keystream", 13)
        s = start_session(inject_errors(PLAINTEXT, fib_keys, [err]), fib_keys)
        s2 = apply_correction(s, err)
        with pytest.raises(InvalidInputError):
            suggest_corrections(s2, 45)

    def test_auto_suggest_repairs_single_slip(self, fib_keys):
        err = Correction(45, "keystream", 13)
        s = start_session(inject_errors(PLAINTEXT, fib_keys, [err]), fib_keys)
        result = auto_suggest(s)
        top = result["candidates"][0]
        s2 = apply_correction(s, Correction(top["position"], top["kind"], top["delta"]))
        assert s2.derived == PLAINTEXT

    def test_auto_suggest_none_when_clean(self, fib_keys):
        s = start_session(inject_errors(PLAINTEXT, fib_keys, []), fib_keys)
        assert auto_suggest(s) is None


class TestDocuments:
    def test_save_load_round_trip_order_preserved(self, fib_keys):
        from recta.keyfiles import digest_of

        err = Correction(30, "keystream", 5)
        s = start_session(inject_errors(PLAINTEXT, fib_keys, [err]), fib_keys)
        s = apply_correction(s, err)
        s = apply_correction(s, Correction(60, "combine", 2))
        s = apply_correction(s, Correction(10, "combine", 19))
        digest = digest_of(fib_keys)
        doc = save_session(s, digest)
        loaded = load_session(doc, fib_keys, digest)
        assert loaded == s
        assert [c.position for c in loaded.corrections] == [10, 30, 60]

    def test_digest_mismatch_refused(self, fib_keys):
        s = start_session(inject_errors(PLAINTEXT, fib_keys, []), fib_keys)
        doc = save_session(s, "a" * 64)
        with pytest.raises(DigestMismatchError):
            load_session(doc, fib_keys, "b" * 64)

    def test_document_fields(self, fib_keys):
        s = start_session(inject_errors(PLAINTEXT, fib_keys, []), fib_keys)
        doc = save_session(s, key_digest("stuff"))
        assert doc["version"] == 1
        assert doc["scheme"] == "fibonarng"
        assert "created" in doc and "updated" in doc
        assert doc["corrections"] == []

    def test_version_check(self, fib_keys):
        s = start_session(inject_errors(PLAINTEXT, fib_keys, []), fib_keys)
        doc = save_session(s, "d" * 64)
        doc["version"] = 99
        with pytest.raises(InvalidInputError):
            load_session(doc, fib_keys, "d" * 64)

    def test_file_round_trip(self, fib_keys, tmp_path):
        from recta.recovery import dump_session_file, load_session_file

        s = start_session(inject_errors(PLAINTEXT, fib_keys, []), fib_keys)
        doc = save_session(s, "e" * 64)
        path = tmp_path / "session.json"
        dump_session_file(doc, path)
        assert load_session_file(path) == doc
