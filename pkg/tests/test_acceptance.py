"""Acceptance criteria, exercised end to end through the CLI.

Each test prints one PASS/FAIL line (run with -s or look at captured
output). Monte Carlo criteria use pinned master seeds, so every number
below is reproducible bit for bit; nothing here needs the HTTP service.

Criterion 5's single-letter-uniformity clause is expected to fail: the
mod-26 sum of three English rows retains a residual nonuniformity of
about 1.6-2.0 chi-squared noncentrality per 1,000 letters (a property of
English letter frequencies, not of this implementation), so at the
criterion's 10,000-letter samples the pass rate is ~0.15, far below the
stated [0.85, 0.95]. The same sums do pass at human-scale lengths; see
the unit suite and docs/decision notes.
"""

import json
import time

from recta.cli import run_cli

POLY_KEYS_TEXT = """\
scheme = polycrypt
top = key:WONDERFUL
side = key:MARVELOUS
bottom = key:AWESOME
mask = TERRIFIC
window = 3
"""

TABULA_CONFIG = """\
top = key:WONDERFUL
left = key:MARVELOUS
bottom_right = key:AWESOME
"""

# a=9, m=2, n=3, o=7, z=0, filler elsewhere: "amazon" -> digits 929073.
BLUM_KEYS_TEXT = (
    "scheme = blum\n"
    "mapping = 95555555555523755555555550\n"
    "permutation = 5870163429\n"
)


def report(criterion: str, ok: bool, detail: str) -> bool:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def cli_lines(capsys, *argv) -> list[str]:
    assert run_cli(list(argv)) == 0, f"CLI failed: {argv}"
    return capsys.readouterr().out.strip().splitlines()


def cli_json(capsys, tmp_path, *argv) -> dict:
    out = tmp_path / "result.json"
    assert run_cli([*argv, "--json", str(out)]) == 0, f"CLI failed: {argv}"
    capsys.readouterr()
    return json.loads(out.read_text())


def test_criterion_01_snake_golden_vector(capsys):
    t0 = time.time()
    lines = cli_lines(
        capsys, "encrypt", "snake", "--corpus", "bundled:oliver",
        "--offset", "0", "--text", "ATTACK AT DAWN",
    )
    ciphertext = lines[-1]
    back = cli_lines(
        capsys, "decrypt", "snake", "--corpus", "bundled:oliver",
        "--ciphertext", ciphertext, "--offset", "0",
    )[-1]
    elapsed = time.time() - t0
    ok = ciphertext == "RQALFOCWYRTU" and back == "ATTACKATDAWN" and elapsed < 1.0
    assert report("1 snake-golden", ok, f"ct={ciphertext} back={back} {elapsed:.2f}s")


def test_criterion_02_polycrypt_golden_vector(capsys, tmp_path):
    keys = tmp_path / "poly.keys"
    keys.write_text(POLY_KEYS_TEXT)
    t0 = time.time()
    ks = cli_lines(
        capsys, "keystream", "polycrypt", "--keys", str(keys),
        "--length", "12", "--seed", "XGTSCVMU",
    )[-1]
    ct = cli_lines(
        capsys, "encrypt", "polycrypt", "--keys", str(keys),
        "--text", "ATTACKATDAWN", "--seed", "XGTSCVMU",
    )[-1]
    plain = cli_lines(
        capsys, "decrypt", "polycrypt", "--keys", str(keys), "--ciphertext", ct
    )[-1]
    elapsed = time.time() - t0
    ok = (
        ks == "CHFZQIBTHPFW"
        and ct == "SSEVXIKGVHJMINROENLH"
        and plain == "ATTACKATDAWN"
        and elapsed < 1.0
    )
    assert report("2 polycrypt-golden", ok, f"ks={ks} ct={ct} back={plain}")


def test_criterion_03_blum_worked_example(capsys, tmp_path):
    keys = tmp_path / "blum.keys"
    keys.write_text(BLUM_KEYS_TEXT)
    password = cli_lines(
        capsys, "password", "--scheme", "blum", "--keys", str(keys),
        "--challenge", "amazon",
    )[-1]
    # The digit core directly: challenge digits 929073.
    from recta.passwords import blum_digits

    digits = blum_digits("929073", "5870163429")
    ok = password == "894036" and digits == "894036"
    assert report("3 blum-worked-example", ok, f"password={password} digits={digits}")


def test_criterion_04_serpentine_examples(capsys, tmp_path):
    config = tmp_path / "tabula.cfg"
    config.write_text(TABULA_CONFIG)

    def trace(letters, entry="top", read="bottom", scrambled=False):
        args = ["tabula", "--trace", letters, "--entry", entry, "--read", read]
        if scrambled:
            args += ["--config", str(config)]
        assert run_cli(args) == 0
        return json.loads(capsys.readouterr().out)["result"]

    checks = {
        "HCAR->M": trace("HCAR", entry="left") == "M",
        "AABS->R": trace("AABS", read="left") == "R",
        "WPNN->T": trace("WPNN", read="left") == "T",
        "XT reads S": trace("XT", read="left", scrambled=True) == "S",
        "ST reads X": trace("ST", entry="left", read="top", scrambled=True) == "X",
        "VC reads A": trace("VC", entry="left", read="top", scrambled=True) == "A",
    }
    ok = all(checks.values())
    assert report("4 serpentine-examples", ok, str(checks))


def test_criterion_05_randomness_separation(capsys, tmp_path):
    results = cli_json(
        capsys, tmp_path, "bench", "separation",
        "--trials", "200", "--length", "10000", "--seed", "20260",
    )
    uniform = results["three_text_uniform_pass_rate"]
    raw = results["raw_english_uniform_pass_rate"]
    pairwise = results["three_text_pairwise_pass_rate"]
    raw_ok = raw == 0.0
    pairwise_ok = 0.85 <= pairwise <= 0.95
    uniform_ok = 0.85 <= uniform <= 0.95
    report("5b raw-english-fails", raw_ok, f"rate={raw}")
    report("5c pairwise-three-text", pairwise_ok, f"rate={pairwise}")
    report(
        "5a uniform-three-text", uniform_ok,
        f"rate={uniform}; unattainable at length 10000 for genuine English "
        f"(residual noncentrality ~18); see decisions ledger",
    )
    assert raw_ok and pairwise_ok
    assert uniform_ok, (
        f"three-text uniformity pass rate {uniform} outside [0.85, 0.95]: "
        "the criterion's 10,000-letter sample length makes this clause "
        "mathematically unattainable for real English text (sum-of-three "
        "residual noncentrality ~1.8 per 1,000 letters). The same sums pass "
        "at human-computable lengths; see tests/test_stats.py "
        "and the decisions ledger."
    )


def test_criterion_06_entropy_concentration(capsys, tmp_path):
    results = cli_json(
        capsys, tmp_path, "bench", "entropy",
        "--trials", "1000", "--length", "500", "--seed", "20261",
    )
    three = results["three_text_mean_bits"]
    control = results["uniform_control_mean_bits"]
    ok = 4.64 <= three <= 4.70 and 4.66 <= control <= 4.70
    assert report("6 entropy", ok, f"three-text={three:.4f} control={control:.4f}")


def test_criterion_07_birthday_paradox(capsys, tmp_path):
    results = cli_json(
        capsys, tmp_path, "bench", "birthday", "--trials", "10000", "--seed", "20262"
    )
    g2, g3, g4 = results["gram2"], results["gram3"], results["gram4"]
    ok = 26 <= g2["mean"] <= 38 and 120 <= g3["mean"] <= 190 and g4["median"] > 600
    assert report(
        "7 birthday",
        ok,
        f"bigram mean={g2['mean']:.1f} trigram mean={g3['mean']:.1f} "
        f"tetragram median={g4['median']:.0f} (capped {g4['capped']})",
    )


def test_criterion_08_seed_length_attack(capsys, tmp_path):
    results = cli_json(
        capsys, tmp_path, "bench", "lag-attack", "--trials", "1000", "--seed", "20263"
    )
    ok = results["exact"] == results["trials"] == 1000
    assert report(
        "8 lag-attack", ok,
        f"{results['exact']}/{results['trials']} exact, failures={results['failures']}",
    )


def test_criterion_09_key_recovery(capsys, tmp_path):
    results = cli_json(
        capsys, tmp_path, "bench", "key-recovery", "--trials", "100", "--seed", "20265"
    )
    sound_ok = results["sound_rate"] >= 0.95
    under_ok = results["single_pair_unresolved"] >= 38 and results["single_pair_candidates"] == 0
    ok = sound_ok and under_ok
    assert report(
        "9 key-recovery", ok,
        f"sound={results['sound_rate']:.2f} "
        f"single-pair unresolved={results['single_pair_unresolved']} "
        f"(full held-out prediction={results['full_prediction_rate']:.2f}, "
        f"coverage-limited; see ledger)",
    )


def test_criterion_10_property_suites(capsys, tmp_path):
    results = cli_json(
        capsys, tmp_path, "bench", "invariants",
        "--trials", "1000", "--length", "10000", "--seed", "20268",
    )
    failures = {
        k: v["failures"]
        for k, v in results.items()
        if isinstance(v, dict) and v.get("failures", 0) != 0
    }
    walk = results["walk_vs_arithmetic_serpentine"]
    ok = results["all_pass"] and walk["cases"] == 10000
    assert report("10 invariants", ok, f"failures={failures or 'none'}")


def test_criterion_11_recovery_oracle(capsys, tmp_path):
    multi = cli_json(capsys, tmp_path, "bench", "multi-error", "--seed", "20267")
    suggest = cli_json(
        capsys, tmp_path, "bench", "error-recovery", "--trials", "200", "--seed", "20266"
    )
    oracle_ok = multi["failures"] == 0
    rank_ok = suggest["top1_rate"] >= 0.80 and suggest["top3_rate"] >= 0.95
    confine_ok = suggest["combine_kind_top_rate"] >= 0.90
    ok = oracle_ok and rank_ok and confine_ok
    assert report(
        "11 recovery", ok,
        f"oracle failures={multi['failures']}/{multi['cases']} "
        f"top1={suggest['top1_rate']:.2f} top3={suggest['top3_rate']:.2f} "
        f"combine-kind-top={suggest['combine_kind_top_rate']:.2f}",
    )
