"""Repairing hand-encryption mistakes in keystream ciphers.

A sender slip while generating the keystream corrupts everything after
that point, because each keystream letter feeds later ones; a slip while
combining plaintext and keystream corrupts a single ciphertext column.
Both kinds are one-cell misreads on the table, so both are modeled as an
offset along the header alphabet at the step where they happened.

A recipient who holds all the keys repairs a message by re-decrypting
with deliberate errors: when an introduced error matches the one made
during encryption, the text past that point snaps back into sense. The
session object tracks the applied corrections; a bigram-frequency model
trained on the bundled corpus scores how English each stretch of the
derived text looks, which ranks the 50 possible corrections at any spot
so the human can try the likeliest first.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from functools import lru_cache
from typing import Optional, Union

from .alphabet import Alphabet, SerpentineSpec, combine, serpentine, uncombine
from .ciphers import CipherMessage, FibonaKeys, PolyKeys
from .corpus import CorpusSource
from .errors import DigestMismatchError, InvalidInputError

SESSION_VERSION = 1
# Candidate ranking needs to see about two corruption waves of a slipped
# keystream inside its evidence window; 18 covers seeds up to 8-9 letters.
FITNESS_WINDOW = 18

Keys = Union[FibonaKeys, PolyKeys]

CORRECTION_KINDS = ("keystream", "combine")


@dataclass(frozen=True, order=True)
class Correction:
    """A deliberate error at one keystream position.

    `delta` is the sender's slip expressed as an offset along the header
    the letter was read from; a keystream correction replays the slip
    during regeneration, a combine correction backs the slip out of one
    ciphertext column.
    """

    position: int
    kind: str
    delta: int

    def __post_init__(self):
        if self.kind not in CORRECTION_KINDS:
            raise InvalidInputError(f"kind must be one of {CORRECTION_KINDS}")
        if not 1 <= self.delta <= 25:
            raise InvalidInputError("delta must be in 1..25")
        if self.position < 0:
            raise InvalidInputError("position must be non-negative")

    def to_dict(self) -> dict:
        return {"position": self.position, "kind": self.kind, "delta": self.delta}

    @classmethod
    def from_dict(cls, d: dict) -> "Correction":
        return cls(position=d["position"], kind=d["kind"], delta=d["delta"])


def _slip(letter: str, delta: int, header: Alphabet) -> str:
    """Misread by `delta` cells along a header alphabet."""
    return header[(header.index(letter) + delta) % 26]


def _keystream_alphabet(keys: Keys) -> Alphabet:
    """Header the keystream letters are read from."""
    return keys.bottom if isinstance(keys, PolyKeys) else keys.side


def _keystream_with_slips(keys: Keys, seed: str, length: int, slips: dict) -> str:
    """Generate the keystream, misreading at the given positions.

    Slipped letters feed forward into later windows exactly as they would
    on paper, which is why one early slip garbles the whole tail.
    """
    header = _keystream_alphabet(keys)
    if isinstance(keys, PolyKeys):
        if keys.window == 0:
            out = []
            for i in range(length):
                k = "A"
                if i in slips:
                    k = _slip(k, slips[i], header)
                out.append(k)
            return "".join(out)
        s = list(seed)
        out = []
        for i in range(length):
            k = serpentine(
                SerpentineSpec("".join(s[i : i + keys.window]), keys.top, keys.bottom)
            )
            if i in slips:
                k = _slip(k, slips[i], header)
            out.append(k)
            s.append(k)
        return "".join(out)
    s = list(seed)
    out = []
    for i in range(length):
        k = combine(s[i], s[i + 1], keys.top, keys.side)
        if i in slips:
            k = _slip(k, slips[i], header)
        out.append(k)
        s.append(k)
    return "".join(out)


def inject_errors(
    plaintext: str,
    keys: Keys,
    errors: list[Correction],
    seed: Optional[str] = None,
) -> CipherMessage:
    """Encrypt the way a careless sender would: make exactly these slips.

    Positions index the keystream (equivalently the plaintext column).
    Used to build repair drills and fixtures; a message encrypted with no
    errors decrypts cleanly, one with errors needs the matching
    corrections.
    """
    _check_corrections(errors, len(plaintext))
    ks_slips = {e.position: e.delta for e in errors if e.kind == "keystream"}
    cb_slips = {e.position: e.delta for e in errors if e.kind == "combine"}
    if isinstance(keys, PolyKeys):
        if seed is None or len(seed) != len(keys.mask):
            raise InvalidInputError("polycrypt injection needs a seed as long as the mask")
        ks = _keystream_with_slips(keys, seed, len(plaintext), ks_slips)
        row1 = seed + plaintext
        row2 = keys.mask + ks
        ct = []
        for i, (p, k) in enumerate(zip(row1, row2)):
            c = combine(p, k, keys.top, keys.side)
            col = i - len(keys.mask)
            if col in cb_slips:
                c = _slip(c, cb_slips[col], keys.side)
            ct.append(c)
        return CipherMessage(
            scheme="polycrypt", ciphertext="".join(ct), masked_seed_len=len(keys.mask)
        )
    ks = _keystream_with_slips(keys, keys.seed, len(plaintext), ks_slips)
    ct = []
    for i, (p, k) in enumerate(zip(plaintext, ks)):
        c = combine(p, k, keys.top, keys.side)
        if i in cb_slips:
            c = _slip(c, cb_slips[i], keys.side)
        ct.append(c)
    return CipherMessage(scheme="fibonarng", ciphertext="".join(ct))


def _check_corrections(corrections: list[Correction], n_positions: int) -> None:
    seen = set()
    for c in corrections:
        if c.position >= n_positions:
            raise InvalidInputError(
                f"position {c.position} outside the {n_positions}-column message"
            )
        if (c.position, c.kind) in seen:
            raise InvalidInputError(
                f"duplicate {c.kind} error at position {c.position}"
            )
        seen.add((c.position, c.kind))


def decrypt_with_corrections(
    message: CipherMessage, keys: Keys, corrections: tuple
) -> str:
    """Decrypt while deliberately replaying the hypothesized sender slips."""
    ks_slips = {c.position: c.delta for c in corrections if c.kind == "keystream"}
    cb_slips = {c.position: c.delta for c in corrections if c.kind == "combine"}
    if isinstance(keys, PolyKeys):
        m = len(keys.mask)
        if len(message.ciphertext) <= m:
            raise InvalidInputError("ciphertext too short to hold the masked seed")
        seed = "".join(
            uncombine(c, k, keys.top, keys.side)
            for c, k in zip(message.ciphertext[:m], keys.mask)
        )
        body = message.ciphertext[m:]
        ks = _keystream_with_slips(keys, seed, len(body), ks_slips)
        side = keys.side
        out = []
        for i, (c, k) in enumerate(zip(body, ks)):
            if i in cb_slips:
                c = _slip(c, -cb_slips[i], side)
            out.append(uncombine(c, k, keys.top, keys.side))
        return "".join(out)
    ks = _keystream_with_slips(keys, keys.seed, len(message.ciphertext), ks_slips)
    out = []
    for i, (c, k) in enumerate(zip(message.ciphertext, ks)):
        if i in cb_slips:
            c = _slip(c, -cb_slips[i], keys.side)
        out.append(uncombine(c, k, keys.top, keys.side))
    return "".join(out)


# ---------------------------------------------------------------------------
# Fitness scoring


class FitnessModel:
    """Bigram log-likelihood of English, add-one smoothed."""

    def __init__(self, corpus: CorpusSource, window: int = FITNESS_WINDOW):
        self.window = window
        counts = [[1.0] * 26 for _ in range(26)]
        text = corpus.content
        for a, b in zip(text, text[1:]):
            counts[ord(a) - 65][ord(b) - 65] += 1.0
        self.logp = []
        for row in counts:
            total = sum(row)
            self.logp.append([math.log2(v / total) for v in row])
        # Spread of per-bigram scores on the training text itself, used
        # to scale changepoint statistics.
        scores = [self.logp[ord(a) - 65][ord(b) - 65] for a, b in zip(text, text[1:])]
        mean = sum(scores) / len(scores)
        self.logp_mean = mean
        self.logp_std = math.sqrt(
            sum((s - mean) ** 2 for s in scores) / (len(scores) - 1)
        )

    def _mean_logp(self, piece: str) -> float:
        if len(piece) < 2:
            return 0.0
        total = 0.0
        for a, b in zip(piece, piece[1:]):
            total += self.logp[ord(a) - 65][ord(b) - 65]
        return total / (len(piece) - 1)

    def window_score(self, text: str, start: int = 0) -> float:
        """Forward evidence for a correction candidate at `start`.

        Runs from one letter before the position (the joining bigram
        carries real evidence about a repaired letter) through `window`
        letters after it.
        """
        return self._mean_logp(text[max(0, start - 1) : start + self.window + 1])

    def position_scores(self, text: str) -> tuple:
        """Backward-looking fitness per position, for localization.

        fitness[i] scores the bigrams ending at or shortly before i, so
        the first depressed index is exactly where the text goes wrong;
        a forward window here would smear the onset backward.
        """
        return tuple(
            self._mean_logp(text[max(0, i - self.window) : i + 1])
            for i in range(len(text))
        )


@lru_cache(maxsize=1)
def default_fitness_model() -> FitnessModel:
    return FitnessModel(CorpusSource.bundled("english"))


def locate_error(
    session: "RecoverySession",
    model: Optional[FitnessModel] = None,
    min_z: float = 4.0,
) -> Optional[int]:
    """Best changepoint estimate of the earliest remaining slip.

    Treats the per-bigram scores of the derived text as a mean-shift
    problem: the split with the strongest variance-scaled drop between
    the English-looking prefix and the garbled tail marks the slip. The
    letter at the estimated position is the first wrong one. Clean
    messages produce no split stronger than `min_z` standard errors.
    """
    model = model or default_fitness_model()
    text = session.derived
    if len(text) < 8:
        return None
    b = [model.logp[ord(a) - 65][ord(c) - 65] for a, c in zip(text, text[1:])]
    prefix = [0.0]
    for v in b:
        prefix.append(prefix[-1] + v)
    total = prefix[-1]
    m = len(b)
    corrected = {c.position for c in session.corrections}
    best_pos, best_z = None, min_z
    for split in range(2, m - 1):
        # Position split+1 is the first letter whose bigrams all land in
        # the after segment.
        position = split + 1
        if position in corrected or position >= len(text):
            continue
        before = prefix[split] / split
        after = (total - prefix[split]) / (m - split)
        z = (before - after) * math.sqrt(split * (m - split) / m) / model.logp_std
        if z > best_z:
            best_pos, best_z = position, z
    return best_pos


# ---------------------------------------------------------------------------
# Sessions


@dataclass(frozen=True)
class RecoverySession:
    """A message under repair: corrections applied so far, text they yield.

    Derived text and fitness are recomputed from scratch on every change;
    nothing is cached across mutations, so the session is always exactly
    the function of (message, keys, corrections).
    """

    message: CipherMessage
    keys: Keys
    corrections: tuple
    derived: str
    fitness: tuple

    @property
    def scheme(self) -> str:
        return self.message.scheme


def start_session(
    message: CipherMessage, keys: Keys, model: Optional[FitnessModel] = None
) -> RecoverySession:
    model = model or default_fitness_model()
    derived = decrypt_with_corrections(message, keys, ())
    return RecoverySession(
        message=message,
        keys=keys,
        corrections=(),
        derived=derived,
        fitness=model.position_scores(derived),
    )


def apply_correction(
    session: RecoverySession,
    correction: Correction,
    model: Optional[FitnessModel] = None,
) -> RecoverySession:
    if any(c.position == correction.position for c in session.corrections):
        raise InvalidInputError(
            f"position {correction.position} already has a correction; remove it first"
        )
    if correction.position >= len(session.derived):
        raise InvalidInputError(
            f"position {correction.position} outside the {len(session.derived)}-column message"
        )
    model = model or default_fitness_model()
    corrections = tuple(sorted(session.corrections + (correction,)))
    derived = decrypt_with_corrections(session.message, session.keys, corrections)
    return replace(
        session,
        corrections=corrections,
        derived=derived,
        fitness=model.position_scores(derived),
    )


def remove_correction(
    session: RecoverySession, position: int, model: Optional[FitnessModel] = None
) -> RecoverySession:
    if not any(c.position == position for c in session.corrections):
        raise InvalidInputError(f"no correction at position {position}")
    model = model or default_fitness_model()
    corrections = tuple(c for c in session.corrections if c.position != position)
    derived = decrypt_with_corrections(session.message, session.keys, corrections)
    return replace(
        session,
        corrections=corrections,
        derived=derived,
        fitness=model.position_scores(derived),
    )


def suggest_corrections(
    session: RecoverySession, position: int, model: Optional[FitnessModel] = None
) -> dict:
    """Score all 50 possible corrections at a position.

    Each candidate is applied on top of the current corrections and the
    re-decrypted stretch from the position onward is scored; candidates
    come back best first. Combine corrections sort ahead of keystream
    ones on exact ties since they claim less.
    """
    if not 0 <= position < len(session.derived):
        raise InvalidInputError(
            f"position {position} outside the {len(session.derived)}-column message"
        )
    if any(c.position == position for c in session.corrections):
        raise InvalidInputError(
            f"position {position} already has a correction; remove it first"
        )
    model = model or default_fitness_model()
    baseline = model.window_score(session.derived, position)
    window = slice(max(0, position - 1), position + model.window + 1)
    scored = []
    for kind in CORRECTION_KINDS:
        for delta in range(1, 26):
            candidate = Correction(position=position, kind=kind, delta=delta)
            corrections = tuple(sorted(session.corrections + (candidate,)))
            derived = decrypt_with_corrections(session.message, session.keys, corrections)
            scored.append((model.window_score(derived, position), candidate, derived[window]))
    scored.sort(key=lambda t: (-t[0], t[1].kind, t[1].delta))
    return {
        "position": position,
        "baseline": baseline,
        "window_preview": session.derived[window],
        "candidates": [
            {"kind": c.kind, "delta": c.delta, "score": s, "preview": preview}
            for s, c, preview in scored
        ],
    }


def auto_suggest(
    session: RecoverySession,
    model: Optional[FitnessModel] = None,
    horizon: int = 24,
    tail: int = 48,
) -> Optional[dict]:
    """Locate the earliest remaining slip and rank repairs across spots.

    The changepoint estimate lands where garbling gets dense, which for a
    keystream slip is a lag or two past the slip itself; every position
    within `horizon` before it is therefore tried, and candidates are
    ranked by how English the re-decrypted `tail` after them looks. The
    true repair de-garbles the whole tail and wins by a wide margin.
    Returns None when the message already reads clean.
    """
    model = model or default_fitness_model()
    coarse = locate_error(session, model=model)
    if coarse is None:
        return None
    corrected = {c.position for c in session.corrections}
    lo = max(0, coarse - horizon)
    hi = min(len(session.derived) - 1, coarse + 2)
    scored = []
    for position in range(lo, hi + 1):
        if position in corrected:
            continue
        for kind in CORRECTION_KINDS:
            for delta in range(1, 26):
                candidate = Correction(position=position, kind=kind, delta=delta)
                corrections = tuple(sorted(session.corrections + (candidate,)))
                derived = decrypt_with_corrections(session.message, session.keys, corrections)
                end = min(len(derived), position + tail)
                piece = derived[max(0, position - 1) : end]
                scored.append((model._mean_logp(piece), candidate, piece[: model.window + 2]))
    scored.sort(key=lambda t: (-t[0], t[1].position, t[1].kind, t[1].delta))
    return {
        "suspect": coarse,
        "candidates": [
            {
                "position": c.position,
                "kind": c.kind,
                "delta": c.delta,
                "score": s,
                "preview": preview,
            }
            for s, c, preview in scored[:26]
        ],
    }


# ---------------------------------------------------------------------------
# Session documents


def key_digest(material: str) -> str:
    """Digest of key material so documents can reference keys without
    carrying them."""
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


def save_session(
    session: RecoverySession, digest: str, created: Optional[str] = None
) -> dict:
    now = datetime.now(timezone.utc).isoformat(timespec="seconds")
    doc = {
        "version": SESSION_VERSION,
        "scheme": session.scheme,
        "ciphertext": session.message.ciphertext,
        "key_digest": digest,
        "corrections": [c.to_dict() for c in session.corrections],
        "created": created or now,
        "updated": now,
    }
    if session.message.offset is not None:
        doc["offset"] = session.message.offset
    if session.message.masked_seed_len is not None:
        doc["masked_seed_len"] = session.message.masked_seed_len
    return doc


def load_session(
    doc: dict, keys: Keys, digest: str, model: Optional[FitnessModel] = None
) -> RecoverySession:
    if doc.get("version") != SESSION_VERSION:
        raise InvalidInputError(f"unsupported session version {doc.get('version')!r}")
    if doc["key_digest"] != digest:
        raise DigestMismatchError(
            "session was saved against different key material; refusing to load"
        )
    message = CipherMessage(
        scheme=doc["scheme"],
        ciphertext=doc["ciphertext"],
        offset=doc.get("offset"),
        masked_seed_len=doc.get("masked_seed_len"),
    )
    session = start_session(message, keys, model=model)
    for cd in doc["corrections"]:
        session = apply_correction(session, Correction.from_dict(cd), model=model)
    return session


def dump_session_file(doc: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_session_file(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
