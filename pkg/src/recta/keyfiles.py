"""Hand-editable key files: one `name = value` per line.

Alphabets may be written out as 26-letter permutations or derived from a
keyword with the `key:` prefix. The same canonical dump feeds the key
digest, so a reformatted file with the same material keeps its digest.

    scheme = polycrypt
    top = key:WONDERFUL
    side = key:MARVELOUS
    bottom = key:AWESOME
    mask = TERRIFIC
    window = 3
"""

from __future__ import annotations

from typing import Union

from .alphabet import Alphabet, IDENTITY, TabulaConfig, parse_alphabet
from .ciphers import FibonaKeys, PolyKeys
from .corpus import normalize_text
from .errors import KeyFileError
from .passwords import BlumKey, PravaKey
from .recovery import key_digest

Keys = Union[FibonaKeys, PolyKeys, PravaKey, BlumKey]

SCHEMES = ("fibonarng", "polycrypt", "prava", "blum")


def parse_entries(text: str) -> dict:
    entries = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise KeyFileError(f"line {lineno}: expected name = value, got {line!r}")
        name, _, value = line.partition("=")
        name = name.strip().lower()
        value = value.strip().strip('"').strip("'")
        if name in entries:
            raise KeyFileError(f"line {lineno}: duplicate entry {name!r}")
        entries[name] = value
    return entries


def _alphabet(entries: dict, name: str, required: bool = True) -> Alphabet:
    if name not in entries:
        if required:
            raise KeyFileError(f"missing required alphabet {name!r}")
        return IDENTITY
    try:
        return parse_alphabet(entries[name])
    except Exception as exc:
        raise KeyFileError(f"bad alphabet {name!r}: {exc}") from exc


def parse_keys(text: str) -> Keys:
    entries = parse_entries(text)
    scheme = entries.get("scheme", "").lower()
    if scheme not in SCHEMES:
        raise KeyFileError(
            f"scheme must be one of {', '.join(SCHEMES)}; got {scheme!r}"
        )
    if scheme == "fibonarng":
        if "seed" not in entries:
            raise KeyFileError("fibonarng needs a seed entry")
        return FibonaKeys(
            top=_alphabet(entries, "top"),
            side=_alphabet(entries, "side"),
            seed=normalize_text(entries["seed"]),
        )
    if scheme == "polycrypt":
        if "mask" not in entries:
            raise KeyFileError("polycrypt needs a mask entry")
        try:
            window = int(entries.get("window", "3"))
        except ValueError:
            raise KeyFileError("window must be an integer") from None
        return PolyKeys(
            top=_alphabet(entries, "top"),
            side=_alphabet(entries, "side"),
            bottom=_alphabet(entries, "bottom"),
            mask=normalize_text(entries["mask"]),
            window=window,
        )
    if scheme == "prava":
        return PravaKey(
            top=_alphabet(entries, "top"),
            side=_alphabet(entries, "side"),
            tail=normalize_text(entries.get("tail", "")),
            suffix=entries.get("suffix", ""),
        )
    if "mapping" not in entries or "permutation" not in entries:
        raise KeyFileError("blum needs mapping and permutation entries")
    return BlumKey(mapping=entries["mapping"], permutation=entries["permutation"])


def load_keys(path) -> Keys:
    with open(path, encoding="utf-8") as fh:
        return parse_keys(fh.read())


def dump_keys(keys: Keys) -> str:
    """Canonical text form; also the input to the key digest."""
    if isinstance(keys, FibonaKeys):
        lines = [
            "scheme = fibonarng",
            f"top = {keys.top}",
            f"side = {keys.side}",
            f"seed = {keys.seed}",
        ]
    elif isinstance(keys, PolyKeys):
        lines = [
            "scheme = polycrypt",
            f"top = {keys.top}",
            f"side = {keys.side}",
            f"bottom = {keys.bottom}",
            f"mask = {keys.mask}",
            f"window = {keys.window}",
        ]
    elif isinstance(keys, PravaKey):
        lines = [
            "scheme = prava",
            f"top = {keys.top}",
            f"side = {keys.side}",
            f"tail = {keys.tail}",
            f"suffix = {keys.suffix}",
        ]
    elif isinstance(keys, BlumKey):
        lines = [
            "scheme = blum",
            f"mapping = {keys.mapping}",
            f"permutation = {keys.permutation}",
        ]
    else:
        raise KeyFileError(f"cannot dump {type(keys).__name__}")
    return "\n".join(lines) + "\n"


def digest_of(keys: Keys) -> str:
    return key_digest(dump_keys(keys))


def parse_tabula_config(text: str) -> TabulaConfig:
    """Three optional lines: top=, left=, bottom_right=; omitted lines
    default to the plain alphabet."""
    entries = parse_entries(text)
    known = {"top", "left", "bottom_right"}
    unknown = set(entries) - known
    if unknown:
        raise KeyFileError(f"unknown tabula entries: {', '.join(sorted(unknown))}")
    return TabulaConfig(
        top=_alphabet(entries, "top", required=False),
        left=_alphabet(entries, "left", required=False),
        bottom_right=_alphabet(entries, "bottom_right", required=False),
    )
