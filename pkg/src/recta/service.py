"""JSON-over-HTTP service: ciphers, stats, passwords, recovery sessions,
and tabula rendering/tracing for the workbench.

All cryptography runs server side. Recovery sessions reference key files
on the server's filesystem; responses carry a digest of the key material,
never the material itself, so nothing secret reaches a browser. Session
mutations are serialized per session id.
"""

from __future__ import annotations

import threading
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .alphabet import IDENTITY, TabulaConfig, TabulaWalk, parse_alphabet
from .ciphers import (
    CipherMessage,
    FibonaKeys,
    PolyKeys,
    fibonarng_decrypt,
    fibonarng_encrypt,
    polycrypt_decrypt,
    polycrypt_encrypt,
)
from .corpus import CorpusSource, normalize_text
from .errors import InvalidInputError, KeyFileError, RectaError
from .keyfiles import digest_of, load_keys, parse_keys
from .passwords import BlumKey, PravaKey, blum_password, prava_password
from .recovery import (
    Correction,
    RecoverySession,
    apply_correction,
    auto_suggest,
    dump_session_file,
    locate_error,
    remove_correction,
    save_session,
    start_session,
    suggest_corrections,
)
from .stats import randomness_report


class CipherBody(BaseModel):
    plaintext: Optional[str] = None
    ciphertext: Optional[str] = None
    corpus: Optional[str] = None
    offset: Optional[int] = None
    add_mode: bool = False
    keys: Optional[dict] = None
    keyfile: Optional[str] = None
    seed: Optional[str] = None
    masked_seed_len: Optional[int] = None


class StatsBody(BaseModel):
    text: str
    max_distance: int = 10
    expectation: str = "pairs"


class PasswordBody(BaseModel):
    challenge: str
    keys: Optional[dict] = None
    keyfile: Optional[str] = None
    min_length: int = 0
    length: Optional[int] = None


class SessionBody(BaseModel):
    scheme: str
    ciphertext: str
    masked_seed_len: Optional[int] = None
    keyfile: Optional[str] = None
    keys: Optional[dict] = None


class CorrectionBody(BaseModel):
    position: int
    kind: str
    delta: int


class SuggestBody(BaseModel):
    position: int


class SaveBody(BaseModel):
    path: Optional[str] = None


class TraceBody(BaseModel):
    op: str = "serpentine"
    inputs: str
    entry: str = "top"
    top: Optional[str] = None
    left: Optional[str] = None
    bottom_right: Optional[str] = None


def _keys_from(body) -> Union[FibonaKeys, PolyKeys, PravaKey, BlumKey]:
    if body.keyfile:
        return load_keys(body.keyfile)
    if body.keys:
        lines = [f"{k} = {v}" for k, v in body.keys.items()]
        return parse_keys("\n".join(lines))
    raise InvalidInputError("provide keys inline or a server-side keyfile path")


def _config_from(body: TraceBody) -> TabulaConfig:
    def alpha(v):
        return parse_alphabet(v) if v else IDENTITY

    return TabulaConfig(
        top=alpha(body.top), left=alpha(body.left), bottom_right=alpha(body.bottom_right)
    )


class SessionStore:
    """In-memory recovery sessions with per-session mutation locks."""

    def __init__(self):
        self._sessions: dict[str, dict] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def create(self, session: RecoverySession, digest: str) -> str:
        sid = uuid.uuid4().hex[:12]
        now = datetime.now(timezone.utc).isoformat(timespec="seconds")
        with self._guard:
            self._sessions[sid] = {
                "session": session,
                "digest": digest,
                "created": now,
            }
            self._locks[sid] = threading.Lock()
        return sid

    def lock(self, sid: str) -> threading.Lock:
        with self._guard:
            if sid not in self._locks:
                raise KeyError(sid)
            return self._locks[sid]

    def get(self, sid: str) -> dict:
        try:
            return self._sessions[sid]
        except KeyError:
            raise KeyError(sid) from None

    def drop(self, sid: str) -> None:
        with self._guard:
            self._sessions.pop(sid)
            self._locks.pop(sid, None)

    def ids(self) -> list[str]:
        return list(self._sessions)


def _session_view(sid: str, entry: dict) -> dict:
    session: RecoverySession = entry["session"]
    return {
        "id": sid,
        "scheme": session.scheme,
        "ciphertext": session.message.ciphertext,
        "masked_seed_len": session.message.masked_seed_len,
        "derived": session.derived,
        "fitness": [round(v, 3) for v in session.fitness],
        "corrections": [c.to_dict() for c in session.corrections],
        "suspect": locate_error(session),
        "key_digest": entry["digest"],
        "created": entry["created"],
    }


def create_app(webroot: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="recta", docs_url=None, redoc_url=None)
    store = SessionStore()

    @app.exception_handler(RectaError)
    async def _recta_error(_req: Request, exc: RectaError):
        return JSONResponse(status_code=400, content={"code": exc.code, "message": str(exc)})

    @app.exception_handler(KeyError)
    async def _missing(_req: Request, exc: KeyError):
        return JSONResponse(
            status_code=404, content={"code": "not-found", "message": f"no such session: {exc}"}
        )

    # -- ciphers

    @app.post("/api/v1/cipher/{scheme}/{direction}")
    def cipher(scheme: str, direction: str, body: CipherBody):
        if scheme not in ("tripletext", "snake", "fibonarng", "polycrypt"):
            raise InvalidInputError(f"unknown scheme {scheme!r}")
        if direction not in ("encrypt", "decrypt"):
            raise InvalidInputError("direction must be encrypt or decrypt")
        if direction == "encrypt":
            if not body.plaintext:
                raise InvalidInputError("encrypt needs plaintext")
            plaintext = normalize_text(body.plaintext)
            if scheme in ("tripletext", "snake"):
                if body.corpus is None or body.offset is None:
                    raise InvalidInputError(f"{scheme} needs corpus and offset")
                corpus = CorpusSource.resolve(body.corpus)
                from .ciphers import snake_encrypt, triple_text_encrypt

                if scheme == "snake":
                    msg = snake_encrypt(plaintext, corpus, body.offset)
                else:
                    msg = triple_text_encrypt(plaintext, corpus, body.offset, body.add_mode)
                return msg.to_dict()
            keys = _keys_from(body)
            if scheme == "fibonarng":
                if not isinstance(keys, FibonaKeys):
                    raise KeyFileError("not a fibonarng key set")
                return fibonarng_encrypt(plaintext, keys).to_dict()
            if not isinstance(keys, PolyKeys):
                raise KeyFileError("not a polycrypt key set")
            if not body.seed:
                raise InvalidInputError("polycrypt encrypt needs a seed")
            return polycrypt_encrypt(plaintext, keys, normalize_text(body.seed)).to_dict()
        if not body.ciphertext:
            raise InvalidInputError("decrypt needs ciphertext")
        msg = CipherMessage(
            scheme=scheme,
            ciphertext=normalize_text(body.ciphertext),
            offset=body.offset,
            masked_seed_len=body.masked_seed_len,
        )
        if scheme in ("tripletext", "snake"):
            if body.corpus is None or body.offset is None:
                raise InvalidInputError(f"{scheme} needs corpus and offset")
            corpus = CorpusSource.resolve(body.corpus)
            from .ciphers import snake_decrypt, triple_text_decrypt

            if scheme == "snake":
                return {"plaintext": snake_decrypt(msg, corpus)}
            return {"plaintext": triple_text_decrypt(msg, corpus, body.add_mode)}
        keys = _keys_from(body)
        if scheme == "fibonarng":
            if not isinstance(keys, FibonaKeys):
                raise KeyFileError("not a fibonarng key set")
            return {"plaintext": fibonarng_decrypt(msg, keys)}
        if not isinstance(keys, PolyKeys):
            raise KeyFileError("not a polycrypt key set")
        seed, plain = polycrypt_decrypt(msg, keys)
        return {"plaintext": plain, "seed": seed}

    # -- stats

    @app.post("/api/v1/stats/report")
    def stats_report(body: StatsBody):
        return randomness_report(
            normalize_text(body.text), body.max_distance, expectation=body.expectation
        ).to_dict()

    # -- passwords

    @app.post("/api/v1/password/{scheme}")
    def password(scheme: str, body: PasswordBody):
        keys = _keys_from(body)
        challenge = normalize_text(body.challenge)
        if scheme == "blum":
            if not isinstance(keys, BlumKey):
                raise KeyFileError("not a blum key set")
            return {"password": blum_password(challenge, keys, length=body.length)}
        if scheme == "prava":
            if not isinstance(keys, PravaKey):
                raise KeyFileError("not a prava key set")
            return {"password": prava_password(challenge, keys, min_length=body.min_length)}
        raise InvalidInputError(f"unknown password scheme {scheme!r}")

    # -- recovery sessions

    @app.post("/api/v1/recovery/sessions")
    def create_session(body: SessionBody):
        keys = _keys_from(body)
        if not isinstance(keys, (FibonaKeys, PolyKeys)):
            raise KeyFileError("recovery needs fibonarng or polycrypt keys")
        msg = CipherMessage(
            scheme=body.scheme,
            ciphertext=normalize_text(body.ciphertext),
            masked_seed_len=body.masked_seed_len
            if body.masked_seed_len is not None
            else (len(keys.mask) if isinstance(keys, PolyKeys) else None),
        )
        session = start_session(msg, keys)
        sid = store.create(session, digest_of(keys))
        return _session_view(sid, store.get(sid))

    @app.get("/api/v1/recovery/sessions/{sid}")
    def get_session(sid: str):
        return _session_view(sid, store.get(sid))

    @app.delete("/api/v1/recovery/sessions/{sid}")
    def delete_session(sid: str):
        store.get(sid)
        store.drop(sid)
        return {"deleted": sid}

    @app.post("/api/v1/recovery/sessions/{sid}/corrections")
    def add_correction(sid: str, body: CorrectionBody):
        with store.lock(sid):
            entry = store.get(sid)
            correction = Correction(position=body.position, kind=body.kind, delta=body.delta)
            entry["session"] = apply_correction(entry["session"], correction)
            return _session_view(sid, entry)

    @app.delete("/api/v1/recovery/sessions/{sid}/corrections/{position}")
    def drop_correction(sid: str, position: int):
        with store.lock(sid):
            entry = store.get(sid)
            entry["session"] = remove_correction(entry["session"], position)
            return _session_view(sid, entry)

    @app.post("/api/v1/recovery/sessions/{sid}/suggestions")
    def suggest(sid: str, body: SuggestBody):
        entry = store.get(sid)
        return suggest_corrections(entry["session"], body.position)

    @app.post("/api/v1/recovery/sessions/{sid}/auto-suggest")
    def auto(sid: str):
        entry = store.get(sid)
        result = auto_suggest(entry["session"])
        return result if result is not None else {"suspect": None, "candidates": []}

    @app.post("/api/v1/recovery/sessions/{sid}/save")
    def save(sid: str, body: SaveBody):
        entry = store.get(sid)
        doc = save_session(entry["session"], entry["digest"], created=entry["created"])
        if body.path:
            dump_session_file(doc, Path(body.path))
        return doc

    # -- tabula

    @app.get("/api/v1/tabula")
    def tabula(top: Optional[str] = None, left: Optional[str] = None,
               bottom_right: Optional[str] = None):
        config = TabulaConfig(
            top=parse_alphabet(top) if top else IDENTITY,
            left=parse_alphabet(left) if left else IDENTITY,
            bottom_right=parse_alphabet(bottom_right) if bottom_right else IDENTITY,
        )
        return TabulaWalk(config).rendered()

    @app.post("/api/v1/tabula/trace")
    def tabula_trace(body: TraceBody):
        config = _config_from(body)
        walk = TabulaWalk(config)
        inputs = normalize_text(body.inputs)
        if not inputs:
            raise InvalidInputError("trace needs at least one input letter")
        if body.op == "serpentine":
            # The first input enters through the header of its entry
            # edge. Top-entry walks with an even operand count end on the
            # row axis and read the left header; every other case reads
            # the bottom/right header.
            n = len(inputs)
            if body.entry == "top":
                entry_alphabet = config.top
                output = config.left if n % 2 == 0 else config.bottom_right
            else:
                entry_alphabet = config.left
                output = config.bottom_right
            trace = walk.serpentine_trace(inputs, entry_alphabet, output, entry=body.entry)
        elif body.op == "combine":
            if len(inputs) != 2:
                raise InvalidInputError("combine traces take exactly two letters")
            trace = walk.serpentine_trace(inputs, config.top, config.left, entry="top")
        elif body.op in ("add", "sub"):
            if len(inputs) != 2:
                raise InvalidInputError(f"{body.op} traces take exactly two letters")
            if body.op == "add":
                from .alphabet import tabula_add

                result = tabula_add(inputs[0], inputs[1])
                trace = {
                    "result": result,
                    "stops": [
                        {"row": -1, "col": ord(inputs[1]) - 65, "letter": inputs[1], "edge": "top"},
                        {"row": ord(inputs[0]) - 65, "col": -1, "letter": inputs[0], "edge": "left"},
                        {"row": ord(inputs[0]) - 65, "col": ord(inputs[1]) - 65,
                         "letter": result, "edge": None},
                    ],
                }
            else:
                trace = walk.serpentine_trace(inputs[::-1], IDENTITY, IDENTITY, entry="top")
        else:
            raise InvalidInputError(f"unknown trace op {body.op!r}")
        return trace

    if webroot:
        app.mount("/", StaticFiles(directory=webroot, html=True), name="workbench")

    return app
