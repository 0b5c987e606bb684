"""Pencil-and-paper cipher toolkit built around the tabula recta."""

from .alphabet import (
    ALPHABET,
    Alphabet,
    IDENTITY,
    SerpentineSpec,
    TabulaConfig,
    TabulaWalk,
    combine,
    derive_keyed_alphabet,
    parse_alphabet,
    serpentine,
    tabula_add,
    tabula_sub,
    uncombine,
)
from .ciphers import (
    CipherMessage,
    FibonaKeys,
    PolyKeys,
    columnar_transpose,
    columnar_untranspose,
    fibonarng_decrypt,
    fibonarng_encrypt,
    fibonarng_keystream,
    polycrypt_decrypt,
    polycrypt_encrypt,
    polycrypt_keystream,
    russian_copulation,
    russian_uncopulation,
    snake_decrypt,
    snake_encrypt,
    triple_text_decrypt,
    triple_text_encrypt,
)
from .corpus import CorpusSource, condense_text, extract_key_text, normalize_text
from .errors import (
    DigestMismatchError,
    InsufficientDataError,
    InvalidInputError,
    KeyFileError,
    RangeError,
    RectaError,
)
from .passwords import (
    BlumKey,
    ObservedPair,
    PravaKey,
    blum_digits,
    blum_password,
    prava_password,
    recover_prava_key,
)
from .recovery import (
    Correction,
    FitnessModel,
    RecoverySession,
    apply_correction,
    inject_errors,
    load_session,
    remove_correction,
    save_session,
    start_session,
    suggest_corrections,
)
from .stats import (
    ChiSquareResult,
    StatReport,
    chi2_pairwise,
    chi2_uniform,
    detect_lfg_lag,
    first_repeat_distance,
    randomness_report,
    shannon_entropy,
)

__version__ = "0.1.0"
