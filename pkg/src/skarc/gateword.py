"""Gate words over the alphabet {H, S, T}.

A word is a plain ``str`` written in matrix order: ``"HT"`` is the operator
``H @ T``, so the last symbol acts on the state first. The canonical form has
the alternating shape ``T^a0 H T^a1 H ... H T^an`` with every power spelled
``S * (a // 2) + T * (a % 2)``, and is unique per operator (global phase
ignored), so string equality is operator equality.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .su2 import GATES, to_quaternion

ALPHABET = "HST"
_CODES = {"H": 0, "S": 1, "T": 2}
GATE_TABLE = np.array([GATES[g] for g in ALPHABET])
_INVERSE = {"H": "H", "S": "SSS", "T": "TSSS"}


@dataclass(frozen=True)
class WordCounts:
    total: int
    t_count: int
    h_count: int


def validate(word):
    if not isinstance(word, str):
        raise DomainError(f"gate word must be a string, got {type(word).__name__}")
    bad = set(word) - set(ALPHABET)
    if bad:
        raise DomainError(f"gate word contains invalid symbols {sorted(bad)!r}")
    return word


def encode(word):
    """Symbol codes (H=0, S=1, T=2) as a uint8 array."""
    return np.frombuffer(
        word.encode("ascii").translate(bytes.maketrans(b"HST", b"\x00\x01\x02")), dtype=np.uint8
    )


def canonicalize(word):
    return kernels.normal_form(validate(word))


def is_canonical(word):
    return canonicalize(word) == word


def word_matrix(word, table=GATE_TABLE):
    """Ordered matrix product of the word's gates; the empty word is the identity."""
    return kernels.word_product(encode(validate(word)), table)


def word_quaternion(word):
    return to_quaternion(word_matrix(word))


def invert(word):
    """Canonical word for the inverse operator."""
    validate(word)
    return kernels.normal_form("".join(_INVERSE[g] for g in reversed(word)))


def counts(word):
    """Direct symbol tallies of ``word`` as written."""
    validate(word)
    return WordCounts(total=len(word), t_count=word.count("T"), h_count=word.count("H"))


def sort_key(word):
    """Deterministic preference order: fewest gates, then fewest T, then lexicographic."""
    return (len(word), word.count("T"), word)
