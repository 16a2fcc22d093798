"""NMM ID encoding: ``NMM-`` followed by four base-36 digits."""

from __future__ import annotations

import re

ALPHABET = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"
WIDTH = 4
PREFIX = "NMM-"
MIN_ID = 1
MAX_ID = 36**WIDTH - 1  # 1,679,615

_ID_RE = re.compile(r"^NMM-([0-9A-Z]{4})$", re.IGNORECASE)


def nmm_id_encode(n: int) -> str:
    """Return the canonical uppercase NMM ID for the integer ``n``.

    >>> nmm_id_encode(1)
    'NMM-0001'
    >>> nmm_id_encode(11)
    'NMM-000B'
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"NMM ID number must be an int, got {type(n).__name__}")
    if not MIN_ID <= n <= MAX_ID:
        raise ValueError(f"NMM ID number out of range [{MIN_ID}, {MAX_ID}]: {n}")
    digits = []
    for _ in range(WIDTH):
        n, k = divmod(n, 36)
        digits.append(ALPHABET[k])
    return PREFIX + "".join(reversed(digits))


def nmm_id_decode(code: str) -> int:
    """Decode an NMM ID (case-insensitive, surrounding whitespace ignored)."""
    m = _ID_RE.match(code.strip())
    if m is None:
        raise ValueError(f"malformed NMM ID: {code!r}")
    n = int(m.group(1), 36)
    if n < MIN_ID:
        raise ValueError(f"NMM ID out of range: {code!r}")
    return n


def is_nmm_id(code: str) -> bool:
    try:
        nmm_id_decode(code)
    except ValueError:
        return False
    return True


def canonical_nmm_id(code: str) -> str:
    """Uppercase canonical form, e.g. ``nmm-000b`` -> ``NMM-000B``."""
    return nmm_id_encode(nmm_id_decode(code))
