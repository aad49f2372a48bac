"""Bitstring/natural codings, program codes, and the pairing function.

Bitstrings are numbered by the classic bijection "prepend 1, read as binary,
subtract one": the empty string is 0, "0" is 1, "1" is 2, "00" is 3, and so
on.  Program texts are packed into bitstrings eight bits per character
(big-endian within the byte), so every text has a unique code and a natural
decodes to a text only when its bit length is a multiple of eight.

Pairing is the quadratic polynomial pair(n, m) = (n + m)^2 + n.  It is
injective but not surjective, so unpairing is partial and returns ``None``
off its range.

All functions are pure; values are arbitrary-precision.
"""

from __future__ import annotations

from math import isqrt


class CodecError(ValueError):
    """Raised for structurally invalid codec inputs."""


def _check_nat(n: int, what: str = "value") -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise CodecError(f"{what} must be a natural number, got {n!r}")


def bits_to_nat(bits: str) -> int:
    """Number of a bitstring under the prepend-1 bijection ("" -> 0)."""
    if bits and bits.strip("01"):
        raise CodecError(f"not a bitstring: {bits!r}")
    return int("1" + bits, 2) - 1


def nat_to_bits(n: int) -> str:
    """Inverse of bits_to_nat (0 -> "")."""
    _check_nat(n)
    return bin(n + 1)[3:]


def ascii_to_bits(text: str) -> str:
    """Pack a text into bits, eight per character, big-endian per byte."""
    try:
        data = text.encode("latin-1")
    except UnicodeEncodeError as exc:
        raise CodecError(f"character out of 8-bit range: {exc}") from exc
    return "".join(f"{b:08b}" for b in data)


def bits_to_ascii(bits: str) -> str:
    """Unpack a bitstring into text; bit length must be a multiple of 8."""
    if bits and bits.strip("01"):
        raise CodecError(f"not a bitstring: {bits!r}")
    if len(bits) % 8:
        raise CodecError(f"bit length {len(bits)} is not a multiple of 8")
    return bytes(int(bits[i : i + 8], 2) for i in range(0, len(bits), 8)).decode("latin-1")


def program_code(text: str) -> int:
    """Code of a text: bits_to_nat of its 8-bit packing.

    Computed arithmetically ((1 << 8L) + bytes - 1) so multi-kilobyte
    program texts code in one pass.
    """
    try:
        data = text.encode("latin-1")
    except UnicodeEncodeError as exc:
        raise CodecError(f"character out of 8-bit range: {exc}") from exc
    return (1 << (8 * len(data))) + int.from_bytes(data, "big") - 1


def decode_program_code(n: int) -> str | None:
    """Text with code ``n``, or ``None`` when the bit length is not 8k."""
    _check_nat(n)
    m = n + 1
    length = m.bit_length() - 1
    if length % 8:
        return None
    body = m - (1 << length)
    return body.to_bytes(length // 8, "big").decode("latin-1")


def pair(n: int, m: int) -> int:
    """pair(n, m) = (n + m)^2 + n."""
    _check_nat(n, "left component")
    _check_nat(m, "right component")
    return (n + m) * (n + m) + n


def unpair(p: int) -> tuple[int, int] | None:
    """Inverse of pair where defined, ``None`` otherwise.

    A natural p is a pair exactly when, for s = isqrt(p), the residue
    p - s^2 does not exceed s; then n = p - s^2 and m = s - n.
    """
    _check_nat(p)
    s = isqrt(p)
    n = p - s * s
    if n > s:
        return None
    return n, s - n


def in_pair_range(p: int) -> bool:
    """Whether ``p`` codes a pair."""
    _check_nat(p)
    s = isqrt(p)
    return p - s * s <= s


# Program codes routinely run to tens of thousands of decimal digits, past
# the interpreter's default int<->str conversion cap, so decimal text is
# produced and consumed by recursive halving instead of one big str()/int().

_SAFE_DIGITS = 2048
_SAFE_CEILING = 10**_SAFE_DIGITS


def _digit_count(n: int) -> int:
    est = max(1, (n.bit_length() * 30103) // 100000)
    while 10**est <= n:
        est += 1
    while est > 1 and 10 ** (est - 1) > n:
        est -= 1
    return est


def _emit_decimal(n: int, width: int, out: list[str]) -> None:
    if n < _SAFE_CEILING:
        text = str(n)
        out.append(text.zfill(width) if width else text)
        return
    half = _digit_count(n) // 2
    high, low = divmod(n, 10**half)
    _emit_decimal(high, width - half if width else 0, out)
    _emit_decimal(low, half, out)


def nat_to_decimal(n: int) -> str:
    """Decimal text of a natural, regardless of how many digits it takes."""
    _check_nat(n)
    out: list[str] = []
    _emit_decimal(n, 0, out)
    return "".join(out)


def decimal_to_nat(text: str) -> int:
    """Natural denoted by a string of ASCII digits (any length)."""
    if not text or not text.isascii() or not text.isdigit():
        raise CodecError(f"not a decimal numeral: {text!r}")
    return _parse_decimal(text)


def _parse_decimal(text: str) -> int:
    if len(text) <= _SAFE_DIGITS:
        return int(text)
    mid = len(text) // 2
    return _parse_decimal(text[:mid]) * 10 ** (len(text) - mid) + _parse_decimal(text[mid:])
