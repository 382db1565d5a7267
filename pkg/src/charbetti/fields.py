"""Coefficient field specification: the rationals or a prime field F_p."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidFieldError


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every 64-bit (and well past)
    input with this base set."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """``p is None`` means the rationals, otherwise the field with p
    elements (p prime, checked)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise InvalidFieldError(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, tag: str) -> "FieldSpec":
        tag = tag.strip()
        if tag in ("Q", "QQ", "0"):
            return cls(None)
        if tag.startswith("F") and tag[1:].isdigit():
            return cls(int(tag[1:]))
        raise InvalidFieldError(f"cannot parse field tag {tag!r} (use Q or F<p>)")

    @property
    def tag(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    def is_rationals(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return self.tag


QQ = FieldSpec.rationals()
