"""Braid words: text format, free reduction and lowering to ZX-diagrams.

A word is read left to right in time: the leftmost letter acts first.
Tokens are ``s<i>`` for σᵢ and ``S<i>`` for its inverse, with 1-based ``i``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .models import AnyonModel
from .zxgraph import ZxDiagram, adjoint, compose_all, identity

__all__ = [
    "BraidWord",
    "BraidSyntaxError",
    "BraidRangeError",
    "parse_word",
    "free_reduce",
    "word_to_diagram",
    "random_word",
]

_TOKEN = re.compile(r"([sS])(\d+)")


class BraidSyntaxError(ValueError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class BraidRangeError(ValueError):
    def __init__(self, message: str, token_index: int) -> None:
        super().__init__(f"{message} (token {token_index})")
        self.token_index = token_index


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 2:
            raise ValueError(f"need at least 2 strands, got {self.strands}")
        for k, (i, sign) in enumerate(self.letters):
            if not 1 <= i < self.strands:
                raise BraidRangeError(f"generator index {i} out of range 1..{self.strands - 1}", k)
            if sign not in (1, -1):
                raise ValueError(f"letter {k} has sign {sign}")

    def __str__(self) -> str:
        return " ".join(("s" if sign > 0 else "S") + str(i) for i, sign in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: BraidWord) -> BraidWord:
        if self.strands != other.strands:
            raise ValueError("cannot concatenate words on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> BraidWord:
        return BraidWord(self.strands, tuple((i, -s) for i, s in reversed(self.letters)))


def parse_word(text: str, strands: int) -> BraidWord:
    raw = text.encode("utf-8")
    letters = []
    pos = 0
    index = 0
    while pos < len(raw):
        ch = raw[pos : pos + 1]
        if ch.isspace():
            pos += 1
            continue
        end = pos
        while end < len(raw) and not raw[end : end + 1].isspace():
            end += 1
        tok = raw[pos:end].decode("utf-8", errors="replace")
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise BraidSyntaxError(f"bad token {tok!r}", pos)
        i = int(m.group(2))
        if not 1 <= i < strands:
            raise BraidRangeError(f"generator {tok} out of range for {strands} strands", index)
        letters.append((i, 1 if m.group(1) == "s" else -1))
        index += 1
        pos = end
    return BraidWord(strands, tuple(letters))


def free_reduce(w: BraidWord) -> BraidWord:
    """Cancel adjacent σᵢσᵢ⁻¹ pairs until none remain."""
    stack: list[tuple[int, int]] = []
    for i, s in w.letters:
        if stack and stack[-1] == (i, -s):
            stack.pop()
        else:
            stack.append((i, s))
    return BraidWord(w.strands, tuple(stack))


def word_to_diagram(model: AnyonModel, strands: int, w: BraidWord) -> ZxDiagram:
    """Compose the model's generator templates; inverse letters use adjoints."""
    if strands not in (3, 6):
        raise ValueError(f"unsupported strand count {strands}; use 3 or 6")
    if w.strands != strands:
        raise ValueError(f"word is on {w.strands} strands, expected {strands}")
    temps = model.generator_templates(strands)
    inv = [adjoint(t) for t in temps]
    parts = [temps[i - 1] if s > 0 else inv[i - 1] for i, s in w.letters]
    if not parts:
        return identity(model.qubits(strands))
    return compose_all(parts)


def random_word(rng: random.Random, strands: int, length: int, inverses: bool = True) -> BraidWord:
    letters = tuple(
        (rng.randint(1, strands - 1), rng.choice((1, -1)) if inverses else 1) for _ in range(length)
    )
    return BraidWord(strands, letters)
