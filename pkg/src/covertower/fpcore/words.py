"""Words over a free group and finite presentations.

A word is a tuple of nonzero signed integers: ``+i`` is generator ``i``
(numbered from 1), ``-i`` its inverse.  The repo-wide text format maps
generators 1..26 to letters ``a..z`` and inverses to ``A..Z``.
"""

from dataclasses import dataclass, field

from ..errors import MalformedWordError, ParameterError

Word = tuple  # tuple of nonzero signed ints


def validate_word(letters, ngens=None) -> Word:
    w = tuple(int(x) for x in letters)
    for x in w:
        if x == 0:
            raise MalformedWordError("generator index 0 is not a letter")
        if ngens is not None and abs(x) > ngens:
            raise MalformedWordError(f"letter {x} out of range for {ngens} generators")
    return w


def free_reduce(letters, ngens=None) -> Word:
    """Unique freely reduced form of a word (idempotent)."""
    w = validate_word(letters, ngens)
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(letters, ngens=None) -> Word:
    """Freely reduce, then strip cancelling first/last letters."""
    w = list(free_reduce(letters, ngens))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert_word(letters) -> Word:
    return tuple(-x for x in reversed(tuple(letters)))


def word_power(letters, n: int) -> Word:
    w = tuple(letters)
    if n < 0:
        w, n = invert_word(w), -n
    return w * n


@dataclass(frozen=True)
class Presentation:
    """Finitely presented group.  Relators are freely reduced on construction;
    relators that reduce to the empty word are dropped."""

    ngens: int
    relators: tuple = field(default=())

    def __post_init__(self):
        if self.ngens < 1:
            raise ParameterError("a presentation needs at least one generator")
        rels = []
        for r in self.relators:
            rr = free_reduce(r, self.ngens)
            if rr:
                rels.append(rr)
        object.__setattr__(self, "relators", tuple(rels))

    def exponent_matrix(self) -> list:
        """Abelianized relator rows: entry [r][j] = exponent sum of generator j+1."""
        rows = []
        for rel in self.relators:
            row = [0] * self.ngens
            for x in rel:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(row)
        return rows


_LOWER = "abcdefghijklmnopqrstuvwxyz"


def parse_presentation(text: str) -> Presentation:
    """Parse the repo-wide presentation text format.

    Line 1 is the generator count (1..26); every later nonblank line not
    starting with '#' is one relator over a..z / A..Z, with no interior
    whitespace.
    """
    lines = text.splitlines()
    if not lines:
        raise ParameterError("empty presentation text")
    try:
        ngens = int(lines[0].strip())
    except ValueError as exc:
        raise ParameterError(f"first line must be the generator count: {lines[0]!r}") from exc
    if not 1 <= ngens <= 26:
        raise ParameterError("generator count must be in 1..26 for the text format")
    relators = []
    for line in lines[1:]:
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if any(ch.isspace() for ch in s):
            raise MalformedWordError(f"whitespace inside relator: {line!r}")
        word = []
        for ch in s:
            if "a" <= ch <= "z":
                idx = ord(ch) - ord("a") + 1
            elif "A" <= ch <= "Z":
                idx = -(ord(ch) - ord("A") + 1)
            else:
                raise MalformedWordError(f"bad relator character {ch!r}")
            if abs(idx) > ngens:
                raise MalformedWordError(f"letter {ch!r} exceeds {ngens} generators")
            word.append(idx)
        relators.append(tuple(word))
    return Presentation(ngens, tuple(relators))


def format_presentation(pres: Presentation) -> str:
    """Canonical text form; parse(format(p)) == p bit-exactly."""
    if pres.ngens > 26:
        raise ParameterError("text format supports at most 26 generators")
    out = [str(pres.ngens)]
    for rel in pres.relators:
        chars = []
        for x in rel:
            chars.append(_LOWER[x - 1] if x > 0 else _LOWER[-x - 1].upper())
        out.append("".join(chars))
    return "\n".join(out) + "\n"
