"""Words in the twist generators: signed index sequences with free reduction."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence, Tuple, TypeVar

# A word is a tuple of nonzero ints.  Letter +k stands for the generator b_k,
# letter -k for its inverse.  Indices run 1..2g+1 for genus g.
Word = Tuple[int, ...]

T = TypeVar("T")


def free_reduce(letters: Iterable[int]) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def compose(*parts: Iterable[int]) -> Word:
    """Concatenate words and freely reduce."""
    letters: list[int] = []
    for p in parts:
        letters.extend(p)
    return free_reduce(letters)


def invert(word: Iterable[int]) -> Word:
    return tuple(-x for x in reversed(tuple(word)))


def power(word: Iterable[int], n: int) -> Word:
    w = tuple(word)
    if n < 0:
        w, n = invert(w), -n
    return free_reduce(w * n)


def conjugate(word: Iterable[int], by: Iterable[int]) -> Word:
    """by * word * by^-1."""
    by = tuple(by)
    return compose(by, word, invert(by))


def commutator(u: Iterable[int], v: Iterable[int]) -> Word:
    u, v = tuple(u), tuple(v)
    return compose(u, v, invert(u), invert(v))


def cyclic_reduce(word: Iterable[int]) -> Word:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def max_index(word: Iterable[int]) -> int:
    w = tuple(word)
    return max((abs(x) for x in w), default=0)


def evaluate(
    word: Iterable[int],
    images: Sequence[T],
    identity: T,
    mul: Callable[[T, T], T],
    inv: Callable[[T], T],
) -> T:
    """Image of a word under the homomorphism sending b_k to images[k-1].

    Letters act left to right: the word (1, 2) evaluates to
    mul(images[0], images[1]).
    """
    acc = identity
    for x in word:
        g = images[abs(x) - 1]
        if x < 0:
            g = inv(g)
        acc = mul(acc, g)
    return acc


def parse_word(text: str, num_generators: int) -> Word:
    """Parse "b1 b2^-1 b3" style input.  Exponents are arbitrary integers."""
    letters: list[int] = []
    for tok in text.split():
        body = tok
        exp = 1
        if "^" in tok:
            body, _, etext = tok.partition("^")
            try:
                exp = int(etext)
            except ValueError:
                raise ValueError(f"bad exponent in token {tok!r}")
        if not body.startswith("b"):
            raise ValueError(f"bad generator token {tok!r}, expected b<k>")
        try:
            k = int(body[1:])
        except ValueError:
            raise ValueError(f"bad generator token {tok!r}, expected b<k>")
        if not 1 <= k <= num_generators:
            raise ValueError(
                f"generator index {k} out of range 1..{num_generators}"
            )
        letters.extend([k if exp > 0 else -k] * abs(exp))
    return free_reduce(letters)


def format_word(word: Iterable[int]) -> str:
    """Inverse of parse_word, with adjacent equal letters grouped as powers."""
    w = tuple(word)
    if not w:
        return ""
    toks: list[str] = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        run = j - i
        k = abs(w[i])
        exp = run if w[i] > 0 else -run
        toks.append(f"b{k}" if exp == 1 else f"b{k}^{exp}")
        i = j
    return " ".join(toks)
