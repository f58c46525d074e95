"""Words in free groups.

A word is a tuple of nonzero ints: ``k`` stands for generator ``k - 1`` and
``-k`` for its inverse.  As strings, generators are ``a, b, c, ...`` and
inverses the matching capitals, so ``(1, 2, -1, -2)`` prints as ``"abAB"``.
"""

from __future__ import annotations

from math import gcd

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def parse(text, rank=None):
    text = text.replace(" ", "")
    if text in ("", "1"):
        return ()
    out = []
    for ch in text:
        k = LETTERS.find(ch.lower())
        if k < 0:
            raise ValueError(f"bad letter {ch!r} in word {text!r}")
        if rank is not None and k >= rank:
            raise ValueError(f"letter {ch!r} outside a rank-{rank} alphabet")
        out.append(k + 1 if ch.islower() else -(k + 1))
    return free_reduce(out)


def fmt(word):
    if not word:
        return "1"
    return "".join(LETTERS[abs(x) - 1] if x > 0 else LETTERS[abs(x) - 1].upper() for x in word)


def inverse(word):
    return tuple(-x for x in reversed(word))


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def mul(*words):
    out = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(word, n):
    if n < 0:
        word, n = inverse(word), -n
    return mul(*([word] * n))


def cyclic_reduce(word):
    """Return ``(u, c)`` with ``word == u c u^-1`` and ``c`` cyclically reduced."""
    w = free_reduce(word)
    k = 0
    while 2 * k + 1 < len(w) and w[k] == -w[len(w) - 1 - k]:
        k += 1
    return w[:k], w[k : len(w) - k]


def rotations(word):
    return [word[i:] + word[:i] for i in range(len(word))] or [()]


def letter_key(x):
    return (abs(x), x < 0)


def word_key(word):
    return (len(word), tuple(letter_key(x) for x in word))


def canonical_cyclic(word, allow_inverse=True):
    """Least rotation of the cyclic reduction of ``word`` (and its inverse)."""
    _, c = cyclic_reduce(word)
    cands = rotations(c)
    if allow_inverse:
        cands += rotations(inverse(c))
    return min(cands, key=word_key)


def primitive_root(word):
    """For a cyclically reduced word ``w = u^k`` with ``k`` maximal, return ``(u, k)``."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d], n // d
    return word, 1


def is_proper_power(word):
    _, c = cyclic_reduce(word)
    return bool(c) and primitive_root(c)[1] > 1


def exponent_sums(word, rank):
    out = [0] * rank
    for x in word:
        out[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(out)


def substitute(word, images):
    """Apply the homomorphism sending generator ``k`` to ``images[k]``."""
    return mul(*(images[abs(x) - 1] if x > 0 else inverse(images[abs(x) - 1]) for x in word))


def reduced_words(rank, max_length, min_length=0):
    """All freely reduced words of the given length range, shortlex order."""
    letters = [x for k in range(1, rank + 1) for x in (k, -k)]
    level = [()]
    if min_length == 0:
        yield ()
    for n in range(1, max_length + 1):
        nxt = []
        for w in level:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        level = nxt
        if n >= min_length:
            yield from level


# -- slopes on a rank-2 group ----------------------------------------------


def christoffel(p, q):
    """Word with exponent sums ``(p, q)`` in ``(a, b)`` for a primitive slope.

    For ``p, q >= 0`` this is the lower Christoffel word; a negative ``q``
    (with ``p > 0``) uses ``B`` in place of ``b``.
    """
    if gcd(p, q) != 1:
        raise ValueError(f"slope {p}/{q} is not primitive")
    sb = 1 if q >= 0 else -1
    sa = 1 if p >= 0 else -1
    p, q = abs(p), abs(q)
    n = p + q
    out = []
    for k in range(1, n + 1):
        out.append(2 * sb if (k * q) // n > ((k - 1) * q) // n else 1 * sa)
    return tuple(out)


def normalize_slope(p, q):
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return p, q


def farey_slopes(bound):
    """Primitive slopes ``(p, q)`` up to sign with ``|p| + |q| <= bound``."""
    out = []
    for p in range(0, bound + 1):
        for q in range(-bound, bound + 1):
            if abs(p) + abs(q) > bound or gcd(p, q) != 1:
                continue
            if (p, q) == normalize_slope(p, q):
                out.append((p, q))
    return sorted(out, key=lambda s: (abs(s[0]) + abs(s[1]), s))
