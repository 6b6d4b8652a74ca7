"""Minimal s-expression reader/writer shared by the system and sentence formats.

Atoms are integers or symbols; lists are Python lists. Positions of syntax
errors are reported as character offsets into the input.
"""

from __future__ import annotations

from .errors import SentenceSyntaxError

_DELIMS = set("() \t\r\n;")


def tokenize(text: str):
    """Yield (token, offset) pairs; comments run from ';' to end of line."""
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, i
            i += 1
        else:
            j = i
            while j < n and text[j] not in _DELIMS:
                j += 1
            yield text[i:j], i
            i = j


def _atom(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def parse(text: str):
    """Parse one s-expression; trailing garbage is an error."""
    stack = []
    result = None
    last = -1
    for tok, pos in tokenize(text):
        if result is not None:
            raise SentenceSyntaxError("trailing content after expression", pos)
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                raise SentenceSyntaxError("unbalanced ')'", pos)
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                result = done
        else:
            if not stack:
                raise SentenceSyntaxError("atom outside any list", pos)
            stack[-1].append(_atom(tok))
        last = pos
    if stack:
        raise SentenceSyntaxError("unexpected end of input inside list", last)
    if result is None:
        raise SentenceSyntaxError("empty input", 0)
    return result


def dump(node) -> str:
    if isinstance(node, list):
        return "(" + " ".join(dump(c) for c in node) + ")"
    return str(node)
