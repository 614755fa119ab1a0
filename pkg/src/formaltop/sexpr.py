"""Minimal s-expression reader/printer with source positions.

Atoms are returned as :class:`Atom` (a ``str`` subclass carrying line and
column) or ``int`` for unsigned decimal literals; lists as :class:`SList`.
``;`` starts a comment running to end of line.
"""

from __future__ import annotations

from .errors import ParseError


class Atom(str):
    line: int = 0
    col: int = 0


class SList(list):
    line: int = 0
    col: int = 0


_DELIMS = set("() \t\r\n;")


def _tokenize(text):
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
        elif ch in " \t\r":
            i, col = i + 1, col + 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            i, col = i + 1, col + 1
        else:
            start = i
            while i < n and text[i] not in _DELIMS:
                i += 1
            yield text[start:i], line, col
            col += i - start


def parse_all(text: str) -> list:
    stack = [SList()]
    for tok, line, col in _tokenize(text):
        if tok == "(":
            lst = SList()
            lst.line, lst.col = line, col
            stack.append(lst)
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, col)
            done = stack.pop()
            stack[-1].append(done)
        elif tok.isdigit():
            stack[-1].append(int(tok))
        else:
            atom = Atom(tok)
            atom.line, atom.col = line, col
            stack[-1].append(atom)
    if len(stack) != 1:
        opened = stack[-1]
        raise ParseError("unclosed '('", opened.line, opened.col)
    return list(stack[0])


def parse_one(text: str):
    forms = parse_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one form, found {len(forms)}", 1, 1)
    return forms[0]


def dumps(form) -> str:
    if isinstance(form, list):
        return "(" + " ".join(dumps(f) for f in form) + ")"
    return str(form)


def where(form):
    return getattr(form, "line", None), getattr(form, "col", None)
