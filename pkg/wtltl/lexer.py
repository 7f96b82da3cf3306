# Tokenizer for wTLTL formula text, built with PLY (Python Lex-Yacc).

from dataclasses import dataclass
from typing import List

import ply.lex as lex

from errors import FormulaSyntaxError

RESERVED = {
    "F": "EVENTUALLY",
    "G": "ALWAYS",
    "U": "UNTIL",
    "T": "THEN",
    "true": "TRUE",
}

tokens = (
    "NAME",
    "NUMBER",
    "LPAREN",
    "RPAREN",
    "LBRACE",
    "RBRACE",
    "COMMA",
    "AND",
    "OR",
    "NOT",
    "IMPLIES",
    "LT",
    "GT",
) + tuple(sorted(set(RESERVED.values())))

# Spellings used in "expected one of" messages
DISPLAY = {
    "NAME": "name",
    "NUMBER": "number",
    "LPAREN": "'('",
    "RPAREN": "')'",
    "LBRACE": "'{'",
    "RBRACE": "'}'",
    "COMMA": "','",
    "AND": "'&&'",
    "OR": "'||'",
    "NOT": "'!'",
    "IMPLIES": "'->'",
    "LT": "'<'",
    "GT": "'>'",
    "EVENTUALLY": "'F'",
    "ALWAYS": "'G'",
    "UNTIL": "'U'",
    "THEN": "'T'",
    "TRUE": "'true'",
    "EOF": "end of input",
}

t_LPAREN = r"\("
t_RPAREN = r"\)"
t_LBRACE = r"\{"
t_RBRACE = r"\}"
t_COMMA = r","
t_AND = r"&&"
t_OR = r"\|\|"
t_NOT = r"!"
t_IMPLIES = r"->"
t_LT = r"<"
t_GT = r">"

t_ignore = " \t\r"


def t_NUMBER(t):
    r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?"
    t.value = float(t.value)
    return t


def t_NAME(t):
    r"[A-Za-z_][A-Za-z0-9_]*"
    t.type = RESERVED.get(t.value, "NAME")
    return t


def t_newline(t):
    r"\n+"
    t.lexer.lineno += len(t.value)
    t.lexer.line_start = t.lexpos + len(t.value)


def t_error(t):
    column = t.lexpos - t.lexer.line_start + 1
    raise FormulaSyntaxError(f"illegal character {t.value[0]!r}", t.lexer.lineno, column)


_lexer = lex.lex(optimize=False, errorlog=lex.NullLogger())


@dataclass(frozen=True)
class Token:
    type: str
    value: object
    line: int
    column: int

    @property
    def display(self) -> str:
        if self.type in ("NAME", "NUMBER"):
            return repr(self.value)
        return DISPLAY.get(self.type, self.type)


def tokenize(text: str) -> List[Token]:
    """
    Split formula text into tokens with 1-based line/column positions.

    The returned list always ends with an EOF token.

    Raises:
        FormulaSyntaxError: On a character no token accepts
    """
    lexer = _lexer.clone()
    lexer.lineno = 1
    lexer.line_start = 0
    lexer.input(text)
    result = []
    for tok in iter(lexer.token, None):
        result.append(Token(tok.type, tok.value, tok.lineno, tok.lexpos - lexer.line_start + 1))
    result.append(Token("EOF", None, lexer.lineno, len(text) - lexer.line_start + 1))
    return result
