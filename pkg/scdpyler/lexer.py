# lexer.py - SCDL tokenizer
#
# The lexer turns source text into a flat list of tokens. Whitespace and
# /* */ block comments are skipped. // line comments are kept as trivia: they
# are attached to the token that follows them so the parser can hand them to
# the declaration they precede. An unrecognized character produces E-LEX-001
# and scanning resumes at the next character.
#
#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import enum
import logging
import re
from dataclasses import dataclass, field
from typing import List, Tuple

from .diagnostic import Diagnostic, DiagnosticError
from .source_span import SourceSpan
from .utils import KEYWORDS

logger = logging.getLogger(__name__)


class TokenKind(enum.Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    PUNCTUATION = "punctuation"
    STRING = "string-literal"
    NUMBER = "number-literal"
    CARDINALITY = "cardinality-literal"
    EOF = "end-of-file"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Token(object):
    kind: TokenKind
    lexeme: str
    span: SourceSpan
    leading_comments: Tuple[str, ...] = field(default=(), compare=False)

    def is_keyword(self, word: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.lexeme == word

    def is_punct(self, symbol: str) -> bool:
        return self.kind is TokenKind.PUNCTUATION and self.lexeme == symbol

    @property
    def string_value(self) -> str:
        """The unescaped contents of a string literal."""
        if self.kind is not TokenKind.STRING:
            raise ValueError(f"string_value requested from a {self.kind} token.")
        return _ESCAPE.sub(r"\1", self.lexeme[1:-1])

    def describe(self) -> str:
        if self.kind is TokenKind.EOF:
            return "end of file"
        return f"'{self.lexeme}'"


_ESCAPE = re.compile(r"\\(.)")

_TOKEN_PATTERN = re.compile(r"""
    (?P<newline>\n)
  | (?P<space>[ \t\f\v\r]+)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*[\s\S]*?\*/)
  | (?P<open_comment>/\*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<open_string>"[^\n]*)
  | (?P<card>[0-9]+\.\.(?:[0-9]+|\*))
  | (?P<number>[0-9]+(?:\.[0-9]+)?)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct><->|<<|>>|--|->|[{}();:,.\[\]=+\-*/])
""", re.VERBOSE)


def scan(source: str, file: str) -> Tuple[List[Token], List[Diagnostic]]:
    """Tokenizes source and always returns the tokens found, ending with an EOF token.

    Lexical problems are returned alongside instead of raised so the parser
    can keep going and report syntax errors in the same run.
    """
    if not isinstance(source, str):
        raise TypeError(f"source must be a string: received {type(source)}.")
    if source.startswith("\ufeff"):
        source = source[1:]
    tokens: List[Token] = []
    diagnostics: List[Diagnostic] = []
    pending_comments: List[str] = []
    pos, line, line_start = 0, 1, 0
    length = len(source)

    def span_of(start: int, end: int) -> SourceSpan:
        return SourceSpan(file, line, start - line_start + 1, line, end - line_start + 1)

    while pos < length:
        match = _TOKEN_PATTERN.match(source, pos)
        if match is None:
            diagnostics.append(Diagnostic.from_code("E-LEX-001", f"unrecognized character {source[pos]!r}",
                                                    span_of(pos, pos + 1)))
            pos += 1
            continue
        group, text, end = match.lastgroup, match.group(), match.end()
        if group == "newline":
            line += 1
            line_start = end
        elif group == "space":
            pass
        elif group == "line_comment":
            pending_comments.append(text.rstrip())
        elif group == "block_comment":
            newlines = text.count("\n")
            if newlines:
                line += newlines
                line_start = pos + text.rindex("\n") + 1
        elif group == "open_comment":
            diagnostics.append(Diagnostic.from_code("E-LEX-002", "unterminated block comment",
                                                    span_of(pos, end)))
            end = length
        elif group == "open_string":
            diagnostics.append(Diagnostic.from_code("E-LEX-002", "unterminated string literal",
                                                    span_of(pos, pos + 1)))
        else:
            if group == "word":
                kind = TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENTIFIER
            else:
                kind = {"string": TokenKind.STRING, "card": TokenKind.CARDINALITY,
                        "number": TokenKind.NUMBER, "punct": TokenKind.PUNCTUATION}[group]
            tokens.append(Token(kind, text, span_of(pos, end), tuple(pending_comments)))
            pending_comments = []
        pos = end

    tokens.append(Token(TokenKind.EOF, "", SourceSpan.at(file, line, length - line_start + 1),
                        tuple(pending_comments)))
    logger.debug("scanned %s: %d tokens, %d lexical diagnostics", file, len(tokens) - 1, len(diagnostics))
    return tokens, diagnostics


def tokenize(source: str, file: str = "<memory>") -> List[Token]:
    """Splits SCDL source into tokens, without the end-of-file sentinel.

    :param source: SCDL text
    :param file: name used in the spans of the tokens
    :raises DiagnosticError: with E-LEX-001 / E-LEX-002 diagnostics when the text has lexical errors
    """
    tokens, diagnostics = scan(source, file)
    if diagnostics:
        raise DiagnosticError(diagnostics)
    return tokens[:-1]
