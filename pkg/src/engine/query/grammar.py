"""Pattern query language.

    match (a, b, c, "Room101") {type = "meeting", productive = true}
    match (d:Doctor, g:Drug, p) (p, r) where conf > 0.8 at time 2024-07-01
    match (x, y) during [2024-03-15, 2024-03-16]
    match (x, ...) where conf > 0.8

Bare names are variables, quoted strings are constant entity or edge ids,
``name:Role`` constrains the participant's role. A trailing ``...`` lets the
template match edges with more participants than it names.
"""

import json
from typing import List, Optional

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import LarkError, UnexpectedInput, VisitError

from ...models.errors import ATCHError, QuerySyntaxError
from ...models.predicates import Comparison
from ...models.query import AttributePredicate, EdgeTemplate, PatternQuery, TemplateTerm, TermKind
from ...models.temporal import TimeInterval, parse_timestamp

_OPEN_ARITY = object()

GRAMMAR = r"""
    start: "match" template+ clause*

    template: "(" term ("," term)* open_arity? ")" predicates?
    open_arity: "," "..."
    predicates: "{" attrpred ("," attrpred)* "}"

    term: NAME               -> variable
        | NAME ":" NAME      -> role_variable
        | ESCAPED_STRING     -> constant

    attrpred: NAME op literal
    op: EQ | NE | LT | LE | GT | GE

    ?literal: ESCAPED_STRING -> string
            | SIGNED_NUMBER  -> number
            | "true"         -> true
            | "false"        -> false
            | TIMESTAMP      -> timestamp

    clause: "where" "conf" GT SIGNED_NUMBER          -> conf_clause
          | "at" "time" TIMESTAMP                    -> at_clause
          | "during" "[" TIMESTAMP "," bound "]"     -> during_clause

    bound: TIMESTAMP | INFINITY

    EQ: "==" | "="
    NE: "!=" | "≠"
    LE: "<=" | "≤"
    GE: ">=" | "≥"
    LT: "<"
    GT: ">"
    INFINITY: "infinity"

    TIMESTAMP.2: /\d{4}-\d{2}-\d{2}(T\d{2}:\d{2}(:\d{2}(\.\d+)?)?)?(Z|[+-]\d{2}:?\d{2})?/

    NAME: /[A-Za-z_][A-Za-z0-9_\-]*/

    %import common.ESCAPED_STRING
    %import common.SIGNED_NUMBER
    %import common.WS
    %ignore WS
"""


def _unquote(token: Token) -> str:
    # ESCAPED_STRING keeps its quotes and JSON-style escapes.
    return json.loads(str(token))


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


@v_args(inline=True)
class _PatternBuilder(Transformer):
    """Turns the parse tree into a PatternQuery."""

    def variable(self, name):
        return TemplateTerm(name=str(name))

    def role_variable(self, name, role):
        return TemplateTerm(name=str(name), role=str(role))

    def constant(self, text):
        return TemplateTerm(name=_unquote(text), kind=TermKind.CONSTANT)

    def op(self, token):
        return Comparison.parse(str(token))

    def string(self, token):
        return _unquote(token)

    def number(self, token):
        return _number(str(token))

    def true(self):
        return True

    def false(self):
        return False

    def timestamp(self, token):
        return parse_timestamp(str(token))

    def attrpred(self, key, op, value):
        return AttributePredicate(key=str(key), op=op, value=value)

    def predicates(self, *preds):
        return list(preds)

    def open_arity(self):
        return _OPEN_ARITY

    def template(self, *items):
        terms = [item for item in items if isinstance(item, TemplateTerm)]
        predicates = next((item for item in items if isinstance(item, list)), [])
        open_arity = any(item is _OPEN_ARITY for item in items)
        return EdgeTemplate(terms=terms, predicates=predicates, open_arity=open_arity)

    def conf_clause(self, _gt, number):
        return ("min_confidence", float(number))

    def at_clause(self, token):
        return ("at_time", parse_timestamp(str(token)))

    def bound(self, token):
        return str(token)

    def during_clause(self, start, end):
        return ("window", TimeInterval.of(str(start), end))

    def start(self, *items):
        templates: List[EdgeTemplate] = [item for item in items if isinstance(item, EdgeTemplate)]
        clauses = dict(item for item in items if isinstance(item, tuple))
        return PatternQuery(templates=templates, **clauses)


_parser: Optional[Lark] = None


def _get_parser() -> Lark:
    global _parser
    if _parser is None:
        _parser = Lark(GRAMMAR, parser="lalr")
    return _parser


def parse_query(text: str) -> PatternQuery:
    """Parse query text, raising QuerySyntaxError with the line and column of the problem."""
    try:
        tree = _get_parser().parse(text)
        return _PatternBuilder().transform(tree)
    except UnexpectedInput as e:
        raise QuerySyntaxError(_describe(e), line=_position(e.line), column=_position(e.column)) from None
    except VisitError as e:
        if isinstance(e.orig_exc, ATCHError):
            raise e.orig_exc from None
        raise QuerySyntaxError(str(e.orig_exc), line=1, column=1) from None
    except LarkError as e:
        raise QuerySyntaxError(str(e), line=1, column=1) from None


def _position(value: Optional[int]) -> int:
    return value if isinstance(value, int) and value > 0 else 1


def _describe(error: UnexpectedInput) -> str:
    token = getattr(error, "token", None)
    if token is not None:
        if token.type == "$END":
            return "unexpected end of query"
        return f"unexpected {token!r}"
    char = getattr(error, "char", None)
    if char is not None:
        return f"unexpected character {char!r}"
    return "invalid query"
