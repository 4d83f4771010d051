"""Declaration-level parser for Go source files.

The tokenizer understands full Go lexing (strings, runes, comments, automatic
semicolon insertion) so that balanced-brace skipping of function bodies is
string- and comment-aware for free. The parser itself only covers what an API
surface needs: the package clause, imports, and top-level const/var/type/func
declarations, including generic type parameters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple

from .gotypes import (
    Array,
    Basic,
    Chan,
    FieldDef,
    Func,
    Interface,
    Map,
    MethodSig,
    Named,
    Pointer,
    Slice,
    Struct,
    TypeExpr,
    TypeParamDef,
    TypeParamRef,
    UnionTerm,
    render_type_expr,
)


class GoSyntaxError(ValueError):
    """The file cannot be parsed at declaration level."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class Token(NamedTuple):
    kind: str
    text: str
    line: int


GO_KEYWORDS = frozenset(
    "break case chan const continue default defer else fallthrough for func go goto "
    "if import interface map package range return select struct switch type var".split()
)

# Predeclared identifiers that resolve to basic types rather than package names.
PREDECLARED_TYPES = frozenset(
    "bool byte complex64 complex128 error float32 float64 int int8 int16 int32 int64 "
    "rune string uint uint8 uint16 uint32 uint64 uintptr any comparable".split()
)

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r]+)
    | (?P<newline>\n)
    | (?P<comment_line>//[^\n]*)
    | (?P<comment_block>/\*(?s:.*?)\*/)
    | (?P<raw_string>`[^`]*`)
    | (?P<string>"(?:[^"\\\n]|\\.)*")
    | (?P<rune>'(?:[^'\\\n]|\\.)*')
    | (?P<float>(?:\d[\d_]*\.[\d_]*(?:[eE][+-]?\d[\d_]*)?
        |\.\d[\d_]*(?:[eE][+-]?\d[\d_]*)?
        |\d[\d_]*[eE][+-]?\d[\d_]*
        |0[xX][\da-fA-F_]*(?:\.[\da-fA-F_]*)?[pP][+-]?\d[\d_]*)i?)
    | (?P<int>(?:0[xX][\da-fA-F_]+|0[bB][01_]+|0[oO][0-7_]+|\d[\d_]*)i?)
    | (?P<ident>[^\W\d]\w*)
    | (?P<op><<=|>>=|&\^=|\.\.\.|&&|\|\||<-|\+\+|--|==|!=|<=|>=|:=|\+=|-=|\*=|/=|%=|&=|\|=|\^=|<<|>>|&\^|[+\-*/%&|^<>=!:;,.()\[\]{}~])
    """,
    re.VERBOSE,
)

_SEMI_AFTER_OPS = frozenset({")", "]", "}", "++", "--"})
_SEMI_AFTER_KEYWORDS = frozenset({"break", "continue", "fallthrough", "return"})
_LITERAL_KINDS = frozenset({"int", "float", "string", "raw_string", "rune"})


def _inserts_semi(tok: Token) -> bool:
    if tok.kind == "ident" or tok.kind in _LITERAL_KINDS:
        return True
    if tok.kind == "keyword":
        return tok.text in _SEMI_AFTER_KEYWORDS
    return tok.kind == "op" and tok.text in _SEMI_AFTER_OPS


def tokenize(text: str) -> list[Token]:
    """Lex Go source into tokens, applying the semicolon-insertion rule."""
    if text.startswith("﻿"):
        text = text[1:]
    tokens: list[Token] = []
    pos = 0
    line = 1
    size = len(text)
    while pos < size:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise GoSyntaxError(f"unexpected character {text[pos]!r}", line)
        kind = m.lastgroup or ""
        value = m.group()
        pos = m.end()
        if kind == "ws" or kind == "comment_line":
            continue
        if kind == "newline" or (kind == "comment_block" and "\n" in value):
            if tokens and _inserts_semi(tokens[-1]):
                tokens.append(Token("op", ";", line))
            line += value.count("\n")
            continue
        if kind == "comment_block":
            continue
        if kind == "ident" and value in GO_KEYWORDS:
            kind = "keyword"
        tokens.append(Token(kind, value, line))
        if "\n" in value:  # raw strings may span lines
            line += value.count("\n")
    if tokens and _inserts_semi(tokens[-1]):
        tokens.append(Token("op", ";", line))
    tokens.append(Token("eof", "", line))
    return tokens


@dataclass(frozen=True)
class ImportSpec:
    path: str
    alias: str | None = None
    dot: bool = False
    blank: bool = False


@dataclass(frozen=True)
class ConstSpec:
    name: str
    type: TypeExpr
    value: str | None


@dataclass(frozen=True)
class VarSpec:
    name: str
    type: TypeExpr


@dataclass(frozen=True)
class TypeSpec:
    name: str
    type: TypeExpr
    type_params: tuple[TypeParamDef, ...] = ()
    alias: bool = False


@dataclass(frozen=True)
class FuncDecl:
    name: str
    sig: Func
    receiver: str | None = None


@dataclass
class GoFile:
    package_name: str
    imports: list[ImportSpec] = field(default_factory=list)
    consts: list[ConstSpec] = field(default_factory=list)
    vars: list[VarSpec] = field(default_factory=list)
    types: list[TypeSpec] = field(default_factory=list)
    funcs: list[FuncDecl] = field(default_factory=list)


_TYPE_START_KEYWORDS = frozenset({"chan", "map", "func", "struct", "interface"})
_TYPE_START_OPS = frozenset({"(", "[", "*", "<-"})


def _starts_type(tok: Token) -> bool:
    if tok.kind == "ident":
        return True
    if tok.kind == "keyword":
        return tok.text in _TYPE_START_KEYWORDS
    return tok.kind == "op" and tok.text in _TYPE_START_OPS


def _make_interface(methods: list[MethodSig], embeds: list[UnionTerm]) -> Interface:
    # Canonical form: method and embed order is not significant in Go.
    methods.sort(key=lambda m: m.name)
    embeds.sort(key=lambda e: (render_type_expr(e.type), e.tilde))
    return Interface(methods=tuple(methods), embeds=tuple(embeds))


class _Parser:
    def __init__(self, tokens: list[Token], package_path: str, import_map: dict[str, str] | None = None):
        self.toks = tokens
        self.i = 0
        self.package_path = package_path
        self.import_map: dict[str, str] = import_map if import_map is not None else {}

    # -- cursor helpers ----------------------------------------------------

    def cur(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at_op(self, text: str) -> bool:
        tok = self.cur()
        return tok.kind == "op" and tok.text == text

    def at_keyword(self, text: str) -> bool:
        tok = self.cur()
        return tok.kind == "keyword" and tok.text == text

    def expect_op(self, text: str) -> Token:
        tok = self.cur()
        if not (tok.kind == "op" and tok.text == text):
            raise GoSyntaxError(f"expected {text!r}, found {tok.text!r}", tok.line)
        return self.advance()

    def expect_ident(self) -> Token:
        tok = self.cur()
        if tok.kind != "ident":
            raise GoSyntaxError(f"expected identifier, found {tok.text!r}", tok.line)
        return self.advance()

    def skip_semis(self) -> None:
        while self.at_op(";"):
            self.advance()

    def _sub(self, tokens: list[Token]) -> "_Parser":
        sub = _Parser(tokens + [Token("eof", "", tokens[-1].line if tokens else 0)], self.package_path, self.import_map)
        return sub

    def _parse_type_full(self, tokens: list[Token], tparams: frozenset[str]) -> TypeExpr:
        if not tokens:
            raise GoSyntaxError("expected type")
        sub = self._sub(tokens)
        expr = sub._parse_type(tparams)
        if sub.cur().kind != "eof":
            raise GoSyntaxError(f"trailing tokens after type: {sub.cur().text!r}", sub.cur().line)
        return expr

    # -- file --------------------------------------------------------------

    def parse_file(self) -> GoFile:
        self.skip_semis()
        tok = self.cur()
        if not self.at_keyword("package"):
            raise GoSyntaxError("missing package clause", tok.line)
        self.advance()
        name = self.expect_ident().text
        gofile = GoFile(package_name=name)
        self.skip_semis()
        while True:
            self.skip_semis()
            tok = self.cur()
            if tok.kind == "eof":
                break
            if self.at_keyword("import"):
                self._parse_import_decl(gofile)
            elif self.at_keyword("const"):
                self._parse_gen_decl("const", gofile)
            elif self.at_keyword("var"):
                self._parse_gen_decl("var", gofile)
            elif self.at_keyword("type"):
                self._parse_gen_decl("type", gofile)
            elif self.at_keyword("func"):
                self._parse_func_decl(gofile)
            else:
                raise GoSyntaxError(f"unexpected token {tok.text!r} at top level", tok.line)
        return gofile

    # -- imports -----------------------------------------------------------

    def _parse_one_import(self, gofile: GoFile) -> None:
        alias: str | None = None
        dot = blank = False
        tok = self.cur()
        if tok.kind == "ident":
            if tok.text == "_":
                blank = True
            else:
                alias = tok.text
            self.advance()
        elif self.at_op("."):
            dot = True
            self.advance()
        tok = self.cur()
        if tok.kind not in ("string", "raw_string"):
            raise GoSyntaxError(f"expected import path string, found {tok.text!r}", tok.line)
        self.advance()
        path = tok.text[1:-1]
        gofile.imports.append(ImportSpec(path=path, alias=alias, dot=dot, blank=blank))
        if not dot and not blank:
            local = alias if alias else path.rsplit("/", 1)[-1]
            self.import_map[local] = path

    def _parse_import_decl(self, gofile: GoFile) -> None:
        self.advance()
        if self.at_op("("):
            self.advance()
            while True:
                self.skip_semis()
                if self.at_op(")"):
                    self.advance()
                    break
                if self.cur().kind == "eof":
                    raise GoSyntaxError("unterminated import block", self.cur().line)
                self._parse_one_import(gofile)
        else:
            self._parse_one_import(gofile)

    # -- const/var/type ----------------------------------------------------

    def _parse_gen_decl(self, kw: str, gofile: GoFile) -> None:
        self.advance()
        if self.at_op("("):
            self.advance()
            prev: tuple[TypeExpr | None, list[str]] | None = None
            while True:
                self.skip_semis()
                if self.at_op(")"):
                    self.advance()
                    break
                if self.cur().kind == "eof":
                    raise GoSyntaxError(f"unterminated {kw} block", self.cur().line)
                prev = self._parse_spec(kw, gofile, prev, in_block=True)
        else:
            self._parse_spec(kw, gofile, None, in_block=False)

    def _parse_spec(
        self,
        kw: str,
        gofile: GoFile,
        prev: tuple[TypeExpr | None, list[str]] | None,
        in_block: bool,
    ) -> tuple[TypeExpr | None, list[str]] | None:
        if kw == "type":
            self._parse_type_spec(gofile)
            return None
        names = [self.expect_ident().text]
        while self.at_op(","):
            self.advance()
            names.append(self.expect_ident().text)
        declared: TypeExpr | None = None
        if not self.at_op("=") and not self.at_op(";") and not self.at_op(")") and self.cur().kind != "eof":
            declared = self._parse_type(frozenset())
        values: list[list[Token]] = []
        if self.at_op("="):
            self.advance()
            values = self._collect_expr_list(in_block)
        if kw == "const" and declared is None and not values and prev is not None:
            declared, spelled = prev
            spelled_values = list(spelled)
        else:
            spelled_values = [_spell(ts) for ts in values]

        for idx, name in enumerate(names):
            value_tokens = values[idx] if idx < len(values) else None
            spelled = spelled_values[idx] if idx < len(spelled_values) else None
            if kw == "const":
                ctype = declared if declared is not None else _infer_const_type(value_tokens)
                gofile.consts.append(ConstSpec(name=name, type=ctype, value=spelled))
            else:
                vtype = declared if declared is not None else self._infer_var_type(value_tokens)
                gofile.vars.append(VarSpec(name=name, type=vtype))
        return (declared, spelled_values) if kw == "const" else None

    def _collect_expr_list(self, in_block: bool) -> list[list[Token]]:
        """Capture an expression list up to the end of the spec, split at
        top-level commas. Expressions are kept as spelled tokens only."""
        items: list[list[Token]] = [[]]
        depth = 0
        while True:
            tok = self.cur()
            if tok.kind == "eof":
                break
            if depth == 0 and tok.kind == "op":
                if tok.text == ";":
                    break
                if tok.text == ")" and in_block:
                    break
                if tok.text == ",":
                    self.advance()
                    items.append([])
                    continue
            if tok.kind == "op":
                if tok.text in "([{":
                    depth += 1
                elif tok.text in ")]}":
                    depth -= 1
            items[-1].append(self.advance())
        return [it for it in items if it]

    def _infer_var_type(self, value: list[Token] | None) -> TypeExpr:
        """Light, literal-level type inference for untyped var declarations."""
        if not value:
            return Basic("untyped")
        first = value[0]
        if len(value) == 1:
            return _literal_type(first) or Basic("untyped")
        try:
            if first.kind == "op" and first.text == "&":
                inner = self._infer_var_type(value[1:])
                return inner if isinstance(inner, Basic) else Pointer(inner)
            if first.kind == "keyword" and first.text == "func":
                sub = self._sub(value[1:])
                params, variadic, results = sub._parse_signature_tail(frozenset())
                return Func(params=params, results=results, variadic=variadic)
            if first.kind == "ident":
                # Composite literal T{...} or pkg.T{...}.
                if value[1].kind == "op" and value[1].text == "{":
                    return self._resolve_name(first.text, frozenset())
                if (
                    len(value) >= 4
                    and value[1].kind == "op"
                    and value[1].text == "."
                    and value[2].kind == "ident"
                    and value[3].kind == "op"
                    and value[3].text == "{"
                ):
                    return Named(self.import_map.get(first.text, first.text), value[2].text)
            if (first.kind == "op" and first.text == "[") or (
                first.kind == "keyword" and first.text in ("map", "chan")
            ):
                sub = self._sub(value)
                expr = sub._parse_type(frozenset())
                if sub.at_op("{"):
                    return expr
        except GoSyntaxError:
            pass
        return Basic("untyped")

    def _parse_type_spec(self, gofile: GoFile) -> None:
        name = self.expect_ident().text
        type_params: tuple[TypeParamDef, ...] = ()
        if self.at_op("[") and self._looks_like_type_params():
            type_params = self._parse_type_param_group(frozenset())
        alias = False
        if self.at_op("="):
            alias = True
            self.advance()
        tparams = frozenset(tp.name for tp in type_params)
        expr = self._parse_type(tparams)
        gofile.types.append(TypeSpec(name=name, type=expr, type_params=type_params, alias=alias))

    def _looks_like_type_params(self) -> bool:
        # Disambiguates `type A[T any] ...` from `type A [N]Elem`: a type
        # parameter list starts with an identifier followed by the beginning
        # of a constraint, never by "]" or an arithmetic continuation.
        nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else Token("eof", "", 0)
        after = self.toks[self.i + 2] if self.i + 2 < len(self.toks) else Token("eof", "", 0)
        if nxt.kind != "ident":
            return False
        if after.kind == "ident":
            return True
        if after.kind == "keyword" and after.text in _TYPE_START_KEYWORDS:
            return True
        return after.kind == "op" and after.text in (",", "~")

    # -- functions ----------------------------------------------------------

    def _parse_func_decl(self, gofile: GoFile) -> None:
        self.advance()
        receiver: str | None = None
        receiver_tparams: list[str] = []
        if self.at_op("("):
            receiver, receiver_tparams = self._parse_receiver()
        name = self.expect_ident().text
        type_params: tuple[TypeParamDef, ...] = ()
        if self.at_op("["):
            type_params = self._parse_type_param_group(frozenset(receiver_tparams))
        tparams = frozenset(receiver_tparams) | {tp.name for tp in type_params}
        params, variadic, results = self._parse_signature_tail(tparams)
        sig = Func(params=params, results=results, variadic=variadic, type_params=type_params)
        if self.at_op("{"):
            self._skip_balanced_braces()
        gofile.funcs.append(FuncDecl(name=name, sig=sig, receiver=receiver))

    def _parse_receiver(self) -> tuple[str, list[str]]:
        items = self._collect_group("(", ")")
        if len(items) != 1 or not items[0]:
            raise GoSyntaxError("malformed receiver", self.cur().line)
        ts = items[0]
        idx = 0
        if ts[0].kind == "ident" and len(ts) > 1 and not (ts[1].kind == "op" and ts[1].text in (".", "[")):
            idx = 1  # receiver variable name
        if idx < len(ts) and ts[idx].kind == "op" and ts[idx].text == "*":
            idx += 1
        if idx >= len(ts) or ts[idx].kind != "ident":
            raise GoSyntaxError("malformed receiver type", ts[0].line)
        base = ts[idx].text
        tparams: list[str] = []
        if idx + 1 < len(ts) and ts[idx + 1].kind == "op" and ts[idx + 1].text == "[":
            tparams = [t.text for t in ts[idx + 2 : -1] if t.kind == "ident"]
        return base, tparams

    def _skip_balanced_braces(self) -> None:
        start = self.expect_op("{")
        depth = 1
        while depth > 0:
            tok = self.advance()
            if tok.kind == "eof":
                raise GoSyntaxError("unterminated function body", start.line)
            if tok.kind == "op":
                if tok.text == "{":
                    depth += 1
                elif tok.text == "}":
                    depth -= 1

    # -- signatures and parameter lists --------------------------------------

    def _parse_signature_tail(self, tparams: frozenset[str]) -> tuple[tuple[TypeExpr, ...], bool, tuple[TypeExpr, ...]]:
        items = self._collect_group("(", ")")
        params, variadic = self._resolve_param_items(items, tparams)
        results: tuple[TypeExpr, ...] = ()
        tok = self.cur()
        if self.at_op("("):
            result_items = self._collect_group("(", ")")
            result_types, _ = self._resolve_param_items(result_items, tparams)
            results = result_types
        elif _starts_type(tok) and not self.at_op("{"):
            results = (self._parse_type(tparams),)
        return params, variadic, results

    def _collect_group(self, open_op: str, close_op: str) -> list[list[Token]]:
        """Consume a bracketed group, returning token runs split at top-level
        commas. Stray semicolons at top level are dropped."""
        self.expect_op(open_op)
        items: list[list[Token]] = [[]]
        depth = 0
        while True:
            tok = self.cur()
            if tok.kind == "eof":
                raise GoSyntaxError(f"unterminated {open_op}...{close_op} group", tok.line)
            if depth == 0 and tok.kind == "op":
                if tok.text == close_op:
                    self.advance()
                    break
                if tok.text == ",":
                    self.advance()
                    items.append([])
                    continue
                if tok.text == ";":
                    self.advance()
                    continue
            if tok.kind == "op":
                if tok.text in "([{":
                    depth += 1
                elif tok.text in ")]}":
                    depth -= 1
            items[-1].append(self.advance())
        return [it for it in items if it]

    def _resolve_param_items(
        self, items: list[list[Token]], tparams: frozenset[str]
    ) -> tuple[tuple[TypeExpr, ...], bool]:
        """Resolve the named/unnamed parameter ambiguity for one group.

        Within a group either every parameter is named or none is; bare
        identifiers take the type of the next declaration that carries one.
        """
        parsed: list[dict] = []
        for ts in items:
            parsed.append(self._classify_param_item(ts, tparams))
        named_mode = any(p["form"] == "named" for p in parsed)

        types: list[TypeExpr | None] = []
        variadic = False
        for p in parsed:
            if p["form"] == "named":
                types.append(p["type"])
            elif p["form"] == "type":
                types.append(p["type"])
            else:  # bare identifier: a name in named mode, a type otherwise
                if named_mode:
                    types.append(None)
                else:
                    types.append(self._resolve_name(p["ident"], tparams))
            if p["variadic"]:
                variadic = True

        # Backward pass: grouped names (a, b int) share the next type.
        carry: TypeExpr | None = None
        for idx in range(len(types) - 1, -1, -1):
            if types[idx] is not None:
                carry = types[idx]
            elif carry is not None:
                types[idx] = carry
            else:
                types[idx] = self._resolve_name(parsed[idx]["ident"], tparams)
        return tuple(t for t in types if t is not None), variadic

    def _classify_param_item(self, ts: list[Token], tparams: frozenset[str]) -> dict:
        if ts[0].kind == "op" and ts[0].text == "...":
            return {"form": "type", "type": self._parse_type_full(ts[1:], tparams), "variadic": True}
        if ts[0].kind == "ident":
            if len(ts) == 1:
                return {"form": "bare", "ident": ts[0].text, "variadic": False}
            nxt = ts[1]
            if nxt.kind == "op" and nxt.text == ".":
                return {"form": "type", "type": self._parse_type_full(ts, tparams), "variadic": False}
            if nxt.kind == "op" and nxt.text == "...":
                return {"form": "named", "type": self._parse_type_full(ts[2:], tparams), "variadic": True}
            if nxt.kind == "op" and nxt.text == "[":
                end = _matching_bracket(ts, 1)
                if end == len(ts) - 1:
                    # Generic instantiation used as an unnamed parameter type.
                    return {"form": "type", "type": self._parse_type_full(ts, tparams), "variadic": False}
                return {"form": "named", "type": self._parse_type_full(ts[1:], tparams), "variadic": False}
            return {"form": "named", "type": self._parse_type_full(ts[1:], tparams), "variadic": False}
        return {"form": "type", "type": self._parse_type_full(ts, tparams), "variadic": False}

    # -- type parameters ------------------------------------------------------

    def _parse_type_param_group(self, outer: frozenset[str]) -> tuple[TypeParamDef, ...]:
        items = self._collect_group("[", "]")
        # First pass gathers the parameter names so constraints may refer to them.
        names: list[str] = []
        for ts in items:
            if ts and ts[0].kind == "ident":
                names.append(ts[0].text)
        scope = outer | frozenset(names)

        defs: list[tuple[str, TypeExpr | None]] = []
        for ts in items:
            if ts[0].kind != "ident":
                raise GoSyntaxError("malformed type parameter", ts[0].line)
            if len(ts) == 1:
                defs.append((ts[0].text, None))
            else:
                defs.append((ts[0].text, self._parse_constraint(ts[1:], scope)))

        carry: TypeExpr | None = None
        out: list[TypeParamDef] = []
        for name, constraint in reversed(defs):
            if constraint is not None:
                carry = constraint
            resolved = constraint if constraint is not None else carry
            if resolved is None:
                raise GoSyntaxError("type parameter without constraint")
            out.append(TypeParamDef(name=name, constraint=resolved))
        out.reverse()
        return tuple(out)

    def _parse_constraint(self, ts: list[Token], tparams: frozenset[str]) -> TypeExpr:
        terms = _split_top_level(ts, "|")
        union: list[UnionTerm] = []
        for term in terms:
            tilde = False
            if term and term[0].kind == "op" and term[0].text == "~":
                tilde = True
                term = term[1:]
            union.append(UnionTerm(type=self._parse_type_full(term, tparams), tilde=tilde))
        if len(union) == 1 and not union[0].tilde:
            return union[0].type
        return _make_interface([], union)

    # -- types ------------------------------------------------------------------

    def _resolve_name(self, name: str, tparams: frozenset[str]) -> TypeExpr:
        if name in tparams:
            return TypeParamRef(name)
        if name in PREDECLARED_TYPES:
            return Basic(name)
        return Named(self.package_path, name)

    def _parse_type(self, tparams: frozenset[str]) -> TypeExpr:
        tok = self.cur()
        if tok.kind == "op":
            if tok.text == "*":
                self.advance()
                return Pointer(self._parse_type(tparams))
            if tok.text == "(":
                self.advance()
                inner = self._parse_type(tparams)
                self.expect_op(")")
                return inner
            if tok.text == "[":
                self.advance()
                if self.at_op("]"):
                    self.advance()
                    return Slice(self._parse_type(tparams))
                length = self._parse_array_length()
                return Array(length=length, elem=self._parse_type(tparams))
            if tok.text == "<-":
                self.advance()
                if not self.at_keyword("chan"):
                    raise GoSyntaxError("expected chan after <-", tok.line)
                self.advance()
                return Chan(direction="recv", elem=self._parse_type(tparams))
        if tok.kind == "keyword":
            if tok.text == "chan":
                self.advance()
                direction = "both"
                if self.at_op("<-"):
                    direction = "send"
                    self.advance()
                return Chan(direction=direction, elem=self._parse_type(tparams))
            if tok.text == "map":
                self.advance()
                self.expect_op("[")
                key = self._parse_type(tparams)
                self.expect_op("]")
                return Map(key=key, value=self._parse_type(tparams))
            if tok.text == "func":
                self.advance()
                params, variadic, results = self._parse_signature_tail(tparams)
                return Func(params=params, results=results, variadic=variadic)
            if tok.text == "struct":
                self.advance()
                return self._parse_struct_body(tparams)
            if tok.text == "interface":
                self.advance()
                return self._parse_interface_body(tparams)
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            package: str | None = None
            if self.at_op(".") and self.toks[self.i + 1].kind == "ident":
                self.advance()
                member = self.expect_ident().text
                package = self.import_map.get(name, name)
                name = member
            args: tuple[TypeExpr, ...] = ()
            if self.at_op("["):
                arg_items = self._collect_group("[", "]")
                args = tuple(self._parse_type_full(ts, tparams) for ts in arg_items)
            if package is not None:
                return Named(package, name, args)
            base = self._resolve_name(name, tparams)
            if args and isinstance(base, Named):
                return Named(base.package, base.name, args)
            return base
        raise GoSyntaxError(f"expected type, found {tok.text!r}", tok.line)

    def _parse_array_length(self) -> int | str:
        tokens: list[Token] = []
        depth = 0
        while True:
            tok = self.cur()
            if tok.kind == "eof":
                raise GoSyntaxError("unterminated array length", tok.line)
            if depth == 0 and tok.kind == "op" and tok.text == "]":
                self.advance()
                break
            if tok.kind == "op":
                if tok.text in "([{":
                    depth += 1
                elif tok.text in ")]}":
                    depth -= 1
            tokens.append(self.advance())
        if len(tokens) == 1 and tokens[0].kind == "int":
            return int(tokens[0].text.replace("_", ""), 0)
        return _spell(tokens)

    def _parse_struct_body(self, tparams: frozenset[str]) -> Struct:
        from .surface import is_exported

        self.expect_op("{")
        fields: list[FieldDef] = []
        while True:
            self.skip_semis()
            if self.at_op("}"):
                self.advance()
                break
            if self.cur().kind == "eof":
                raise GoSyntaxError("unterminated struct body", self.cur().line)

            start = self.i
            embedded = False
            if self.at_op("*"):
                embedded = True
            elif self.cur().kind == "ident":
                names = [self.advance().text]
                while self.at_op(","):
                    self.advance()
                    names.append(self.expect_ident().text)
                nxt = self.cur()
                if len(names) == 1 and (
                    nxt.kind in ("string", "raw_string")
                    or (nxt.kind == "op" and nxt.text in (";", "}", "."))
                    or (nxt.kind == "op" and nxt.text == "[" and self._bracket_ends_field())
                ):
                    embedded = True
                    self.i = start
                else:
                    ftype = self._parse_type(tparams)
                    tag = self._parse_tag()
                    for n in names:
                        fields.append(
                            FieldDef(name=n, type=ftype, tag=tag, anonymous=False, exported=is_exported(n))
                        )
                    continue
            else:
                raise GoSyntaxError(f"unexpected token {self.cur().text!r} in struct", self.cur().line)

            if embedded:
                ftype = self._parse_type(tparams)
                tag = self._parse_tag()
                name = _embedded_name(ftype)
                fields.append(
                    FieldDef(name=name, type=ftype, tag=tag, anonymous=True, exported=is_exported(name))
                )
        return Struct(fields=tuple(fields))

    def _bracket_ends_field(self) -> bool:
        # Distinguishes an embedded generic (List[T] followed by the end of the
        # field) from a named field of array/slice type (Name [3]T / Name []T).
        depth = 0
        j = self.i
        while j < len(self.toks):
            tok = self.toks[j]
            if tok.kind == "op":
                if tok.text == "[":
                    depth += 1
                elif tok.text == "]":
                    depth -= 1
                    if depth == 0:
                        after = self.toks[j + 1] if j + 1 < len(self.toks) else Token("eof", "", 0)
                        return after.kind in ("string", "raw_string") or (
                            after.kind == "op" and after.text in (";", "}")
                        )
            j += 1
        return False

    def _parse_tag(self) -> str | None:
        tok = self.cur()
        if tok.kind == "raw_string":
            self.advance()
            return tok.text[1:-1]
        if tok.kind == "string":
            self.advance()
            return tok.text[1:-1]
        return None

    def _parse_interface_body(self, tparams: frozenset[str]) -> Interface:
        self.expect_op("{")
        methods: list[MethodSig] = []
        embeds: list[UnionTerm] = []
        while True:
            self.skip_semis()
            if self.at_op("}"):
                self.advance()
                break
            tok = self.cur()
            if tok.kind == "eof":
                raise GoSyntaxError("unterminated interface body", tok.line)
            nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else Token("eof", "", 0)
            if tok.kind == "ident" and nxt.kind == "op" and nxt.text == "(":
                self.advance()
                params, variadic, results = self._parse_signature_tail(tparams)
                methods.append(
                    MethodSig(name=tok.text, sig=Func(params=params, results=results, variadic=variadic))
                )
            else:
                terms = self._collect_union_terms()
                for term_tokens, tilde in terms:
                    embeds.append(
                        UnionTerm(type=self._parse_type_full(term_tokens, tparams), tilde=tilde)
                    )
        return _make_interface(methods, embeds)

    def _collect_union_terms(self) -> list[tuple[list[Token], bool]]:
        terms: list[tuple[list[Token], bool]] = []
        current: list[Token] = []
        tilde = False
        if self.at_op("~"):
            tilde = True
            self.advance()
        depth = 0
        while True:
            tok = self.cur()
            if tok.kind == "eof":
                break
            if depth == 0 and tok.kind == "op" and tok.text in (";", "}"):
                break
            if depth == 0 and tok.kind == "op" and tok.text == "|":
                self.advance()
                terms.append((current, tilde))
                current = []
                tilde = False
                if self.at_op("~"):
                    tilde = True
                    self.advance()
                continue
            if tok.kind == "op":
                if tok.text in "([{":
                    depth += 1
                elif tok.text in ")]}":
                    depth -= 1
            current.append(self.advance())
        terms.append((current, tilde))
        return terms


def _matching_bracket(ts: list[Token], start: int) -> int:
    depth = 0
    for j in range(start, len(ts)):
        tok = ts[j]
        if tok.kind == "op":
            if tok.text == "[":
                depth += 1
            elif tok.text == "]":
                depth -= 1
                if depth == 0:
                    return j
    return len(ts)


def _split_top_level(ts: list[Token], sep: str) -> list[list[Token]]:
    items: list[list[Token]] = [[]]
    depth = 0
    for tok in ts:
        if tok.kind == "op":
            if tok.text in "([{":
                depth += 1
            elif tok.text in ")]}":
                depth -= 1
            elif tok.text == sep and depth == 0:
                items.append([])
                continue
        items[-1].append(tok)
    return [it for it in items if it]


_NO_SPACE_BEFORE = frozenset({".", ",", ")", "]", "}", "{", ";"})
_NO_SPACE_AFTER = frozenset({"(", "[", "{", "."})


def _spell(tokens: list[Token]) -> str:
    parts: list[str] = []
    prev: Token | None = None
    for tok in tokens:
        if parts and not (
            (tok.kind == "op" and tok.text in _NO_SPACE_BEFORE)
            or (prev is not None and prev.kind == "op" and prev.text in _NO_SPACE_AFTER)
        ):
            parts.append(" ")
        parts.append(tok.text)
        prev = tok
    return "".join(parts)


def _literal_type(tok: Token) -> Basic | None:
    if tok.kind == "int":
        return Basic("complex128") if tok.text.endswith("i") else Basic("int")
    if tok.kind == "float":
        return Basic("complex128") if tok.text.endswith("i") else Basic("float64")
    if tok.kind in ("string", "raw_string"):
        return Basic("string")
    if tok.kind == "rune":
        return Basic("rune")
    if tok.kind == "ident" and tok.text in ("true", "false"):
        return Basic("bool")
    return None


def _infer_const_type(value: list[Token] | None) -> Basic:
    if value and len(value) == 1:
        lit = _literal_type(value[0])
        if lit is not None:
            return Basic("untyped " + {"float64": "float", "complex128": "complex"}.get(lit.name, lit.name))
    return Basic("untyped")


def _embedded_name(t: TypeExpr) -> str:
    if isinstance(t, Pointer):
        return _embedded_name(t.base)
    if isinstance(t, Named):
        return t.name
    if isinstance(t, Basic):
        return t.name
    if isinstance(t, TypeParamRef):
        return t.name
    raise GoSyntaxError(f"cannot embed {t!r}")


def parse_go_file(text: str, package_path: str = "") -> GoFile:
    """Parse one source file at declaration level."""
    parser = _Parser(tokenize(text), package_path)
    return parser.parse_file()
