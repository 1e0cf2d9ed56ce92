"""Recursive-descent parser producing the subset AST."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import JavaCompileError
from .lexer import Token, tokenize


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class TypeRef:
    name: str  # int, boolean, char, void, String, Scanner, Main, ...
    dims: int = 0

    def __str__(self) -> str:
        return self.name + "[]" * self.dims


@dataclass(frozen=True)
class Param:
    type: TypeRef
    name: str


@dataclass
class MethodDecl:
    name: str
    params: list[Param]
    return_type: TypeRef
    body: "Block"
    static: bool
    line: int


@dataclass
class FieldDecl:
    type: TypeRef
    name: str
    init: "Expr | None"
    line: int


@dataclass
class ClassDecl:
    name: str
    methods: list[MethodDecl]
    fields: list[FieldDecl]


@dataclass
class Program:
    classes: list[ClassDecl]


class Stmt:
    pass


class Expr:
    pass


@dataclass
class Block(Stmt):
    statements: list[Stmt] = field(default_factory=list)


@dataclass
class VarDecl(Stmt):
    type: TypeRef
    # (name, extra array dims from C-style "int x[]", initializer)
    declarators: list[tuple[str, int, Expr | None]] = field(default_factory=list)


@dataclass
class ExprStmt(Stmt):
    expr: Expr


@dataclass
class If(Stmt):
    condition: Expr
    then_branch: Stmt
    else_branch: Stmt | None


@dataclass
class While(Stmt):
    condition: Expr
    body: Stmt


@dataclass
class DoWhile(Stmt):
    body: Stmt
    condition: Expr


@dataclass
class For(Stmt):
    init: Stmt | None  # VarDecl or ExprStmt-list wrapped in Block
    condition: Expr | None
    update: list[Expr]
    body: Stmt


@dataclass
class ForEach(Stmt):
    var_type: TypeRef
    var_name: str
    iterable: Expr
    body: Stmt


@dataclass
class Return(Stmt):
    value: Expr | None
    line: int = 0


@dataclass
class Break(Stmt):
    pass


@dataclass
class Continue(Stmt):
    pass


@dataclass
class Empty(Stmt):
    pass


@dataclass
class IntLit(Expr):
    value: int


@dataclass
class BoolLit(Expr):
    value: bool


@dataclass
class StrLit(Expr):
    value: str


@dataclass
class CharLit(Expr):
    value: str


@dataclass
class NullLit(Expr):
    pass


@dataclass
class Name(Expr):
    ident: str
    line: int = 0


@dataclass
class This(Expr):
    pass


@dataclass
class Assign(Expr):
    target: Expr
    op: str  # = += -= *= /= %=
    value: Expr


@dataclass
class Ternary(Expr):
    condition: Expr
    if_true: Expr
    if_false: Expr


@dataclass
class Binary(Expr):
    op: str
    left: Expr
    right: Expr
    line: int = 0


@dataclass
class Unary(Expr):
    op: str  # ! -
    operand: Expr


@dataclass
class IncDec(Expr):
    op: str  # ++ --
    target: Expr
    prefix: bool


@dataclass
class Index(Expr):
    array: Expr
    index: Expr
    line: int = 0


@dataclass
class Call(Expr):
    receiver: Expr | None  # None = unqualified call on the enclosing class
    name: str
    args: list[Expr]
    line: int = 0


@dataclass
class FieldAccess(Expr):
    receiver: Expr
    name: str
    line: int = 0


@dataclass
class NewArray(Expr):
    elem_type: TypeRef
    size: Expr | None
    init: list[Expr] | None
    line: int = 0


@dataclass
class NewObject(Expr):
    class_name: str
    args: list[Expr]
    line: int = 0


ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%="}
PRIMITIVE_TYPES = {"int", "boolean", "char", "void", "long"}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token helpers --

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def check(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def match(self, kind: str, text: str | None = None) -> Token | None:
        if self.check(kind, text):
            return self.advance()
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.peek()
        if not self.check(kind, text):
            want = text or kind
            raise JavaCompileError(
                f"expected {want!r}, found {tok.text!r}" if tok.text else f"expected {want!r}",
                tok.line,
                tok.column,
            )
        return self.advance()

    def error(self, message: str) -> JavaCompileError:
        tok = self.peek()
        return JavaCompileError(message, tok.line, tok.column)

    # -- declarations --

    def parse_program(self) -> Program:
        classes: list[ClassDecl] = []
        while self.match("keyword", "import") or self.match("keyword", "package"):
            while not self.match("punct", ";"):
                if self.peek().kind == "eof":
                    raise self.error("unterminated import")
                self.advance()
        while not self.check("eof"):
            classes.append(self.parse_class())
        if not classes:
            raise self.error("no class declaration found")
        return Program(classes)

    def parse_class(self) -> ClassDecl:
        self.skip_modifiers()
        self.expect("keyword", "class")
        name = self.expect("ident").text
        self.expect("punct", "{")
        methods: list[MethodDecl] = []
        fields: list[FieldDecl] = []
        while not self.check("punct", "}"):
            if self.check("eof"):
                raise self.error(f"unterminated class {name!r}")
            self.parse_member(methods, fields)
        self.expect("punct", "}")
        return ClassDecl(name, methods, fields)

    def skip_modifiers(self) -> bool:
        saw_static = False
        while True:
            if self.match("keyword", "static"):
                saw_static = True
            elif (
                self.match("keyword", "public")
                or self.match("keyword", "private")
                or self.match("keyword", "protected")
                or self.match("keyword", "final")
            ):
                continue
            else:
                return saw_static

    def parse_member(self, methods: list[MethodDecl], fields: list[FieldDecl]) -> None:
        static = self.skip_modifiers()
        decl_type = self.parse_type()
        name_tok = self.expect("ident")
        if self.check("punct", "("):
            methods.append(self.parse_method(decl_type, name_tok, static))
            return
        # field declaration, possibly a comma list
        while True:
            init = None
            if self.match("punct", "="):
                init = self.parse_expression()
            fields.append(FieldDecl(decl_type, name_tok.text, init, name_tok.line))
            if self.match("punct", ","):
                name_tok = self.expect("ident")
                continue
            self.expect("punct", ";")
            return

    def parse_method(self, return_type: TypeRef, name_tok: Token, static: bool) -> MethodDecl:
        self.expect("punct", "(")
        params: list[Param] = []
        if not self.check("punct", ")"):
            while True:
                ptype = self.parse_type()
                pname = self.expect("ident").text
                while self.match("punct", "["):  # C-style trailing dims
                    self.expect("punct", "]")
                    ptype = TypeRef(ptype.name, ptype.dims + 1)
                params.append(Param(ptype, pname))
                if not self.match("punct", ","):
                    break
        self.expect("punct", ")")
        body = self.parse_block()
        return MethodDecl(name_tok.text, params, return_type, body, static, name_tok.line)

    def parse_type(self) -> TypeRef:
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in PRIMITIVE_TYPES:
            self.advance()
            name = tok.text
        elif tok.kind == "ident":
            self.advance()
            name = tok.text
        else:
            raise self.error(f"expected a type, found {tok.text!r}")
        dims = 0
        while self.check("punct", "[") and self.peek(1).text == "]":
            self.advance()
            self.advance()
            dims += 1
        return TypeRef(name, dims)

    # -- statements --

    def parse_block(self) -> Block:
        self.expect("punct", "{")
        statements: list[Stmt] = []
        while not self.check("punct", "}"):
            if self.check("eof"):
                raise self.error("unterminated block")
            statements.append(self.parse_statement())
        self.expect("punct", "}")
        return Block(statements)

    def parse_statement(self) -> Stmt:
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "{":
            return self.parse_block()
        if tok.kind == "punct" and tok.text == ";":
            self.advance()
            return Empty()
        if tok.kind == "keyword":
            if tok.text == "if":
                return self.parse_if()
            if tok.text == "while":
                return self.parse_while()
            if tok.text == "do":
                return self.parse_do_while()
            if tok.text == "for":
                return self.parse_for()
            if tok.text == "return":
                self.advance()
                value = None if self.check("punct", ";") else self.parse_expression()
                self.expect("punct", ";")
                return Return(value, tok.line)
            if tok.text == "break":
                self.advance()
                self.expect("punct", ";")
                return Break()
            if tok.text == "continue":
                self.advance()
                self.expect("punct", ";")
                return Continue()
        if self.looks_like_var_decl():
            decl = self.parse_var_decl()
            self.expect("punct", ";")
            return decl
        expr = self.parse_expression()
        self.expect("punct", ";")
        return ExprStmt(expr)

    def looks_like_var_decl(self) -> bool:
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in PRIMITIVE_TYPES and tok.text != "void":
            return True
        if tok.kind != "ident":
            return False
        # "Foo x", "Foo[] x", "Foo x =" all start a declaration.
        nxt = self.peek(1)
        if nxt.kind == "ident":
            return True
        if nxt.kind == "punct" and nxt.text == "[" and self.peek(2).text == "]":
            return True
        return False

    def parse_var_decl(self) -> VarDecl:
        decl_type = self.parse_type()
        declarators: list[tuple[str, int, Expr | None]] = []
        while True:
            name = self.expect("ident").text
            extra_dims = 0
            while self.check("punct", "[") and self.peek(1).text == "]":
                self.advance()
                self.advance()
                extra_dims += 1
            init = None
            if self.match("punct", "="):
                init = self.parse_expression()
            declarators.append((name, extra_dims, init))
            if not self.match("punct", ","):
                break
        return VarDecl(decl_type, declarators)

    def parse_if(self) -> If:
        self.expect("keyword", "if")
        self.expect("punct", "(")
        condition = self.parse_expression()
        self.expect("punct", ")")
        then_branch = self.parse_statement()
        else_branch = None
        if self.match("keyword", "else"):
            else_branch = self.parse_statement()
        return If(condition, then_branch, else_branch)

    def parse_while(self) -> While:
        self.expect("keyword", "while")
        self.expect("punct", "(")
        condition = self.parse_expression()
        self.expect("punct", ")")
        return While(condition, self.parse_statement())

    def parse_do_while(self) -> DoWhile:
        self.expect("keyword", "do")
        body = self.parse_statement()
        self.expect("keyword", "while")
        self.expect("punct", "(")
        condition = self.parse_expression()
        self.expect("punct", ")")
        self.expect("punct", ";")
        return DoWhile(body, condition)

    def parse_for(self) -> Stmt:
        self.expect("keyword", "for")
        self.expect("punct", "(")
        # for-each: "for (Type name : expr)"
        mark = self.pos
        if self.looks_like_var_decl():
            var_type = self.parse_type()
            if self.check("ident") and self.peek(1).text == ":":
                var_name = self.expect("ident").text
                self.expect("punct", ":")
                iterable = self.parse_expression()
                self.expect("punct", ")")
                return ForEach(var_type, var_name, iterable, self.parse_statement())
            self.pos = mark
        init: Stmt | None = None
        if not self.check("punct", ";"):
            if self.looks_like_var_decl():
                init = self.parse_var_decl()
            else:
                exprs = [self.parse_expression()]
                while self.match("punct", ","):
                    exprs.append(self.parse_expression())
                init = Block([ExprStmt(e) for e in exprs])
        self.expect("punct", ";")
        condition = None if self.check("punct", ";") else self.parse_expression()
        self.expect("punct", ";")
        update: list[Expr] = []
        if not self.check("punct", ")"):
            update.append(self.parse_expression())
            while self.match("punct", ","):
                update.append(self.parse_expression())
        self.expect("punct", ")")
        return For(init, condition, update, self.parse_statement())

    # -- expressions (precedence climbing) --

    def parse_expression(self) -> Expr:
        return self.parse_assignment()

    def parse_assignment(self) -> Expr:
        left = self.parse_ternary()
        tok = self.peek()
        if tok.kind == "punct" and tok.text in ASSIGN_OPS:
            if not isinstance(left, (Name, Index, FieldAccess)):
                raise self.error("invalid assignment target")
            self.advance()
            value = self.parse_assignment()
            return Assign(left, tok.text, value)
        return left

    def parse_ternary(self) -> Expr:
        condition = self.parse_or()
        if self.match("punct", "?"):
            if_true = self.parse_expression()
            self.expect("punct", ":")
            if_false = self.parse_expression()
            return Ternary(condition, if_true, if_false)
        return condition

    def parse_or(self) -> Expr:
        left = self.parse_and()
        while self.check("punct", "||"):
            line = self.advance().line
            left = Binary("||", left, self.parse_and(), line)
        return left

    def parse_and(self) -> Expr:
        left = self.parse_equality()
        while self.check("punct", "&&"):
            line = self.advance().line
            left = Binary("&&", left, self.parse_equality(), line)
        return left

    def parse_equality(self) -> Expr:
        left = self.parse_relational()
        while self.peek().kind == "punct" and self.peek().text in ("==", "!="):
            op = self.advance()
            left = Binary(op.text, left, self.parse_relational(), op.line)
        return left

    def parse_relational(self) -> Expr:
        left = self.parse_additive()
        while self.peek().kind == "punct" and self.peek().text in ("<", "<=", ">", ">="):
            op = self.advance()
            left = Binary(op.text, left, self.parse_additive(), op.line)
        return left

    def parse_additive(self) -> Expr:
        left = self.parse_multiplicative()
        while self.peek().kind == "punct" and self.peek().text in ("+", "-"):
            op = self.advance()
            left = Binary(op.text, left, self.parse_multiplicative(), op.line)
        return left

    def parse_multiplicative(self) -> Expr:
        left = self.parse_unary()
        while self.peek().kind == "punct" and self.peek().text in ("*", "/", "%"):
            op = self.advance()
            left = Binary(op.text, left, self.parse_unary(), op.line)
        return left

    def parse_unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "punct" and tok.text in ("!", "-", "+"):
            self.advance()
            operand = self.parse_unary()
            if tok.text == "+":
                return operand
            return Unary(tok.text, operand)
        if tok.kind == "punct" and tok.text in ("++", "--"):
            self.advance()
            target = self.parse_unary()
            if not isinstance(target, (Name, Index, FieldAccess)):
                raise self.error("invalid increment/decrement target")
            return IncDec(tok.text, target, prefix=True)
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text == ".":
                self.advance()
                name = self.expect_member_name()
                if self.check("punct", "("):
                    args = self.parse_args()
                    expr = Call(expr, name, args, tok.line)
                else:
                    expr = FieldAccess(expr, name, tok.line)
            elif tok.kind == "punct" and tok.text == "[":
                self.advance()
                index = self.parse_expression()
                self.expect("punct", "]")
                expr = Index(expr, index, tok.line)
            elif tok.kind == "punct" and tok.text in ("++", "--"):
                if not isinstance(expr, (Name, Index, FieldAccess)):
                    raise self.error("invalid increment/decrement target")
                self.advance()
                expr = IncDec(tok.text, expr, prefix=False)
            else:
                return expr

    def expect_member_name(self) -> str:
        tok = self.peek()
        if tok.kind in ("ident", "keyword"):
            self.advance()
            return tok.text
        raise self.error(f"expected a member name, found {tok.text!r}")

    def parse_args(self) -> list[Expr]:
        self.expect("punct", "(")
        args: list[Expr] = []
        if not self.check("punct", ")"):
            args.append(self.parse_expression())
            while self.match("punct", ","):
                args.append(self.parse_expression())
        self.expect("punct", ")")
        return args

    def parse_primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.text))
        if tok.kind == "string":
            self.advance()
            return StrLit(tok.text)
        if tok.kind == "char":
            self.advance()
            return CharLit(tok.text)
        if tok.kind == "keyword":
            if tok.text == "true":
                self.advance()
                return BoolLit(True)
            if tok.text == "false":
                self.advance()
                return BoolLit(False)
            if tok.text == "null":
                self.advance()
                return NullLit()
            if tok.text == "this":
                self.advance()
                return This()
            if tok.text == "new":
                return self.parse_new()
        if tok.kind == "punct" and tok.text == "(":
            self.advance()
            expr = self.parse_expression()
            self.expect("punct", ")")
            return expr
        if tok.kind == "ident":
            self.advance()
            if self.check("punct", "("):
                args = self.parse_args()
                return Call(None, tok.text, args, tok.line)
            return Name(tok.text, tok.line)
        raise self.error(f"unexpected token {tok.text!r}")

    def parse_new(self) -> Expr:
        new_tok = self.expect("keyword", "new")
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in PRIMITIVE_TYPES:
            self.advance()
            elem = TypeRef(tok.text)
            return self.parse_new_array(elem, new_tok.line)
        # dotted class name, e.g. java.util.Scanner
        name = self.expect("ident").text
        while self.check("punct", ".") and self.peek(1).kind in ("ident", "keyword"):
            self.advance()
            name = self.expect_member_name()  # keep only the last segment
        if self.check("punct", "["):
            return self.parse_new_array(TypeRef(name), new_tok.line)
        args = self.parse_args()
        return NewObject(name, args, new_tok.line)

    def parse_new_array(self, elem: TypeRef, line: int) -> NewArray:
        self.expect("punct", "[")
        if self.match("punct", "]"):
            self.expect("punct", "{")
            init: list[Expr] = []
            if not self.check("punct", "}"):
                init.append(self.parse_expression())
                while self.match("punct", ","):
                    init.append(self.parse_expression())
            self.expect("punct", "}")
            return NewArray(elem, None, init, line)
        size = self.parse_expression()
        self.expect("punct", "]")
        return NewArray(elem, size, None, line)


def parse_program(source: str) -> Program:
    return _Parser(tokenize(source)).parse_program()
