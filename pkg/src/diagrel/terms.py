"""Diagram terms over a monoidal signature: AST, parsing, typing, desugaring.

Terms are immutable trees.  The primitive calculus has two colours (white
and black) of identities, symmetries, (co)monoid constants, sequential
composition and tensor, plus generator boxes and their opposed boxes.
Derived constructors (dagger, negation, meet, join, top, bottom) are sugar
nodes that `desugar` expands into the primitive calculus.
"""

from __future__ import annotations

from dataclasses import dataclass


class DiagrelError(Exception):
    pass


class ParseError(DiagrelError):
    def __init__(self, msg, line=None, col=None):
        if line is not None:
            msg = f"{line}:{col}: {msg}"
        super().__init__(msg)
        self.line = line
        self.col = col


class TypeMismatch(DiagrelError):
    def __init__(self, msg, position=()):
        super().__init__(f"at {format_position(position)}: {msg}")
        self.position = tuple(position)


class InvalidPosition(DiagrelError):
    pass


def format_position(path):
    return ".".join(str(i) for i in path) if path else "ε"


@dataclass(frozen=True)
class Signature:
    """Map from generator names to (arity, coarity)."""

    generators: dict

    def __post_init__(self):
        for name, (n, m) in self.generators.items():
            if n < 0 or m < 0:
                raise DiagrelError(f"generator {name}: negative arity")

    def type_of(self, name):
        try:
            return self.generators[name]
        except KeyError:
            raise DiagrelError(f"unknown generator {name!r}") from None

    @staticmethod
    def parse(text):
        """Parse `sig NAME : N -> M` lines; blank lines and # comments allowed."""
        gens = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(":", " : ").replace("->", " -> ").split()
            if len(parts) != 6 or parts[0] != "sig" or parts[2] != ":" or parts[4] != "->":
                raise ParseError(f"bad signature line: {raw.strip()!r}", lineno, 1)
            name = parts[1]
            if name in gens:
                raise ParseError(f"duplicate generator {name!r}", lineno, 1)
            try:
                gens[name] = (int(parts[3]), int(parts[5]))
            except ValueError:
                raise ParseError(f"bad arity in: {raw.strip()!r}", lineno, 1) from None
        return Signature(gens)


EMPTY_SIGNATURE = Signature({})


# ---------------------------------------------------------------------------
# AST


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class IdW(Term):
    n: int


@dataclass(frozen=True)
class IdB(Term):
    n: int


@dataclass(frozen=True)
class SymW(Term):
    m: int
    n: int


@dataclass(frozen=True)
class SymB(Term):
    m: int
    n: int


@dataclass(frozen=True)
class Gen(Term):
    name: str


@dataclass(frozen=True)
class GenOp(Term):
    name: str


#: atom name -> (dom, cod) for the eight unary (co)monoid constants
CONSTANT_TYPES = {
    "copyw": (1, 2),
    "dscw": (1, 0),
    "cocw": (2, 1),
    "codw": (0, 1),
    "copyb": (1, 2),
    "dscb": (1, 0),
    "cocb": (2, 1),
    "codb": (0, 1),
}


@dataclass(frozen=True)
class Const(Term):
    kind: str

    def __post_init__(self):
        if self.kind not in CONSTANT_TYPES:
            raise DiagrelError(f"unknown constant {self.kind!r}")


@dataclass(frozen=True)
class SeqW(Term):
    t: Term
    u: Term


@dataclass(frozen=True)
class SeqB(Term):
    t: Term
    u: Term


@dataclass(frozen=True)
class TensW(Term):
    t: Term
    u: Term


@dataclass(frozen=True)
class TensB(Term):
    t: Term
    u: Term


# sugar nodes


@dataclass(frozen=True)
class Dag(Term):
    t: Term


@dataclass(frozen=True)
class Neg(Term):
    t: Term


@dataclass(frozen=True)
class Meet(Term):
    t: Term
    u: Term


@dataclass(frozen=True)
class Join(Term):
    t: Term
    u: Term


@dataclass(frozen=True)
class Top(Term):
    n: int
    m: int


@dataclass(frozen=True)
class Bot(Term):
    n: int
    m: int


BINARY = (SeqW, SeqB, TensW, TensB, Meet, Join)
UNARY = (Dag, Neg)

# convenience aliases used throughout
CopyW = Const("copyw")
DiscardW = Const("dscw")
CocopyW = Const("cocw")
CodiscardW = Const("codw")
CopyB = Const("copyb")
DiscardB = Const("dscb")
CocopyB = Const("cocb")
CodiscardB = Const("codb")


def children(t):
    if isinstance(t, BINARY):
        return (t.t, t.u)
    if isinstance(t, UNARY):
        return (t.t,)
    return ()


def with_children(t, kids):
    if isinstance(t, BINARY):
        return type(t)(kids[0], kids[1])
    if isinstance(t, UNARY):
        return type(t)(kids[0])
    return t


def subterm_at(t, path):
    for i, step in enumerate(path):
        kids = children(t)
        if step < 0 or step >= len(kids):
            raise InvalidPosition(
                f"no child {step} at {format_position(path[:i])} in {print_term(t)}"
            )
        t = kids[step]
    return t


def replace_at(t, path, u, sig=None):
    """Replace the subterm at `path` by `u`.

    When a signature is given, `u` must have the same type as the subterm it
    replaces, so the result stays well-typed.
    """
    if sig is not None:
        old = subterm_at(t, path)
        if typecheck(old, sig) != typecheck(u, sig):
            raise TypeMismatch(
                f"replacement type {typecheck(u, sig)} differs from {typecheck(old, sig)}",
                path,
            )
    return _splice(t, tuple(path), u)


def _splice(t, path, u):
    if not path:
        return u
    kids = list(children(t))
    if path[0] < 0 or path[0] >= len(kids):
        raise InvalidPosition(f"no child {path[0]} in {print_term(t)}")
    kids[path[0]] = _splice(kids[path[0]], path[1:], u)
    return with_children(t, kids)


def positions(t):
    """All valid positions of t, root first, depth-first."""
    out = [()]
    for i, kid in enumerate(children(t)):
        out.extend((i,) + p for p in positions(kid))
    return out


# ---------------------------------------------------------------------------
# typing


def typecheck(t, sig, _path=()):
    """Return (dom, cod) or raise TypeMismatch / unknown generator."""
    if isinstance(t, IdW) or isinstance(t, IdB):
        if t.n < 0:
            raise TypeMismatch("negative identity arity", _path)
        return (t.n, t.n)
    if isinstance(t, (SymW, SymB)):
        if t.m < 0 or t.n < 0:
            raise TypeMismatch("negative symmetry arity", _path)
        return (t.m + t.n, t.n + t.m)
    if isinstance(t, Gen):
        n, m = sig.type_of(t.name)
        return (n, m)
    if isinstance(t, GenOp):
        n, m = sig.type_of(t.name)
        return (m, n)
    if isinstance(t, Const):
        return CONSTANT_TYPES[t.kind]
    if isinstance(t, (SeqW, SeqB)):
        n1, m1 = typecheck(t.t, sig, _path + (0,))
        n2, m2 = typecheck(t.u, sig, _path + (1,))
        if m1 != n2:
            raise TypeMismatch(f"cod {m1} ≠ dom {n2}", _path)
        return (n1, m2)
    if isinstance(t, (TensW, TensB)):
        n1, m1 = typecheck(t.t, sig, _path + (0,))
        n2, m2 = typecheck(t.u, sig, _path + (1,))
        return (n1 + n2, m1 + m2)
    if isinstance(t, Dag):
        n, m = typecheck(t.t, sig, _path + (0,))
        return (m, n)
    if isinstance(t, Neg):
        return typecheck(t.t, sig, _path + (0,))
    if isinstance(t, (Meet, Join)):
        ty1 = typecheck(t.t, sig, _path + (0,))
        ty2 = typecheck(t.u, sig, _path + (1,))
        if ty1 != ty2:
            raise TypeMismatch(f"branch types {ty1} ≠ {ty2}", _path)
        return ty1
    if isinstance(t, (Top, Bot)):
        if t.n < 0 or t.m < 0:
            raise TypeMismatch("negative arity", _path)
        return (t.n, t.m)
    raise DiagrelError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# printing / parsing


_SEQ_HEADS = {SeqW: "seqw", SeqB: "seqb", TensW: "tensw", TensB: "tensb",
              Meet: "meet", Join: "join"}


def print_term(t):
    if isinstance(t, IdW):
        return f"(idw {t.n})"
    if isinstance(t, IdB):
        return f"(idb {t.n})"
    if isinstance(t, SymW):
        return f"(symw {t.m} {t.n})"
    if isinstance(t, SymB):
        return f"(symb {t.m} {t.n})"
    if isinstance(t, Gen):
        return f"(gen {t.name})"
    if isinstance(t, GenOp):
        return f"(genop {t.name})"
    if isinstance(t, Const):
        return t.kind
    if isinstance(t, BINARY):
        return f"({_SEQ_HEADS[type(t)]} {print_term(t.t)} {print_term(t.u)})"
    if isinstance(t, Dag):
        return f"(dag {print_term(t.t)})"
    if isinstance(t, Neg):
        return f"(neg {print_term(t.t)})"
    if isinstance(t, Top):
        return f"(top {t.n} {t.m})"
    if isinstance(t, Bot):
        return f"(bot {t.n} {t.m})"
    raise DiagrelError(f"not a term: {t!r}")


def _tokenize(text):
    """Yield (token, line, col); tokens are '(', ')' and atoms."""
    line, col = 1, 1
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            col += 1
            i += 1
        elif c == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif c in "()":
            yield (c, line, col)
            col += 1
            i += 1
        else:
            start = i
            startcol = col
            while i < len(text) and text[i] not in " \t\r\n();":
                i += 1
                col += 1
            yield (text[start:i], line, startcol)


def _read_sexpr(tokens, pos):
    if pos >= len(tokens):
        raise ParseError("unexpected end of input (unbalanced parenthesis?)")
    tok, line, col = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while True:
            if pos >= len(tokens):
                raise ParseError("unbalanced parenthesis", line, col)
            if tokens[pos][0] == ")":
                return items, pos + 1
            item, pos = _read_sexpr(tokens, pos)
            items.append(item)
    if tok == ")":
        raise ParseError("unexpected ')'", line, col)
    return (tok, line, col), pos + 1


def _nat(atom, what="number"):
    tok, line, col = atom if isinstance(atom, tuple) else (atom, None, None)
    if isinstance(atom, list):
        raise ParseError(f"expected {what}, got a list")
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"expected {what}, got {tok!r}", line, col) from None
    if v < 0:
        raise ParseError(f"{what} must be non-negative", line, col)
    return v


_BIN_HEADS = {"seqw": SeqW, "seqb": SeqB, "tensw": TensW, "tensb": TensB,
              "meet": Meet, "join": Join}


def _build(sx, sig):
    if isinstance(sx, tuple):
        tok, line, col = sx
        if tok in CONSTANT_TYPES:
            return Const(tok)
        raise ParseError(f"unknown atom {tok!r}", line, col)
    if not sx:
        raise ParseError("empty list")
    head = sx[0]
    if isinstance(head, list):
        raise ParseError("list in head position")
    tok, line, col = head
    args = sx[1:]

    def arity(k):
        if len(args) != k:
            raise ParseError(f"{tok} expects {k} argument(s), got {len(args)}", line, col)

    if tok == "idw":
        arity(1)
        return IdW(_nat(args[0]))
    if tok == "idb":
        arity(1)
        return IdB(_nat(args[0]))
    if tok == "symw":
        arity(2)
        return SymW(_nat(args[0]), _nat(args[1]))
    if tok == "symb":
        arity(2)
        return SymB(_nat(args[0]), _nat(args[1]))
    if tok in ("gen", "genop"):
        arity(1)
        if isinstance(args[0], list):
            raise ParseError("generator name must be an atom", line, col)
        name = args[0][0]
        if sig is not None and name not in sig.generators:
            raise ParseError(f"unknown generator {name!r}", args[0][1], args[0][2])
        return Gen(name) if tok == "gen" else GenOp(name)
    if tok in _BIN_HEADS:
        arity(2)
        cls = _BIN_HEADS[tok]
        return cls(_build(args[0], sig), _build(args[1], sig))
    if tok == "dag":
        arity(1)
        return Dag(_build(args[0], sig))
    if tok == "neg":
        arity(1)
        return Neg(_build(args[0], sig))
    if tok == "top":
        arity(2)
        return Top(_nat(args[0]), _nat(args[1]))
    if tok == "bot":
        arity(2)
        return Bot(_nat(args[0]), _nat(args[1]))
    raise ParseError(f"unknown form {tok!r}", line, col)


def parse_term(text, sig=None):
    """Parse one term from `text`; generator names are checked against `sig`."""
    tokens = list(_tokenize(text))
    if not tokens:
        raise ParseError("empty input")
    sx, pos = _read_sexpr(tokens, 0)
    if pos != len(tokens):
        tok, line, col = tokens[pos]
        raise ParseError(f"trailing input {tok!r}", line, col)
    return _build(sx, sig)


# ---------------------------------------------------------------------------
# arity-indexed macros (left-nested combs built from the unary constants)


def _comb(unit, mk_pair, n):
    if n == 0:
        return unit
    t = mk_pair
    for _ in range(n - 1):
        t = TensW(mk_pair, t) if isinstance(unit, IdW) else TensB(mk_pair, t)
    return t


def discard_w(n):
    return _comb(IdW(0), DiscardW, n)


def codiscard_w(n):
    return _comb(IdW(0), CodiscardW, n)


def discard_b(n):
    return _comb(IdB(0), DiscardB, n)


def codiscard_b(n):
    return _comb(IdB(0), CodiscardB, n)


def copy_w(n):
    """n-ary white copy X^n -> X^2n, first copy then second copy."""
    if n == 0:
        return IdW(0)
    if n == 1:
        return CopyW
    rest = copy_w(n - 1)
    spread = TensW(CopyW, rest)
    shuffle = TensW(IdW(1), TensW(SymW(1, n - 1), IdW(n - 1)))
    return SeqW(spread, shuffle)


def cocopy_w(n):
    if n == 0:
        return IdW(0)
    if n == 1:
        return CocopyW
    rest = cocopy_w(n - 1)
    shuffle = TensW(IdW(1), TensW(SymW(n - 1, 1), IdW(n - 1)))
    merge = TensW(CocopyW, rest)
    return SeqW(shuffle, merge)


def copy_b(n):
    if n == 0:
        return IdB(0)
    if n == 1:
        return CopyB
    rest = copy_b(n - 1)
    spread = TensB(CopyB, rest)
    shuffle = TensB(IdB(1), TensB(SymB(1, n - 1), IdB(n - 1)))
    return SeqB(spread, shuffle)


def cocopy_b(n):
    if n == 0:
        return IdB(0)
    if n == 1:
        return CocopyB
    rest = cocopy_b(n - 1)
    shuffle = TensB(IdB(1), TensB(SymB(n - 1, 1), IdB(n - 1)))
    merge = TensB(CocopyB, rest)
    return SeqB(shuffle, merge)


def cup_w(n):
    """0 -> 2n, the pairs {((), (v,v))}."""
    return SeqW(codiscard_w(n), copy_w(n))


def cap_w(n):
    """2n -> 0, the pairs {((v,v), ())}."""
    return SeqW(cocopy_w(n), discard_w(n))


# ---------------------------------------------------------------------------
# sugar constructors and desugaring


def dagger(t):
    return Dag(t)


def negate(t):
    return Neg(t)


def _dag_expansion(t, n, m):
    """Cup/cap conjugation of a primitive term t : n -> m, giving m -> n."""
    left = TensW(cup_w(n), IdW(m))
    mid = TensW(IdW(n), TensW(t, IdW(m)))
    right = TensW(IdW(n), cap_w(m))
    return SeqW(left, SeqW(mid, right))


_COLOUR_SWITCH = {
    "copyw": "copyb", "dscw": "dscb", "cocw": "cocb", "codw": "codb",
    "copyb": "copyw", "dscb": "dscw", "cocb": "cocw", "codb": "codw",
}

_SWITCH_BIN = {SeqW: SeqB, SeqB: SeqW, TensW: TensB, TensB: TensW}


def _negate_prim(t, sig):
    """Colour switch on a primitive-only term; generators turn into
    daggered opposed boxes and vice versa."""
    if isinstance(t, IdW):
        return IdB(t.n)
    if isinstance(t, IdB):
        return IdW(t.n)
    if isinstance(t, SymW):
        return SymB(t.m, t.n)
    if isinstance(t, SymB):
        return SymW(t.m, t.n)
    if isinstance(t, Const):
        return Const(_COLOUR_SWITCH[t.kind])
    if isinstance(t, Gen):
        n, m = sig.type_of(t.name)
        return _dag_expansion(GenOp(t.name), m, n)
    if isinstance(t, GenOp):
        n, m = sig.type_of(t.name)
        return _dag_expansion(Gen(t.name), n, m)
    if isinstance(t, (SeqW, SeqB, TensW, TensB)):
        return _SWITCH_BIN[type(t)](_negate_prim(t.t, sig), _negate_prim(t.u, sig))
    raise DiagrelError(f"not primitive: {t!r}")


def desugar(t, sig=EMPTY_SIGNATURE):
    """Expand all sugar nodes; the result uses only the primitive calculus."""
    if isinstance(t, (SeqW, SeqB, TensW, TensB)):
        return type(t)(desugar(t.t, sig), desugar(t.u, sig))
    if isinstance(t, Meet):
        n, m = typecheck(t, sig)
        a, b = desugar(t.t, sig), desugar(t.u, sig)
        return SeqW(copy_w(n), SeqW(TensW(a, b), cocopy_w(m)))
    if isinstance(t, Join):
        n, m = typecheck(t, sig)
        a, b = desugar(t.t, sig), desugar(t.u, sig)
        return SeqB(copy_b(n), SeqB(TensB(a, b), cocopy_b(m)))
    if isinstance(t, Top):
        return SeqW(discard_w(t.n), codiscard_w(t.m))
    if isinstance(t, Bot):
        return SeqB(discard_b(t.n), codiscard_b(t.m))
    if isinstance(t, Dag):
        inner = desugar(t.t, sig)
        n, m = typecheck(inner, sig)
        return _dag_expansion(inner, n, m)
    if isinstance(t, Neg):
        return _negate_prim(desugar(t.t, sig), sig)
    return t
