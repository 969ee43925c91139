"""Propositional formulas: construction, parsing, printing, renaming,
evaluation, forgetting and clausification.

Formulas are immutable and hashable.  Conjunction and disjunction are
n-ary (at least two operands); use :func:`conj` and :func:`disj` to build
them from arbitrary argument lists.

Concrete syntax::

    ~a          negation
    a & b       conjunction
    a | b       disjunction
    a -> b      implication (right associative)
    a <-> b     biconditional
    true false  constants

Precedence from tightest to loosest: ``~``, ``&``, ``|``, ``->``, ``<->``.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping, NamedTuple

from dlw.errors import FormulaSyntaxError, UnassignedAtomError

RESERVED_PREFIX = "__"
ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ("_hash",)

    def __and__(self, other: Formula) -> Formula:
        return And((self, other))

    def __or__(self, other: Formula) -> Formula:
        return Or((self, other))

    def __invert__(self) -> Formula:
        return Not(self)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return to_str(self)

    def __repr__(self) -> str:
        return f"parse({to_str(self)!r})"


class _Constant(Formula):
    __slots__ = ("value",)

    def __init__(self, value: bool):
        self.value = value
        self._hash = hash(("const", value))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Constant) and other.value == self.value

    __hash__ = Formula.__hash__


TRUE = _Constant(True)
FALSE = _Constant(False)


class Var(Formula):
    __slots__ = ("name",)

    def __init__(self, name: str):
        if not ATOM_RE.match(name) or name in _KEYWORDS:
            raise ValueError(f"invalid atom name {name!r}")
        self.name = name
        self._hash = hash(("var", name))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Var) and other.name == self.name

    __hash__ = Formula.__hash__


class Not(Formula):
    __slots__ = ("arg",)

    def __init__(self, arg: Formula):
        self.arg = arg
        self._hash = hash(("not", arg))

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Not) and other._hash == self._hash
                and other.arg == self.arg)

    __hash__ = Formula.__hash__


class _NAry(Formula):
    __slots__ = ("args",)
    tag = ""

    def __init__(self, args: Iterable[Formula]):
        args = tuple(args)
        if len(args) < 2:
            raise ValueError(f"{type(self).__name__} needs at least two operands")
        self.args = args
        self._hash = hash((self.tag, args))

    def __eq__(self, other: object) -> bool:
        return (type(other) is type(self) and other._hash == self._hash
                and other.args == self.args)

    __hash__ = Formula.__hash__


class And(_NAry):
    __slots__ = ()
    tag = "and"


class Or(_NAry):
    __slots__ = ()
    tag = "or"


class _Binary(Formula):
    __slots__ = ("left", "right")
    tag = ""

    def __init__(self, left: Formula, right: Formula):
        self.left = left
        self.right = right
        self._hash = hash((self.tag, left, right))

    def __eq__(self, other: object) -> bool:
        return (type(other) is type(self) and other._hash == self._hash
                and other.left == self.left and other.right == self.right)

    __hash__ = Formula.__hash__


class Implies(_Binary):
    __slots__ = ()
    tag = "implies"


class Iff(_Binary):
    __slots__ = ()
    tag = "iff"


_KEYWORDS = {"true", "false"}


def conj(*fs: Formula) -> Formula:
    """Conjunction of ``fs`` with ``true`` operands dropped.

    Nested conjunctions are kept as operands, so the structure of each
    argument survives.
    """
    args = [f for f in fs if f != TRUE]
    if not args:
        return TRUE
    if len(args) == 1:
        return args[0]
    return And(args)


def disj(*fs: Formula) -> Formula:
    args = [f for f in fs if f != FALSE]
    if not args:
        return FALSE
    if len(args) == 1:
        return args[0]
    return Or(args)


def is_reserved(name: str) -> bool:
    return name.startswith(RESERVED_PREFIX)


# ---------------------------------------------------------------------------
# Traversals
# ---------------------------------------------------------------------------

def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, _NAry):
        return f.args
    if isinstance(f, _Binary):
        return (f.left, f.right)
    return ()


def atoms(f: Formula) -> frozenset[str]:
    """Names of the atoms occurring in ``f``."""
    found: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            found.add(g.name)
        else:
            stack.extend(children(g))
    return frozenset(found)


def atoms_of(fs: Iterable[Formula]) -> frozenset[str]:
    out: set[str] = set()
    for f in fs:
        out |= atoms(f)
    return frozenset(out)


def _rebuild(f: Formula, kids: list[Formula]) -> Formula:
    if isinstance(f, Not):
        return Not(kids[0])
    if isinstance(f, _NAry):
        return type(f)(kids)
    if isinstance(f, _Binary):
        return type(f)(kids[0], kids[1])
    return f


def rename(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Replace every atom in ``mapping`` by its image.

    Atoms outside the mapping are left alone.  The mapping must be
    injective; this is checked.
    """
    if not mapping:
        return f
    if len(set(mapping.values())) != len(mapping):
        raise ValueError("renaming is not injective")
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        if g in memo:
            return memo[g]
        if isinstance(g, Var):
            out = Var(mapping[g.name]) if g.name in mapping else g
        else:
            kids = children(g)
            out = _rebuild(g, [go(k) for k in kids]) if kids else g
        memo[g] = out
        return out

    return go(f)


def evaluate(f: Formula, model: Mapping[str, bool]) -> bool:
    """Truth value of ``f`` under ``model``.

    Raises :class:`UnassignedAtomError` if an atom of ``f`` is missing
    from the model.
    """
    missing = atoms(f) - model.keys()
    if missing:
        raise UnassignedAtomError(min(missing))
    return _eval(f, model)


def _eval(f: Formula, model: Mapping[str, bool]) -> bool:
    if isinstance(f, _Constant):
        return f.value
    if isinstance(f, Var):
        return bool(model[f.name])
    if isinstance(f, Not):
        return not _eval(f.arg, model)
    if isinstance(f, And):
        return all(_eval(g, model) for g in f.args)
    if isinstance(f, Or):
        return any(_eval(g, model) for g in f.args)
    if isinstance(f, Implies):
        return (not _eval(f.left, model)) or _eval(f.right, model)
    if isinstance(f, Iff):
        return _eval(f.left, model) == _eval(f.right, model)
    raise TypeError(f"not a formula: {f!r}")


def all_models(names: Iterable[str]) -> Iterator[dict[str, bool]]:
    """Every assignment to ``names``, in binary counting order over the
    sorted names (last name varies fastest)."""
    names = sorted(names)
    n = len(names)
    for bits in range(1 << n):
        yield {name: bool(bits >> (n - 1 - k) & 1) for k, name in enumerate(names)}


# ---------------------------------------------------------------------------
# Simplification and forgetting
# ---------------------------------------------------------------------------

def _negate(f: Formula) -> Formula:
    if f == TRUE:
        return FALSE
    if f == FALSE:
        return TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def condition(f: Formula, name: str, value: bool) -> Formula:
    """Substitute a constant for atom ``name`` and fold constants."""
    return simplify(f, {name: value})


def simplify(f: Formula, fixed: Mapping[str, bool] | None = None) -> Formula:
    """Constant folding, optionally after fixing some atoms.

    The result is equivalent to ``f`` under the fixed values; it is either
    a constant or contains no constant operands.
    """
    fixed = fixed or {}
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        if g in memo:
            return memo[g]
        if isinstance(g, Var):
            out = (TRUE if fixed[g.name] else FALSE) if g.name in fixed else g
        elif isinstance(g, _Constant):
            out = g
        elif isinstance(g, Not):
            out = _negate(go(g.arg))
        elif isinstance(g, And):
            kids = [go(k) for k in g.args]
            out = FALSE if FALSE in kids else conj(*kids)
        elif isinstance(g, Or):
            kids = [go(k) for k in g.args]
            out = TRUE if TRUE in kids else disj(*kids)
        elif isinstance(g, Implies):
            left, right = go(g.left), go(g.right)
            if left == FALSE or right == TRUE:
                out = TRUE
            elif left == TRUE:
                out = right
            elif right == FALSE:
                out = _negate(left)
            else:
                out = Implies(left, right)
        elif isinstance(g, Iff):
            left, right = go(g.left), go(g.right)
            if left == TRUE:
                out = right
            elif right == TRUE:
                out = left
            elif left == FALSE:
                out = _negate(right)
            elif right == FALSE:
                out = _negate(left)
            else:
                out = Iff(left, right)
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = out
        return out

    return go(f)


def forget(f: Formula, names: Iterable[str]) -> Formula:
    """Strongest consequence of ``f`` not mentioning ``names``.

    Shannon expansion, one atom at a time: ``f[v/true] | f[v/false]``.
    The size can double with each forgotten atom that occurs in ``f``.
    """
    out = f
    for name in sorted(set(names)):
        if name not in atoms(out):
            continue
        out = simplify(disj(condition(out, name, True), condition(out, name, False)))
    return out


# ---------------------------------------------------------------------------
# Clausification
# ---------------------------------------------------------------------------

class Lit(NamedTuple):
    atom: str
    positive: bool

    def __neg__(self) -> Lit:
        return Lit(self.atom, not self.positive)

    def __str__(self) -> str:
        return self.atom if self.positive else "~" + self.atom


Clause = frozenset  # frozenset[Lit]


def _as_literal(f: Formula) -> Lit | None:
    if isinstance(f, Var):
        return Lit(f.name, True)
    if isinstance(f, Not) and isinstance(f.arg, Var):
        return Lit(f.arg.name, False)
    return None


def _as_clause(f: Formula) -> list[Lit] | None:
    lit = _as_literal(f)
    if lit is not None:
        return [lit]
    if isinstance(f, Or):
        lits = [_as_literal(g) for g in f.args]
        if all(lit is not None for lit in lits):
            return lits  # type: ignore[return-value]
    return None


class _Tseitin:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.count = 0
        self.clauses: list[frozenset[Lit]] = []
        self.memo: dict[Formula, Lit] = {}

    def fresh(self) -> Lit:
        self.count += 1
        return Lit(f"{self.prefix}{self.count}", True)

    def lit(self, f: Formula) -> Lit:
        if f in self.memo:
            return self.memo[f]
        add = self.clauses.append
        if isinstance(f, Var):
            out = Lit(f.name, True)
        elif isinstance(f, Not):
            out = -self.lit(f.arg)
        elif isinstance(f, _Constant):
            out = self.fresh()
            add(frozenset([out if f.value else -out]))
        elif isinstance(f, (And, Or)):
            kids = [self.lit(g) for g in f.args]
            out = self.fresh()
            if isinstance(f, And):
                for k in kids:
                    add(frozenset([-out, k]))
                add(frozenset([out, *(-k for k in kids)]))
            else:
                add(frozenset([-out, *kids]))
                for k in kids:
                    add(frozenset([out, -k]))
        elif isinstance(f, Implies):
            a, b = self.lit(f.left), self.lit(f.right)
            out = self.fresh()
            add(frozenset([-out, -a, b]))
            add(frozenset([out, a]))
            add(frozenset([out, -b]))
        elif isinstance(f, Iff):
            a, b = self.lit(f.left), self.lit(f.right)
            out = self.fresh()
            add(frozenset([-out, -a, b]))
            add(frozenset([-out, a, -b]))
            add(frozenset([out, a, b]))
            add(frozenset([out, -a, -b]))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self.memo[f] = out
        return out


def to_clauses(f: Formula, aux_prefix: str = "__ts") -> list[frozenset[Lit]]:
    """Equisatisfiable clause set for ``f`` (Tseitin encoding).

    Top-level conjuncts that are already clauses are kept as they are; the
    rest get auxiliary atoms named ``<aux_prefix><n>``.  Projected onto the
    atoms of ``f``, the models of the clause set are exactly those of ``f``.
    """
    f = simplify(f)
    if f == TRUE:
        return []
    if f == FALSE:
        return [frozenset()]
    conjuncts = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.extend(reversed(g.args))
        else:
            conjuncts.append(g)
    enc = _Tseitin(aux_prefix)
    out: list[frozenset[Lit]] = []
    for g in conjuncts:
        clause = _as_clause(g)
        if clause is not None:
            out.append(frozenset(clause))
        else:
            out.append(frozenset([enc.lit(g)]))
    return out + enc.clauses


# ---------------------------------------------------------------------------
# Concrete syntax
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(<->|->|[~&|()])|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def tokenize(text: str) -> list[tuple[str, int]]:
    """Split ``text`` into ``(token, offset)`` pairs."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(3):
            raise FormulaSyntaxError(f"unexpected character {m.group(3)!r}", m.start(3))
        tok = m.group(1) or m.group(2)
        tokens.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def offset(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, tok: str) -> bool:
        if self.peek() == tok:
            self.i += 1
            return True
        return False

    def parse(self) -> Formula:
        if not self.tokens:
            raise FormulaSyntaxError("empty formula", 0)
        f = self.iff()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected {self.peek()!r}", self.offset())
        return f

    def iff(self) -> Formula:
        f = self.implies()
        while self.take("<->"):
            f = Iff(f, self.implies())
        return f

    def implies(self) -> Formula:
        f = self.disjunction()
        if self.take("->"):
            return Implies(f, self.implies())
        return f

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.take("|"):
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(args)

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.take("&"):
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(args)

    def unary(self) -> Formula:
        if self.take("~"):
            return Not(self.unary())
        if self.take("("):
            f = self.iff()
            if not self.take(")"):
                raise FormulaSyntaxError("expected ')'", self.offset())
            return f
        tok = self.peek()
        if tok is None or not (tok[0].isalpha() or tok[0] == "_"):
            what = "end of input" if tok is None else repr(tok)
            raise FormulaSyntaxError(f"expected a formula, found {what}", self.offset())
        self.i += 1
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        return Var(tok)


def parse(text: str) -> Formula:
    """Parse a formula from its concrete syntax."""
    return _Parser(text).parse()


def _wrap(f: Formula, bare: tuple[type, ...]) -> str:
    s = to_str(f)
    return s if isinstance(f, bare) else f"({s})"


_ATOMIC = (Var, _Constant, Not)


def to_str(f: Formula) -> str:
    """Print ``f`` so that :func:`parse` gives back the same structure."""
    if isinstance(f, _Constant):
        return "true" if f.value else "false"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        return "~" + _wrap(f.arg, _ATOMIC)
    if isinstance(f, And):
        return " & ".join(_wrap(g, _ATOMIC) for g in f.args)
    if isinstance(f, Or):
        return " | ".join(_wrap(g, _ATOMIC + (And,)) for g in f.args)
    if isinstance(f, Implies):
        # right operand may be a bare implication: '->' is right associative
        return (_wrap(f.left, _ATOMIC + (And, Or)) + " -> "
                + _wrap(f.right, _ATOMIC + (And, Or, Implies)))
    if isinstance(f, Iff):
        return (_wrap(f.left, _ATOMIC + (And, Or, Implies, Iff)) + " <-> "
                + _wrap(f.right, _ATOMIC + (And, Or, Implies)))
    raise TypeError(f"not a formula: {f!r}")
