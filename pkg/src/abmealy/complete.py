"""Complete abelian automata over integer lattices, and locating machines in them.

For a half-integral matrix A of dimension m (half-integers in the first
column, integers elsewhere, det = +-1/2) and an odd integer vector e (odd
first coordinate), the complete automaton c(A, e) has state set Z^m with

    even v (first coordinate even):   v --b/b--> A v
    odd  v (first coordinate odd):    v --0/1--> A (v - e),   v --1/0--> A (v + e)

Both images are integral because A doubles exactly the odd first
coordinates.  When the characteristic polynomial of A is contracting (all
roots strictly inside the unit disk) every vector has a finite reachable
orbit, so finite sub-machines of c(A, e) can be cut out and compared with
ordinary Mealy automata.

`locate` embeds an abelian Mealy automaton into c(A, e): it anchors the
least odd state on a cycle at the first unit vector, solves the resulting
exact linear cycle equation for e, and propagates vectors across the
machine, failing loudly whenever the matrix cannot fit.

Polynomials enter through the module action of x as A^-1: a polynomial p
names the vector p(A^-1) e1, and scaling by a polynomial r realises the
embeddings between complete automata whose translation vectors are related
by r.  The fraction-like pairs (v, p) with odd p(0) form the direct limit of
all these embeddings; they are compared by cross multiplication.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from itertools import product

from .errors import (
    BoundExceededError,
    FormatError,
    LocateError,
    MatrixError,
    NotDivisibleError,
)
from .exactalg import (
    HalfIntegralMatrix,
    IntPolynomial,
    RationalMatrix,
    _as_int_poly,
    _doubled_int_rows,
    _inverse_int_rows,
    char_poly,
    chi_star,
    is_contracting,
    is_irreducible,
    reduce_mod,
    try_divide_mod,
)
from .group import DEFAULT_BOUND, _require_abelian_free
from .mealy import MealyAutomaton, Parity

# -- integer vectors ------------------------------------------------------------


def format_vector(v) -> str:
    return "(" + ",".join(str(int(c)) for c in v) + ")"


def parse_vector(text: str) -> tuple[int, ...]:
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    parts = s.split(",") if "," in s else s.split()
    try:
        v = tuple(int(p.strip()) for p in parts if p.strip() != "")
    except ValueError:
        raise FormatError(f"bad integer vector {text!r}") from None
    if not v:
        raise FormatError(f"bad integer vector {text!r}")
    return v


def vector_label(v) -> str:
    """State label for a vector: components joined by underscores."""
    return "_".join(str(int(c)) for c in v)


def unit_vector(m: int) -> tuple[int, ...]:
    if m < 1:
        raise MatrixError("dimension must be positive")
    return (1,) + (0,) * (m - 1)


def _coerce_vector(v, m: int) -> tuple[int, ...]:
    out = tuple(int(c) for c in v)
    if len(out) != m:
        raise MatrixError(f"vector {format_vector(out)} has length {len(out)}, need {m}")
    return out


def _apply_int(rows, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in rows)


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


# -- complete automaton ----------------------------------------------------------


@dataclass(frozen=True)
class CompleteConfig:
    """A matrix A and an odd translation vector e defining c(A, e)."""

    A: HalfIntegralMatrix
    e: tuple[int, ...]
    non_contracting: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.A, HalfIntegralMatrix):
            object.__setattr__(self, "A", HalfIntegralMatrix(self.A))
        object.__setattr__(self, "e", _coerce_vector(self.e, self.A.dim))
        if self.e[0] % 2 == 0:
            raise MatrixError(
                f"translation vector {format_vector(self.e)} must have odd "
                "first coordinate"
            )
        if not self.non_contracting and not is_contracting(char_poly(self.A)):
            raise MatrixError(
                "characteristic polynomial is not contracting; pass "
                "non_contracting=True to allow infinite orbits"
            )

    @property
    def dim(self) -> int:
        return self.A.dim


def residual_vector(config: CompleteConfig, v, bit: int) -> tuple[tuple[int, ...], int]:
    """One step of c(A, e) from v on the given input bit: (next vector, output)."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    v = _coerce_vector(v, config.dim)
    if v[0] % 2 == 0:
        w, out = v, bit
    elif bit == 0:
        w, out = _vsub(v, config.e), 1
    else:
        w, out = _vadd(v, config.e), 0
    doubled = _apply_int(_doubled_int_rows(config.A), w)
    assert all(c % 2 == 0 for c in doubled)
    return tuple(c // 2 for c in doubled), out


def transduce_vector(config: CompleteConfig, v, word: str) -> str:
    """Output word of c(A, e) run from v on a binary input word."""
    v = _coerce_vector(v, config.dim)
    out = []
    for ch in word:
        if ch not in "01":
            raise FormatError(f"word must be over 0/1, got {ch!r}")
        v, b = residual_vector(config, v, int(ch))
        out.append(str(b))
    return "".join(out)


def orbit(config: CompleteConfig, start, bound: int = DEFAULT_BOUND) -> list[tuple[int, ...]]:
    """All vectors reachable from start, in breadth-first discovery order."""
    start = _coerce_vector(start, config.dim)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for bit in (0, 1):
            w, _ = residual_vector(config, v, bit)
            if w not in seen:
                if len(seen) >= bound:
                    raise BoundExceededError(
                        f"orbit exceeded {bound} vectors; raise the bound or "
                        "check that the matrix is contracting"
                    )
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def orbit_automaton(config: CompleteConfig, starts, name: str | None = None,
                    bound: int = DEFAULT_BOUND) -> MealyAutomaton:
    """Finite sub-machine of c(A, e) on everything reachable from starts.

    States are labelled through `vector_label`.
    """
    starts = [_coerce_vector(s, config.dim) for s in starts]
    if not starts:
        raise MatrixError("need at least one start vector")
    reached: dict[tuple[int, ...], str] = {}
    queue = deque()
    for s in starts:
        if s not in reached:
            reached[s] = vector_label(s)
            queue.append(s)
    transitions = {}
    while queue:
        v = queue.popleft()
        for bit in (0, 1):
            w, out = residual_vector(config, v, bit)
            if w not in reached:
                if len(reached) >= bound:
                    raise BoundExceededError(f"orbit exceeded {bound} vectors")
                reached[w] = vector_label(w)
                queue.append(w)
            transitions[(reached[v], bit)] = (reached[w], out)
    if name is None:
        name = f"orbit_{vector_label(starts[0])}"
    return MealyAutomaton(transitions, name=name)


# -- polynomial coordinates -------------------------------------------------------


def poly_action(p, v, A: HalfIntegralMatrix) -> tuple[int, ...]:
    """p(A^-1) v for an integer polynomial p: the module action of Z[x]."""
    p = _as_int_poly(p)
    if p is NotImplemented:
        raise TypeError("integer polynomial expected")
    v = _coerce_vector(v, A.dim)
    inv = _inverse_int_rows(A)
    acc = (0,) * A.dim
    for c in reversed(p.coeffs):
        acc = _apply_int(inv, acc)
        if c:
            acc = _vadd(acc, tuple(c * x for x in v))
    return acc


def poly_to_vector(p, A: HalfIntegralMatrix) -> tuple[int, ...]:
    """The vector named by p: p(A^-1) applied to the first unit vector."""
    return poly_action(p, unit_vector(A.dim), A)


def vector_to_poly(v, A: HalfIntegralMatrix,
                   assume_irreducible: bool = False) -> IntPolynomial:
    """Inverse of poly_to_vector: the integer polynomial naming v.

    Requires the characteristic polynomial to be irreducible so that the
    powers of A^-1 applied to e1 form a basis; pass assume_irreducible=True
    to skip that check (needed beyond degree 6, where irreducibility is not
    decided here).
    """
    m = A.dim
    v = _coerce_vector(v, m)
    if not assume_irreducible and not is_irreducible(char_poly(A)):
        raise MatrixError(
            "characteristic polynomial is reducible; polynomial coordinates "
            "are not canonical (pass assume_irreducible=True to override)"
        )
    inv = _inverse_int_rows(A)
    cols = []
    b = unit_vector(m)
    for _ in range(m):
        cols.append(b)
        b = _apply_int(inv, b)
    basis = RationalMatrix(tuple(tuple(cols[j][i] for j in range(m)) for i in range(m)))
    if basis.det() == 0:
        raise MatrixError(
            "powers of the inverse matrix applied to e1 are linearly "
            "dependent; no polynomial names this vector uniquely"
        )
    sol = basis.solve(v)
    assert sol is not None
    if any(x.denominator != 1 for x in sol):
        raise MatrixError(
            f"vector {format_vector(v)} is not an integer polynomial multiple "
            "of e1"
        )
    return IntPolynomial(int(x) for x in sol)


# -- location maps -----------------------------------------------------------------


@dataclass(frozen=True)
class LocationMap:
    """An embedding of a Mealy automaton into a complete automaton.

    p names the translation vector (e = p(A^-1) e1), e is that vector, and
    assignment sends each state label to its vector.  Serialized form::

        p: 3 + 2x
        e: (3,2)
        state f -> (1,0)
    """

    p: IntPolynomial
    e: tuple[int, ...]
    assignment: dict[str, tuple[int, ...]]

    def __post_init__(self):
        if not isinstance(self.p, IntPolynomial):
            object.__setattr__(self, "p", IntPolynomial(self.p))
        object.__setattr__(self, "e", tuple(int(c) for c in self.e))
        object.__setattr__(
            self,
            "assignment",
            {s: tuple(int(c) for c in v) for s, v in self.assignment.items()},
        )

    def serialize(self) -> str:
        lines = [f"p: {self.p}", f"e: {format_vector(self.e)}"]
        for s in sorted(self.assignment):
            lines.append(f"state {s} -> {format_vector(self.assignment[s])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "LocationMap":
        p = None
        e = None
        assignment: dict[str, tuple[int, ...]] = {}
        for n, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("p:"):
                if p is not None:
                    raise FormatError("duplicate p line", line=n)
                try:
                    p = parse_int_poly(line[2:].strip())
                except FormatError as exc:
                    raise FormatError(str(exc), line=n) from None
            elif line.startswith("e:"):
                if e is not None:
                    raise FormatError("duplicate e line", line=n)
                e = _parse_vector_at(line[2:], n)
            elif line.startswith("state "):
                body = line[len("state "):]
                if "->" not in body:
                    raise FormatError("expected 'state <label> -> (v)'", line=n)
                label, _, vec = body.partition("->")
                label = label.strip()
                if not label:
                    raise FormatError("missing state label", line=n)
                if label in assignment:
                    raise FormatError(f"duplicate state {label!r}", line=n)
                assignment[label] = _parse_vector_at(vec, n)
            else:
                raise FormatError(f"unrecognized line {line!r}", line=n)
        if p is None:
            raise FormatError("missing p line")
        if e is None:
            raise FormatError("missing e line")
        return cls(p=p, e=e, assignment=assignment)

    def validate(self, aut: MealyAutomaton, A: HalfIntegralMatrix) -> None:
        """Check structurally that the assignment is a machine homomorphism.

        Every state must be mapped to a vector of the right parity whose
        residuals in c(A, e) track the automaton's transitions bit for bit.
        Raises LocateError on the first violation.
        """
        config = CompleteConfig(A, self.e, non_contracting=True)
        missing = sorted(set(aut.states) - set(self.assignment))
        if missing:
            raise LocateError(f"states missing from the map: {', '.join(missing)}")
        for s in aut.states:
            v = self.assignment[s]
            odd = aut.state_parity(s) is Parity.ODD
            if (v[0] % 2 == 1) != odd:
                raise LocateError(
                    f"state {s} has parity {aut.state_parity(s)} but vector "
                    f"{format_vector(v)}"
                )
            for bit in (0, 1):
                t, out = aut.step(s, bit)
                w, wout = residual_vector(config, v, bit)
                if wout != out:
                    raise LocateError(
                        f"state {s} on input {bit}: automaton outputs {out}, "
                        f"vector {format_vector(v)} outputs {wout}"
                    )
                if self.assignment.get(t) != w:
                    raise LocateError(
                        f"state {s} on input {bit}: automaton moves to {t} at "
                        f"{format_vector(self.assignment.get(t, ()))}, vector "
                        f"moves to {format_vector(w)}"
                    )


def _parse_vector_at(text: str, line: int) -> tuple[int, ...]:
    try:
        return parse_vector(text)
    except FormatError as exc:
        raise FormatError(str(exc), line=line) from None


def parse_int_poly(text: str) -> IntPolynomial:
    """Parse '3 + 2x - x^2' or the coefficient list '3 2 -1' (constant first)."""
    toks = text.split()
    if toks and all(_is_int(t) for t in toks):
        return IntPolynomial(int(t) for t in toks)
    s = text.replace(" ", "")
    if not s:
        raise FormatError("empty polynomial")
    if s == "0":
        return IntPolynomial()
    coeffs: dict[int, int] = {}
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise FormatError(f"bad polynomial {text!r}")
    for term in terms:
        sign = 1
        body = term
        if body[0] in "+-":
            sign = -1 if body[0] == "-" else 1
            body = body[1:]
        m = re.fullmatch(r"(\d+)?x(?:\^(\d+))?", body)
        if m:
            c = int(m.group(1)) if m.group(1) else 1
            k = int(m.group(2)) if m.group(2) else 1
        elif _is_int(body) and body and body[0] != "-":
            c, k = int(body), 0
        else:
            raise FormatError(f"bad polynomial term {term!r} in {text!r}")
        coeffs[k] = coeffs.get(k, 0) + sign * c
    deg = max(coeffs)
    return IntPolynomial(coeffs.get(i, 0) for i in range(deg + 1))


def _is_int(tok: str) -> bool:
    try:
        int(tok)
        return True
    except ValueError:
        return False


# -- locating a machine -------------------------------------------------------------


def _self_reachable(aut: MealyAutomaton, s: str) -> bool:
    seen = set()
    queue = deque(aut.residual(s, b) for b in (0, 1))
    while queue:
        t = queue.popleft()
        if t == s:
            return True
        if t in seen:
            continue
        seen.add(t)
        queue.extend(aut.residual(t, b) for b in (0, 1))
    return False


def _cycle_words(aut: MealyAutomaton, anchor: str, max_len: int):
    """Words that walk anchor back to itself, by (length, lexicographic) order."""
    back = {s: [] for s in aut.states}
    for s in aut.states:
        for b in (0, 1):
            back[aut.residual(s, b)].append(s)
    dist = {anchor: 0}
    queue = deque([anchor])
    while queue:
        t = queue.popleft()
        for s in back[t]:
            if s not in dist:
                dist[s] = dist[t] + 1
                queue.append(s)

    def walk(state: str, remaining: int, word: list[str]):
        if remaining == 0:
            if state == anchor:
                yield "".join(word)
            return
        for b in (0, 1):
            t = aut.residual(state, b)
            if dist.get(t, max_len + 1) <= remaining - 1:
                word.append(str(b))
                yield from walk(t, remaining - 1, word)
                word.pop()

    for length in range(1, max_len + 1):
        yield from walk(anchor, length, [])


def _sigma(parity: Parity, bit: int) -> int:
    if parity is not Parity.ODD:
        return 0
    return -1 if bit == 0 else 1


def locate(aut: MealyAutomaton, A: HalfIntegralMatrix, *,
           bound: int = DEFAULT_BOUND, cycle_limit: int = 64) -> LocationMap:
    """Embed an abelian automaton into a complete automaton over A.

    The least odd state lying on a cycle is pinned to the first unit vector;
    walking one of its cycles gives an exact linear equation whose unique
    solution is the translation vector e, and breadth-first propagation in
    both directions assigns every remaining state.  Any inconsistency
    (non-integral or even e, parity or transition mismatch, unreachable
    states) raises LocateError: the matrix does not fit the machine.
    """
    if not isinstance(A, HalfIntegralMatrix):
        A = HalfIntegralMatrix(A)
    chi = char_poly(A)
    if not is_contracting(chi):
        raise MatrixError(f"characteristic polynomial {chi} is not contracting")
    _require_abelian_free(aut, bound)

    parity = {s: aut.state_parity(s) for s in aut.states}
    anchor = next(
        (s for s in aut.states
         if parity[s] is Parity.ODD and _self_reachable(aut, s)),
        None,
    )
    if anchor is None:
        raise LocateError("no odd state lies on a cycle")

    m = A.dim
    e1 = unit_vector(m)
    M = A.inner
    eye = RationalMatrix.identity(m)

    e = None
    tried = 0
    max_len = 2 * len(aut.states) + 2
    for word in _cycle_words(aut, anchor, max_len):
        L = len(word)
        powers = [eye]
        for _ in range(L):
            powers.append(M @ powers[-1])
        lhs = None
        state = anchor
        for i, ch in enumerate(word):
            sig = _sigma(parity[state], int(ch))
            if sig:
                term = powers[L - i].scale(sig)
                lhs = term if lhs is None else lhs + term
            state = aut.residual(state, int(ch))
        if lhs is None or lhs.det() == 0:
            tried += 1
            if tried >= cycle_limit:
                break
            continue
        rhs = (eye - powers[L]).apply(e1)
        sol = lhs.solve(rhs)
        assert sol is not None
        if any(x.denominator != 1 for x in sol) or sol[0].numerator % 2 == 0:
            raise LocateError(
                f"cycle {word!r} at {anchor} forces translation vector "
                f"({', '.join(str(x) for x in sol)}), which is not an odd "
                "integer vector; the matrix does not fit"
            )
        e = tuple(int(x) for x in sol)
        break
    if e is None:
        raise LocateError(
            f"no cycle through {anchor} determines a translation vector "
            f"(tried words up to length {max_len})"
        )

    config = CompleteConfig(A, e)
    inv = _inverse_int_rows(A)
    assignment = {anchor: e1}
    queue = deque([anchor])
    back = {s: [] for s in aut.states}
    for s in aut.states:
        for b in (0, 1):
            back[aut.residual(s, b)].append((s, b))
    while queue:
        s = queue.popleft()
        v = assignment[s]
        if (v[0] % 2 == 1) != (parity[s] is Parity.ODD):
            raise LocateError(
                f"state {s} has parity {parity[s]} but was forced to vector "
                f"{format_vector(v)}; the matrix does not fit"
            )
        for bit in (0, 1):
            t, out = aut.step(s, bit)
            w, wout = residual_vector(config, v, bit)
            if wout != out:
                raise LocateError(
                    f"state {s} on input {bit} outputs {out}, but its vector "
                    f"{format_vector(v)} outputs {wout}"
                )
            if t in assignment:
                if assignment[t] != w:
                    raise LocateError(
                        f"state {t} is forced to both "
                        f"{format_vector(assignment[t])} and {format_vector(w)}; "
                        "the matrix does not fit"
                    )
            else:
                assignment[t] = w
                queue.append(t)
        for u, bit in back[s]:
            if u in assignment:
                continue
            w = _apply_int(inv, v)
            sig = _sigma(parity[u], bit)
            if sig:
                w = _vsub(w, tuple(sig * c for c in e))
            assignment[u] = w
            queue.append(u)
    missing = sorted(set(aut.states) - set(assignment))
    if missing:
        raise LocateError(
            f"states not connected to {anchor}: {', '.join(missing)}"
        )

    p = vector_to_poly(e, A, assume_irreducible=True)
    return LocationMap(p=p, e=e, assignment=assignment)


@dataclass(frozen=True)
class Mismatch:
    state: str
    word: str
    automaton_output: str
    vector_output: str


def find_location_mismatch(aut: MealyAutomaton, A: HalfIntegralMatrix,
                           locmap: LocationMap,
                           max_len: int = 10) -> Mismatch | None:
    """Compare transductions of every state against its vector, word by word.

    Runs every non-empty word up to max_len through both machines
    independently and reports the first disagreement.  This is deliberately
    brute force: it shares no code with `locate` or `LocationMap.validate`.
    """
    config = CompleteConfig(A, locmap.e, non_contracting=True)
    for s in aut.states:
        if s not in locmap.assignment:
            raise LocateError(f"state {s} missing from the map")
        v = locmap.assignment[s]
        for length in range(1, max_len + 1):
            for bits in product("01", repeat=length):
                word = "".join(bits)
                got = aut.transduce(s, word)
                want = transduce_vector(config, v, word)
                if got != want:
                    return Mismatch(s, word, got, want)
    return None


def verify_location(aut: MealyAutomaton, A: HalfIntegralMatrix,
                    locmap: LocationMap, max_len: int = 10) -> bool:
    return find_location_mismatch(aut, A, locmap, max_len) is None


# -- embeddings between complete automata ---------------------------------------------


def embed_scale(p, q, chi_star_poly: IntPolynomial) -> IntPolynomial:
    """The scale r with r p = q in Z[x]/chi*, if q's machine swallows p's.

    Raises NotDivisibleError when no integral r exists.
    """
    r = try_divide_mod(q, p, chi_star_poly)
    if r is None:
        raise NotDivisibleError(
            f"({q}) is not divisible by ({p}) modulo {chi_star_poly}"
        )
    return r


# -- the limit group of all complete automata over A -----------------------------------


@dataclass(frozen=True)
class GTildeElement:
    """A fraction v / p: vector v scaled down by a polynomial with odd constant."""

    v: tuple[int, ...]
    p: IntPolynomial

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(int(c) for c in self.v))
        if not isinstance(self.p, IntPolynomial):
            object.__setattr__(self, "p", IntPolynomial(self.p))
        if self.p.constant % 2 == 0:
            raise MatrixError(
                f"denominator polynomial {self.p} must have odd constant term"
            )

    def __str__(self):
        return f"{format_vector(self.v)} / ({self.p})"


def gtilde_eq(a: GTildeElement, b: GTildeElement, A: HalfIntegralMatrix) -> bool:
    """Cross-multiplied equality: q . v == p . w under the module action."""
    return poly_action(b.p, a.v, A) == poly_action(a.p, b.v, A)


def gtilde_add(a: GTildeElement, b: GTildeElement,
               A: HalfIntegralMatrix) -> GTildeElement:
    star = chi_star(char_poly(A))
    v = _vadd(poly_action(b.p, a.v, A), poly_action(a.p, b.v, A))
    return GTildeElement(v, reduce_mod(a.p * b.p, star))


def gtilde_neg(a: GTildeElement) -> GTildeElement:
    return GTildeElement(tuple(-c for c in a.v), a.p)


def gtilde_residual(a: GTildeElement, bit: int,
                    A: HalfIntegralMatrix) -> tuple[GTildeElement, int]:
    """Step the numerator inside c(A, p . e1); the denominator rides along."""
    e = poly_to_vector(a.p, A)
    config = CompleteConfig(A, e, non_contracting=True)
    w, out = residual_vector(config, a.v, bit)
    return GTildeElement(w, a.p), out
