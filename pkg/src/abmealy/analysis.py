"""Reachability structure of complete automata and experiment drivers.

Three instruments sit on top of the core machinery:

* strongly connected component decomposition of any finite successor graph,
  used to inspect how the orbit of the unit vector and its negation split;
* path polynomials and the search for a monic witness polynomial with
  coefficients in {-1, 0, 1} that is congruent to -1 modulo chi*, which is
  the algebraic shadow of a path carrying the unit vector to its negation;
* an exhaustive inference loop that recovers a fitting matrix for a given
  abelian machine by enumerating contracting characteristic polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .complete import (
    CompleteConfig,
    LocationMap,
    locate,
    orbit,
    residual_vector,
    unit_vector,
    verify_location,
)
from .errors import FormatError, LocateError, MatrixError
from .exactalg import (
    HalfIntegralMatrix,
    IntPolynomial,
    RationalPolynomial,
    char_poly,
    chi_star,
    companion_from_chi,
    is_contracting,
    is_irreducible,
    reduce_mod,
)
from .group import DEFAULT_BOUND
from .mealy import MealyAutomaton

# -- strongly connected components ---------------------------------------------


@dataclass(frozen=True)
class SccDecomposition:
    """Components of a finite directed graph, each sorted internally.

    The component list is ordered by least member.  `edges` holds the pairs
    of distinct component indices connected by at least one edge, and
    `cyclic[i]` says whether component i contains a cycle (more than one
    node, or a self-loop).
    """

    components: tuple[tuple, ...]
    component_of: dict
    edges: frozenset
    cyclic: tuple[bool, ...]

    @property
    def terminal_indices(self) -> tuple[int, ...]:
        out = set()
        for i, _ in self.edges:
            out.add(i)
        return tuple(
            i for i in range(len(self.components)) if i not in out
        )


def scc_decompose(graph: dict) -> SccDecomposition:
    """Tarjan's algorithm, iteratively, over a node -> successors mapping."""
    succ = {node: tuple(targets) for node, targets in graph.items()}
    for targets in succ.values():
        for t in targets:
            if t not in succ:
                raise ValueError(f"successor {t!r} is not a node of the graph")

    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    counter = 0
    raw_components: list[tuple] = []

    for root in succ:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, pi = work.pop()
            if pi == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            recurse = False
            targets = succ[node]
            for i in range(pi, len(targets)):
                t = targets[i]
                if t not in index:
                    work.append((node, i + 1))
                    work.append((t, 0))
                    recurse = True
                    break
                if t in on_stack:
                    low[node] = min(low[node], index[t])
            if recurse:
                continue
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                raw_components.append(tuple(sorted(comp)))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])

    components = tuple(sorted(raw_components, key=lambda c: c[0]))
    component_of = {}
    for i, comp in enumerate(components):
        for node in comp:
            component_of[node] = i
    edges = set()
    cyclic = [len(c) > 1 for c in components]
    for node, targets in succ.items():
        i = component_of[node]
        for t in targets:
            j = component_of[t]
            if i == j:
                cyclic[i] = True
            else:
                edges.add((i, j))
    return SccDecomposition(
        components=components,
        component_of=component_of,
        edges=frozenset(edges),
        cyclic=tuple(cyclic),
    )


# -- path polynomials and witnesses -----------------------------------------------

PATH_ALPHABET = "01n"


def path_polynomial(word: str) -> IntPolynomial:
    """Fold a word over 0/1/n into its path polynomial.

    Starting from 1, each letter multiplies by x and then adds 0, +1, or -1
    ('n' is the subtracting letter).  The result records, coefficient by
    coefficient, how a walk in a complete automaton displaces its vector.
    """
    coeffs = [1]
    for ch in word:
        if ch not in PATH_ALPHABET:
            raise FormatError(f"path letter must be one of '0', '1', 'n'; got {ch!r}")
        coeffs.insert(0, 0)
        if ch == "1":
            coeffs[0] += 1
        elif ch == "n":
            coeffs[0] -= 1
    return IntPolynomial(coeffs)


def witness_search(chi_star_poly: IntPolynomial,
                   max_degree: int = 12) -> IntPolynomial | None:
    """Least monic polynomial with coefficients in {-1,0,1} congruent to -1.

    Searches degrees upward; within a degree the choice for the constant
    term varies slowest and -1 precedes 0 precedes 1, so the first hit is
    minimal in the (degree, lexicographic) order.  Returns None when no
    witness of degree <= max_degree exists modulo chi*.
    """
    if not isinstance(chi_star_poly, IntPolynomial):
        chi_star_poly = IntPolynomial(chi_star_poly)
    if chi_star_poly.degree < 1 or not chi_star_poly.is_monic():
        raise MatrixError(f"modulus must be monic of degree >= 1, got {chi_star_poly}")
    m = chi_star_poly.degree

    def residue(p: IntPolynomial) -> tuple[int, ...]:
        r = reduce_mod(p, chi_star_poly)
        return tuple(r.coeffs) + (0,) * (m - len(r.coeffs))

    minus_one = residue(IntPolynomial((-1,)))
    x_power = [residue(IntPolynomial((0,) * i + (1,))) for i in range(max_degree + 1)]

    for degree in range(0, max_degree + 1):
        # need sum_{i<degree} c_i x^i = -1 - x^degree (mod chi*)
        target = tuple(a - b for a, b in zip(minus_one, x_power[degree]))
        found = _witness_dfs(x_power, target, degree, 0, (0,) * m, [])
        if found is not None:
            return IntPolynomial(found + [1])
    return None


def _witness_dfs(x_power, target, degree, pos, acc, chosen):
    if pos == degree:
        return list(chosen) if acc == target else None
    for c in (-1, 0, 1):
        if c == 0:
            nxt = acc
        else:
            nxt = tuple(a + c * b for a, b in zip(acc, x_power[pos]))
        chosen.append(c)
        found = _witness_dfs(x_power, target, degree, pos + 1, nxt, chosen)
        if found is not None:
            return found
        chosen.pop()
    return None


# -- one instance of the connectivity experiment -----------------------------------


@dataclass(frozen=True)
class SccInstanceReport:
    """Outcome of probing c(A, e1) on the orbits of e1 and -e1."""

    chi: RationalPolynomial
    chi_star: IntPolynomial
    states: tuple[tuple[int, ...], ...]
    decomposition: SccDecomposition
    nontrivial_components: tuple[int, ...]
    single_nontrivial: bool
    witness: IntPolynomial | None
    witness_degree: int


def check_scc_instance(A: HalfIntegralMatrix, *, witness_degree: int = 12,
                       bound: int = DEFAULT_BOUND) -> SccInstanceReport:
    """Decompose orbit(e1) union orbit(-e1) and look for a witness polynomial.

    The interesting question is whether everything apart from the zero
    vector falls into one strongly connected component; the witness, when it
    exists, certifies a path from a vector to its negation.
    """
    if not isinstance(A, HalfIntegralMatrix):
        A = HalfIntegralMatrix(A)
    chi = char_poly(A)
    star = chi_star(chi)
    e1 = unit_vector(A.dim)
    config = CompleteConfig(A, e1)
    neg = tuple(-c for c in e1)
    states = set(orbit(config, e1, bound)) | set(orbit(config, neg, bound))
    graph = {
        v: tuple(residual_vector(config, v, b)[0] for b in (0, 1)) for v in states
    }
    dec = scc_decompose(graph)
    zero = (0,) * A.dim
    nontrivial = tuple(
        i for i, comp in enumerate(dec.components) if zero not in comp
    )
    witness = witness_search(star, witness_degree)
    return SccInstanceReport(
        chi=chi,
        chi_star=star,
        states=tuple(sorted(states)),
        decomposition=dec,
        nontrivial_components=nontrivial,
        single_nontrivial=len(nontrivial) == 1,
        witness=witness,
        witness_degree=witness_degree,
    )


# -- matrix inference ----------------------------------------------------------------


@dataclass(frozen=True)
class InferResult:
    matrix: HalfIntegralMatrix
    chi: RationalPolynomial
    location: LocationMap


def infer_matrix(aut: MealyAutomaton, *, max_dim: int = 3, coeff_bound: int = 2,
                 max_len: int = 10,
                 bound: int = DEFAULT_BOUND) -> InferResult | None:
    """Search for a matrix whose complete automaton contains the machine.

    Enumerates characteristic polynomials x^m + g(x)/2 with g(0) = -1 or 1
    and the remaining coefficients of g ranging over [-coeff_bound,
    coeff_bound] in lexicographic order, keeps the contracting (and, up to
    degree 6, irreducible) ones, and accepts the first whose companion
    matrix both locates the machine and survives exhaustive word comparison
    up to max_len.  Returns None when the space is exhausted.
    """
    for m in range(1, max_dim + 1):
        for g0 in (-1, 1):
            for rest in product(range(-coeff_bound, coeff_bound + 1), repeat=m - 1):
                chi = _chi_from_g((g0,) + rest, m)
                if not is_contracting(chi):
                    continue
                if chi.degree <= 6 and not is_irreducible(chi):
                    continue
                A = companion_from_chi(chi)
                try:
                    locmap = locate(aut, A, bound=bound)
                except (LocateError, MatrixError):
                    continue
                if not verify_location(aut, A, locmap, max_len):
                    continue
                return InferResult(matrix=A, chi=chi, location=locmap)
    return None


def _chi_from_g(g: tuple[int, ...], m: int) -> RationalPolynomial:
    """x^m + g(x)/2 for an integer tuple g of length m (constant first)."""
    return RationalPolynomial([Fraction(c, 2) for c in g] + [Fraction(1)])
