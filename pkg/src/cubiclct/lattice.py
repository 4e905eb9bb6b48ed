"""Dynkin data for ADE types and crepant-resolution intersection lattices.

Node orderings are fixed once and for all:

* ``A_n``  -- left-to-right chain ``E1 - E2 - ... - En``;
* ``D_n``  -- ``(outer1, outer2, chain..., fork)`` with the fork node last,
  adjacent to both outer nodes and to the near end of the chain
  (for ``D4`` this reads ``(outer1, outer2, outer3, center)``);
* ``E6``   -- a five-node chain ``E1..E5`` with the branch node ``E6``
  attached at ``E3``.

Fixtures state their orientation explicitly; reversed ``A_n`` data is
normalized by the loader using the chain-reversal symmetry.

Every exceptional curve is a (-2)-curve, so all discrepancies vanish and
the Cartan matrix ``(-Ei . Ej)`` has 2 on the diagonal and -1 exactly at
the Dynkin edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Rat

from cubiclct.qexact import QMatrix, solve_linear_system


class UnsupportedType(ValueError):
    """ADE type outside the cubic-surface range (for instance E7 or E8)."""


class MalformedTower(ValueError):
    """A blowup step references a divisor that does not exist yet."""


@dataclass(frozen=True)
class AdeType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in ("A", "D", "E"):
            raise UnsupportedType(f"unknown family {self.family!r}")
        if self.family == "A" and self.rank < 1:
            raise UnsupportedType("A_n needs rank >= 1")
        if self.family == "D" and self.rank < 4:
            raise UnsupportedType("D_n needs rank >= 4")
        if self.family == "E" and self.rank != 6:
            raise UnsupportedType("only E6 occurs on cubic surfaces")

    @staticmethod
    def parse(label: str) -> "AdeType":
        label = label.strip()
        if len(label) < 2 or label[0] not in "ADE":
            raise UnsupportedType(f"bad ADE label {label!r}")
        return AdeType(label[0], int(label[1:]))

    @property
    def label(self) -> str:
        return f"{self.family}{self.rank}"

    def edges(self) -> list[tuple[int, int]]:
        """Dynkin edges as 0-based index pairs in canonical node order."""
        n = self.rank
        if self.family == "A":
            return [(i, i + 1) for i in range(n - 1)]
        if self.family == "D":
            fork = n - 1
            out = [(0, fork), (1, fork)]
            chain = list(range(2, n - 1))
            out.extend((chain[i], chain[i + 1]) for i in range(len(chain) - 1))
            if chain:
                out.append((chain[-1], fork))
            return sorted(out)
        # E6: chain 0-1-2-3-4, branch node 5 at index 2
        return [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]

    def __str__(self) -> str:
        return self.label


def cartan_matrix(ade: AdeType) -> QMatrix:
    """The intersection matrix ``(-Ei . Ej)`` of the exceptional curves."""
    n = ade.rank
    rows = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in ade.edges():
        rows[i][j] = rows[j][i] = -1
    return QMatrix.from_rows(rows)


@dataclass(frozen=True)
class ResolutionLattice:
    """Exceptional lattice of the crepant resolution over one singular point."""

    ade: AdeType
    nodes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.nodes:
            object.__setattr__(self, "nodes",
                               tuple(f"E{i+1}" for i in range(self.ade.rank)))
        if len(self.nodes) != self.ade.rank:
            raise ValueError("node count does not match rank")

    @property
    def rank(self) -> int:
        return self.ade.rank

    def cartan(self) -> QMatrix:
        return cartan_matrix(self.ade)

    def adjacency(self) -> QMatrix:
        n = self.rank
        rows = [[0] * n for _ in range(n)]
        for i, j in self.ade.edges():
            rows[i][j] = rows[j][i] = 1
        return QMatrix.from_rows(rows)

    def node_index(self, name: str) -> int:
        try:
            return self.nodes.index(name)
        except ValueError:
            raise KeyError(f"no exceptional curve named {name!r}") from None


@dataclass(frozen=True)
class PullbackVector:
    """Coefficients c with Cartan . c = incidence, for one curve at one point."""

    curve: str
    incidence: tuple[int, ...]
    coefficients: tuple[Rat, ...]


def pullback_coefficients(lattice: ResolutionLattice,
                          incidence: list[int],
                          curve: str = "") -> PullbackVector:
    """Solve ``Cartan . c = incidence`` exactly.

    The inverse Cartan matrix is entrywise positive, so for a nonzero
    incidence vector every coefficient is strictly positive.
    """
    if len(incidence) != lattice.rank:
        raise ValueError("incidence length does not match lattice rank")
    if any(v < 0 for v in incidence):
        raise ValueError("incidence numbers are nonnegative")
    coeffs = solve_linear_system(lattice.cartan(), [Rat(v) for v in incidence])
    return PullbackVector(curve, tuple(incidence), tuple(coeffs))


def exceptional_nef_rows(lattice: ResolutionLattice) -> list[dict[str, Rat]]:
    """Per node j, the linear form (Cartan row j) . a, to be constrained >= 0.

    Variables are named ``a1 .. ak`` in canonical node order.
    """
    cartan = lattice.cartan()
    forms = []
    for i in range(lattice.rank):
        form = {f"a{j+1}": cartan[i, j] for j in range(lattice.rank) if cartan[i, j] != 0}
        forms.append(form)
    return forms


@dataclass(frozen=True)
class TowerStep:
    """One blowup: the center is named by the divisors passing through it."""

    name: str
    strict_curves: tuple[tuple[str, int], ...]  # (curve id, multiplicity at center)
    exceptionals: tuple[str, ...]               # ADE node ids or earlier step names


@dataclass(frozen=True)
class BlowupTower:
    steps: tuple[TowerStep, ...]


def tower_log_discrepancy(tower: BlowupTower,
                          strict_mults: dict[str, Rat],
                          base_ord: dict[str, Rat]) -> list[tuple[str, Rat, Rat]]:
    """Log-discrepancy bookkeeping along a tower of smooth blowups.

    ``strict_mults`` maps boundary curve ids to their multiplicity in the
    boundary divisor; ``base_ord`` maps initial exceptional ids to the
    boundary's order along them (ADE exceptionals carry discrepancy 0).
    Returns ``(name, a_F, ord_F)`` per tower divisor, where

        a_F   = 1 + sum of a_E over exceptional divisors through the center,
        ord_F = (sum of strict multiplicities at the center)
                + sum of ord_E over exceptional divisors through the center.
    """
    disc: dict[str, Rat] = {name: Rat(0) for name in base_ord}
    ords: dict[str, Rat] = dict(base_ord)
    out = []
    for step in tower.steps:
        a_f = Rat(1)
        ord_f = Rat(0)
        for curve, mult in step.strict_curves:
            if curve not in strict_mults:
                raise MalformedTower(f"step {step.name}: unknown curve {curve!r}")
            ord_f += strict_mults[curve] * mult
        for exc in step.exceptionals:
            if exc not in ords:
                raise MalformedTower(f"step {step.name}: unknown divisor {exc!r}")
            a_f += disc[exc]
            ord_f += ords[exc]
        disc[step.name] = a_f
        ords[step.name] = ord_f
        out.append((step.name, a_f, ord_f))
    return out
