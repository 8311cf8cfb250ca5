"""Component presentations of resolved collisions and the local
Tate-Shafarevich computation they feed.

After resolving a collision the central fibre is a configuration of
curves f_1, ..., f_c with multiplicities.  Each of the two branches
contributes divisors sweeping out fibre components along it; a divisor
carries the multiplicity m of the component it sweeps, the degree r of
its normalization over the branch, and the incidence vector saying how
its closure meets the central configuration.  These data assemble a
commuting square of integer matrices

    (Q/Z)^branches  --R-->  (Q/Z)^divisors_total
         |Sigma                  |N
       (Q/Z)^1      --M0-->  (Q/Z)^central

(R block-diagonal with entries m*r, N the incidence columns, M0 the
central multiplicities, Sigma a row of ones), and the local group is the
kernel of the map induced by N between the two cokernels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import PresentationInconsistent
from .exact_linalg import (
    CokernelChart,
    DivisibleGroup,
    IntMatrix,
    cokernel_chart,
    induced_kernel,
    induced_kernel_with_witnesses,
)

__all__ = [
    "DivisorRecord",
    "BranchPresentation",
    "CollisionPresentation",
    "PresentationStore",
    "assemble",
    "local_sha",
    "local_sha_with_witnesses",
    "ambient_chart",
    "builtin_presentations",
    "presentation_from_dict",
    "load_presentation_file",
]


@dataclass(frozen=True)
class DivisorRecord:
    """One divisor over a branch: component multiplicity m, normalization
    degree r over the branch, and its incidence with the central fibre."""

    m: int
    r: int
    incidence: tuple[int, ...]

    def __post_init__(self):
        if self.m < 1 or self.r < 1:
            raise PresentationInconsistent(
                f"m and r must be >= 1, got m={self.m}, r={self.r}"
            )
        if not self.incidence or all(x == 0 for x in self.incidence):
            raise PresentationInconsistent("incidence vector must be nonzero")
        if any(x < 0 for x in self.incidence):
            raise PresentationInconsistent("incidence entries must be >= 0")


@dataclass(frozen=True)
class BranchPresentation:
    fibre_type: str
    divisors: tuple[DivisorRecord, ...]

    def __post_init__(self):
        if not self.divisors:
            raise PresentationInconsistent("branch needs at least one divisor")


@dataclass(frozen=True)
class CollisionPresentation:
    """Resolved-collision data; validates the bookkeeping identity that
    each branch's divisors sweep out the whole central fibre:
    sum_i m_i * r_i * incidence_i = central multiplicities."""

    central_multiplicities: tuple[int, ...]
    branches: tuple[BranchPresentation, ...]

    def __post_init__(self):
        c = len(self.central_multiplicities)
        if c == 0 or any(m < 1 for m in self.central_multiplicities):
            raise PresentationInconsistent(
                "central multiplicities must be a nonempty positive vector"
            )
        if not self.branches:
            raise PresentationInconsistent("presentation needs at least one branch")
        for br in self.branches:
            for dv in br.divisors:
                if len(dv.incidence) != c:
                    raise PresentationInconsistent(
                        f"incidence vector {dv.incidence} has length "
                        f"{len(dv.incidence)}, expected {c}"
                    )
            total = [0] * c
            for dv in br.divisors:
                for i, x in enumerate(dv.incidence):
                    total[i] += dv.m * dv.r * x
            if tuple(total) != self.central_multiplicities:
                raise PresentationInconsistent(
                    f"branch {br.fibre_type}: divisors sweep out {tuple(total)} "
                    f"but the central fibre is {self.central_multiplicities}"
                )

    def type_pair(self) -> tuple[str, ...]:
        return tuple(br.fibre_type for br in self.branches)

    @property
    def divisor_count(self) -> int:
        return sum(len(br.divisors) for br in self.branches)


def assemble(p: CollisionPresentation) -> tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    """The four matrices (R, N, M0, Sigma) of the commuting square."""
    c = len(p.central_multiplicities)
    total = p.divisor_count
    k = len(p.branches)
    r_rows = [[0] * k for _ in range(total)]
    n_cols: list[tuple[int, ...]] = []
    row = 0
    for bi, br in enumerate(p.branches):
        for dv in br.divisors:
            r_rows[row][bi] = dv.m * dv.r
            n_cols.append(dv.incidence)
            row += 1
    r = IntMatrix.from_rows(r_rows, cols=k)
    n = IntMatrix(c, total, tuple(n_cols[j][i] for i in range(c) for j in range(total)))
    m0 = IntMatrix.column(p.central_multiplicities)
    sigma = IntMatrix(1, k, (1,) * k)
    return r, n, m0, sigma


def local_sha(p: CollisionPresentation) -> DivisibleGroup:
    """Local Tate-Shafarevich group of the resolved collision."""
    return induced_kernel(*assemble(p))


def local_sha_with_witnesses(
    p: CollisionPresentation,
) -> tuple[DivisibleGroup, list[tuple[Fraction, ...]]]:
    """Group plus one generator representative per finite invariant
    factor, expressed in the divisor coordinates of (Q/Z)^divisors."""
    return induced_kernel_with_witnesses(*assemble(p))


def ambient_chart(p: CollisionPresentation) -> CokernelChart:
    """Chart for the cokernel the witnesses live in; lets callers test
    whether two representatives define the same class."""
    r, _, _, _ = assemble(p)
    return cokernel_chart(r)


def _e(c: int, *idx: int) -> tuple[int, ...]:
    out = [0] * c
    for i in idx:
        out[i] += 1
    return tuple(out)


def builtin_presentations() -> dict[tuple[str, str], CollisionPresentation]:
    """Shipped presentations, keyed by the ordered type pair.

    I2 + I0*: the resolved central fibre has six components with
    multiplicities (1, 1, 2, 2, 1, 1).  The I2 branch sweeps two
    divisors whose closures cut out f1 + f2 + 2 f3 and 2 f4 + f5 + f6;
    the I0* branch sweeps its four outer components into f1, f2, f5, f6
    and the doubled central component into f3 + f4.
    """
    i2_i0star = CollisionPresentation(
        central_multiplicities=(1, 1, 2, 2, 1, 1),
        branches=(
            BranchPresentation(
                "I2",
                (
                    DivisorRecord(1, 1, (1, 1, 2, 0, 0, 0)),
                    DivisorRecord(1, 1, (0, 0, 0, 2, 1, 1)),
                ),
            ),
            BranchPresentation(
                "I0*",
                (
                    DivisorRecord(1, 1, _e(6, 0)),
                    DivisorRecord(1, 1, _e(6, 1)),
                    DivisorRecord(2, 1, _e(6, 2, 3)),
                    DivisorRecord(1, 1, _e(6, 4)),
                    DivisorRecord(1, 1, _e(6, 5)),
                ),
            ),
        ),
    )
    return {("I2", "I0*"): i2_i0star}


def presentation_from_dict(data: dict) -> tuple[tuple[str, str], CollisionPresentation]:
    """Build a presentation from parsed JSON; see the README for the file
    layout.  Returns (type pair, presentation)."""
    try:
        pair = tuple(str(x) for x in data["pair"])
        central = tuple(int(x) for x in data["central_multiplicities"])
        branches = []
        for br in data["branches"]:
            divisors = tuple(
                DivisorRecord(
                    int(dv["m"]), int(dv["r"]), tuple(int(x) for x in dv["incidence"])
                )
                for dv in br["divisors"]
            )
            branches.append(BranchPresentation(str(br["fibre_type"]), divisors))
    except (KeyError, TypeError, ValueError) as exc:
        raise PresentationInconsistent(f"malformed presentation data: {exc}") from exc
    if len(pair) != 2:
        raise PresentationInconsistent("pair must list exactly two fibre types")
    p = CollisionPresentation(central, tuple(branches))
    declared = p.type_pair()
    if len(declared) == 2 and set(declared) != set(pair):
        raise PresentationInconsistent(
            f"pair {pair} does not match branch types {declared}"
        )
    return (pair[0], pair[1]), p


def load_presentation_file(path) -> tuple[tuple[str, str], CollisionPresentation]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise PresentationInconsistent(f"{path}: expected a JSON object")
    return presentation_from_dict(data)


class PresentationStore:
    """Lookup of presentations by unordered type pair: the shipped
    entries plus any extension files loaded on top."""

    def __init__(self):
        self._by_pair: dict[tuple, tuple[tuple[str, str], CollisionPresentation]] = {}
        for pair, pres in builtin_presentations().items():
            self.add(pair, pres)

    @staticmethod
    def _key(pair) -> tuple:
        return tuple(sorted(pair))

    def add(self, pair: tuple[str, str], pres: CollisionPresentation) -> None:
        self._by_pair[self._key(pair)] = (pair, pres)

    def load_file(self, path) -> tuple[str, str]:
        pair, pres = load_presentation_file(path)
        self.add(pair, pres)
        return pair

    def load_directory(self, dirpath) -> list[tuple[str, str]]:
        import os

        loaded = []
        for name in sorted(os.listdir(dirpath)):
            if name.endswith(".json"):
                loaded.append(self.load_file(os.path.join(dirpath, name)))
        return loaded

    def lookup(self, left: str, right: str) -> CollisionPresentation | None:
        entry = self._by_pair.get(self._key((left, right)))
        return entry[1] if entry else None
