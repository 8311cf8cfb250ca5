"""Collisions of discriminant branches and their resolution by blowing
up the base.

A collision is a point where two smooth discriminant branches cross
normally.  The engine works in a monomial local model: a and b are
monomials in local coordinates times units, so the valuation of each of
a, b, Delta along the exceptional curve of a blow-up is the sum of its
valuations along the two branches.  Sums that cannot satisfy the
discriminant relation do not come from such a model and are rejected as
ProfileInconsistent.

Blowing up repeatedly drives every collision to one of the seven
resolvable patterns (the worklist stays within a small depth in
practice) or dissolves it entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import (
    AllZero,
    DepthExceeded,
    InvalidCollision,
    InvalidProfile,
    NegativeCorank,
    NotMirandaAllowed,
    ProfileInconsistent,
)
from .exact_linalg import DivisibleGroup
from .weierstrass import (
    INFINITY,
    KodairaType,
    ValuationProfile,
    classify,
    is_infinite,
    minimalize,
)

__all__ = [
    "BranchGerm",
    "CollisionPoint",
    "BlowupResult",
    "BlowupNode",
    "BlowupTree",
    "MultipleFibreVerdict",
    "is_miranda_allowed",
    "blow_up",
    "miranda_reduce",
    "expected_local_sha",
    "multiple_fibre_verdict",
    "corank",
    "delta_eta_gcd",
]

ALLOWED = "allowed"
DISSOLVED = "dissolved"
BLOWN_UP = "blown-up"

DEFAULT_MAX_DEPTH = 64


@dataclass(frozen=True)
class BranchGerm:
    """One smooth discriminant branch through a point, carrying a minimal
    valuation profile and the fibre type it classifies to."""

    name: str
    profile: ValuationProfile

    def __post_init__(self):
        # classify rejects non-minimal profiles, which is exactly the
        # minimality contract for a germ
        object.__setattr__(self, "_fibre_type", classify(self.profile))

    @property
    def fibre_type(self) -> KodairaType:
        return self._fibre_type

    @property
    def is_degenerate(self) -> bool:
        return self.profile.vdelta >= 1


@dataclass(frozen=True)
class CollisionPoint:
    """A normal crossing of two discriminant branches; both sides must
    actually lie in the discriminant (vdelta >= 1)."""

    left: BranchGerm
    right: BranchGerm

    def __post_init__(self):
        for side, germ in (("left", self.left), ("right", self.right)):
            if germ.profile.vdelta < 1:
                raise InvalidCollision(
                    f"{side} branch {germ.name!r} has vdelta = 0 and is not "
                    "part of the discriminant"
                )

    def swapped(self) -> "CollisionPoint":
        return CollisionPoint(self.right, self.left)

    def type_pair(self) -> tuple[KodairaType, KodairaType]:
        return (self.left.fibre_type, self.right.fibre_type)


def is_miranda_allowed(left: KodairaType, right: KodairaType) -> bool:
    """Whether the unordered type pair is directly resolvable:
    I+I, I+I*, II+IV, II+I0*, II+IV*, IV+I0*, III+I0*."""
    for a, b in ((left, right), (right, left)):
        if a.is_multiplicative and (b.is_multiplicative or b.kind == "I*"):
            return True
        pair = (str(a), str(b))
        if pair in {
            ("II", "IV"),
            ("II", "I0*"),
            ("II", "IV*"),
            ("IV", "I0*"),
            ("III", "I0*"),
        }:
            return True
    return False


def _sum_valuation(x, y):
    if is_infinite(x) or is_infinite(y):
        return INFINITY
    return x + y


@dataclass(frozen=True)
class BlowupResult:
    exceptional: BranchGerm
    twist_count: int
    left_child: CollisionPoint | None
    right_child: CollisionPoint | None

    @property
    def dissolved(self) -> bool:
        return self.left_child is None


def blow_up(c: CollisionPoint) -> BlowupResult:
    """Blow up the collision point once.

    The exceptional curve meets the strict transforms of both branches;
    its raw profile is the componentwise sum of the branch profiles,
    which is then made minimal and classified.  Each original branch now
    crosses the exceptional curve at a separate point; those two child
    crossings are returned, or dropped when the exceptional fibre is
    smooth (vdelta = 0) and no collision remains.
    """
    l, r = c.left.profile, c.right.profile
    va = _sum_valuation(l.va, r.va)
    vb = _sum_valuation(l.vb, r.vb)
    vd = l.vdelta + r.vdelta
    try:
        raw = ValuationProfile(va, vb, vd)
    except InvalidProfile as exc:
        raise ProfileInconsistent(
            f"summed profile ({va}, {vb}, {vd}) of {c.left.name!r} + "
            f"{c.right.name!r} admits no monomial model: {exc}"
        ) from exc
    minimal, twists = minimalize(raw)
    exceptional = BranchGerm(f"E({c.left.name}|{c.right.name})", minimal)
    if minimal.vdelta == 0:
        return BlowupResult(exceptional, twists, None, None)
    return BlowupResult(
        exceptional,
        twists,
        CollisionPoint(c.left, exceptional),
        CollisionPoint(c.right, exceptional),
    )


@dataclass(frozen=True)
class BlowupNode:
    """One crossing in the resolution tree.  status is "allowed"
    (resolvable leaf), "dissolved" (one side left the discriminant), or
    "blown-up" (internal node with two children)."""

    left: BranchGerm
    right: BranchGerm
    depth: int
    path: str
    status: str
    exceptional: BranchGerm | None = None
    twist_count: int = 0
    children: tuple["BlowupNode", "BlowupNode"] | None = None

    def type_pair(self) -> tuple[KodairaType, KodairaType]:
        return (self.left.fibre_type, self.right.fibre_type)


@dataclass(frozen=True)
class BlowupTree:
    root: BlowupNode

    def leaves(self) -> list[BlowupNode]:
        """Leaves in left-to-right order."""
        out: list[BlowupNode] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.children is None:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def allowed_leaves(self) -> list[BlowupNode]:
        return [n for n in self.leaves() if n.status == ALLOWED]

    def height(self) -> int:
        return max(n.depth for n in self.leaves())


def _expand(left: BranchGerm, right: BranchGerm, depth: int, path: str,
            max_depth: int) -> BlowupNode:
    if left.profile.vdelta == 0 or right.profile.vdelta == 0:
        return BlowupNode(left, right, depth, path, DISSOLVED)
    if is_miranda_allowed(left.fibre_type, right.fibre_type):
        return BlowupNode(left, right, depth, path, ALLOWED)
    if depth >= max_depth:
        raise DepthExceeded(
            f"collision {left.name!r} + {right.name!r} not resolved within "
            f"depth {max_depth}"
        )
    step = blow_up(CollisionPoint(left, right))
    # short positional name: the tree already records what was blown up
    exc = BranchGerm("E" if not path else f"E:{path}", step.exceptional.profile)
    kids = (
        _expand(left, exc, depth + 1, path + "L", max_depth),
        _expand(right, exc, depth + 1, path + "R", max_depth),
    )
    return BlowupNode(
        left, right, depth, path, BLOWN_UP, exc, step.twist_count, kids
    )


def miranda_reduce(
    collisions, max_depth: int = DEFAULT_MAX_DEPTH
) -> list[BlowupTree]:
    """Resolve each collision by repeated blow-ups until every remaining
    crossing is allowed or dissolved.  Children are explored left first;
    paths longer than max_depth raise DepthExceeded."""
    trees = []
    for c in collisions:
        trees.append(BlowupTree(_expand(c.left, c.right, 0, "", max_depth)))
    return trees


def _match_pair(left: KodairaType, right: KodairaType, kind_a: str, kind_b: str):
    """Orient an unordered pair against (kind_a, kind_b); None if no fit."""
    if left.kind == kind_a and right.kind == kind_b:
        return left, right
    if right.kind == kind_a and left.kind == kind_b:
        return right, left
    return None


def expected_local_sha(left: KodairaType, right: KodairaType) -> DivisibleGroup:
    """Local Tate-Shafarevich group of a small neighbourhood of the
    resolved collision, from the closed-form table.

    Nontrivial (Z/2) exactly for III + I0* and for I_M1 + I_M2* with M1
    even; every other resolvable collision gives the trivial group.
    """
    if not is_miranda_allowed(left, right):
        raise NotMirandaAllowed(f"{left} + {right} is not a resolvable collision")
    fit = _match_pair(left, right, "I", "I*")
    if fit is not None and fit[0].index % 2 == 0:
        return DivisibleGroup.cyclic(2)
    fit = _match_pair(left, right, "III", "I*")
    if fit is not None:
        return DivisibleGroup.cyclic(2)
    return DivisibleGroup.trivial()


NO_MULTIPLE_FIBRE = "NoIsolatedMultipleFibre"
POSSIBLY_OBSTINATE = "PossiblyObstinate"
POSSIBLY_LOCALLY_TRIVIAL = "PossiblyLocallyTrivial"


@dataclass(frozen=True)
class MultipleFibreVerdict:
    """Whether a torsor can acquire an isolated multiple fibre over the
    collision: obstinate torsors (nontrivial even locally) can appear
    only over I_even + I* and III + I0*; locally trivial torsors with an
    isolated multiple fibre only over IV + I0*."""

    kind: str
    obstruction: DivisibleGroup | None = None

    def __str__(self) -> str:
        if self.obstruction is not None:
            return f"{self.kind}({self.obstruction})"
        return self.kind


def multiple_fibre_verdict(left: KodairaType, right: KodairaType) -> MultipleFibreVerdict:
    if not is_miranda_allowed(left, right):
        raise NotMirandaAllowed(f"{left} + {right} is not a resolvable collision")
    if _match_pair(left, right, "IV", "I*") is not None:
        return MultipleFibreVerdict(POSSIBLY_LOCALLY_TRIVIAL)
    fit = _match_pair(left, right, "I", "I*")
    if fit is not None and fit[0].index % 2 == 0:
        return MultipleFibreVerdict(POSSIBLY_OBSTINATE, expected_local_sha(left, right))
    if _match_pair(left, right, "III", "I*") is not None:
        return MultipleFibreVerdict(POSSIBLY_OBSTINATE, expected_local_sha(left, right))
    return MultipleFibreVerdict(NO_MULTIPLE_FIBRE)


def corank(b2_X: int, rho_X: int, b2_S: int, rho_S: int) -> int:
    """Corank of the Tate-Shafarevich group of the fibration:
    (b2 - rho of the total space) minus (b2 - rho of the base)."""
    for name, v in (("b2_X", b2_X), ("rho_X", rho_X), ("b2_S", b2_S), ("rho_S", rho_S)):
        if not isinstance(v, int) or v < 0:
            raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
    value = (b2_X - rho_X) - (b2_S - rho_S)
    if value < 0:
        raise NegativeCorank(
            f"(b2_X - rho_X) - (b2_S - rho_S) = {value} is negative; "
            "the inputs are not Betti/Picard numbers of an elliptic fibration"
        )
    return value


def delta_eta_gcd(fibre_degrees) -> int:
    """gcd of the absolute degrees of a multisection against the fibre;
    the generic Tate-Shafarevich obstruction is killed by this integer."""
    degs = [abs(int(d)) for d in fibre_degrees]
    if not degs or all(d == 0 for d in degs):
        raise AllZero("need at least one nonzero fibre degree")
    g = 0
    for d in degs:
        g = gcd(g, d)
    return g
