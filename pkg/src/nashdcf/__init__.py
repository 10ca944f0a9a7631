"""nashdcf: an exact, certified model of a differentially closed field.

Elements are algebraic functions over Q in lazily allocated transcendental
tag variables, certified by isolating boxes at a fixed transcendence
anchor.  A derivation table grown on demand supplies exact witnesses for
differential closure requests; region membership tests realize the
semialgebraic filter sets driving the ordering.
"""

from .polys import MPoly, QQ, qq, resultant, squarefree_part, sturm_count
from .intervals import Box, Interval, box_eval, interval_eval
from .anchor import Anchor, Tag
from .elements import (
    DegreeBudgetError,
    Element,
    Field,
    adjoin_root,
    conjugate,
    partial_derivative,
    real_roots,
    split_re_im,
)
from .elempoly import EPoly
from .derivation import (
    DerivationTable,
    DiffPoly,
    WitnessRecord,
    adjoin_differential_generators,
    blum_witness,
    complexify_delta,
    distinct_solutions,
    ordered_witness,
    root_between,
)
from .regions import RegionPoly, check_r_axioms, cylinder_member, gamma_member, omega, wp_member
from .engine import Engine, SessionError

__all__ = [
    "Anchor",
    "Box",
    "DegreeBudgetError",
    "DerivationTable",
    "DiffPoly",
    "EPoly",
    "Element",
    "Engine",
    "Field",
    "Interval",
    "MPoly",
    "QQ",
    "RegionPoly",
    "SessionError",
    "Tag",
    "WitnessRecord",
    "adjoin_differential_generators",
    "adjoin_root",
    "blum_witness",
    "box_eval",
    "check_r_axioms",
    "complexify_delta",
    "conjugate",
    "cylinder_member",
    "distinct_solutions",
    "gamma_member",
    "interval_eval",
    "omega",
    "ordered_witness",
    "partial_derivative",
    "qq",
    "real_roots",
    "resultant",
    "root_between",
    "split_re_im",
    "squarefree_part",
    "sturm_count",
    "wp_member",
]
