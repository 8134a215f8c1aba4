"""Filtered lambda-ring structures on ``Z[x]/(x^n)`` and their low-degree cohomology."""

from .cohomology import (
    CohomologyReport,
    DerBarElement,
    cohomology_report,
    compose_classes,
    d0,
    d1_check,
    derbar_lattice,
    endbar_lattice,
    graded_commutativity,
    h0_algebra,
    h0_lattice,
    h1_group,
    innbar_lattice,
    leibnitz_check,
    reconstruct,
)
from .errors import ConditionViolation, LambdaRingError, NonIntegralError, WindowError
from .linalg import AbelianInvariants, Lattice, hnf, kernel_lattice, member, quotient, snf
from .structures import (
    AdamsSpec,
    ValidationReport,
    adams_composite,
    build_dual,
    build_integers,
    build_KCP3,
    build_KFP2,
    build_S_bp_h,
    build_S_cp,
    build_S_h_d2,
    build_S_pr_h,
    enumerate_61,
    enumerate_64,
    isomorphic,
    spec_from_document,
    verify_wilkerson,
)
from .symmetric import express_in_elementary, lambda_from_adams, universal_P, universal_P_composite
from .truncpoly import EndoMatrix, TruncPoly
