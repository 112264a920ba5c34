"""LDPC codes, LP decoding and compressed sensing over zero-one matrices.

Channel-coding LP decoding and basis pursuit are linked through the
fundamental cone of a parity-check matrix: every real nullspace vector of a
zero-one measurement matrix maps, by taking absolute values, into that cone.
"""

from . import bridge, cclpd, cover, cslpd, fundamental, gf2, lpsolve, nsp, pseudoweight, tanner
from .bridge import bridge_map, bridge_map_complex, lemma5_gate, lifted_bridge, matrix_cover
from .cclpd import ChannelModel, cclpd_decode, mld_bruteforce
from .cslpd import MeasurementInstance, certify_guarantee, cs_lpd, cs_opt_bruteforce
from .errors import (
    AlistParseError,
    CapExceeded,
    ConstructionError,
    DimensionMismatch,
    ExpansionTooWeak,
    HypothesisNotCertified,
    InfeasibleError,
    LdpcSenseError,
    NoSolutionFound,
    NotInNullspace,
    RowTooDense,
)
from .estimators import LPDecoder, SparseRecovery
from .lpsolve import LpProblem, minimize_l1, solve
from .nsp import check_nsp_k, check_nsp_set
from .pseudoweight import min_maxfrac_weight, min_pseudoweight_enumerated, weights
from .tanner import ConstructionSpec, TannerGraph, construct, girth, read_alist, write_alist

__version__ = "0.1.0"
