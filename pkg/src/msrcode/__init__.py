"""High-rate minimum-storage regenerating (MSR) erasure code with
polynomial sub-packetization.

An (n = t*q, k = (t-1)*q, d = n-1) vector MDS code storing alpha = q^t
symbols per node.  Any k nodes recover the data; a single failed node is
rebuilt exactly from verbatim symbols -- beta = q^(t-1) per helper, the
minimum-storage optimum -- with no computation at the helpers.
"""

from .gf import GF2M, default_poly, is_irreducible, ring_sub
from .params import CodeParams, make_params
from .parity import (
    Constraint,
    ParityCheckSystem,
    Term,
    build_hmds,
    build_system,
    check_mds_ranks,
    find_c0,
    find_code,
    gf_rank,
    solve_linear,
    sufficient_field_size,
)
from .codec import (
    CodewordArray,
    MdsReport,
    check_codeword,
    decode_from_k,
    encode,
    verify_mds,
)
from .repair import (
    BandwidthReport,
    HelperPacket,
    RepairResult,
    bandwidth_report,
    helper_extract,
    repair_node,
)

__version__ = "0.1.0"

__all__ = [
    "GF2M",
    "default_poly",
    "is_irreducible",
    "ring_sub",
    "CodeParams",
    "make_params",
    "Term",
    "Constraint",
    "ParityCheckSystem",
    "build_hmds",
    "build_system",
    "check_mds_ranks",
    "find_c0",
    "find_code",
    "gf_rank",
    "solve_linear",
    "sufficient_field_size",
    "CodewordArray",
    "MdsReport",
    "encode",
    "check_codeword",
    "decode_from_k",
    "verify_mds",
    "HelperPacket",
    "RepairResult",
    "BandwidthReport",
    "helper_extract",
    "repair_node",
    "bandwidth_report",
    "__version__",
]
