from symred.strata.models import (
    KernelSpanResult,
    PrincipalStratumEstimate,
    RankDefectReport,
    RankReport,
    SignatureCensus,
    StratumSignature,
    StructurePreconditionError,
)
from symred.strata.service import (
    kernel_span_check,
    principal_stratum_estimate,
    rank_defect_report,
    rank_report,
    signature_census,
    stratum_signature,
)

__all__ = [
    "KernelSpanResult",
    "PrincipalStratumEstimate",
    "RankDefectReport",
    "RankReport",
    "SignatureCensus",
    "StratumSignature",
    "StructurePreconditionError",
    "kernel_span_check",
    "principal_stratum_estimate",
    "rank_defect_report",
    "rank_report",
    "signature_census",
    "stratum_signature",
]
