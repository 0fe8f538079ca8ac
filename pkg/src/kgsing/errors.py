"""Exception types raised across the package."""


class KGError(Exception):
    code = "error"


class NonLocalSubstitution(KGError):
    code = "non_local_substitution"


class SingularLinearPart(KGError):
    code = "singular_linear_part"


class ZeroElement(KGError):
    code = "zero_element"


class ApproxPivotAmbiguous(KGError):
    code = "approx_pivot_ambiguous"


class InfeasiblePoint(KGError):
    code = "infeasible_point"


class NonvanishingEquality(KGError):
    code = "nonvanishing_equality"


class RankDeficient(KGError):
    code = "rank_deficient"


class ConsistencyFailure(KGError):
    code = "consistency_failure"


class NotFiniteAtDegree(KGError):
    code = "not_finite_at_degree"


class UncertifiedBase(KGError):
    code = "uncertified_base"


class CorankTooHigh(KGError):
    code = "corank_too_high"


class DegenerateKernelForm(KGError):
    code = "degenerate_kernel_form"


class CrossCheckFailure(KGError):
    code = "cross_check_failure"


class NotClassified(KGError):
    code = "not_classified"


class MarginTooSmall(KGError):
    code = "margin_too_small"


class ParseError(KGError):
    code = "parse_error"

    def __init__(self, msg, line=1, col=1):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.line = line
        self.col = col


class ValidationError(KGError):
    code = "validation_error"
