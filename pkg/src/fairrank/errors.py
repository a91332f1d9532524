"""Exception types. Every error carries a short machine-readable ``code``."""


class FairRankError(ValueError):
    code = "FairRankError"

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}" if self.detail else self.code


class DuplicateId(FairRankError):
    code = "DuplicateId"


class UnknownAttribute(FairRankError):
    code = "UnknownAttribute"


class NonFiniteScore(FairRankError):
    code = "NonFiniteScore"


class EmptyPool(FairRankError):
    code = "EmptyPool"


class InvalidRatio(FairRankError):
    code = "InvalidRatio"


class InvalidRanking(FairRankError):
    code = "InvalidRanking"


class RatioDomainMismatch(FairRankError):
    code = "RatioDomainMismatch"


class ZeroProportionWithCandidates(FairRankError):
    code = "ZeroProportionWithCandidates"


class PlatformNotSubset(FairRankError):
    code = "PlatformNotSubset"


class InfeasibleActivity(FairRankError):
    code = "InfeasibleActivity"


class MissingFromRanking(FairRankError):
    code = "MissingFromRanking"


class InvalidConfig(FairRankError):
    code = "InvalidConfig"
