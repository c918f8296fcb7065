"""Exception hierarchy shared by all modules."""


class WittlabError(Exception):
    """Base class for every error raised by wittlab."""


class InputTooLarge(WittlabError):
    pass


class NoProductBasis(WittlabError):
    """The span of a k-invariant set has no basis of products of linear forms."""


class MixedGroups(WittlabError):
    pass


class GroupTooSmall(WittlabError):
    pass


class FormallyRealInput(WittlabError):
    pass


class NotFree(WittlabError):
    """An operation that needs a free action was given a model with isotropy."""


class BudgetExceeded(WittlabError):
    pass


class UnknownPreset(WittlabError):
    pass
