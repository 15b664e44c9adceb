"""Exception hierarchy shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class DuplicateId(ToolkitError):
    pass


class DuplicateName(ToolkitError):
    pass


class UnknownNode(ToolkitError):
    pass


class PolicyViolation(ToolkitError):
    pass


class DuplicateEdge(ToolkitError):
    pass


class EmptyGraph(ToolkitError):
    pass


class AlreadyStripped(ToolkitError):
    pass


class CorpusSyntaxError(ToolkitError):
    """Malformed corpus / GEXF document; message carries position info."""


class UnknownReference(ToolkitError):
    pass


class NoEdges(ToolkitError):
    """Modularity is undefined on an edgeless graph."""


class PartitionMismatch(ToolkitError):
    pass


class SeedsExhausted(ToolkitError):
    pass


class InvalidTransition(ToolkitError):
    pass


class EmptyRationale(ToolkitError):
    pass


class StaleCandidate(ToolkitError):
    pass


class MissingDecision(ToolkitError):
    pass


class DuplicateGlyph(ToolkitError):
    pass


class RuleMismatch(ToolkitError):
    pass


class CorruptJournal(ToolkitError):
    pass
