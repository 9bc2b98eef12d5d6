"""Exception types shared across the package."""


class PosslogError(Exception):
    pass


class FormulaSyntaxError(PosslogError, ValueError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class UnknownAtomError(PosslogError, KeyError):
    def __str__(self) -> str:
        return f"unknown atom {self.args[0]!r}"


class UniverseTooLarge(PosslogError, ValueError):
    pass


class UniverseMismatch(PosslogError, ValueError):
    pass


class UnboundLeaf(PosslogError, KeyError):
    def __str__(self) -> str:
        return f"unbound knowledge base {self.args[0]!r} in merge plan"


class ResolutionError(PosslogError, ValueError):
    pass


class ConstraintError(PosslogError, ValueError):
    pass
