"""Exception hierarchy.

The CLI maps each family to an exit code: mathematical failures to 1,
precision/reduction failures to 3.
"""


class EtacongError(Exception):
    """Base class for all library errors."""


# -- mathematical failures -------------------------------------------------

class VerificationFailure(EtacongError):
    """A checked identity, bound or congruence does not hold."""


class IdentityViolated(VerificationFailure):
    def __init__(self, exponent, lhs, rhs, context=""):
        self.exponent = exponent
        self.lhs = lhs
        self.rhs = rhs
        self.context = context
        msg = f"identity fails at q^{exponent}: lhs={lhs} rhs={rhs}"
        if context:
            msg = f"{context}: {msg}"
        super().__init__(msg)


class BoundViolated(VerificationFailure):
    def __init__(self, r, p, detail=""):
        self.r = r
        self.p = p
        super().__init__(f"bound violated for r={r}, p={p}" + (f": {detail}" if detail else ""))


# -- precision / reduction failures ---------------------------------------

class PrecisionError(EtacongError):
    """A request reaches past the known window of a truncated series."""


class NonIntegralPrefactor(EtacongError):
    pass


class NonUnitLeading(EtacongError):
    pass


class NonTerminating(PrecisionError):
    pass


class NonzeroResidual(PrecisionError):
    def __init__(self, exponent, detail=""):
        self.exponent = exponent
        super().__init__(f"nonzero residual at q^{exponent}" + (f" ({detail})" if detail else ""))


class CapExceeded(PrecisionError):
    pass


# -- scope ----------------------------------------------------------------

class Unsupported(EtacongError):
    pass


class ThetaUnavailable(Unsupported):
    pass


class OracleRangeExceeded(EtacongError):
    pass
