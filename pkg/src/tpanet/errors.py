"""Exception hierarchy shared by every layer of the library."""


class TPAError(Exception):
    """Base class for all errors raised by tpanet."""


# -- history kernel ---------------------------------------------------------

class OverlappingDomains(TPAError, ValueError):
    def __init__(self, channels):
        self.channels = tuple(sorted(channels))
        super().__init__(f"channel domains overlap on {', '.join(self.channels)}")


class LengthMismatch(TPAError, ValueError):
    def __init__(self, left, right):
        self.left, self.right = left, right
        super().__init__(f"history lengths differ: {left} != {right}")


class DomainMismatch(TPAError, ValueError):
    pass


class HorizonExceeded(TPAError, IndexError):
    def __init__(self, requested, available):
        self.requested, self.available = requested, available
        super().__init__(f"prefix {requested} exceeds history length {available}")


# -- automata ---------------------------------------------------------------

class OverlapError(TPAError, ValueError):
    """A port signature uses one channel name in two roles."""

    def __init__(self, channel, roles=()):
        self.channel = channel
        self.roles = tuple(roles)
        where = f" ({' and '.join(self.roles)})" if self.roles else ""
        super().__init__(f"channel {channel!r} appears more than once{where}")


class UnknownState(TPAError, KeyError):
    def __init__(self, state):
        self.state = state
        super().__init__(f"unknown state {state!r}")

    def __str__(self):
        return self.args[0]


class NotReactive(TPAError):
    """Raised when an operation requires a reactive automaton and gets a witness instead."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"automaton is not reactive: {witness}")


class ExplosionGuard(TPAError):
    """An exhaustive enumeration exceeded its configured budget."""

    def __init__(self, what, budget):
        self.what, self.budget = what, budget
        super().__init__(f"{what} exceeded budget of {budget}")


class ConfigurationError(TPAError, ValueError):
    pass


class CapacityExceeded(ConfigurationError):
    def __init__(self, capacity, needed):
        self.capacity, self.needed = capacity, needed
        super().__init__(f"buffer capacity {capacity} exceeded (would hold {needed})")


# -- composition --------------------------------------------------------------

class IncompatibleSignatures(TPAError, ValueError):
    def __init__(self, clause, channel):
        self.clause, self.channel = clause, channel
        super().__init__(f"incompatible signatures: {clause} (channel {channel!r})")


class EmptyComposition(TPAError):
    """The product has no transition for some reachable state and input."""

    def __init__(self, state, input_slice, bound):
        self.state, self.input, self.bound = state, input_slice, bound
        from .history import render_state
        super().__init__(
            f"EMPTY-COMPOSITION at state={render_state(state)} "
            f"input={input_slice.render() or '{}'} bound={bound}"
        )


class NotAnOutput(TPAError, ValueError):
    def __init__(self, channel):
        self.channel = channel
        super().__init__(f"{channel!r} is not an output channel")


# -- denotational -------------------------------------------------------------

class CausalityViolation(TPAError):
    pass


class NoConvergence(TPAError):
    pass


class PrecondViolated(TPAError, ValueError):
    pass


class FixpointInconsistent(TPAError):
    pass


# -- network descriptions -------------------------------------------------------

class NetError(TPAError):
    """A problem in a network description, located at ``line``:``col``."""

    def __init__(self, message, line=0, col=0):
        self.line, self.col = line, col
        self.message = message
        where = f"line {line}, col {col}: " if line else ""
        super().__init__(where + message)


class NetSyntaxError(NetError, SyntaxError):
    def __str__(self):
        return self.args[0]


class NetNameError(NetError, NameError):
    pass


class NetTypeError(NetError, TypeError):
    pass
