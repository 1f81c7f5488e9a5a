class InvalidArgument(ValueError):
    def __init__(self, message: str):
        super().__init__(f"Invalid argument: {message}")

class OutOfDomain(ValueError):
    def __init__(self, u, radius):
        super().__init__(f"Out of domain: |{u}| > {radius}")

class UnboundedRegularization(Exception):
    def __init__(self, message: str):
        super().__init__(f"Unbounded regularization: {message}")

class InternalInvariantError(Exception):
    def __init__(self, message: str):
        super().__init__(f"Internal invariant violated: {message}")

class BoundViolation(Exception):
    def __init__(self, message: str, lhs=None, rhs=None):
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"Bound violated: {message}")
