class PoolzError(Exception):
    pass


class InvalidSpecError(PoolzError):
    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"Invalid spec at path '{path}': {message}")

    def __eq__(self, other):
        return (
            isinstance(other, InvalidSpecError)
            and self.path == other.path
            and self.message == other.message
        )

    def __hash__(self):
        return hash((self.path, self.message))


class InvalidInputError(PoolzError):
    pass


class UndefinedSchedulerError(PoolzError):
    def __init__(self, scheduler_name):
        self.scheduler_name = scheduler_name
        super().__init__(f"Scheduler '{scheduler_name}' is not defined.")


class UndefinedRecipeError(PoolzError):
    def __init__(self, recipe_name):
        self.recipe_name = recipe_name
        super().__init__(f"Recipe '{recipe_name}' is not defined.")


class InvalidExperimentError(PoolzError):
    def __init__(self, errors: list[InvalidSpecError]):
        self.errors = errors
        super().__init__(
            "Invalid experiment: " + "; ".join(str(error) for error in errors)
        )

    def __eq__(self, other):
        return isinstance(other, InvalidExperimentError) and self.errors == other.errors

    def __hash__(self):
        return hash(tuple(self.errors))


class ConservationError(PoolzError):
    def __init__(self, quantity: str, total: float, expected: float):
        self.quantity = quantity
        self.total = total
        self.expected = expected
        super().__init__(f"Total {quantity} {total!r} drifted from {expected!r}.")
