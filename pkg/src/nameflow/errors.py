"""Exception types shared across the pipeline."""


class NameflowError(Exception):
    pass


class SourceSyntaxError(NameflowError):
    """Raised by the parser; carries the location of the first offending token."""

    def __init__(self, message, loc=None):
        self.loc = loc
        if loc is not None:
            message = f'{loc.path}:{loc.line}:{loc.col}: {message}'
        super().__init__(message)


class UnsupportedConstruct(NameflowError):
    def __init__(self, construct, loc=None):
        self.construct = construct
        self.loc = loc
        where = f'{loc.path}:{loc.line}:{loc.col}: ' if loc is not None else ''
        super().__init__(f'{where}unsupported construct: {construct}')


class SchemaError(NameflowError):
    def __init__(self, field, message='missing or ill-typed field'):
        self.field = field
        super().__init__(f'{field}: {message}')


class InternalLoweringError(NameflowError):
    pass


class UnderflowError(NameflowError):
    pass


class EmptyModel(NameflowError):
    pass


class NoPatterns(NameflowError):
    pass


class CollisionError(NameflowError):
    def __init__(self, name, loc=None):
        self.name = name
        self.loc = loc
        super().__init__(f'proposed name {name!r} already resolves in scope')


class RenameNotSupported(NameflowError):
    pass
