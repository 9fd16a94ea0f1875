from runcommands.util import Data as BaseData


class Data(BaseData):

    """:class:`runcommands.util.Data` with membership, iteration and
    conversion back to plain dicts.

    Nested ``dict`` values become :class:`Data` too, so
    ``config.sweep.genera`` works. Missing names raise
    :class:`AttributeError` for attribute access and :class:`KeyError`
    for item access.

    """

    def _data(self) -> dict:
        return object.__getattribute__(self, "__data")

    def __getattr__(self, name):
        try:
            return self._data()[name]
        except KeyError:
            raise AttributeError(name) from None

    def __getitem__(self, name):
        return self._data()[name]

    def __contains__(self, name):
        return name in self._data()

    def __iter__(self):
        return iter(self._data())

    def __eq__(self, other):
        if not isinstance(other, Data):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None

    def to_dict(self) -> dict:
        return {
            name: value.to_dict() if isinstance(value, Data) else value
            for name, value in self._data().items()
        }

    def __repr__(self):
        return f"{self.__class__.__name__}({self.to_dict()!r})"
