"""
This library provides schema classes that make it easy to describe the shape of a
configuration document.  Each builder method records a JSON-schema keyword named after
the method, so ``StringSchema().min_length(1)`` produces ``{"type": "string",
"minLength": 1}``.
"""
import inspect

import stringcase

from enum import Enum, auto
from typing import Any, Optional, Union


class SchemaType(Enum):
    OBJECT = auto()
    ARRAY = auto()
    STRING = auto()
    INTEGER = auto()
    NUMBER = auto()
    BOOLEAN = auto()
    NONE = auto()


class Schema(object):
    def __init__(self, of_type: SchemaType):
        self._spec = {}
        if of_type is not SchemaType.NONE:
            self._spec['type'] = of_type.name.lower()

    def enum(self, *values):
        return self._set(values)

    def spec(self) -> dict:
        return self._spec

    def _set(self, value, name=None):
        if name is None:
            name = stringcase.camelcase(inspect.stack()[1].function)
        self._spec[name] = Schema._to_spec(value)
        return self

    @staticmethod
    def _to_spec(value: Any) -> Any:
        if isinstance(value, Schema):
            value = value.spec()
        if isinstance(value, (list, tuple)):
            value = [Schema._to_spec(item) for item in value]
        if isinstance(value, dict):
            value = {key: Schema._to_spec(item) for key, item in value.items()}
        return value


class StringSchema(Schema):
    def __init__(self, min_length: Optional[int] = None, pattern: Optional[str] = None):
        super().__init__(of_type=SchemaType.STRING)
        if min_length is not None:
            self.min_length(min_length)
        if pattern is not None:
            self.pattern(pattern)

    def min_length(self, value: int):
        return self._set(value)

    def pattern(self, value: str):
        return self._set(value)


class _BoundedSchema(Schema):
    def minimum(self, value: Union[int, float]):
        return self._set(value)

    def maximum(self, value: Union[int, float]):
        return self._set(value)

    def exclusive_minimum(self, value: Union[int, float]):
        return self._set(value)


class IntegerSchema(_BoundedSchema):
    def __init__(self, minimum: Optional[int] = None, maximum: Optional[int] = None):
        super().__init__(of_type=SchemaType.INTEGER)
        if minimum is not None:
            self.minimum(minimum)
        if maximum is not None:
            self.maximum(maximum)


class NumberSchema(_BoundedSchema):
    def __init__(self, minimum: Optional[float] = None, maximum: Optional[float] = None):
        super().__init__(of_type=SchemaType.NUMBER)
        if minimum is not None:
            self.minimum(minimum)
        if maximum is not None:
            self.maximum(maximum)


class BooleanSchema(Schema):
    def __init__(self):
        super().__init__(of_type=SchemaType.BOOLEAN)


class ObjectSchema(Schema):
    def __init__(self, additional_properties: Union[bool, dict, Schema, None] = None):
        super().__init__(of_type=SchemaType.OBJECT)
        if additional_properties is not None:
            self.additional_properties(additional_properties)

    def properties(self, **kwargs):
        return self._set(dict(kwargs))

    def additional_properties(self, value: Union[bool, dict, Schema]):
        return self._set(value)


class ArraySchema(Schema):
    def __init__(self, items: Union[dict, Schema, None] = None, min_items: Optional[int] = None):
        super().__init__(of_type=SchemaType.ARRAY)
        if items is not None:
            self.items(items)
        if min_items is not None:
            self.min_items(min_items)

    def items(self, value: Union[dict, Schema]):
        return self._set(value)

    def min_items(self, value: int):
        return self._set(value)


class OneOfSchema(Schema):
    def __init__(self, *schemas: Union[dict, Schema]):
        super().__init__(of_type=SchemaType.NONE)
        self._set(schemas, name='oneOf')
