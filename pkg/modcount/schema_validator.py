"""
This library provides a schema validator class for the subset of JSON schema our
schema classes produce.
"""
import json
import numbers
import re
from typing import Any, Optional, Union

import stringcase

from modcount.schema import Schema

empty_schema = {}


def is_object(thing: Any) -> bool:
    return isinstance(thing, dict)


def is_array(thing: Any) -> bool:
    return isinstance(thing, list)


def is_string(thing: Any) -> bool:
    return isinstance(thing, str)


def is_integer(thing: Any) -> bool:
    """
    A function that returns whether the given value is an integer.  Note that this will return
    ``False`` for the value, ``True``, which is different from normal Python.

    :param thing: the value to check.
    :return: ``True`` if the value is an integer.
    """
    return isinstance(thing, int) and not isinstance(thing, bool)


def is_number(thing: Any) -> bool:
    """
    A function that returns whether the given value is a number, either integer or floating
    point.  Note that this will return ``False`` for the value, ``True``.

    :param thing: the value to check.
    :return: ``True`` if the value is a number.
    """
    return isinstance(thing, numbers.Number) and not isinstance(thing, bool)


def is_boolean(thing: Any) -> bool:
    return isinstance(thing, bool)


_type_checks = {
    'object': is_object,
    'array': is_array,
    'string': is_string,
    'integer': is_integer,
    'number': is_number,
    'boolean': is_boolean
}


class SchemaValidator(object):
    """
    This class represents an object that wraps a schema definition and uses it to validate
    values.
    """
    def __init__(self, schema: Union[Schema, dict, str]):
        """
        This function creates a new schema validator around a schema which may be specified
        as either a ``Schema`` object, a raw dictionary or the text of a JSON object that
        specifies the schema.

        :param schema: the schema to wrap.
        """
        if isinstance(schema, Schema):
            schema = schema.spec()
        elif isinstance(schema, str):
            schema = json.loads(schema)
        self.error: Optional[str] = None
        self._schema = schema

    def validate(self, value, path: str = '') -> bool:
        """
        A function that validates a value against our schema.  When validation fails, the
        ``error`` attribute describes the first problem found.

        :param value: the value to validate.
        :param path: the path to report the value under.
        :return: ``True`` if the value is valid.
        """
        self.error = self._validate(value, self._schema, f'#/{path}' if path else '#')

        return self.error is None

    def _validate(self, value, schema, path) -> Optional[str]:
        for key in schema.keys():
            call = getattr(self, f'_validate_{stringcase.snakecase(key)}')
            error = call(value, schema, schema[key], path)

            if error is not None:
                if ' constraint: ' not in error:
                    error = f'{"#/" if path == "#" else path} violates the "{key}" constraint: {error}'

                return error

        return None

    # ------------------- #
    # General validations #
    # ------------------- #
    # noinspection PyMethodMayBeStatic,PyUnusedLocal
    def _validate_type(self, value, schema, constraint, path):
        if not _type_checks[constraint](value):
            return f'it is not {"an" if constraint[0] in "aeiou" else "a"} {constraint}.'

    # noinspection PyMethodMayBeStatic,PyUnusedLocal
    def _validate_enum(self, value, schema, constraint, path):
        if value not in constraint:
            return f'it is not one of [{", ".join(map(str, constraint))}].'

    # ------------------ #
    # String validations #
    # ------------------ #
    # noinspection PyMethodMayBeStatic,PyUnusedLocal
    def _validate_min_length(self, value, schema, constraint, path):
        if is_string(value) and len(value) < constraint:
            return f'the string is shorter than {constraint}.'

    # noinspection PyMethodMayBeStatic,PyUnusedLocal
    def _validate_pattern(self, value, schema, constraint, path):
        if is_string(value) and not re.match(constraint, value):
            return f'it does not match the \'{constraint}\' pattern.'

    # ------------------ #
    # Number validations #
    # ------------------ #
    # noinspection PyMethodMayBeStatic,PyUnusedLocal
    def _validate_minimum(self, value, schema, constraint, path):
        if is_number(value) and value < constraint:
            return f'{value} is less than {constraint}.'

    # noinspection PyMethodMayBeStatic,PyUnusedLocal
    def _validate_exclusive_minimum(self, value, schema, constraint, path):
        if is_number(value) and value <= constraint:
            return f'{value} is less than or equal to {constraint}.'

    # noinspection PyMethodMayBeStatic,PyUnusedLocal
    def _validate_maximum(self, value, schema, constraint, path):
        if is_number(value) and value > constraint:
            return f'{value} is greater than {constraint}.'

    # ------------------ #
    # Object validations #
    # ------------------ #
    def _validate_properties(self, value, schema, constraint, path):
        if not is_object(value):
            return None
        additional = schema.get('additionalProperties', True)

        for name, child in value.items():
            name = str(name)
            if name in constraint:
                child_schema = constraint[name]
            elif additional is False:
                return f'the {name} property is not allowed here.'
            else:
                child_schema = empty_schema if additional is True else additional

            error = self._validate(child, child_schema, f'{path}/{name}')

            if error is not None:
                return error

        return None

    # noinspection PyUnusedLocal
    def _validate_additional_properties(self, value, schema, constraint, path):
        # When present, the properties constraint does the real validation.
        if 'properties' in schema or not is_object(value) or constraint is True:
            return None
        if constraint is False and value:
            return f'the {next(iter(value))} property is not allowed here.'
        for name, child in value.items():
            error = self._validate(child, constraint, f'{path}/{name}')
            if error is not None:
                return error
        return None

    # ----------------- #
    # Array validations #
    # ----------------- #
    # noinspection PyUnusedLocal
    def _validate_items(self, value, schema, constraint, path):
        if is_array(value):
            for index, item in enumerate(value):
                error = self._validate(item, constraint, f'{path}[{index}]')

                if error is not None:
                    return error

    # noinspection PyMethodMayBeStatic,PyUnusedLocal
    def _validate_min_items(self, value, schema, constraint, path):
        if is_array(value) and len(value) < constraint:
            return f'the array needs at least {constraint} item{"" if constraint == 1 else "s"}.'

    # --------------------- #
    # Combining validations #
    # --------------------- #
    # noinspection PyUnusedLocal
    def _validate_one_of(self, value, schema, constraint, path):
        matches = sum(1 for child in constraint if self._validate(value, child, path) is None)

        if matches != 1:
            return f'it matches {matches} of the allowed forms instead of exactly one.'
