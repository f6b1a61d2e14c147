"""Common utils for conemetric."""

import re
from fractions import Fraction

import numpy as np
import yaml


class InputError(AssertionError):
    """Raised for malformed inputs: wrong shapes, bad files, unknown kinds."""


class DomainError(AssertionError):
    """Raised when a mathematical precondition does not hold, e.g. a point is
    not in the interior of the cone."""


class NumericError(Exception):
    """Raised when a numerical procedure fails to converge."""


def format_float(x, precision):
    """Formats x with a fixed number of digits after the decimal point.

    The output never depends on the locale and never shows a negative zero,
    e.g. format_float(-1e-20, 3) is '0.000'.
    """
    s = format(float(x), f'.{precision}f')
    if s.startswith('-') and float(s) == 0:
        s = s[1:]
    return s


def format_vector(v, precision):
    """Formats the entries of v (flattened) separated by single spaces."""
    return ' '.join(format_float(x, precision) for x in np.ravel(v))


def format_short(x):
    """Shortest readable form of x, used for spectra: 0.5, 2, 0.333333."""
    s = format(float(x), '.6g')
    return '0' if s == '-0' else s


def format_set(values):
    """Formats values as a set literal, e.g. {0.5,2}."""
    return '{' + ','.join(format_short(v) for v in values) + '}'


def get_loader():
    """Returns a SafeLoader that also parses fractions such as 1/4 or -3/2
    into floats."""
    def parse_fraction(loader, node):
        value = loader.construct_scalar(node)
        try:
            return float(Fraction(value.replace(' ', '')))
        except ZeroDivisionError:
            raise yaml.constructor.ConstructorError(
                None, None, f'zero denominator in {value}',
                node.start_mark) from None

    class Loader(yaml.SafeLoader):
        pass

    Loader.add_constructor(u'fraction', parse_fraction)
    Loader.add_implicit_resolver(u'fraction',
                                 re.compile(r'^-?\d+\s*/\s*\d+$'),
                                 list('-0123456789'))
    return Loader


def load_yaml(text):
    """Parses YAML text and returns the resulting object.

    Raises: InputError if the text is not valid YAML.
    """
    try:
        return yaml.load(text, Loader=get_loader())
    except yaml.YAMLError as e:
        raise InputError(f'Cannot parse YAML: {e}') from None


def as_array(values, name='point'):
    """Converts nested lists of numbers to a float numpy array.

    Raises: InputError if values are not numeric or not finite.
    """
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f'{name} must contain only numbers') from None
    if not np.all(np.isfinite(arr)):
        raise InputError(f'{name} must contain only finite numbers')
    return arr


def sup_norm(x):
    """The max-abs norm of x (flattened)."""
    return float(np.max(np.abs(x))) if np.size(x) else 0.0
