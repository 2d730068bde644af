import math


def is_missing(value):
    return value is None or value != value


def check(x):
    return math.isnan(x)
