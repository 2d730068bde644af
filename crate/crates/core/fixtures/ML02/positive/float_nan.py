import math


def is_missing(value):
    return value != float("nan")  # expect: ML02


def check(x):
    if x == math.nan:  # expect: ML02
        return True
    return False
