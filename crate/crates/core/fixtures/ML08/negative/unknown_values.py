def total(mapping):
    return sum(mapping.values())


class Box:
    values = [1, 2]


print(Box().values)
