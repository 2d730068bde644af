import pandas as pd

df = pd.DataFrame({"one": [1, 2], "two": [3, 4]})
legacy = df["one"]["two"]  # mlint: disable=ML03
