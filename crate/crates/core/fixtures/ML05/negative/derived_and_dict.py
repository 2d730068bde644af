import pandas as pd

df = pd.DataFrame({"a": [1, 2]})
df["b"] = df["a"] + 1
row = {}
row["count"] = 0
