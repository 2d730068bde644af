import pandas as pd

frame = pd.read_csv("data.csv", usecols=["a", "b"], dtype={"a": int, "b": float})
frame["a"][frame["b"] > 0] = 0  # expect: ML03
first = frame["b"][0]  # expect: ML03
