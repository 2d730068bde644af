import pandas as pd

df = pd.DataFrame({"name": ["a", "b"]})
df["label"] = 0  # expect: ML05
df["comment"] = ""  # expect: ML05
