import pandas as pd

df = pd.DataFrame({"a": [1, None]})
df = df.dropna()
df.fillna(0, inplace=True)
