import pandas as pd

df = pd.DataFrame({"a": [1, None]})
df.dropna()  # expect: ML07
df.fillna(0, inplace=False)  # expect: ML07
print(df)
