import pandas as pd

frame = pd.DataFrame({"a": [1, 2], "b": [3, 4]})
for name in frame.columns:
    print(name, frame[name].dtype)
summary = frame.groupby("a").sum()
