import pandas as pd

df = pd.DataFrame({"one": [1, 2], "two": [3, 4]})
col = df["one"]["two"]  # expect: ML03
