import pandas as pd

left = pd.DataFrame({"id": [1], "x": [2]})
right = pd.DataFrame({"id": [1], "y": [3]})
merged = left.merge(right, on="id", how="inner", validate="one_to_one")
