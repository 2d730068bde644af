import numpy as np
import pandas as pd

df = pd.DataFrame({"age": [31, None, 45]})
missing = df["age"] == np.nan  # expect: ML02
print(missing.sum())
