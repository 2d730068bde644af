import numpy as np
import pandas as pd

df = pd.DataFrame({"age": [31, None, 45]})
missing = df["age"].isna()
present = np.isnan(np.array([1.0, np.nan]))
