import numpy as np
import pandas as pd

df = pd.DataFrame({"name": ["a", "b"]})
df["label"] = np.nan
