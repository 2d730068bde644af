import numpy as np
import pandas as pd

frame = pd.read_csv("x.csv", usecols=["a", "b"], dtype={"a": float, "b": float})
norms = np.linalg.norm(frame.values, axis=1)  # expect: ML08
