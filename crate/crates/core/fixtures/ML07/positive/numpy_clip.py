import numpy as np

a = np.array([0.5, 1.5, -0.2])
np.clip(a, 0, 1)  # expect: ML07
