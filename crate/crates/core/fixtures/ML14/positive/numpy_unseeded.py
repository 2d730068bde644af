import numpy as np

noise = np.random.rand(3)  # expect: ML14
