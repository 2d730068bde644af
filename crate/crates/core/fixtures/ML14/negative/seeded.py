import random

import numpy as np

random.seed(0)
np.random.seed(0)
noise = np.random.rand(3)
pick = random.choice([1, 2, 3])
