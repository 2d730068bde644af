import numpy as np

row = np.arange(3)
grid = np.zeros((4, 3))
tiled = np.tile(row, (4, 1))  # expect: ML16
shifted = grid - tiled
