import numpy as np

row = np.arange(3)
tiled = np.tile(row, (4, 1))
print(tiled.shape)
doubled = np.tile(row, 2) * 2
