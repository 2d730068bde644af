import numpy as np

s = np.dot(3.0, 4.0)
u = np.zeros(3)
v = np.ones(3)
inner = np.dot(u, v)
