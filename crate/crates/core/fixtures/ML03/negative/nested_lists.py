import pandas as pd

matrix = [[1, 2], [3, 4]]
cell = matrix[0][1]
frame = pd.DataFrame(matrix, columns=["a", "b"])
frame.loc[frame["b"] > 0, "a"] = 0
