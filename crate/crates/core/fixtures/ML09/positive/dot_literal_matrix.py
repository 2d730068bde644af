from numpy import array, dot

m = array([[1, 2], [3, 4]])
square = dot(m, m)  # expect: ML09
