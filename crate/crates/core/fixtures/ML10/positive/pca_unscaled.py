import numpy as np
from sklearn.decomposition import PCA

X = np.loadtxt("features.txt")
pca = PCA(n_components=2)
pca.fit(X)  # expect: ML10
