from sklearn.decomposition import PCA
from sklearn.preprocessing import StandardScaler


def project(X):
    X_std = StandardScaler().fit_transform(X)
    pca = PCA(n_components=2)
    return pca.fit_transform(X_std)
