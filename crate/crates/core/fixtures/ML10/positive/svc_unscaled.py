from sklearn.svm import SVC


def train(X_train, y_train):
    clf = SVC(C=1.0, kernel="rbf")
    clf.fit(X_train, y_train)  # expect: ML10
    return clf
