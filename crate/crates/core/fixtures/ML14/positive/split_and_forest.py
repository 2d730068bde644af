from sklearn.ensemble import RandomForestClassifier
from sklearn.model_selection import train_test_split


def fit(X, y):
    X_train, X_test, y_train, y_test = train_test_split(X, y, test_size=0.2)  # expect: ML14
    forest = RandomForestClassifier(n_estimators=100)  # expect: ML14
    forest.fit(X_train, y_train)
    return forest.score(X_test, y_test)
