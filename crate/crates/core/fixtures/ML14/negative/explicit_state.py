from sklearn.ensemble import RandomForestClassifier
from sklearn.model_selection import KFold, train_test_split


def fit(X, y):
    X_train, X_test, y_train, y_test = train_test_split(X, y, test_size=0.2, random_state=42)
    forest = RandomForestClassifier(n_estimators=100, random_state=42)
    folds = KFold(n_splits=5)
    return forest.fit(X_train, y_train), folds
