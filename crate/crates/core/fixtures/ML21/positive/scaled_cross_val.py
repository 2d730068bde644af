from sklearn.linear_model import LogisticRegression
from sklearn.model_selection import cross_val_score
from sklearn.preprocessing import MinMaxScaler


def evaluate(X, y):
    X = MinMaxScaler().fit_transform(X)
    model = LogisticRegression(max_iter=200)
    return cross_val_score(model, X, y, cv=5)  # expect: ML21
