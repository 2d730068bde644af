from sklearn.linear_model import LogisticRegression
from sklearn.model_selection import cross_val_score
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import MinMaxScaler


def evaluate(X, y):
    model = make_pipeline(MinMaxScaler(), LogisticRegression(max_iter=200))
    return cross_val_score(model, X, y, cv=5)
