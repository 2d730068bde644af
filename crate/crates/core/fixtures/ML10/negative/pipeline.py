from sklearn.pipeline import Pipeline, make_pipeline
from sklearn.preprocessing import MinMaxScaler, StandardScaler
from sklearn.svm import SVC


def train(X, y):
    pipe = Pipeline([("scale", StandardScaler()), ("svc", SVC(C=1.0))])
    pipe.fit(X, y)
    other = make_pipeline(MinMaxScaler(), SVC(C=0.5))
    other.fit(X, y)
    return pipe, other
