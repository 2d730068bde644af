from sklearn import metrics


def report(y_true, y_pred):
    acc = metrics.accuracy_score(y_true, y_pred)  # expect: ML22
    prec = metrics.precision_score(y_true, y_pred)  # expect: ML22
    return acc, prec
