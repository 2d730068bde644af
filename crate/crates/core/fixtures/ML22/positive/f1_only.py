from sklearn.metrics import f1_score


def report(y_true, y_pred):
    return f1_score(y_true, y_pred)  # expect: ML22
