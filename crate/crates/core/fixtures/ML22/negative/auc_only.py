from sklearn.metrics import average_precision_score


def report(y_true, y_score):
    return average_precision_score(y_true, y_score)
