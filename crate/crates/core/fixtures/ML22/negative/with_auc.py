from sklearn.metrics import f1_score, roc_auc_score


def report(y_true, y_pred, y_score):
    return f1_score(y_true, y_pred), roc_auc_score(y_true, y_score)
