from sklearn.tree import DecisionTreeClassifier


def train(X, y):
    tree = DecisionTreeClassifier(max_depth=3)
    tree.fit(X, y)
    return tree
