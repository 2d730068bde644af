from sklearn.linear_model import LogisticRegression

model = LogisticRegression(C=0.5, max_iter=200)
