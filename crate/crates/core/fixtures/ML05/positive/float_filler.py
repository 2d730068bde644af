import pandas as pd

users = pd.read_csv("users.csv", usecols=["id"], dtype={"id": int})
users["score"] = 0.0  # expect: ML05
