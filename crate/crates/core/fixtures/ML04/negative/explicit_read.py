import pandas as pd

train = pd.read_csv("train.csv", usecols=["id", "label"], dtype={"id": int, "label": str})
