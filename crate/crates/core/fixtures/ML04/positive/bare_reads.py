import pandas as pd

train = pd.read_csv("train.csv")  # expect: ML04
test = pd.read_csv("test.csv", dtype={"id": int})  # expect: ML04
