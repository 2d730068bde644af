import pandas as pd

options = {"usecols": ["a"], "dtype": {"a": float}}
frame = pd.read_csv("a.csv", **options)
table = pd.read_parquet("b.parquet")
