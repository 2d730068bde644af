import pandas as pd

sales = pd.read_csv("sales.csv", usecols=["region", "amount"], dtype={"region": str, "amount": float})
totals = {}
for row in sales.itertuples():  # expect: ML01
    totals[row.region] = totals.get(row.region, 0) + row.amount
