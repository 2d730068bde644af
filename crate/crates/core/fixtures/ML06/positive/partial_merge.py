import pandas as pd

orders = pd.DataFrame({"uid": [1]})
users = pd.DataFrame({"uid": [1]})
joined = pd.merge(orders, users, on="uid")  # expect: ML06
both = orders.merge(users, how="left", on="uid")  # expect: ML06
