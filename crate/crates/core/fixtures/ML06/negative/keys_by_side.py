import pandas as pd

orders = pd.DataFrame({"user": [1]})
users = pd.DataFrame({"uid": [1]})
joined = pd.merge(orders, users, how="left", left_on="user", right_on="uid", validate="many_to_one")
