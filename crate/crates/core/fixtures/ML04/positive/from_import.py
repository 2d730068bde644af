from pandas import read_json, read_excel

records = read_json("records.json")  # expect: ML04
sheet = read_excel("book.xlsx", usecols="A:C")  # expect: ML04
