import tensorflow as tf

for units in [32, 64, 128]:
    model = tf.keras.Sequential([tf.keras.layers.Dense(units), tf.keras.layers.Dense(1)])  # expect: ML12
    model.compile(optimizer="adam", loss="mse")
