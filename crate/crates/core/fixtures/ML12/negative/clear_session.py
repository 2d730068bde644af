import tensorflow as tf

for units in [32, 64, 128]:
    tf.keras.backend.clear_session()
    model = tf.keras.Sequential([tf.keras.layers.Dense(units), tf.keras.layers.Dense(1)])
    model.compile(optimizer="adam", loss="mse")
