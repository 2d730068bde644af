import tensorflow as tf

acc = tf.constant([])  # expect: ML17
for i in range(5):
    acc = tf.concat([acc, [float(i)]], axis=0)
