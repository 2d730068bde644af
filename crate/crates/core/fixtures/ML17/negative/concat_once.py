import tensorflow as tf

base = tf.constant([1.0, 2.0])
extended = tf.concat([base, [3.0]], axis=0)
for i in range(3):
    print(base)
