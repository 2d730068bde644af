import tensorflow as tf

x = tf.placeholder(tf.float32)
y = tf.log(tf.clip_by_value(x, 1e-10, 1.0))
