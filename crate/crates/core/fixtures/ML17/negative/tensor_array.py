import tensorflow as tf

acc = tf.TensorArray(tf.float32, size=0, dynamic_size=True)
for i in range(5):
    acc = acc.write(i, float(i))
result = acc.stack()
