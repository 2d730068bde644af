import tensorflow as tf

weights = tf.constant([0.2, 0.3, 0.5])
total = 0.0
for i in range(3):  # expect: ML01
    total += weights[i]
print(total)
