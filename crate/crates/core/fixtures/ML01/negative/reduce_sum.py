import tensorflow as tf

weights = tf.constant([0.2, 0.3, 0.5])
total = tf.reduce_sum(weights)

scores = [1, 2, 3]
acc = 0
for i in range(len(scores)):
    acc += scores[i]
