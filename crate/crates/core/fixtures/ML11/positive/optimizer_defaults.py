import torch
from torch import nn

torch.use_deterministic_algorithms(True)
net = nn.Linear(4, 2)
optimizer = torch.optim.SGD(net.parameters())  # expect: ML11
