import torch
from torch import nn

torch.use_deterministic_algorithms(True)
net = nn.Linear(4, 2)
optimizer = torch.optim.SGD(net.parameters(), lr=0.01)
adam = torch.optim.Adam(net.parameters(), 0.001)
