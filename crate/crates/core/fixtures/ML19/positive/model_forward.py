import torch
from torch import nn

torch.use_deterministic_algorithms(True)
model = nn.Sequential(nn.Linear(4, 2), nn.ReLU())
batch = torch.zeros(1, 4)
out = model.forward(batch)  # expect: ML19
