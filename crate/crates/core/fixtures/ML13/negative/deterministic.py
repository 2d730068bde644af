import torch
from torch import nn

torch.use_deterministic_algorithms(True)
model = nn.Linear(8, 1)
