import torch

from model import build

torch.use_deterministic_algorithms(True)
net = build()
