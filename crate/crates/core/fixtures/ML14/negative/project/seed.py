import torch

torch.manual_seed(1234)
torch.use_deterministic_algorithms(True)
