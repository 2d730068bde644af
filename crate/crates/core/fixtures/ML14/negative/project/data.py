import torch
from torch.utils.data import DataLoader, TensorDataset

data = TensorDataset(torch.randn(10, 3))
loader = DataLoader(data, batch_size=2, shuffle=True)
