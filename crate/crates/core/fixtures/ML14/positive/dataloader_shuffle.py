import torch
from torch.utils.data import DataLoader, TensorDataset

torch.use_deterministic_algorithms(True)
data = TensorDataset(torch.zeros(10, 3))
loader = DataLoader(data, batch_size=2, shuffle=True)  # expect: ML14
