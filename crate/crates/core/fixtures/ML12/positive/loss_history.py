import torch
from torch import nn

torch.use_deterministic_algorithms(True)
criterion = nn.MSELoss()


def train(model, loader, optimizer):
    history = []
    for x, y in loader:
        optimizer.zero_grad()
        loss = criterion(model(x), y)
        loss.backward()
        optimizer.step()
        history.append(loss)  # expect: ML12
    return history
